#include "dmfd/data_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "dmfd/error.hpp"
#include "dmfd/random.hpp"

namespace dmfd {

SequenceSet generate_sequences(std::uint64_t seed, std::size_t length) {
  Prng rng(seed);
  const std::array<DistSpec, kSourceCount> sources{
      Poisson{3.0}, Binomial{10, 0.6}, Laplace{-1.0, 1.0},
      Normal{0.5, 1.0}, Exponential{2.0}, Uniform{-2.0, 2.0},
  };
  Matrix seq(kSequenceCount, length);
  for (std::size_t s = 0; s < kSourceCount; ++s) {
    const auto values = sample(rng, sources[s], length);
    std::copy(values.begin(), values.end(), seq.row(s).begin());
  }
  for (std::size_t k = 0; k < kSequenceMixing.size(); ++k) {
    auto out = seq.row(kSourceCount + k);
    for (std::size_t t = 0; t < length; ++t) {
      double v = 0.0;
      for (const MixTerm& term : kSequenceMixing[k]) v += seq(term.source, t) * term.coefficient;
      out[t] = v;
    }
  }
  return {std::move(seq)};
}

Standardization standardize(Matrix& rows) {
  Standardization tr;
  const double n = static_cast<double>(rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    auto row = rows.row(r);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    if (!(sd > 0.0)) throw NumericError("standardize: row " + std::to_string(r) + " is constant");
    for (double& v : row) v = (v - mean) / sd;
    tr.mean.push_back(mean);
    tr.stddev.push_back(sd);
  }
  return tr;
}

std::size_t window_count(std::size_t length, std::size_t window, std::size_t stride) {
  if (window == 0 || stride == 0 || window > length)
    throw ConfigError("window: need 0 < window <= length and stride >= 1");
  return (length - window) / stride + 1;
}

std::vector<Matrix> window(const Matrix& sequences, std::size_t len, std::size_t stride,
                           BlockConvention convention) {
  const std::size_t count = window_count(sequences.cols(), len, stride);
  const std::size_t nodes = sequences.rows();
  std::vector<Matrix> out;
  out.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t start = w * stride;
    Matrix m = convention == BlockConvention::NodesByTime ? Matrix(nodes, len) : Matrix(len, nodes);
    for (std::size_t s = 0; s < nodes; ++s) {
      for (std::size_t t = 0; t < len; ++t) {
        const double v = sequences(s, start + t);
        if (convention == BlockConvention::NodesByTime) {
          m(s, t) = v;
        } else {
          m(t, s) = v;
        }
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

struct GzCloser {
  void operator()(gzFile_s* f) const { gzclose(f); }
};

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

std::size_t read_fully(gzFile f, unsigned char* dst, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(n - got, 1u << 30));
    const int r = gzread(f, dst + got, chunk);
    if (r <= 0) break;
    got += static_cast<std::size_t>(r);
  }
  return got;
}

}  // namespace

IdxImages read_idx(const std::filesystem::path& path) {
  std::unique_ptr<gzFile_s, GzCloser> f(gzopen(path.string().c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path.string());

  unsigned char header[16];
  if (read_fully(f.get(), header, 16) != 16) throw IoError(path.string() + ": truncated IDX header");
  const std::uint32_t magic = be32(header);
  if (magic != 0x00000803)
    throw IoError(path.string() + ": bad IDX magic (expected 0x00000803 for u8 images)");
  const std::size_t count = be32(header + 4);
  const std::size_t rows = be32(header + 8);
  const std::size_t cols = be32(header + 12);
  if (rows == 0 || cols == 0) throw IoError(path.string() + ": zero image dimension");

  IdxImages out{rows, cols, {}};
  out.images.reserve(count);
  std::vector<unsigned char> buf(rows * cols);
  for (std::size_t i = 0; i < count; ++i) {
    if (read_fully(f.get(), buf.data(), buf.size()) != buf.size())
      throw IoError(path.string() + ": truncated IDX payload at image " + std::to_string(i));
    Matrix img(rows * cols, 1);
    auto v = img.values();
    for (std::size_t p = 0; p < buf.size(); ++p) v[p] = buf[p] / 255.0;
    out.images.push_back(std::move(img));
  }
  return out;
}

void write_idx(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const std::vector<std::uint8_t>> images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  auto put32 = [&](std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                       static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(b, 4);
  };
  put32(0x00000803);
  put32(static_cast<std::uint32_t>(images.size()));
  put32(static_cast<std::uint32_t>(rows));
  put32(static_cast<std::uint32_t>(cols));
  for (const auto& img : images) {
    if (img.size() != rows * cols) throw ShapeError("write_idx: image size mismatch");
    out.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix downsample(const Matrix& image, std::size_t rows, std::size_t cols, std::size_t factor) {
  if (image.size() != rows * cols) throw ShapeError("downsample: image size mismatch");
  if (factor == 0 || rows % factor != 0 || cols % factor != 0)
    throw ConfigError("downsample: factor must divide both image dimensions");
  const std::size_t r2 = rows / factor, c2 = cols / factor;
  Matrix out(r2 * c2, 1);
  const double norm = 1.0 / static_cast<double>(factor * factor);
  for (std::size_t i = 0; i < r2; ++i)
    for (std::size_t j = 0; j < c2; ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < factor; ++a)
        for (std::size_t b = 0; b < factor; ++b)
          acc += image.values()[(i * factor + a) * cols + j * factor + b];
      out(i * c2 + j, 0) = acc * norm;
    }
  return out;
}

std::size_t write_pgm(const Matrix& image, const std::filesystem::path& path) {
  std::size_t clamped = 0;
  std::vector<unsigned char> bytes;
  bytes.reserve(image.size());
  for (double v : image.values()) {
    if (v < 0.0 || v > 1.0) {
      ++clamped;
      v = std::clamp(v, 0.0, 1.0);
    }
    bytes.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
  return clamped;
}

Matrix read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  std::size_t w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || maxval != 255 || w == 0 || h == 0)
    throw IoError(path.string() + ": not an 8-bit P5 PGM");
  in.get();
  std::vector<unsigned char> bytes(w * h);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw IoError(path.string() + ": truncated PGM");
  Matrix m(h, w);
  for (std::size_t i = 0; i < bytes.size(); ++i) m.values()[i] = bytes[i] / 255.0;
  return m;
}

void write_csv(const std::filesystem::path& path, std::span<const std::vector<double>> rows,
               std::span<const std::string> header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  if (!header.empty()) out << '\n';
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      auto res = std::to_chars(buf, buf + sizeof buf, row[i]);
      if (i) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  if (has_header) std::getline(in, line);
  std::size_t lineno = has_header ? 1 : 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      auto res = std::from_chars(p, comma, v);
      if (res.ec != std::errc() || res.ptr != comma)
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad number");
      row.push_back(v);
      p = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dmfd
