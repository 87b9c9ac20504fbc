#include "dmfd/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "dmfd/error.hpp"

namespace dmfd {
namespace {

class Writer {
 public:
  void tag(std::string_view magic) { out_.insert(out_.end(), magic.begin(), magic.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void matrix(const Matrix& m) {
    for (double v : m.values()) f64(v);
  }
  void acts(const ActivationMap& map) {
    for (Activation a : map.kinds()) u8(static_cast<std::uint8_t>(a));
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void expect_tag(std::string_view magic) {
    need(magic.size());
    if (std::memcmp(in_.data() + pos_, magic.data(), magic.size()) != 0)
      throw IoError("bad magic: expected " + std::string(magic));
    pos_ += magic.size();
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_++]} << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{in_[pos_++]} << (8 * i);
    return std::bit_cast<double>(bits);
  }
  Matrix matrix(std::size_t rows, std::size_t cols) {
    need(rows * cols * 8);
    std::vector<double> v(rows * cols);
    for (double& x : v) x = f64();
    try {
      return Matrix(rows, cols, std::move(v));
    } catch (const NumericError&) {
      throw IoError("stored matrix contains non-finite values");
    }
  }
  ActivationMap acts(std::size_t n) {
    need(n);
    std::vector<Activation> kinds(n);
    for (auto& k : kinds) k = activation_from_code(u8());
    return ActivationMap(std::move(kinds));
  }
  void version() {
    const std::uint32_t v = u32();
    if (v != kFormatVersion) throw IoError("unsupported format version " + std::to_string(v));
  }
  std::uint32_t dim() {
    const std::uint32_t v = u32();
    // Guard against absurd sizes before allocating.
    if (v == 0 || v > (1u << 24)) throw IoError("implausible dimension " + std::to_string(v));
    return v;
  }
  bool done() const { return pos_ == in_.size(); }
  void expect_end() const {
    if (!done()) throw IoError("trailing bytes after record");
  }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw IoError("truncated record");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_rbm(Writer& w, const RbmParams& p) {
  p.validate();
  w.tag("DMFD");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(p.visible_nodes()));
  w.u32(static_cast<std::uint32_t>(p.hidden_nodes()));
  w.u32(static_cast<std::uint32_t>(p.columns()));
  w.acts(p.visible_act);
  w.acts(p.hidden_act);
  w.matrix(p.weights);
  w.matrix(p.hidden_bias);
  w.matrix(p.visible_bias);
}

RbmParams read_rbm(Reader& r) {
  r.expect_tag("DMFD");
  r.version();
  const std::size_t m = r.dim(), n = r.dim(), d = r.dim();
  ActivationMap act_v = r.acts(m);
  ActivationMap act_h = r.acts(n);
  Matrix w = r.matrix(n, m);
  Matrix bh = r.matrix(n, d);
  Matrix bv = r.matrix(m, d);
  return RbmParams{std::move(w), std::move(bh), std::move(bv), std::move(act_h), std::move(act_v)};
}

}  // namespace

std::vector<std::uint8_t> encode_rbm(const RbmParams& params) {
  Writer w;
  write_rbm(w, params);
  return w.take();
}

RbmParams decode_rbm(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  RbmParams p = read_rbm(r);
  r.expect_end();
  return p;
}

std::vector<std::uint8_t> encode_ffn(const FfnLayer& layer) {
  layer.validate();
  Writer w;
  w.tag("DMFF");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(layer.inputs()));
  w.u32(static_cast<std::uint32_t>(layer.outputs()));
  w.u32(static_cast<std::uint32_t>(layer.columns()));
  w.acts(layer.act);
  w.matrix(layer.weights);
  w.matrix(layer.bias);
  return w.take();
}

FfnLayer decode_ffn(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_tag("DMFF");
  r.version();
  const std::size_t m = r.dim(), n = r.dim(), d = r.dim();
  ActivationMap act = r.acts(n);
  Matrix w = r.matrix(n, m);
  Matrix b = r.matrix(n, d);
  r.expect_end();
  return FfnLayer{std::move(w), std::move(b), std::move(act)};
}

std::vector<std::uint8_t> encode_stack(const RbmStack& stack) {
  Writer w;
  w.tag("DMFS");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(stack.size()));
  for (const RbmParams& layer : stack.layers()) write_rbm(w, layer);
  return w.take();
}

RbmStack decode_stack(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_tag("DMFS");
  r.version();
  const std::uint32_t count = r.u32();
  if (count == 0 || count > 1024) throw IoError("implausible stack layer count");
  std::vector<RbmParams> layers;
  for (std::uint32_t k = 0; k < count; ++k) layers.push_back(read_rbm(r));
  r.expect_end();
  try {
    return RbmStack(std::move(layers));
  } catch (const ShapeError& e) {
    throw IoError(std::string("inconsistent stack file: ") + e.what());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void save_rbm(const RbmParams& params, const std::filesystem::path& path) {
  write_file(path, encode_rbm(params));
}
RbmParams load_rbm(const std::filesystem::path& path) { return decode_rbm(read_file(path)); }
void save_ffn(const FfnLayer& layer, const std::filesystem::path& path) {
  write_file(path, encode_ffn(layer));
}
FfnLayer load_ffn(const std::filesystem::path& path) { return decode_ffn(read_file(path)); }
void save_stack(const RbmStack& stack, const std::filesystem::path& path) {
  write_file(path, encode_stack(stack));
}
RbmStack load_stack(const std::filesystem::path& path) { return decode_stack(read_file(path)); }

}  // namespace dmfd
