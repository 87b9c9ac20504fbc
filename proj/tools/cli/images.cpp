#include "cli/images.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dmfd/data_io.hpp"
#include "dmfd/error.hpp"
#include "dmfd/metrics.hpp"

namespace dmfd::cli {

ImageSplit load_split(const ImageSource& source) {
  IdxImages idx = read_idx(source.images);
  if (idx.count() == 0) throw ConfigError(source.images.string() + " holds no images");
  if (source.train_count == 0) throw ConfigError("train-count must be positive");
  const std::size_t n_train = std::min(source.train_count, idx.count());
  const std::size_t n_test = std::min(source.test_count, idx.count() - n_train);

  ImageSplit split;
  split.rows = idx.rows;
  split.cols = idx.cols;
  auto prepare = [&](const Matrix& img) {
    return source.downsample > 1 ? downsample(img, idx.rows, idx.cols, source.downsample) : img;
  };
  for (std::size_t i = 0; i < n_train; ++i) split.train.push_back(prepare(idx.images[i]));
  for (std::size_t i = 0; i < n_test; ++i) split.test.push_back(prepare(idx.images[n_train + i]));
  if (source.downsample > 1) {
    split.rows /= source.downsample;
    split.cols /= source.downsample;
  }
  return split;
}

std::pair<std::size_t, std::size_t> feature_tile(std::size_t code_size) {
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(code_size))));
  if (side * side == code_size) return {side, side};
  return {1, code_size};
}

namespace {

Matrix as_image(const Matrix& column, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, std::vector<double>(column.values().begin(), column.values().end()));
}

std::string index_name(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

}  // namespace

std::size_t write_triplets(const std::vector<Matrix>& images, std::size_t count,
                           const TripletWriter& writer, const std::filesystem::path& out) {
  const auto dir = out / "triplets";
  std::filesystem::create_directories(dir);
  std::size_t clamped = 0;
  std::vector<std::vector<double>> ranges;
  count = std::min(count, images.size());
  for (std::size_t i = 0; i < count; ++i) {
    const Matrix& x = images[i];
    const Matrix code = writer.encode(x);
    const Matrix recon = writer.decode(code);
    const std::string stem = index_name(i);
    clamped += write_pgm(as_image(x, writer.rows, writer.cols), dir / (stem + "_original.pgm"));
    clamped += write_pgm(as_image(recon, writer.rows, writer.cols),
                         dir / (stem + "_reconstruction.pgm"));

    const auto [lo_it, hi_it] = std::minmax_element(code.values().begin(), code.values().end());
    const double lo = *lo_it, hi = *hi_it;
    Matrix scaled = code;
    for (double& v : scaled.values()) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    const auto [tr, tc] = feature_tile(code.size());
    write_pgm(as_image(scaled, tr, tc), dir / (stem + "_features.pgm"));
    ranges.push_back({static_cast<double>(i), lo, hi});
  }
  const std::vector<std::string> header{"index", "min", "max"};
  write_csv(out / "features_range.csv", ranges, header);
  return clamped;
}

double reconstruction_mse(const std::vector<Matrix>& images, const TripletWriter& writer) {
  if (images.empty()) return 0.0;
  double total = 0.0;
  for (const Matrix& x : images) total += mse(writer.decode(writer.encode(x)), x);
  return total / static_cast<double>(images.size());
}

void write_summary(const ImageRunSummary& summary, const std::filesystem::path& out) {
  const std::vector<std::vector<double>> rows{
      {summary.initial_test_mse, summary.final_test_mse,
       static_cast<double>(summary.clamped_pixels)}};
  const std::vector<std::string> header{"initial_test_mse", "final_test_mse", "clamped_pixels"};
  write_csv(out / "summary.csv", rows, header);
}

}  // namespace dmfd::cli
