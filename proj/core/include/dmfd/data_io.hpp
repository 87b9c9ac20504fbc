#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dmfd/matrix.hpp"

namespace dmfd {

/// One mixed sequence: sum of coefficient * source row.
struct MixTerm {
  std::size_t source;
  double coefficient;
};
using MixRow = std::array<MixTerm, 3>;

/// Rows 6..11 of the synthetic set, in order.
inline constexpr std::array<MixRow, 6> kSequenceMixing{{
    {{{0, 0.25}, {1, 0.75}, {2, 0.50}}},
    {{{1, 0.30}, {2, 0.70}, {3, 0.50}}},
    {{{2, 0.45}, {3, 0.55}, {4, 0.35}}},
    {{{3, 0.60}, {4, 0.40}, {5, 0.20}}},
    {{{4, 0.50}, {5, 0.35}, {0, 0.45}}},
    {{{5, 0.40}, {0, 0.10}, {1, 0.60}}},
}};

inline constexpr std::size_t kSourceCount = 6;
inline constexpr std::size_t kSequenceCount = 12;
inline constexpr std::size_t kSequenceLength = 2000;

/// 12 x length matrix: six independent sources drawn in order from
/// Poisson(3), Binomial(10, 0.6), Laplace(-1, 1), Normal(0.5, 1),
/// Exponential(scale 2), Uniform(-2, 2), then six fixed linear mixtures.
struct SequenceSet {
  Matrix sequences;
};

SequenceSet generate_sequences(std::uint64_t seed, std::size_t length = kSequenceLength);

/// Per-row affine map applied by standardize(): z = (x - mean) / stddev.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Shifts and scales each row to zero mean, unit (population) variance.
Standardization standardize(Matrix& rows);

enum class BlockConvention {
  /// Each sample is sequences x window: one node per sequence, the window
  /// along the columns.
  NodesByTime,
  /// Each sample is window x sequences: the window along the rows, one
  /// column per sequence sharing the weights.
  TimeByNodes,
};

/// Number of windows with starts 0, stride, ... that fit in `length`.
std::size_t window_count(std::size_t length, std::size_t window, std::size_t stride);

std::vector<Matrix> window(const Matrix& sequences, std::size_t window, std::size_t stride,
                           BlockConvention convention);

/// Grayscale images from an IDX3 file, each as a (rows*cols) x 1 column
/// scaled by 1/255. Gzip-compressed files are read transparently.
struct IdxImages {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Matrix> images;

  std::size_t count() const noexcept { return images.size(); }
};

IdxImages read_idx(const std::filesystem::path& path);
/// Raw IDX3 writer (uncompressed); images are row-major bytes.
void write_idx(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const std::vector<std::uint8_t>> images);

/// Averages non-overlapping factor x factor blocks of a (rows*cols) x 1 image.
Matrix downsample(const Matrix& image, std::size_t rows, std::size_t cols, std::size_t factor);

/// Binary PGM (P5, maxval 255). Values are clamped to [0, 1] and rounded to
/// the nearest byte. Returns how many values had to be clamped.
std::size_t write_pgm(const Matrix& image, const std::filesystem::path& path);

/// Reads back a P5 PGM as a matrix of values in [0, 1].
Matrix read_pgm(const std::filesystem::path& path);

/// One record per row, comma separated, shortest round-trip formatting.
void write_csv(const std::filesystem::path& path, std::span<const std::vector<double>> rows,
               std::span<const std::string> header = {});
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          bool has_header = false);

}  // namespace dmfd
