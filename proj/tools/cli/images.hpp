#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "cli/commands.hpp"
#include "dmfd/matrix.hpp"

namespace dmfd::cli {

struct ImageSplit {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Matrix> train;
  std::vector<Matrix> test;
};

/// Train split is the first train_count images, test split the next
/// test_count (fewer if the file runs out).
ImageSplit load_split(const ImageSource& source);

/// Code vectors render as a k x k tile when the size is a perfect square,
/// otherwise as a 1 x n strip.
std::pair<std::size_t, std::size_t> feature_tile(std::size_t code_size);

struct TripletWriter {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<Matrix(const Matrix&)> encode;
  std::function<Matrix(const Matrix&)> decode;
};

/// For each image writes NN_original.pgm, NN_reconstruction.pgm and
/// NN_features.pgm (code rescaled to [0, 1] per image) under out/triplets,
/// plus features_range.csv with the rescale bounds. Returns clamped pixels.
std::size_t write_triplets(const std::vector<Matrix>& images, std::size_t count,
                           const TripletWriter& writer, const std::filesystem::path& out);

/// Mean per-image mse of decode(encode(x)) against x.
double reconstruction_mse(const std::vector<Matrix>& images, const TripletWriter& writer);

void write_summary(const ImageRunSummary& summary, const std::filesystem::path& out);

}  // namespace dmfd::cli
