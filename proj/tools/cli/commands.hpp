#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dmfd/activation.hpp"
#include "dmfd/metrics.hpp"
#include "dmfd/rbm.hpp"

namespace dmfd::cli {

inline constexpr double kDefaultGdRate = 0.01;
inline constexpr double kDefaultFdRate = 0.005;
/// Block-matrix samples sum d columns into every update, so the scans need a
/// smaller step than single-vector training.
inline constexpr double kDefaultScanRate = 0.002;

double default_rate(Scheme scheme);

struct ScanOptions {
  std::uint64_t seed = 42;
  std::size_t epochs = 100;
  Scheme scheme = Scheme::GradientDescent;
  double rate = kDefaultScanRate;
  bool standardize = true;
  unsigned threads = 0;  ///< 0: hardware concurrency
  std::size_t window = 50;
  std::size_t stride = 20;
};

/// Hidden node counts 1..12 on sequences-by-time windows (12 x 50 samples).
ErrorCurve collinearity_scan(const ScanOptions& options);
/// Feature dimensions 25, 30, ..., 60 on time-by-sequences windows (50 x 12).
ErrorCurve feature_scan(const ScanOptions& options);

/// Trains one sweep point; seed and init stream are derived from the sweep
/// index so results do not depend on scheduling.
ErrorPoint scan_point(const std::vector<Matrix>& samples, std::size_t hidden,
                      std::size_t sweep_index, const ScanOptions& options);

struct GradcheckOptions {
  std::size_t seeds = 20;
  double tolerance = 1e-6;
  double step = 1e-5;
  EnergyVariant energy = EnergyVariant::Reconstruction;
};

struct GradcheckCell {
  Activation hidden;
  Activation visible;
  std::size_t visible_nodes, hidden_nodes, columns;
  double max_rel_error = 0.0;
  std::size_t kink_repairs = 0;
  bool pass = false;
};

/// All activation pairs x shapes (7,5,1) and (6,4,3), `seeds` instances each.
std::vector<GradcheckCell> gradcheck(const GradcheckOptions& options);

struct ImageSource {
  std::filesystem::path images;
  std::size_t train_count = 9000;
  std::size_t test_count = 1000;
  std::size_t downsample = 1;
};

struct TrainRbmOptions {
  ImageSource source;
  std::size_t visible = 784;
  std::size_t hidden = 49;
  Activation act_h = Activation::Identity;
  Activation act_v = Activation::Identity;
  TrainConfig train;
  std::size_t triplets = 10;
  std::filesystem::path out_dir = ".";
  bool progress = false;  ///< per-epoch energy on stderr
};

struct TrainStackOptions {
  ImageSource source;
  std::vector<std::size_t> sizes{784, 784, 196, 49};
  Activation act_h = Activation::Softsign;
  Activation act_v = Activation::Relu;
  Activation act_v_inner = Activation::Identity;
  TrainConfig train;
  std::size_t triplets = 10;
  std::filesystem::path out_dir = ".";
  bool progress = false;  ///< per-epoch energy on stderr
};

struct ReconstructOptions {
  std::filesystem::path model;
  ImageSource source;
  std::size_t count = 10;
  std::filesystem::path out_dir = ".";
};

/// Summary of an image command, also written to summary.csv.
struct ImageRunSummary {
  double initial_test_mse = 0.0;
  double final_test_mse = 0.0;
  std::size_t clamped_pixels = 0;
};

/// Writes model.dmfd, energy.csv, summary.csv, features_range.csv and
/// triplets/NN_{original,reconstruction,features}.pgm.
ImageRunSummary train_rbm(const TrainRbmOptions& options);
/// Writes stack.dmfs, layer_K.dmfd, energy_layerK.csv and the same triplet,
/// summary and range files through the full encode/decode path.
ImageRunSummary train_stack(const TrainStackOptions& options);
/// Loads a DMFD or DMFS model and writes triplets and summary.csv for the
/// test split.
ImageRunSummary reconstruct(const ReconstructOptions& options);

}  // namespace dmfd::cli
