#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cli/commands.hpp"
#include "dmfd/data_io.hpp"
#include "dmfd/error.hpp"

namespace dmfd::cli {
namespace {

std::vector<Matrix> scan_samples(const ScanOptions& options, BlockConvention convention) {
  SequenceSet set = generate_sequences(options.seed);
  if (options.standardize) standardize(set.sequences);
  return window(set.sequences, options.window, options.stride, convention);
}

ErrorCurve run_sweep(const std::vector<Matrix>& samples, const std::vector<std::size_t>& sweep,
                     const ScanOptions& options) {
  ErrorCurve curve;
  curve.points.resize(sweep.size());
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(sweep.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < sweep.size(); i = next++)
      curve.points[i] = scan_point(samples, sweep[i], i, options);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return curve;
}

}  // namespace

double default_rate(Scheme scheme) {
  return scheme == Scheme::GradientDescent ? kDefaultGdRate : kDefaultFdRate;
}

ErrorPoint scan_point(const std::vector<Matrix>& samples, std::size_t hidden,
                      std::size_t sweep_index, const ScanOptions& options) {
  const std::uint64_t seed = options.seed + sweep_index;
  Prng init_rng(seed, 1);
  const Matrix& first = samples.front();
  RbmParams params = init_params(first.rows(), hidden, first.cols(), Activation::Identity,
                                 Activation::Identity, init_rng);
  TrainConfig config;
  config.scheme = options.scheme;
  config.rate.scalar = options.rate;
  config.epochs = options.epochs;
  config.seed = seed;

  ErrorPoint point;
  point.sweep = hidden;
  try {
    const TrainResult result = train(std::move(params), samples, config);
    double total = 0.0;
    for (const Matrix& x : samples) total += mse(roundtrip(result.params, x).x_post, x);
    point.mse = total / static_cast<double>(samples.size());
    point.log_adjusted = log_adjusted(point.mse);
  } catch (const NumericError&) {
    point.diverged = true;
    point.mse = std::numeric_limits<double>::quiet_NaN();
    point.log_adjusted = {std::numeric_limits<double>::quiet_NaN(), true};
  }
  return point;
}

ErrorCurve collinearity_scan(const ScanOptions& options) {
  const auto samples = scan_samples(options, BlockConvention::NodesByTime);
  std::vector<std::size_t> sweep;
  for (std::size_t n = 1; n <= kSequenceCount; ++n) sweep.push_back(n);
  return run_sweep(samples, sweep, options);
}

ErrorCurve feature_scan(const ScanOptions& options) {
  const auto samples = scan_samples(options, BlockConvention::TimeByNodes);
  std::vector<std::size_t> sweep;
  for (std::size_t n = 25; n <= 60; n += 5) sweep.push_back(n);
  return run_sweep(samples, sweep, options);
}

}  // namespace dmfd::cli
