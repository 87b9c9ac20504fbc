#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dmfd/activation.hpp"
#include "dmfd/matrix.hpp"
#include "dmfd/random.hpp"

namespace dmfd {

/// Symmetric visible/hidden data mapping with shared weights.
///
///   projection      Y = A_h(W X + B_h)
///   reconstruction  X = A_v(W^T Y + B_v)
///
/// X is m x d and Y is n x d. d = 1 is the plain vector case; d > 1 gives
/// vector-valued nodes where each column is mapped with the same W.
struct RbmParams {
  Matrix weights;        ///< n x m
  Matrix hidden_bias;    ///< n x d
  Matrix visible_bias;   ///< m x d
  ActivationMap hidden_act;
  ActivationMap visible_act;

  std::size_t visible_nodes() const noexcept { return weights.cols(); }
  std::size_t hidden_nodes() const noexcept { return weights.rows(); }
  std::size_t columns() const noexcept { return visible_bias.cols(); }

  /// Throws ShapeError or NumericError if the invariants do not hold.
  void validate() const;

  friend bool operator==(const RbmParams&, const RbmParams&) = default;
};

/// W uniform on (-1/sqrt(m), 1/sqrt(m)), zero biases.
RbmParams init_params(std::size_t visible, std::size_t hidden, std::size_t columns,
                      ActivationMap hidden_act, ActivationMap visible_act, Prng& rng);
RbmParams init_params(std::size_t visible, std::size_t hidden, std::size_t columns,
                      Activation hidden_act, Activation visible_act, Prng& rng);

/// Pre- and post-activation values of one layer.
struct Mapping {
  Matrix pre;
  Matrix post;
};

enum class Scheme { GradientDescent, FiniteDifference };

/// Which residual the energy measures: A_v(...) - X0, or A_v(...) - A_v(X0)
/// (recirculation form).
enum class EnergyVariant { Reconstruction, Recirculation };

/// One projection/reconstruction round trip from X0.
struct RbmState {
  Matrix y_pre;
  Matrix y_post;
  Matrix x_pre;
  Matrix x_post;
  Matrix delta_x;  ///< x_post minus the variant's target
};

Mapping project(const RbmParams& params, const Matrix& x);
Mapping reconstruct(const RbmParams& params, const Matrix& y_post);
RbmState roundtrip(const RbmParams& params, const Matrix& x0,
                   EnergyVariant variant = EnergyVariant::Reconstruction);

/// 1/2 ||x_post - target||^2.
double energy(const RbmParams& params, const Matrix& x0,
              EnergyVariant variant = EnergyVariant::Reconstruction);

struct Gradients {
  Matrix weights;
  Matrix hidden_bias;
  Matrix visible_bias;
};

/// Exact gradient of energy() with respect to W, B_h and B_v.
Gradients gradients(const RbmParams& params, const Matrix& x0,
                    EnergyVariant variant = EnergyVariant::Reconstruction);

/// Scalar rate for every element, optionally overridden per block with
/// element-wise rate matrices (finite-difference scheme only).
struct LearningRate {
  double scalar = 0.01;
  std::optional<Matrix> visible;  ///< m x d
  std::optional<Matrix> hidden;   ///< n x d
  std::optional<Matrix> weights;  ///< n x m

  bool element_wise() const noexcept { return visible || hidden || weights; }
};

struct TrainConfig {
  Scheme scheme = Scheme::GradientDescent;
  LearningRate rate;
  EnergyVariant energy = EnergyVariant::Reconstruction;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  bool shuffle = true;
};

/// Throws ConfigError if rates are non-positive, mis-shaped for `params`, or
/// element-wise rates are combined with gradient descent.
void validate(const TrainConfig& config, const RbmParams& params);

struct StepResult {
  RbmParams params;
  double energy_before = 0.0;
};

/// One gradient descent update. The W update uses the hidden output of the
/// first projection in both terms.
StepResult gd_step(const RbmParams& params, const Matrix& x0, const TrainConfig& config);

/// One finite-difference (CD1-form) update from a second projection of the
/// reconstruction: B_v -= g_v (X1 - X0), B_h -= g_h (Y1 - Y0),
/// W -= g_W (Y1 X1^T - Y0 X0^T).
StepResult fd_step(const RbmParams& params, const Matrix& x0, const TrainConfig& config);

/// Closed-form linear update for identity activations on both layers,
/// written directly from the linear energy rather than through gradients().
StepResult linear_step(const RbmParams& params, const Matrix& x0, double rate);

/// Update on `params` in place; returns the energy before the update.
double gd_update(RbmParams& params, const Matrix& x0, const TrainConfig& config);
double fd_update(RbmParams& params, const Matrix& x0, const TrainConfig& config);

struct TrainCallbacks {
  std::function<void(std::size_t epoch, double mean_energy)> on_epoch;
};

struct TrainResult {
  RbmParams params;
  std::vector<double> epoch_energy;  ///< mean pre-update energy per epoch
};

/// Online training: one update per sample, sample order reshuffled each
/// epoch from config.seed when config.shuffle is set. A non-finite parameter
/// aborts with NumericError naming the epoch and sample.
TrainResult train(RbmParams params, std::span<const Matrix> dataset, const TrainConfig& config,
                  const TrainCallbacks& callbacks = {});

/// Mean energy over a dataset without updating.
double mean_energy(const RbmParams& params, std::span<const Matrix> dataset,
                   EnergyVariant variant = EnergyVariant::Reconstruction);

}  // namespace dmfd
