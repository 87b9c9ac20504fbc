#include "dmfd/rbm.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "dmfd/error.hpp"

namespace dmfd {
namespace {

// Stream id for the per-epoch shuffle, kept apart from initialization draws.
constexpr std::uint64_t kShuffleStream = 0x5348;

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw ShapeError(std::string(what) + ": expected " + dims(rows, cols) + ", got " +
                     dims(m.rows(), m.cols()));
}

void expect_input(const RbmParams& p, const Matrix& x0) {
  expect_shape(x0, p.visible_nodes(), p.columns(), "visible data");
}

void require_finite(const Matrix& m, const char* block) {
  if (!m.all_finite())
    throw NumericError(std::string("non-finite update in ") + block +
                       " (try a smaller learning rate)");
}

void add_bias(Matrix& m, const Matrix& bias) { axpy(1.0, bias, m); }

// x -= rate .* delta, scalar or element-wise.
void descend(Matrix& x, const Matrix& delta, double scalar, const std::optional<Matrix>& rates) {
  if (rates) {
    axpy(-1.0, hadamard(*rates, delta), x);
  } else {
    axpy(-scalar, delta, x);
  }
}

}  // namespace

void RbmParams::validate() const {
  const std::size_t n = weights.rows(), m = weights.cols(), d = visible_bias.cols();
  if (n == 0 || m == 0 || d == 0) throw ShapeError("RbmParams: empty dimension");
  expect_shape(hidden_bias, n, d, "hidden bias");
  expect_shape(visible_bias, m, d, "visible bias");
  if (hidden_act.size() != n) throw ShapeError("RbmParams: hidden activation map size");
  if (visible_act.size() != m) throw ShapeError("RbmParams: visible activation map size");
  weights.check_finite("weights");
  hidden_bias.check_finite("hidden bias");
  visible_bias.check_finite("visible bias");
}

RbmParams init_params(std::size_t visible, std::size_t hidden, std::size_t columns,
                      ActivationMap hidden_act, ActivationMap visible_act, Prng& rng) {
  RbmParams p{Matrix(hidden, visible), Matrix(hidden, columns), Matrix(visible, columns),
              std::move(hidden_act), std::move(visible_act)};
  const double bound = 1.0 / std::sqrt(static_cast<double>(visible));
  for (double& w : p.weights.values()) w = bound * (2.0 * rng.uniform_open() - 1.0);
  p.validate();
  return p;
}

RbmParams init_params(std::size_t visible, std::size_t hidden, std::size_t columns,
                      Activation hidden_act, Activation visible_act, Prng& rng) {
  return init_params(visible, hidden, columns, ActivationMap(hidden_act, hidden),
                     ActivationMap(visible_act, visible), rng);
}

Mapping project(const RbmParams& params, const Matrix& x) {
  expect_input(params, x);
  Matrix pre = matmul(params.weights, x);
  add_bias(pre, params.hidden_bias);
  pre.check_finite("projection");
  Matrix post = apply(params.hidden_act, pre);
  return {std::move(pre), std::move(post)};
}

Mapping reconstruct(const RbmParams& params, const Matrix& y_post) {
  expect_shape(y_post, params.hidden_nodes(), params.columns(), "hidden data");
  Matrix pre = matmul_at_b(params.weights, y_post);
  add_bias(pre, params.visible_bias);
  pre.check_finite("reconstruction");
  Matrix post = apply(params.visible_act, pre);
  return {std::move(pre), std::move(post)};
}

RbmState roundtrip(const RbmParams& params, const Matrix& x0, EnergyVariant variant) {
  auto [y_pre, y_post] = project(params, x0);
  auto [x_pre, x_post] = reconstruct(params, y_post);
  Matrix delta = variant == EnergyVariant::Reconstruction
                     ? x_post - x0
                     : x_post - apply(params.visible_act, x0);
  return {std::move(y_pre), std::move(y_post), std::move(x_pre), std::move(x_post),
          std::move(delta)};
}

double energy(const RbmParams& params, const Matrix& x0, EnergyVariant variant) {
  return 0.5 * frob_sq(roundtrip(params, x0, variant).delta_x);
}

namespace {

// Gradient pieces shared by gradients() and the GD update.
struct Backprop {
  Matrix visible;  // A'_v(X~) .* dX
  Matrix hidden;   // A'_h(Y~) .* (W visible)
};

Backprop backprop(const RbmParams& p, const RbmState& s) {
  Matrix visible = hadamard(derivative_from_output(p.visible_act, s.x_post), s.delta_x);
  Matrix hidden = hadamard(derivative_from_output(p.hidden_act, s.y_post),
                           matmul(p.weights, visible));
  return {std::move(visible), std::move(hidden)};
}

}  // namespace

Gradients gradients(const RbmParams& params, const Matrix& x0, EnergyVariant variant) {
  const RbmState s = roundtrip(params, x0, variant);
  Backprop b = backprop(params, s);
  Matrix gw = matmul_a_bt(s.y_post, b.visible);
  add_a_bt(1.0, b.hidden, x0, gw);
  return {std::move(gw), std::move(b.hidden), std::move(b.visible)};
}

void validate(const TrainConfig& config, const RbmParams& params) {
  const LearningRate& r = config.rate;
  if (!(r.scalar > 0.0) || !std::isfinite(r.scalar))
    throw ConfigError("learning rate must be positive and finite");
  if (config.scheme == Scheme::GradientDescent && r.element_wise())
    throw ConfigError("element-wise learning rates apply to the finite-difference scheme only");
  auto check = [](const std::optional<Matrix>& rates, std::size_t rows, std::size_t cols,
                  const char* what) {
    if (!rates) return;
    if (rates->rows() != rows || rates->cols() != cols)
      throw ConfigError(std::string(what) + " rates: expected " + dims(rows, cols));
    for (double v : rates->values())
      if (!(v > 0.0)) throw ConfigError(std::string(what) + " rates must be positive");
  };
  check(r.visible, params.visible_nodes(), params.columns(), "visible");
  check(r.hidden, params.hidden_nodes(), params.columns(), "hidden");
  check(r.weights, params.hidden_nodes(), params.visible_nodes(), "weight");
}

double gd_update(RbmParams& params, const Matrix& x0, const TrainConfig& config) {
  if (config.scheme != Scheme::GradientDescent)
    throw ConfigError("gd_update called with a non-GD configuration");
  const double rate = config.rate.scalar;
  const RbmState s = roundtrip(params, x0, config.energy);
  const double before = 0.5 * frob_sq(s.delta_x);
  const Backprop b = backprop(params, s);

  // W uses W0, so it is updated last.
  axpy(-rate, b.visible, params.visible_bias);
  require_finite(params.visible_bias, "visible bias");
  axpy(-rate, b.hidden, params.hidden_bias);
  require_finite(params.hidden_bias, "hidden bias");
  add_a_bt(-rate, s.y_post, b.visible, params.weights);
  add_a_bt(-rate, b.hidden, x0, params.weights);
  require_finite(params.weights, "weights");
  return before;
}

double fd_update(RbmParams& params, const Matrix& x0, const TrainConfig& config) {
  if (config.scheme != Scheme::FiniteDifference)
    throw ConfigError("fd_update called with a non-FD configuration");
  const LearningRate& r = config.rate;
  const RbmState s = roundtrip(params, x0, config.energy);
  const double before = 0.5 * frob_sq(s.delta_x);
  const Matrix y1 = project(params, s.x_post).post;

  descend(params.visible_bias, s.x_post - x0, r.scalar, r.visible);
  require_finite(params.visible_bias, "visible bias");
  descend(params.hidden_bias, y1 - s.y_post, r.scalar, r.hidden);
  require_finite(params.hidden_bias, "hidden bias");
  if (r.weights) {
    Matrix diff = matmul_a_bt(y1, s.x_post);
    add_a_bt(-1.0, s.y_post, x0, diff);
    descend(params.weights, diff, r.scalar, r.weights);
  } else {
    add_a_bt(-r.scalar, y1, s.x_post, params.weights);
    add_a_bt(r.scalar, s.y_post, x0, params.weights);
  }
  require_finite(params.weights, "weights");
  return before;
}

StepResult gd_step(const RbmParams& params, const Matrix& x0, const TrainConfig& config) {
  validate(config, params);
  StepResult out{params, 0.0};
  out.energy_before = gd_update(out.params, x0, config);
  return out;
}

StepResult fd_step(const RbmParams& params, const Matrix& x0, const TrainConfig& config) {
  validate(config, params);
  StepResult out{params, 0.0};
  out.energy_before = fd_update(out.params, x0, config);
  return out;
}

StepResult linear_step(const RbmParams& params, const Matrix& x0, double rate) {
  if (!params.hidden_act.uniform(Activation::Identity) ||
      !params.visible_act.uniform(Activation::Identity))
    throw ConfigError("linear_step requires identity activations on both layers");
  expect_input(params, x0);
  const Matrix& w = params.weights;
  Matrix y0 = matmul(w, x0) + params.hidden_bias;
  Matrix x1 = matmul(transpose(w), y0) + params.visible_bias;
  Matrix diff = x1 - x0;
  Matrix w_diff = matmul(w, diff);

  StepResult out{params, 0.5 * frob_sq(diff)};
  out.params.visible_bias = params.visible_bias - rate * diff;
  out.params.hidden_bias = params.hidden_bias - rate * w_diff;
  out.params.weights =
      w - rate * (matmul(y0, transpose(diff)) + matmul(w_diff, transpose(x0)));
  out.params.validate();
  return out;
}

TrainResult train(RbmParams params, std::span<const Matrix> dataset, const TrainConfig& config,
                  const TrainCallbacks& callbacks) {
  if (dataset.empty()) throw ConfigError("train: empty dataset");
  params.validate();
  validate(config, params);
  for (const Matrix& x : dataset) expect_input(params, x);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Prng rng(config.seed, kShuffleStream);

  TrainResult result{std::move(params), {}};
  result.epoch_energy.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Matrix& x0 = dataset[order[k]];
      try {
        total += config.scheme == Scheme::GradientDescent ? gd_update(result.params, x0, config)
                                                          : fd_update(result.params, x0, config);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch + 1) + ", sample " +
                           std::to_string(order[k]) + ": " + e.what());
      }
    }
    const double mean = total / static_cast<double>(dataset.size());
    result.epoch_energy.push_back(mean);
    if (callbacks.on_epoch) callbacks.on_epoch(epoch + 1, mean);
  }
  return result;
}

double mean_energy(const RbmParams& params, std::span<const Matrix> dataset,
                   EnergyVariant variant) {
  if (dataset.empty()) return 0.0;
  double total = 0.0;
  for (const Matrix& x : dataset) total += energy(params, x, variant);
  return total / static_cast<double>(dataset.size());
}

}  // namespace dmfd
