#include "dmfd/ffn.hpp"

#include <cmath>
#include <string>

#include "dmfd/error.hpp"

namespace dmfd {
namespace {

void check_operands(const FfnLayer& layer, const Matrix& x0, const Matrix& target) {
  if (x0.rows() != layer.inputs() || x0.cols() != layer.columns())
    throw ShapeError("ffn: input shape does not match layer");
  if (!target.same_shape(layer.bias)) throw ShapeError("ffn: target shape does not match layer");
}

void require_finite(const Matrix& m, const char* block) {
  if (!m.all_finite()) throw NumericError(std::string("ffn: non-finite update in ") + block);
}

Matrix scaled(const Matrix& delta, double scalar, const std::optional<Matrix>& rates,
              const char* what) {
  if (!rates) return scalar * delta;
  if (!rates->same_shape(delta)) throw ConfigError(std::string("ffn: mis-shaped ") + what + " rates");
  return hadamard(*rates, delta);
}

}  // namespace

void FfnLayer::validate() const {
  if (weights.rows() == 0 || weights.cols() == 0 || bias.cols() == 0)
    throw ShapeError("FfnLayer: empty dimension");
  if (bias.rows() != weights.rows()) throw ShapeError("FfnLayer: bias rows != weight rows");
  if (act.size() != weights.rows()) throw ShapeError("FfnLayer: activation map size");
  weights.check_finite("ffn weights");
  bias.check_finite("ffn bias");
}

FfnLayer init_layer(std::size_t inputs, std::size_t outputs, std::size_t columns, Activation act,
                    Prng& rng) {
  FfnLayer layer{Matrix(outputs, inputs), Matrix(outputs, columns), ActivationMap(act, outputs)};
  const double bound = 1.0 / std::sqrt(static_cast<double>(inputs));
  for (double& w : layer.weights.values()) w = bound * (2.0 * rng.uniform_open() - 1.0);
  return layer;
}

Matrix forward(const FfnLayer& layer, const Matrix& x) {
  if (x.rows() != layer.inputs() || x.cols() != layer.columns())
    throw ShapeError("ffn forward: input shape does not match layer");
  Matrix pre = matmul(layer.weights, x);
  axpy(1.0, layer.bias, pre);
  return apply(layer.act, pre);
}

double ffn_energy(const FfnLayer& layer, const Matrix& x, const Matrix& target) {
  return 0.5 * frob_sq(forward(layer, x) - target);
}

FfnUpdate gd_update(const FfnLayer& layer, const Matrix& x0, const Matrix& target, double rate,
                    bool update_input) {
  check_operands(layer, x0, target);
  if (!(rate > 0.0)) throw ConfigError("ffn: learning rate must be positive");
  const Matrix y1 = forward(layer, x0);
  const Matrix signal = hadamard(derivative_from_output(layer.act, y1), y1 - target);

  FfnUpdate out{layer, std::nullopt};
  if (update_input) {
    Matrix x1 = x0;
    axpy(-rate, matmul_at_b(layer.weights, signal), x1);
    require_finite(x1, "input");
    out.input = std::move(x1);
  }
  axpy(-rate, signal, out.layer.bias);
  require_finite(out.layer.bias, "bias");
  add_a_bt(-rate, signal, x0, out.layer.weights);
  require_finite(out.layer.weights, "weights");
  return out;
}

FfnUpdate fd_update(const FfnLayer& layer, const Matrix& x0, const Matrix& target,
                    const FfnRate& rate, bool update_input) {
  check_operands(layer, x0, target);
  if (!(rate.scalar > 0.0)) throw ConfigError("ffn: learning rate must be positive");
  const Matrix y1 = forward(layer, x0);
  const Matrix residual = y1 - target;
  const Matrix signal = scaled(residual, rate.scalar, rate.output, "output");

  FfnUpdate out{layer, std::nullopt};
  if (update_input) {
    Matrix x1 = x0;
    axpy(-1.0, scaled(matmul_at_b(layer.weights, residual), rate.scalar, rate.input, "input"), x1);
    require_finite(x1, "input");
    out.input = std::move(x1);
  }
  axpy(-1.0, signal, out.layer.bias);
  require_finite(out.layer.bias, "bias");
  add_a_bt(-1.0, signal, x0, out.layer.weights);
  require_finite(out.layer.weights, "weights");
  return out;
}

}  // namespace dmfd
