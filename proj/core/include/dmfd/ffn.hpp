#pragma once

#include <optional>

#include "dmfd/activation.hpp"
#include "dmfd/matrix.hpp"
#include "dmfd/random.hpp"

namespace dmfd {

/// One directed layer Y = A(W X + B) trained against an external target
/// under E = 1/2 ||A(W X + B) - Y0||^2. W is n x m, B is n x d.
struct FfnLayer {
  Matrix weights;
  Matrix bias;
  ActivationMap act;

  std::size_t inputs() const noexcept { return weights.cols(); }
  std::size_t outputs() const noexcept { return weights.rows(); }
  std::size_t columns() const noexcept { return bias.cols(); }

  void validate() const;

  friend bool operator==(const FfnLayer&, const FfnLayer&) = default;
};

FfnLayer init_layer(std::size_t inputs, std::size_t outputs, std::size_t columns, Activation act,
                    Prng& rng);

Matrix forward(const FfnLayer& layer, const Matrix& x);

/// 1/2 ||forward(layer, x) - target||^2.
double ffn_energy(const FfnLayer& layer, const Matrix& x, const Matrix& target);

/// Rates for the finite-difference rules. `output` (n x d) scales the output
/// residual used for B and W; `input` (m x d) scales the input correction.
/// Either falls back to `scalar`.
struct FfnRate {
  double scalar = 0.01;
  std::optional<Matrix> output;
  std::optional<Matrix> input;
};

struct FfnUpdate {
  FfnLayer layer;
  std::optional<Matrix> input;  ///< corrected input, when requested
};

/// Gradient descent on the layer energy. With `update_input` the input is
/// also moved down its gradient, X1 = X0 - rate W^T [A'(Y1) .* (Y1 - Y0)],
/// as needed when the layer sits in the middle of a stack.
FfnUpdate gd_update(const FfnLayer& layer, const Matrix& x0, const Matrix& target, double rate,
                    bool update_input);

/// Finite-difference rules: the output residual Y1 - Y0 replaces the
/// derivative-weighted residual, so no A' is evaluated.
FfnUpdate fd_update(const FfnLayer& layer, const Matrix& x0, const Matrix& target,
                    const FfnRate& rate, bool update_input);

}  // namespace dmfd
