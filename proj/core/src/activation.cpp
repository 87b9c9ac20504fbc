#include "dmfd/activation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmfd/error.hpp"

namespace dmfd {

std::string_view name(Activation a) noexcept {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Relu: return "relu";
    case Activation::Softsign: return "softsign";
  }
  return "?";
}

Activation parse_activation(std::string_view text) {
  for (auto a : {Activation::Identity, Activation::Sigmoid, Activation::Relu, Activation::Softsign})
    if (text == name(a)) return a;
  throw ConfigError("unknown activation '" + std::string(text) +
                    "' (expected identity, sigmoid, relu or softsign)");
}

Activation activation_from_code(std::uint8_t code) {
  if (code > static_cast<std::uint8_t>(Activation::Softsign))
    throw IoError("unknown activation code " + std::to_string(code));
  return static_cast<Activation>(code);
}

double activate(Activation a, double x) noexcept {
  switch (a) {
    case Activation::Identity: return x;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Softsign: return x / (1.0 + std::abs(x));
  }
  return x;
}

double derivative_from_output(Activation a, double y) noexcept {
  switch (a) {
    case Activation::Identity: return 1.0;
    case Activation::Sigmoid: return y * (1.0 - y);
    // Subgradient 0 at the kink.
    case Activation::Relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::Softsign: {
      const double s = 1.0 - std::abs(y);
      return s * s;
    }
  }
  return 1.0;
}

bool ActivationMap::uniform(Activation kind) const noexcept {
  return std::all_of(kinds_.begin(), kinds_.end(), [kind](Activation k) { return k == kind; });
}

bool ActivationMap::contains(Activation kind) const noexcept {
  return std::find(kinds_.begin(), kinds_.end(), kind) != kinds_.end();
}

namespace {

template <class F>
Matrix rowwise(const ActivationMap& map, const Matrix& in, const char* op, F&& f) {
  if (map.size() != in.rows()) {
    throw ShapeError(std::string(op) + ": activation map has " + std::to_string(map.size()) +
                     " nodes, matrix has " + std::to_string(in.rows()) + " rows");
  }
  Matrix out(in.rows(), in.cols());
  for (std::size_t r = 0; r < in.rows(); ++r) {
    const Activation kind = map.kind(r);
    auto src = in.row(r);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < src.size(); ++c) dst[c] = f(kind, src[c]);
  }
  return out;
}

}  // namespace

Matrix apply(const ActivationMap& map, const Matrix& pre) {
  return rowwise(map, pre, "apply", [](Activation k, double x) { return activate(k, x); });
}

Matrix derivative_from_output(const ActivationMap& map, const Matrix& out) {
  return rowwise(map, out, "derivative_from_output",
                 [](Activation k, double y) { return derivative_from_output(k, y); });
}

}  // namespace dmfd
