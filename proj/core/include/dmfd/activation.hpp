#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dmfd/matrix.hpp"

namespace dmfd {

/// Elementwise node activation. Numeric values are the on-disk codes.
enum class Activation : std::uint8_t {
  Identity = 0,
  Sigmoid = 1,
  Relu = 2,
  Softsign = 3,
};

/// Lowercase config name: identity, sigmoid, relu, softsign.
std::string_view name(Activation a) noexcept;
/// Inverse of name(); throws ConfigError on anything else.
Activation parse_activation(std::string_view text);
/// Throws IoError for an unknown code.
Activation activation_from_code(std::uint8_t code);

double activate(Activation a, double x) noexcept;

/// Derivative expressed in terms of the activation output y = activate(a, x):
/// identity 1, sigmoid y(1-y), softsign (1-|y|)^2, relu 1 if y > 0 else 0.
double derivative_from_output(Activation a, double y) noexcept;

/// Per-node activation assignment for one layer; row i of a layer matrix uses
/// kind(i).
class ActivationMap {
 public:
  ActivationMap() = default;
  /// The same kind on all `rows` nodes.
  ActivationMap(Activation kind, std::size_t rows) : kinds_(rows, kind) {}
  explicit ActivationMap(std::vector<Activation> kinds) : kinds_(std::move(kinds)) {}

  std::size_t size() const noexcept { return kinds_.size(); }
  Activation kind(std::size_t row) const { return kinds_[row]; }
  const std::vector<Activation>& kinds() const noexcept { return kinds_; }
  bool uniform(Activation kind) const noexcept;
  bool contains(Activation kind) const noexcept;

  friend bool operator==(const ActivationMap&, const ActivationMap&) = default;

 private:
  std::vector<Activation> kinds_;
};

/// Row i of the result is kind(i) applied to row i of `pre`.
Matrix apply(const ActivationMap& map, const Matrix& pre);
Matrix derivative_from_output(const ActivationMap& map, const Matrix& out);

}  // namespace dmfd
