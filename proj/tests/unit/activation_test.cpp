#include "dmfd/activation.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dmfd/error.hpp"

namespace dmfd {
namespace {

constexpr Activation kAll[] = {Activation::Identity, Activation::Sigmoid, Activation::Relu,
                               Activation::Softsign};

TEST(Activation, Values) {
  EXPECT_EQ(activate(Activation::Identity, -1.5), -1.5);
  EXPECT_DOUBLE_EQ(activate(Activation::Sigmoid, 0.0), 0.5);
  EXPECT_EQ(activate(Activation::Relu, -2.0), 0.0);
  EXPECT_EQ(activate(Activation::Relu, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(activate(Activation::Softsign, 3.0), 0.75);
  EXPECT_DOUBLE_EQ(activate(Activation::Softsign, -1.0), -0.5);
  EXPECT_TRUE(std::isfinite(activate(Activation::Sigmoid, -800.0)));
}

TEST(Activation, DerivativeMatchesCentralDifference) {
  const double h = 1e-6;
  for (Activation a : kAll) {
    for (double x : {-2.3, -0.4, 0.7, 1.9}) {
      const double numeric = (activate(a, x + h) - activate(a, x - h)) / (2 * h);
      EXPECT_NEAR(derivative_from_output(a, activate(a, x)), numeric, 1e-8)
          << name(a) << " at " << x;
    }
  }
}

TEST(Activation, ReluDerivativeAtZeroIsZero) {
  EXPECT_EQ(derivative_from_output(Activation::Relu, 0.0), 0.0);
}

TEST(Activation, NamesRoundTrip) {
  for (Activation a : kAll) {
    EXPECT_EQ(parse_activation(name(a)), a);
    EXPECT_EQ(activation_from_code(static_cast<std::uint8_t>(a)), a);
  }
  EXPECT_THROW(parse_activation("tanh"), ConfigError);
  EXPECT_THROW(activation_from_code(9), IoError);
}

TEST(ActivationMap, AppliesPerRow) {
  const ActivationMap map({Activation::Relu, Activation::Softsign});
  const Matrix pre = Matrix::from_rows({{-1, 2}, {1, -3}});
  const Matrix out = apply(map, pre);
  EXPECT_EQ(out, Matrix::from_rows({{0, 2}, {0.5, -0.75}}));
  const Matrix d = derivative_from_output(map, out);
  EXPECT_EQ(d, Matrix::from_rows({{0, 1}, {0.25, 0.0625}}));
  EXPECT_TRUE(map.contains(Activation::Relu));
  EXPECT_FALSE(map.uniform(Activation::Relu));
  EXPECT_TRUE(ActivationMap(Activation::Sigmoid, 3).uniform(Activation::Sigmoid));
  EXPECT_THROW(apply(map, Matrix(3, 1)), ShapeError);
}

}  // namespace
}  // namespace dmfd
