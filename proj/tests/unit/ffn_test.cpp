#include "dmfd/ffn.hpp"

#include <gtest/gtest.h>

#include "dmfd/error.hpp"
#include "support/oracle.hpp"

namespace dmfd {
namespace {

Matrix uniform(Prng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (double& v : m.values()) v = 2.0 * rng.uniform01() - 1.0;
  return m;
}

TEST(Ffn, ForwardMatchesReference) {
  Prng rng(1);
  FfnLayer layer = init_layer(5, 3, 2, Activation::Softsign, rng);
  layer.bias = uniform(rng, 3, 2);
  const Matrix x = uniform(rng, 5, 2);
  using namespace oracle;
  const Grid expected = act(kinds(layer.act), add(mul(grid(layer.weights), grid(x)), grid(layer.bias)));
  EXPECT_LT(max_diff(expected, forward(layer, x)), 1e-15);
  EXPECT_THROW(forward(layer, Matrix(4, 2)), ShapeError);
}

TEST(Ffn, GdUpdateFollowsGradient) {
  Prng rng(2);
  FfnLayer layer = init_layer(4, 3, 1, Activation::Sigmoid, rng);
  const Matrix x = uniform(rng, 4, 1), target = uniform(rng, 3, 1);
  const double rate = 1e-3;
  const FfnUpdate u = gd_update(layer, x, target, rate, true);
  Matrix grad_w = (-1.0 / rate) * (u.layer.weights - layer.weights);
  auto f = [&] { return ffn_energy(layer, x, target); };
  EXPECT_LT(max_abs(grad_w - oracle::central_difference(layer.weights, f, 1e-6)), 1e-8);

  Matrix xs = x;
  auto fx = [&] { return ffn_energy(layer, xs, target); };
  const Matrix grad_x = (-1.0 / rate) * (*u.input - x);
  EXPECT_LT(max_abs(grad_x - oracle::central_difference(xs, fx, 1e-6)), 1e-8);
  EXPECT_LT(ffn_energy(u.layer, x, target), ffn_energy(layer, x, target));
}

TEST(Ffn, IdentityFdEqualsGd) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Prng rng(seed);
    FfnLayer layer = init_layer(6, 4, 3, Activation::Identity, rng);
    layer.bias = uniform(rng, 4, 3);
    const Matrix x = uniform(rng, 6, 3), target = uniform(rng, 4, 3);
    const FfnUpdate gd = gd_update(layer, x, target, 0.05, true);
    const FfnUpdate fd = fd_update(layer, x, target, FfnRate{0.05, {}, {}}, true);
    EXPECT_LE(max_abs(gd.layer.weights - fd.layer.weights), 1e-12);
    EXPECT_LE(max_abs(gd.layer.bias - fd.layer.bias), 1e-12);
    EXPECT_LE(max_abs(*gd.input - *fd.input), 1e-12);
  }
}

TEST(Ffn, ReluAtExactZeroStaysFinite) {
  FfnLayer layer{Matrix::from_rows({{1.0, -1.0}}), Matrix(1, 1), ActivationMap(Activation::Relu, 1)};
  const Matrix x = Matrix::from_rows({{0.5}, {0.5}});
  const Matrix target = Matrix::from_rows({{0.3}});
  const FfnUpdate fd = fd_update(layer, x, target, FfnRate{0.1, {}, {}}, true);
  EXPECT_TRUE(fd.layer.weights.all_finite());
  EXPECT_TRUE(fd.input->all_finite());
  // Residual 0 - 0.3 drives the layer without any derivative.
  EXPECT_DOUBLE_EQ(fd.layer.bias(0, 0), 0.03);
  EXPECT_DOUBLE_EQ(fd.layer.weights(0, 0), 1.015);
  EXPECT_DOUBLE_EQ((*fd.input)(1, 0), 0.47);
  // The gradient update sees a zero derivative and leaves the layer alone.
  const FfnUpdate gd = gd_update(layer, x, target, 0.1, false);
  EXPECT_EQ(gd.layer, layer);
}

TEST(Ffn, ElementwiseRates) {
  Prng rng(4);
  const FfnLayer layer = init_layer(3, 2, 1, Activation::Softsign, rng);
  const Matrix x = uniform(rng, 3, 1), target = uniform(rng, 2, 1);
  FfnRate rate{0.1, Matrix::from_rows({{0.1}, {0.2}}), Matrix(3, 1, 0.1)};
  const FfnUpdate u = fd_update(layer, x, target, rate, true);
  const Matrix residual = forward(layer, x) - target;
  EXPECT_DOUBLE_EQ(u.layer.bias(1, 0), -0.2 * residual(1, 0));
  EXPECT_DOUBLE_EQ(u.layer.bias(0, 0), -0.1 * residual(0, 0));
  rate.output = Matrix(3, 1, 0.1);
  EXPECT_THROW(fd_update(layer, x, target, rate, false), ConfigError);
  EXPECT_THROW(gd_update(layer, x, Matrix(3, 1), 0.1, false), ShapeError);
}

}  // namespace
}  // namespace dmfd
