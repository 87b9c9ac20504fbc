#include "dmfd/rbm.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dmfd/error.hpp"
#include "support/oracle.hpp"

namespace dmfd {
namespace {

constexpr Activation kAll[] = {Activation::Identity, Activation::Sigmoid, Activation::Relu,
                               Activation::Softsign};

Matrix uniform(Prng& rng, std::size_t r, std::size_t c, double lo, double hi) {
  Matrix m(r, c);
  for (double& v : m.values()) v = lo + (hi - lo) * rng.uniform01();
  return m;
}

RbmParams instance(Prng& rng, std::size_t m, std::size_t n, std::size_t d, Activation h,
                   Activation v) {
  RbmParams p = init_params(m, n, d, h, v, rng);
  p.hidden_bias = uniform(rng, n, d, -0.5, 0.5);
  p.visible_bias = uniform(rng, m, d, -0.5, 0.5);
  return p;
}

TrainConfig config(Scheme scheme, double rate) {
  TrainConfig c;
  c.scheme = scheme;
  c.rate.scalar = rate;
  return c;
}

TEST(Rbm, InitParams) {
  Prng rng(1);
  const RbmParams p = init_params(16, 4, 2, Activation::Sigmoid, Activation::Identity, rng);
  EXPECT_EQ(p.weights.rows(), 4u);
  EXPECT_EQ(p.weights.cols(), 16u);
  EXPECT_EQ(p.hidden_bias, Matrix(4, 2));
  EXPECT_EQ(p.visible_bias, Matrix(16, 2));
  EXPECT_LE(max_abs(p.weights), 0.25);
  EXPECT_GT(max_abs(p.weights), 0.0);
  EXPECT_NO_THROW(p.validate());
  Prng again(1);
  EXPECT_EQ(init_params(16, 4, 2, Activation::Sigmoid, Activation::Identity, again), p);
}

TEST(Rbm, ValidateCatchesShapes) {
  Prng rng(1);
  RbmParams p = init_params(5, 3, 1, Activation::Relu, Activation::Relu, rng);
  p.hidden_bias = Matrix(2, 1);
  EXPECT_THROW(p.validate(), ShapeError);
  EXPECT_THROW(project(init_params(5, 3, 1, Activation::Relu, Activation::Relu, rng), Matrix(4, 1)),
               ShapeError);
}

TEST(Rbm, EnergyMatchesReference) {
  Prng rng(3);
  for (Activation h : kAll)
    for (Activation v : kAll) {
      const RbmParams p = instance(rng, 6, 4, 3, h, v);
      const Matrix x = uniform(rng, 6, 3, -1, 1);
      EXPECT_NEAR(energy(p, x), oracle::energy(p, x), 1e-13);
    }
}

TEST(Rbm, RecirculationEnergyTargetsActivatedInput) {
  Prng rng(4);
  const RbmParams p = instance(rng, 5, 3, 1, Activation::Softsign, Activation::Sigmoid);
  const Matrix x = uniform(rng, 5, 1, -1, 1);
  const RbmState s = roundtrip(p, x, EnergyVariant::Recirculation);
  const Matrix target = apply(p.visible_act, x);
  EXPECT_LT(max_abs(s.delta_x - (s.x_post - target)), 1e-15);
  EXPECT_DOUBLE_EQ(energy(p, x, EnergyVariant::Recirculation), 0.5 * frob_sq(s.x_post - target));
}

TEST(Rbm, GradientsMatchCentralDifference) {
  Prng rng(5);
  for (Activation h : {Activation::Identity, Activation::Sigmoid, Activation::Softsign})
    for (Activation v : {Activation::Identity, Activation::Sigmoid, Activation::Softsign}) {
      RbmParams p = instance(rng, 5, 3, 2, h, v);
      const Matrix x = uniform(rng, 5, 2, -1, 1);
      const Gradients g = gradients(p, x);
      auto f = [&] { return oracle::energy(p, x); };
      EXPECT_LT(max_abs(g.weights - oracle::central_difference(p.weights, f, 1e-5)), 1e-8);
      EXPECT_LT(max_abs(g.hidden_bias - oracle::central_difference(p.hidden_bias, f, 1e-5)), 1e-8);
      EXPECT_LT(max_abs(g.visible_bias - oracle::central_difference(p.visible_bias, f, 1e-5)),
                1e-8);
    }
}

TEST(Rbm, RecirculationGradientMatchesCentralDifference) {
  Prng rng(6);
  RbmParams p = instance(rng, 4, 3, 1, Activation::Sigmoid, Activation::Softsign);
  const Matrix x = uniform(rng, 4, 1, -1, 1);
  const Gradients g = gradients(p, x, EnergyVariant::Recirculation);
  auto f = [&] { return energy(p, x, EnergyVariant::Recirculation); };
  EXPECT_LT(max_abs(g.weights - oracle::central_difference(p.weights, f, 1e-5)), 1e-8);
  EXPECT_LT(max_abs(g.visible_bias - oracle::central_difference(p.visible_bias, f, 1e-5)), 1e-8);
}

TEST(Rbm, LinearStepMatchesClosedForm) {
  Prng rng(7);
  for (int seed = 0; seed < 20; ++seed) {
    const RbmParams p = instance(rng, 6, 4, 3, Activation::Identity, Activation::Identity);
    const Matrix x = uniform(rng, 6, 3, -1, 1);
    const auto expected = oracle::linear_update(p, x, 0.05);
    const StepResult lin = linear_step(p, x, 0.05);
    const StepResult gd = gd_step(p, x, config(Scheme::GradientDescent, 0.05));
    for (const StepResult* r : {&lin, &gd}) {
      EXPECT_LT(oracle::max_diff(expected.weights, r->params.weights), 1e-12);
      EXPECT_LT(oracle::max_diff(expected.hidden_bias, r->params.hidden_bias), 1e-12);
      EXPECT_LT(oracle::max_diff(expected.visible_bias, r->params.visible_bias), 1e-12);
    }
  }
  const RbmParams nonlinear = instance(rng, 3, 2, 1, Activation::Sigmoid, Activation::Identity);
  EXPECT_THROW(linear_step(nonlinear, Matrix(3, 1), 0.1), ConfigError);
}

TEST(Rbm, FdStepMatchesFormula) {
  Prng rng(8);
  RbmParams p = instance(rng, 5, 3, 2, Activation::Softsign, Activation::Relu);
  const Matrix x = uniform(rng, 5, 2, 0, 1);
  TrainConfig c = config(Scheme::FiniteDifference, 0.03);
  c.rate.visible = uniform(rng, 5, 2, 0.01, 0.05);
  c.rate.hidden = uniform(rng, 3, 2, 0.01, 0.05);
  c.rate.weights = uniform(rng, 3, 5, 0.01, 0.05);

  using namespace oracle;
  const auto kh = kinds(p.hidden_act), kv = kinds(p.visible_act);
  const Grid w = grid(p.weights), x0 = grid(x);
  const Grid y0 = act(kh, add(mul(w, x0), grid(p.hidden_bias)));
  const Grid x1 = act(kv, add(mul(trans(w), y0), grid(p.visible_bias)));
  const Grid y1 = act(kh, add(mul(w, x1), grid(p.hidden_bias)));
  const Grid dv = add(x1, x0, -1.0), dh = add(y1, y0, -1.0);
  const Grid dw = add(mul(y1, trans(x1)), mul(y0, trans(x0)), -1.0);
  auto scaled = [](const Grid& rate, const Grid& g) {
    Grid out = g;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g[0].size(); ++j) out[i][j] *= rate[i][j];
    return out;
  };
  const StepResult r = fd_step(p, x, c);
  EXPECT_LT(max_diff(add(grid(p.visible_bias), scaled(grid(*c.rate.visible), dv), -1.0),
                     r.params.visible_bias),
            1e-15);
  EXPECT_LT(max_diff(add(grid(p.hidden_bias), scaled(grid(*c.rate.hidden), dh), -1.0),
                     r.params.hidden_bias),
            1e-15);
  EXPECT_LT(max_diff(add(w, scaled(grid(*c.rate.weights), dw), -1.0), r.params.weights), 1e-15);
  EXPECT_DOUBLE_EQ(r.energy_before, energy(p, x));
}

TEST(Rbm, ElementwiseRatesRequireFiniteDifference) {
  Prng rng(9);
  const RbmParams p = instance(rng, 4, 2, 1, Activation::Identity, Activation::Identity);
  TrainConfig c = config(Scheme::GradientDescent, 0.1);
  c.rate.hidden = Matrix(2, 1, 0.1);
  EXPECT_THROW(validate(c, p), ConfigError);
  c.scheme = Scheme::FiniteDifference;
  EXPECT_NO_THROW(validate(c, p));
  c.rate.hidden = Matrix(3, 1, 0.1);
  EXPECT_THROW(validate(c, p), ConfigError);
  c.rate.hidden.reset();
  c.rate.scalar = 0.0;
  EXPECT_THROW(validate(c, p), ConfigError);
}

// Near an exact reconstruction the FD update differs from GD by O(|dX|^2).
TEST(Rbm, FdApproximatesGdToSecondOrder) {
  Prng rng(10);
  RbmParams base = instance(rng, 6, 4, 1, Activation::Softsign, Activation::Identity);
  const Matrix x = uniform(rng, 6, 1, -1, 1);
  const Matrix y = project(base, x).post;
  base.visible_bias = x - matmul_at_b(base.weights, y);
  ASSERT_LT(energy(base, x), 1e-28);
  const Matrix u = uniform(rng, 6, 1, -1, 1);

  std::vector<double> log_dx, log_gap;
  for (double t : {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3}) {
    RbmParams p = base;
    axpy(t, u, p.visible_bias);
    const double dx = std::sqrt(frob_sq(roundtrip(p, x).delta_x));
    const RbmParams gd = gd_step(p, x, config(Scheme::GradientDescent, 1.0)).params;
    const RbmParams fd = fd_step(p, x, config(Scheme::FiniteDifference, 1.0)).params;
    const double gap = std::sqrt(frob_sq(gd.weights - fd.weights) +
                                 frob_sq(gd.hidden_bias - fd.hidden_bias) +
                                 frob_sq(gd.visible_bias - fd.visible_bias));
    log_dx.push_back(std::log(dx));
    log_gap.push_back(std::log(gap));
  }
  const double n = static_cast<double>(log_dx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < log_dx.size(); ++i) mx += log_dx[i] / n, my += log_gap[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < log_dx.size(); ++i) {
    sxy += (log_dx[i] - mx) * (log_gap[i] - my);
    sxx += (log_dx[i] - mx) * (log_dx[i] - mx);
  }
  EXPECT_GE(sxy / sxx, 1.9);
}

TEST(RbmProperty, SmallGdStepDecreasesEnergy) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Prng rng(seed);
    const Activation h = kAll[seed % 4], v = kAll[(seed / 4) % 4];
    const RbmParams p = instance(rng, 7, 5, 1 + seed % 3, h, v);
    const Matrix x = uniform(rng, 7, 1 + seed % 3, -1, 1);
    const StepResult r = gd_step(p, x, config(Scheme::GradientDescent, 1e-3));
    const double after = energy(r.params, x);
    if (frob_sq(gradients(p, x).weights) == 0.0) continue;
    EXPECT_LT(after, r.energy_before) << "seed " << seed << " " << name(h) << "/" << name(v);
  }
}

TEST(RbmTrain, ZeroEpochsReturnsInitialParams) {
  Prng rng(11);
  const RbmParams p = instance(rng, 4, 2, 1, Activation::Identity, Activation::Identity);
  const std::vector<Matrix> data{uniform(rng, 4, 1, 0, 1)};
  TrainConfig c = config(Scheme::GradientDescent, 0.1);
  c.epochs = 0;
  const TrainResult r = train(p, data, c);
  EXPECT_EQ(r.params, p);
  EXPECT_TRUE(r.epoch_energy.empty());
}

TEST(RbmTrain, DeterministicAndReportsEveryEpoch) {
  Prng rng(12);
  const RbmParams p = instance(rng, 6, 3, 1, Activation::Softsign, Activation::Relu);
  std::vector<Matrix> data;
  for (int i = 0; i < 20; ++i) data.push_back(uniform(rng, 6, 1, 0, 1));
  TrainConfig c = config(Scheme::FiniteDifference, 0.01);
  c.epochs = 15;
  std::vector<std::size_t> seen;
  TrainCallbacks cb;
  cb.on_epoch = [&](std::size_t e, double) { seen.push_back(e); };
  const TrainResult a = train(p, data, c, cb);
  const TrainResult b = train(p, data, c);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.epoch_energy, b.epoch_energy);
  ASSERT_EQ(seen.size(), 15u);
  EXPECT_EQ(seen.front(), 1u);
  EXPECT_LT(a.epoch_energy.back(), a.epoch_energy.front());
  c.shuffle = false;
  EXPECT_NE(train(p, data, c).params, a.params);
}

TEST(RbmTrain, FixedOrderEqualsSequentialUpdates) {
  Prng rng(13);
  RbmParams p = instance(rng, 4, 2, 1, Activation::Sigmoid, Activation::Identity);
  std::vector<Matrix> data;
  for (int i = 0; i < 5; ++i) data.push_back(uniform(rng, 4, 1, 0, 1));
  TrainConfig c = config(Scheme::GradientDescent, 0.05);
  c.epochs = 2;
  c.shuffle = false;
  const TrainResult r = train(p, data, c);
  for (int e = 0; e < 2; ++e)
    for (const Matrix& x : data) gd_update(p, x, c);
  EXPECT_EQ(r.params, p);
}

TEST(RbmTrain, DivergenceRaisesNumericError) {
  Prng rng(14);
  const RbmParams p = instance(rng, 8, 4, 1, Activation::Identity, Activation::Identity);
  std::vector<Matrix> data;
  for (int i = 0; i < 10; ++i) data.push_back(uniform(rng, 8, 1, 5, 10));
  TrainConfig c = config(Scheme::GradientDescent, 10.0);
  c.epochs = 50;
  EXPECT_THROW(train(p, data, c), NumericError);
  EXPECT_THROW(train(p, std::vector<Matrix>{}, c), ConfigError);
}

TEST(RbmTrain, MeanEnergy) {
  Prng rng(15);
  const RbmParams p = instance(rng, 3, 2, 1, Activation::Identity, Activation::Sigmoid);
  const std::vector<Matrix> data{uniform(rng, 3, 1, 0, 1), uniform(rng, 3, 1, 0, 1)};
  EXPECT_DOUBLE_EQ(mean_energy(p, data), 0.5 * (energy(p, data[0]) + energy(p, data[1])));
}

}  // namespace
}  // namespace dmfd
