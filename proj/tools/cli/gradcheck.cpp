#include <array>
#include <cmath>
#include <functional>

#include "cli/commands.hpp"
#include "dmfd/random.hpp"

namespace dmfd::cli {
namespace {

// Relu pre-activations closer than this to 0 are pushed away so the central
// difference never straddles the kink.
constexpr double kKinkMargin = 1e-3;

struct Instance {
  RbmParams params;
  Matrix x0;
};

Instance make_instance(std::size_t m, std::size_t n, std::size_t d, Activation act_h,
                       Activation act_v, std::uint64_t seed) {
  Prng rng(seed, 0x67726164);
  RbmParams p = init_params(m, n, d, act_h, act_v, rng);
  for (double& b : p.hidden_bias.values()) b = rng.uniform01() - 0.5;
  for (double& b : p.visible_bias.values()) b = rng.uniform01() - 0.5;
  Matrix x0(m, d);
  for (double& v : x0.values()) v = 2.0 * rng.uniform01() - 1.0;
  return {std::move(p), std::move(x0)};
}

// Shifts biases of relu nodes whose pre-activation sits inside the margin.
std::size_t repair_kinks(Instance& inst) {
  std::size_t repairs = 0;
  auto fix = [&](const ActivationMap& act, const Matrix& pre, Matrix& bias) {
    bool changed = false;
    for (std::size_t r = 0; r < pre.rows(); ++r) {
      if (act.kind(r) != Activation::Relu) continue;
      for (std::size_t c = 0; c < pre.cols(); ++c) {
        const double v = pre(r, c);
        if (std::abs(v) < kKinkMargin) {
          bias(r, c) += v >= 0.0 ? 2.0 * kKinkMargin : -2.0 * kKinkMargin;
          ++repairs;
          changed = true;
        }
      }
    }
    return changed;
  };
  for (int pass = 0; pass < 16; ++pass) {
    const RbmState s = roundtrip(inst.params, inst.x0);
    // Hidden first: moving B_h changes the visible pre-activations.
    if (fix(inst.params.hidden_act, s.y_pre, inst.params.hidden_bias)) continue;
    if (!fix(inst.params.visible_act, s.x_pre, inst.params.visible_bias)) break;
  }
  return repairs;
}

double numeric_partial(RbmParams& p, double& slot, const Matrix& x0, double h, EnergyVariant v) {
  const double saved = slot;
  slot = saved + h;
  const double up = energy(p, x0, v);
  slot = saved - h;
  const double down = energy(p, x0, v);
  slot = saved;
  return (up - down) / (2.0 * h);
}

double relative_error(const Instance& inst, double h, EnergyVariant variant) {
  const Gradients g = gradients(inst.params, inst.x0, variant);
  RbmParams p = inst.params;
  double diff_sq = 0.0, analytic_sq = 0.0, numeric_sq = 0.0;
  auto block = [&](Matrix& values, const Matrix& analytic) {
    auto vs = values.values();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const double num = numeric_partial(p, vs[i], inst.x0, h, variant);
      const double ana = analytic.values()[i];
      diff_sq += (num - ana) * (num - ana);
      analytic_sq += ana * ana;
      numeric_sq += num * num;
    }
  };
  block(p.weights, g.weights);
  block(p.hidden_bias, g.hidden_bias);
  block(p.visible_bias, g.visible_bias);
  const double scale = std::sqrt(analytic_sq) + std::sqrt(numeric_sq);
  return scale > 0.0 ? std::sqrt(diff_sq) / scale : 0.0;
}

}  // namespace

std::vector<GradcheckCell> gradcheck(const GradcheckOptions& options) {
  constexpr std::array kinds{Activation::Identity, Activation::Sigmoid, Activation::Relu,
                             Activation::Softsign};
  struct Shape {
    std::size_t m, n, d;
  };
  constexpr std::array shapes{Shape{7, 5, 1}, Shape{6, 4, 3}};

  std::vector<GradcheckCell> cells;
  for (Activation act_h : kinds) {
    for (Activation act_v : kinds) {
      for (const Shape& s : shapes) {
        GradcheckCell cell{act_h, act_v, s.m, s.n, s.d};
        for (std::size_t seed = 0; seed < options.seeds; ++seed) {
          Instance inst = make_instance(s.m, s.n, s.d, act_h, act_v, seed);
          cell.kink_repairs += repair_kinks(inst);
          cell.max_rel_error =
              std::max(cell.max_rel_error, relative_error(inst, options.step, options.energy));
        }
        cell.pass = cell.max_rel_error <= options.tolerance;
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

}  // namespace dmfd::cli
