#include "dmfd/random.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <type_traits>

#include "dmfd/error.hpp"

namespace dmfd {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Prng::Prng(std::uint64_t seed, std::uint64_t stream) : seed_(seed) {
  std::uint64_t sm = seed ^ (stream * 0xd1b54a32d192ed03ULL);
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Prng::next_u64() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Prng::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::uniform_open() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Prng::uniform_index(std::uint64_t n) noexcept {
  // Reject the short tail so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void bad(const std::string& what) { throw NumericError("invalid distribution: " + what); }

}  // namespace

void validate(const DistSpec& dist) {
  std::visit(
      overloaded{
          [](const Poisson& d) {
            // exp(-lambda) must stay a normal double for the product method.
            if (!(d.lambda > 0.0 && d.lambda <= 700.0)) bad("poisson lambda must be in (0, 700]");
          },
          [](const Binomial& d) {
            if (!(d.p >= 0.0 && d.p <= 1.0)) bad("binomial p must be in [0, 1]");
          },
          [](const Laplace& d) {
            if (!(d.scale > 0.0) || !std::isfinite(d.location)) bad("laplace scale must be > 0");
          },
          [](const Normal& d) {
            if (!(d.stddev > 0.0) || !std::isfinite(d.mean)) bad("normal stddev must be > 0");
          },
          [](const Exponential& d) {
            if (!(d.scale > 0.0 && std::isfinite(d.scale))) bad("exponential scale must be > 0");
          },
          [](const Uniform& d) {
            if (!(d.lo < d.hi) || !std::isfinite(d.hi - d.lo)) bad("uniform needs lo < hi");
          },
      },
      dist);
}

double draw(Prng& rng, const DistSpec& dist) {
  return std::visit(
      overloaded{
          [&](const Poisson& d) {
            const double limit = std::exp(-d.lambda);
            double prod = 1.0;
            unsigned k = 0;
            do {
              ++k;
              prod *= rng.uniform01();
            } while (prod > limit);
            return static_cast<double>(k - 1);
          },
          [&](const Binomial& d) {
            unsigned hits = 0;
            for (unsigned i = 0; i < d.n; ++i)
              if (rng.uniform01() < d.p) ++hits;
            return static_cast<double>(hits);
          },
          [&](const Laplace& d) {
            const double u = rng.uniform_open() - 0.5;
            const double mag = -d.scale * std::log(1.0 - 2.0 * std::abs(u));
            return u < 0.0 ? d.location - mag : d.location + mag;
          },
          [&](const Normal& d) {
            const double u1 = rng.uniform_open();
            const double u2 = rng.uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            return d.mean + d.stddev * r * std::cos(2.0 * M_PI * u2);
          },
          [&](const Exponential& d) { return -d.scale * std::log(1.0 - rng.uniform01()); },
          [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * rng.uniform01(); },
      },
      dist);
}

std::vector<double> sample(Prng& rng, const DistSpec& dist, std::size_t count) {
  validate(dist);
  std::vector<double> out(count);
  for (double& v : out) v = draw(rng, dist);
  return out;
}

double analytic_mean(const DistSpec& dist) {
  return std::visit(overloaded{
                        [](const Poisson& d) { return d.lambda; },
                        [](const Binomial& d) { return d.n * d.p; },
                        [](const Laplace& d) { return d.location; },
                        [](const Normal& d) { return d.mean; },
                        [](const Exponential& d) { return d.scale; },
                        [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                    },
                    dist);
}

double analytic_variance(const DistSpec& dist) {
  return std::visit(overloaded{
                        [](const Poisson& d) { return d.lambda; },
                        [](const Binomial& d) { return d.n * d.p * (1.0 - d.p); },
                        [](const Laplace& d) { return 2.0 * d.scale * d.scale; },
                        [](const Normal& d) { return d.stddev * d.stddev; },
                        [](const Exponential& d) { return d.scale * d.scale; },
                        [](const Uniform& d) { return (d.hi - d.lo) * (d.hi - d.lo) / 12.0; },
                    },
                    dist);
}

}  // namespace dmfd
