#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace dmfd {

/// xoshiro256** 1.0 (Blackman & Vigna), state seeded by splitmix64.
///
/// splitmix64:  z += 0x9e3779b97f4a7c15;
///              z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
///              z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
///              return z ^ (z >> 31);
/// xoshiro256**: result = rotl(s1 * 5, 7) * 9; t = s1 << 17;
///              s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45).
///
/// Only integer arithmetic feeds the state, so a seed yields the same stream
/// on every platform.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : Prng(seed, 0) {}
  /// Independent stream `stream` for the same user seed.
  Prng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;
  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform_open() noexcept;
  /// Uniform integer on [0, n) by rejection; n > 0.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

struct Poisson { double lambda; };
struct Binomial { unsigned n; double p; };
struct Laplace { double location; double scale; };
struct Normal { double mean; double stddev; };
/// Parameterized by scale (the mean), not rate.
struct Exponential { double scale; };
struct Uniform { double lo; double hi; };

using DistSpec = std::variant<Poisson, Binomial, Laplace, Normal, Exponential, Uniform>;

/// Throws NumericError for parameters outside the distribution's domain.
void validate(const DistSpec& dist);

/// One draw. Samplers:
///   Normal       Box-Muller, cosine branch only (two uniforms per draw)
///   Exponential  -scale * ln(1 - u)
///   Laplace      inverse CDF
///   Uniform      lo + (hi - lo) * u
///   Poisson      Knuth product of uniforms
///   Binomial     n Bernoulli trials
double draw(Prng& rng, const DistSpec& dist);

std::vector<double> sample(Prng& rng, const DistSpec& dist, std::size_t count);

double analytic_mean(const DistSpec& dist);
double analytic_variance(const DistSpec& dist);

}  // namespace dmfd
