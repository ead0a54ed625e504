#pragma once

// Generators and brute-force oracles shared by the test suites. Nothing in
// here calls the code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spinmono/lattice.hpp"
#include "spinmono/rates.hpp"

namespace spinmono::testing {

inline bool leq_bitwise(std::uint32_t p, std::uint32_t q, int width) {
  for (int i = 0; i < width; ++i) {
    if (((p >> i) & 1u) > ((q >> i) & 1u)) return false;
  }
  return true;
}

/// Random table with no structure.
inline RateSpec random_spec(std::mt19937_64& rng, int radius, double scale = 3.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<double> rates(std::size_t{1} << (2 * radius + 1));
  for (auto& r : rates) r = u(rng);
  return RateSpec(radius, std::move(rates), "random");
}

/// Random attractive table: births are the running max over lower patterns,
/// deaths the running max over higher patterns.
inline RateSpec random_attractive_spec(std::mt19937_64& rng, int radius, double scale = 3.0) {
  const int width = 2 * radius + 1;
  const std::uint32_t n = 1u << width;
  const std::uint32_t center = 1u << radius;
  std::uniform_real_distribution<double> u(0.0, scale);
  std::bernoulli_distribution zero(0.3);
  std::vector<double> raw(n);
  for (auto& r : raw) r = zero(rng) ? 0.0 : u(rng);
  std::vector<double> rates(n, 0.0);
  for (std::uint32_t p = 0; p < n; ++p) {
    for (std::uint32_t q = 0; q < n; ++q) {
      if ((p & center) != (q & center)) continue;
      const bool below = leq_bitwise(q, p, width);
      const bool above = leq_bitwise(p, q, width);
      if ((p & center) ? above : below) rates[p] = std::max(rates[p], raw[q]);
    }
  }
  return RateSpec(radius, std::move(rates), "random_attractive");
}

inline Configuration random_config(std::mt19937_64& rng, Window w, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  Configuration c(bit(rng), w, bit(rng));
  for (Site x = w.lo; x <= w.hi; ++x) c.set(x, bit(rng));
  return c;
}

/// A configuration below `upper` on the same window: random sites cleared.
inline Configuration random_below(std::mt19937_64& rng, const Configuration& upper) {
  std::bernoulli_distribution keep(0.6);
  Configuration c(upper.left_tail() && keep(rng), upper.window(),
                  upper.right_tail() && keep(rng));
  for (Site x = upper.window().lo; x <= upper.window().hi; ++x) {
    c.set(x, upper.value(x) && keep(rng));
  }
  return c;
}

/// |x - expected| within k standard errors of a proportion from n samples.
inline bool within_sigma(double x, double expected, std::uint64_t n, double k = 3.0) {
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
  return std::abs(x - expected) <= k * se + 1e-12;
}

}  // namespace spinmono::testing
