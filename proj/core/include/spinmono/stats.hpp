#pragma once

#include <cstdint>

namespace spinmono {

/// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for k successes in n trials. Always contains k/n.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = kZ99);

/// Standard error sqrt(p(1-p)/n) of a sample proportion.
double proportion_se(double p, std::uint64_t n);

/// Confidence radius of p2 - p1 for independent samples of sizes n1, n2.
double two_proportion_radius(double p1, std::uint64_t n1, double p2, std::uint64_t n2,
                             double z = kZ99);

}  // namespace spinmono
