#include "spinmono/stats.hpp"

#include <algorithm>
#include <cmath>

namespace spinmono {

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double radius = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  // Rounding can push an endpoint across p at k = 0 or k = n.
  return {std::clamp(std::min(center - radius, p), 0.0, 1.0),
          std::clamp(std::max(center + radius, p), 0.0, 1.0)};
}

double proportion_se(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double two_proportion_radius(double p1, std::uint64_t n1, double p2, std::uint64_t n2, double z) {
  const double s1 = proportion_se(p1, n1);
  const double s2 = proportion_se(p2, n2);
  return z * std::sqrt(s1 * s1 + s2 * s2);
}

}  // namespace spinmono
