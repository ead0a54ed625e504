#include "spinmono/exact.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

namespace spinmono {

GeneratorMatrix::GeneratorMatrix(const RateSpec& spec, Window window, Spin left_tail,
                                 Spin right_tail, int max_sites)
    : window_(window), left_(left_tail), right_(right_tail) {
  if (window.lo > window.hi) throw std::invalid_argument("generator: empty window");
  if (window.size() > max_sites) {
    throw std::length_error("generator: window of " + std::to_string(window.size()) +
                            " sites exceeds the cap of " + std::to_string(max_sites));
  }
  sites_ = static_cast<int>(window.size());
  const std::uint32_t n_states = states();
  const int radius = spec.radius();
  flips_.assign(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(sites_), 0.0);
  exits_.assign(n_states, 0.0);
  for (std::uint32_t s = 0; s < n_states; ++s) {
    double exit = 0.0;
    for (int i = 0; i < sites_; ++i) {
      std::uint32_t code = 0;
      for (int j = -radius; j <= radius; ++j) {
        const int k = i + j;
        std::uint32_t bit;
        if (k < 0) {
          bit = left_tail;
        } else if (k >= sites_) {
          bit = right_tail;
        } else {
          bit = (s >> k) & 1u;
        }
        code |= bit << (j + radius);
      }
      const double r = spec.rate(code);
      flips_[static_cast<std::size_t>(s) * static_cast<std::size_t>(sites_) +
             static_cast<std::size_t>(i)] = r;
      exit += r;
    }
    exits_[s] = exit;
    max_exit_ = std::max(max_exit_, exit);
  }
}

double GeneratorMatrix::entry(std::uint32_t from, std::uint32_t to) const {
  if (from == to) return -exits_[from];
  const std::uint32_t diff = from ^ to;
  if (!std::has_single_bit(diff)) return 0.0;
  return flip_rate(from, std::countr_zero(diff));
}

std::uint32_t GeneratorMatrix::encode(const Configuration& config) const {
  std::uint32_t s = 0;
  for (int i = 0; i < sites_; ++i) {
    s |= std::uint32_t{config.value(window_.lo + i)} << i;
  }
  return s;
}

Configuration GeneratorMatrix::decode(std::uint32_t state) const {
  Configuration c(left_, window_, right_);
  for (int i = 0; i < sites_; ++i) {
    if ((state >> i) & 1u) c.set(window_.lo + i, 1);
  }
  return c;
}

GeneratorMatrix build_generator(const RateSpec& spec, const Window& window, Spin left_tail,
                                Spin right_tail, int max_sites) {
  return GeneratorMatrix(spec, window, left_tail, right_tail, max_sites);
}

std::vector<double> transient_distribution(const GeneratorMatrix& gen,
                                           const std::vector<double>& initial, double t,
                                           double tol) {
  if (initial.size() != gen.states()) {
    throw std::invalid_argument("transient_distribution: initial vector has the wrong size");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("transient_distribution: t must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("transient_distribution: tol must be > 0");
  const double q = gen.max_exit_rate();
  if (t == 0.0 || q == 0.0) return initial;

  const int n = gen.sites();
  const std::uint32_t n_states = gen.states();
  const double lambda = q * t;
  const double inv_q = 1.0 / q;
  const auto k_cap = static_cast<long>(lambda + 50.0 * std::sqrt(lambda) + 200.0);

  std::vector<double> result(n_states, 0.0);
  std::vector<double> term = initial;
  std::vector<double> next(n_states);
  double weight_sum = 0.0;
  for (long k = 0; k <= k_cap; ++k) {
    const double w = std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                              std::lgamma(static_cast<double>(k) + 1.0));
    if (w > 0.0) {
      for (std::uint32_t s = 0; s < n_states; ++s) result[s] += w * term[s];
    }
    weight_sum += w;
    if (1.0 - weight_sum < tol && static_cast<double>(k) >= lambda) break;

    // term <- term * (I + Q/q)
    for (std::uint32_t s = 0; s < n_states; ++s) next[s] = term[s] * (1.0 - gen.exit_rate(s) * inv_q);
    for (std::uint32_t s = 0; s < n_states; ++s) {
      const double mass = term[s];
      if (mass == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        const double r = gen.flip_rate(s, i);
        if (r != 0.0) next[s ^ (1u << i)] += mass * r * inv_q;
      }
    }
    term.swap(next);
  }
  return result;
}

std::vector<double> transient_distribution(const GeneratorMatrix& gen, std::uint32_t init,
                                           double t, double tol) {
  if (init >= gen.states()) throw std::out_of_range("transient_distribution: bad initial state");
  std::vector<double> p0(gen.states(), 0.0);
  p0[init] = 1.0;
  return transient_distribution(gen, p0, t, tol);
}

double SuffixDistribution::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

SuffixDistribution SuffixDistribution::from_counts(int m, const std::vector<std::uint64_t>& counts) {
  if (counts.size() != (std::size_t{1} << m)) {
    throw std::invalid_argument("from_counts: expected 2^m counts");
  }
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  SuffixDistribution d{m, std::vector<double>(counts.size(), 0.0)};
  if (n == 0) return d;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d.weights[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return d;
}

SuffixDistribution SuffixDistribution::point_mass(int m, std::uint32_t code) {
  SuffixDistribution d{m, std::vector<double>(std::size_t{1} << m, 0.0)};
  d.weights.at(code) = 1.0;
  return d;
}

SuffixDistribution SuffixDistribution::product(const std::vector<double>& p) {
  const int m = static_cast<int>(p.size());
  SuffixDistribution d{m, std::vector<double>(std::size_t{1} << m, 1.0)};
  for (std::uint32_t c = 0; c < d.weights.size(); ++c) {
    for (int i = 0; i < m; ++i) d.weights[c] *= ((c >> i) & 1u) ? p[i] : 1.0 - p[i];
  }
  return d;
}

SuffixDistribution suffix_marginal(const std::vector<double>& dist, const Window& window, Site z,
                                   int m) {
  if (m < 1) throw std::invalid_argument("suffix_marginal: m must be >= 1");
  if (z < window.lo || z + m - 1 > window.hi) {
    throw std::out_of_range("suffix_marginal: [" + std::to_string(z) + ", " +
                            std::to_string(z + m - 1) + "] is not inside the window");
  }
  if (dist.size() != (std::size_t{1} << window.size())) {
    throw std::invalid_argument("suffix_marginal: distribution size does not match the window");
  }
  const auto offset = static_cast<unsigned>(z - window.lo);
  const std::uint32_t mask = (1u << m) - 1;
  SuffixDistribution d{m, std::vector<double>(std::size_t{1} << m, 0.0)};
  for (std::uint32_t s = 0; s < dist.size(); ++s) d.weights[(s >> offset) & mask] += dist[s];
  return d;
}

int UpSet::size() const { return std::popcount(members); }

double UpSet::mass(const SuffixDistribution& d) const {
  double s = 0.0;
  for (std::uint32_t bits = members; bits != 0; bits &= bits - 1) {
    s += d.weights[static_cast<std::size_t>(std::countr_zero(bits))];
  }
  return s;
}

std::string UpSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::uint32_t c = 0; c < (1u << m); ++c) {
    if (!contains(c)) continue;
    if (!first) out += ',';
    first = false;
    for (int i = 0; i < m; ++i) out += ((c >> i) & 1u) ? '1' : '0';
  }
  return out + "}";
}

UpSet UpSet::closure(int m, std::uint32_t generators_mask) {
  const std::uint32_t n = 1u << m;
  UpSet u{m, 0};
  for (std::uint32_t q = 0; q < n; ++q) {
    for (std::uint32_t p = 0; p < n; ++p) {
      if (((generators_mask >> p) & 1u) && (p & q) == p) {
        u.members |= 1u << q;
        break;
      }
    }
  }
  return u;
}

std::vector<UpSet> enumerate_upsets(int m) {
  if (m < 1 || m > kMaxUpsetWidth) {
    throw std::invalid_argument("enumerate_upsets: m must be in [1, 5]");
  }
  const std::uint32_t n = 1u << m;
  // above[p]: mask of the patterns strictly above p.
  std::vector<std::uint64_t> above(n, 0);
  for (std::uint32_t p = 0; p < n; ++p) {
    for (std::uint32_t q = 0; q < n; ++q) {
      if (q != p && (p & q) == p) above[p] |= std::uint64_t{1} << q;
    }
  }
  // Breadth-first growth from the empty set: a pattern may join once
  // everything above it is already in.
  std::unordered_set<std::uint64_t> seen{0};
  std::deque<std::uint64_t> frontier{0};
  while (!frontier.empty()) {
    const std::uint64_t u = frontier.front();
    frontier.pop_front();
    for (std::uint32_t p = 0; p < n; ++p) {
      if ((u >> p) & 1u) continue;
      if ((above[p] & u) != above[p]) continue;
      const std::uint64_t next = u | (std::uint64_t{1} << p);
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  std::vector<UpSet> out;
  out.reserve(seen.size());
  for (std::uint64_t u : seen) out.push_back({m, static_cast<std::uint32_t>(u)});
  std::sort(out.begin(), out.end(), [](const UpSet& a, const UpSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.members < b.members;
  });
  return out;
}

const std::vector<UpSet>& upsets(int m) {
  static std::array<std::vector<UpSet>, kMaxUpsetWidth + 1> cache;
  static std::array<std::once_flag, kMaxUpsetWidth + 1> once;
  if (m < 1 || m > kMaxUpsetWidth) {
    throw std::invalid_argument("upsets: m must be in [1, 5]");
  }
  std::call_once(once[static_cast<std::size_t>(m)],
                 [m] { cache[static_cast<std::size_t>(m)] = enumerate_upsets(m); });
  return cache[static_cast<std::size_t>(m)];
}

DominanceVerdict stochastic_dominates(const SuffixDistribution& mu, const SuffixDistribution& nu,
                                      double tol) {
  if (mu.m != nu.m) throw std::invalid_argument("stochastic_dominates: width mismatch");
  DominanceVerdict v;
  bool first = true;
  for (const UpSet& u : upsets(mu.m)) {
    const double margin = u.mass(mu) - u.mass(nu);
    if (first || margin < v.margin) {
      v.margin = margin;
      v.worst = u;
      first = false;
    }
  }
  v.dominates = v.margin >= -tol;
  return v;
}

}  // namespace spinmono
