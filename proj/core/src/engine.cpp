#include "spinmono/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinmono/random.hpp"

namespace spinmono {

namespace {

// Complete binary sum tree over site rates. Parents are recomputed from
// their children on update, so the total never accumulates drift.
class RateTree {
 public:
  explicit RateTree(std::size_t n) : leaves_(std::bit_ceil(std::max<std::size_t>(n, 1))) {
    nodes_.assign(2 * leaves_, 0.0);
  }

  void set(std::size_t i, double rate) {
    std::size_t k = i + leaves_;
    nodes_[k] = rate;
    for (k >>= 1; k >= 1; k >>= 1) nodes_[k] = nodes_[2 * k] + nodes_[2 * k + 1];
  }

  double total() const { return nodes_[1]; }
  double leaf(std::size_t i) const { return nodes_[i + leaves_]; }

  /// Leaf i with prefix(i) <= target < prefix(i+1), skipping zero leaves.
  std::size_t find(double target) const {
    std::size_t k = 1;
    while (k < leaves_) {
      const double left = nodes_[2 * k];
      if (target < left || nodes_[2 * k + 1] == 0.0) {
        k = 2 * k;
      } else {
        target -= left;
        k = 2 * k + 1;
      }
    }
    return k - leaves_;
  }

 private:
  std::size_t leaves_;
  std::vector<double> nodes_;
};

void require_uniformizable(const RateSpec& spec, double c_max) {
  if (!(c_max > 0.0) || c_max < spec.max_birth() + spec.max_death()) {
    throw std::invalid_argument("event stream c_max is below max birth + max death");
  }
}

void apply_events(const RateSpec& spec, Configuration& state, const EventStream& events) {
  const int radius = spec.radius();
  const std::uint32_t center = spec.center_mask();
  for (const Event& e : events.events) {
    const std::uint32_t code = state.pattern_code(e.site, radius);
    const bool occupied = code & center;
    const bool next = e.mark < occupation_probability(spec, code, events.c_max);
    if (next != occupied) state.toggle(e.site);
  }
}

}  // namespace

EventStream EventStream::shifted(Site k) const {
  EventStream out = *this;
  out.window = window.shifted(-k);
  for (Event& e : out.events) e.site -= k;
  return out;
}

WindowPlan plan_window(const RateSpec& spec, double t, Site z_min, Site z_max, double epsilon) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("horizon must be >= 0");
  if (z_min > z_max) throw std::invalid_argument("plan_window: z_min > z_max");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("plan_window: epsilon must lie in (0, 1)");
  }
  const Site radius = spec.radius();
  Site margin = radius;
  if (t > 0.0 && !spec.is_zero()) {
    const double c_max = uniformization_bound(spec);
    const double hops = std::ceil(std::numbers::e * c_max * t + std::log(1.0 / epsilon));
    margin = radius * static_cast<Site>(hops) + radius;
  }
  return {{z_min - margin, z_max + margin}, margin, epsilon};
}

EventStream sample_events(double c_max, const Window& window, double t, std::uint64_t seed) {
  if (!(t >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  EventStream stream{window, t, c_max, seed, {}};
  if (t == 0.0 || c_max == 0.0) return stream;
  stream.events.reserve(static_cast<std::size_t>(c_max * t * static_cast<double>(window.size()) * 1.1) + 16);
  for (Site x = window.lo; x <= window.hi; ++x) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(x)));
    for (double u = rng.exponential(c_max); u <= t; u += rng.exponential(c_max)) {
      stream.events.push_back({u, x, rng.uniform()});
    }
  }
  std::sort(stream.events.begin(), stream.events.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.site < b.site);
  });
  return stream;
}

EventStream sample_events(const RateSpec& spec, const WindowPlan& plan, double t,
                          std::uint64_t seed) {
  const double c_max = spec.is_zero() ? 0.0 : uniformization_bound(spec);
  return sample_events(c_max, plan.window, t, seed);
}

Configuration evolve_uniformized(const RateSpec& spec, const Configuration& init,
                                 const EventStream& events) {
  if (!(init.window() == events.window)) {
    throw std::invalid_argument("evolve_uniformized: configuration and event windows differ");
  }
  Configuration state = init;
  if (events.events.empty()) return state;
  require_uniformizable(spec, events.c_max);
  apply_events(spec, state, events);
  return state;
}

Configuration simulate_gillespie(const RateSpec& spec, const Configuration& init, double t,
                                 std::uint64_t seed) {
  if (!(t >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  Configuration state = init;
  const Window w = init.window();
  const int radius = spec.radius();
  const auto n = static_cast<std::size_t>(w.size());
  RateTree tree(n);
  for (std::size_t i = 0; i < n; ++i) {
    tree.set(i, spec.rate(state.pattern_code(w.lo + static_cast<Site>(i), radius)));
  }
  SplitMix64 rng(derive_seed(seed, 0x67696C6C65737069ull));
  double now = 0.0;
  while (true) {
    const double total = tree.total();
    if (total <= 0.0) break;
    now += rng.exponential(total);
    if (now > t) break;
    const std::size_t i = std::min(tree.find(rng.uniform() * total), n - 1);
    const Site x = w.lo + static_cast<Site>(i);
    state.toggle(x);
    const Site from = std::max(w.lo, x - radius);
    const Site to = std::min(w.hi, x + radius);
    for (Site y = from; y <= to; ++y) {
      tree.set(static_cast<std::size_t>(y - w.lo), spec.rate(state.pattern_code(y, radius)));
    }
  }
  return state;
}

std::vector<Configuration> evolve_shared(const RateSpec& spec,
                                         std::span<const Configuration> inits,
                                         const EventStream& events) {
  std::vector<Configuration> out;
  out.reserve(inits.size());
  for (const Configuration& c : inits) out.push_back(evolve_uniformized(spec, c, events));
  return out;
}

std::vector<Configuration> couple_translates(const RateSpec& spec,
                                             std::span<const Configuration> inits,
                                             const EventStream& events) {
  if (!check_attractive(spec).attractive) {
    throw std::invalid_argument("couple_translates: rate table is not attractive");
  }
  if (!events.events.empty() && !check_coupling_monotone(spec, events.c_max).monotone) {
    throw std::invalid_argument("couple_translates: flip rule is not monotone at this c_max");
  }
  for (std::size_t i = 1; i < inits.size(); ++i) {
    if (!dominates_pointwise(inits[i - 1], inits[i])) {
      throw std::invalid_argument("couple_translates: initial conditions are not decreasing");
    }
  }
  auto out = evolve_shared(spec, inits, events);
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (auto site = first_order_violation(out[i - 1], out[i])) {
      throw std::logic_error("couple_translates: coupling order broken at site " +
                             std::to_string(*site));
    }
  }
  return out;
}

}  // namespace spinmono
