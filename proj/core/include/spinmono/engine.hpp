#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spinmono/lattice.hpp"
#include "spinmono/rates.hpp"

namespace spinmono {

/// One uniformized clock ring: at `time` the spin at `site` is resampled
/// using the uniform `mark`.
struct Event {
  double time = 0.0;
  Site site = 0;
  double mark = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Per-site Poisson(c_max) clocks with uniform marks on window x (0, horizon],
/// merged into time order (ties by site). This is the shared randomness for
/// couplings.
struct EventStream {
  Window window;
  double horizon = 0.0;
  double c_max = 0.0;
  std::uint64_t seed = 0;
  std::vector<Event> events;

  /// Stream for a configuration shifted by k (see Configuration::shifted):
  /// every event moves from x to x - k.
  EventStream shifted(Site k) const;
};

struct WindowPlan {
  Window window;
  Site margin = 0;
  double epsilon = 0.0;
};

/// Margin M = R * ceil(e * c_max * t + ln(1/epsilon)) + R around [z_min, z_max].
/// A zero horizon or an event-free model needs only M = R. Throws
/// std::invalid_argument for t < 0, z_min > z_max or epsilon outside (0, 1).
WindowPlan plan_window(const RateSpec& spec, double t, Site z_min, Site z_max, double epsilon);

/// Deterministic in (seed, window, t, c_max). The clock of site x is drawn
/// from derive_seed(seed, x) alone, so streams on overlapping windows agree
/// on the shared sites.
EventStream sample_events(const RateSpec& spec, const WindowPlan& plan, double t,
                          std::uint64_t seed);
EventStream sample_events(double c_max, const Window& window, double t, std::uint64_t seed);

/// Applies the uniformized flip rule to every event in order: the spin at x
/// becomes 1 iff mark < p1, where p1 = rate/c_max on an empty site and
/// 1 - rate/c_max on an occupied one. Throws std::invalid_argument when the
/// windows differ or the stream's c_max is below max birth + max death.
Configuration evolve_uniformized(const RateSpec& spec, const Configuration& init,
                                 const EventStream& events);

/// Gillespie direct method on init's window with frozen tails. Site rates
/// live in a sum tree; a flip refreshes only the 2R+1 affected leaves.
Configuration simulate_gillespie(const RateSpec& spec, const Configuration& init, double t,
                                 std::uint64_t seed);

/// Evolves every initial condition with the same events. No order checks.
std::vector<Configuration> evolve_shared(const RateSpec& spec,
                                         std::span<const Configuration> inits,
                                         const EventStream& events);

/// Monotone coupling of pointwise-decreasing initial conditions.
///
/// Requires an attractive spec whose flip rule is monotone at the stream's
/// c_max, and inits[i] >= inits[i+1] pointwise (std::invalid_argument
/// otherwise). The outputs are checked to be ordered the same way before
/// returning; a failure there throws std::logic_error and means a bug.
std::vector<Configuration> couple_translates(const RateSpec& spec,
                                             std::span<const Configuration> inits,
                                             const EventStream& events);

}  // namespace spinmono
