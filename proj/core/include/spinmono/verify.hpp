#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinmono/engine.hpp"
#include "spinmono/exact.hpp"
#include "spinmono/lattice.hpp"
#include "spinmono/rates.hpp"

namespace spinmono {

enum class Mode { coupled, exact, independent };
enum class Verdict { pass, fail, inconclusive };
enum class Backend { uniformized, gillespie };

std::string to_string(Mode m);
std::string to_string(Verdict v);
std::string to_string(Backend b);
Mode parse_mode(std::string_view s);
Backend parse_backend(std::string_view s);

/// Knobs shared by the Monte Carlo estimators.
struct RunOptions {
  double epsilon = 1e-3;             // truncation budget for plan_window
  std::optional<Site> margin;        // overrides the planned margin
  Backend backend = Backend::uniformized;
  unsigned workers = 0;              // 0: resolve_workers()
};

struct ProfileRow {
  Site z = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n = 0;
  std::uint64_t occupied = 0;
};

struct OccupancyProfile {
  Window window;  // simulation window used
  Site margin = 0;
  std::vector<ProfileRow> rows;
};

/// Per-site occupation frequencies over `replicas` runs, with 99% Wilson
/// intervals. Replica r uses derive_seed(seed, r).
OccupancyProfile estimate_occupation_profile(const RateSpec& spec, const InitialCondition& init,
                                             double t, Site z_min, Site z_max,
                                             std::uint64_t replicas, std::uint64_t seed,
                                             const RunOptions& options = {});

/// Probability that up-set U holds at z and at z + 1 (independent mode).
struct UpSetComparison {
  UpSet upset;
  double p_z = 0.0;
  double p_next = 0.0;
  double radius = 0.0;
};

struct ZVerdict {
  Site z = 0;
  Verdict verdict = Verdict::pass;
  /// Human-readable witness: a violating site/replica, an up-set, or empty.
  std::string witness;
  /// Exact/independent: min over up-sets of P_z(U) - P_{z+1}(U).
  /// Coupled: minus the number of failed checks (0 on pass).
  double margin = 0.0;

  // coupled
  std::uint64_t order_violations = 0;
  std::uint64_t identity_violations = 0;
  std::optional<Site> first_site;
  std::optional<std::uint64_t> first_replica;

  // exact: margin of law(z on W) over law(z+1 on W shifted by one), which
  // is an exact domination for the step initial condition.
  std::optional<double> shifted_margin;

  // independent
  std::vector<UpSetComparison> comparisons;
};

struct MonotonicityReport {
  Mode mode = Mode::coupled;
  std::string evidence;
  std::string init;
  std::optional<Site> n_used;
  double t = 0.0;
  Site z_min = 0;
  Site z_max = 0;
  int m = 3;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  Window window;
  double tolerance = 0.0;
  std::vector<ZVerdict> per_z;
  Verdict overall = Verdict::pass;
};

struct VerifyOptions {
  Mode mode = Mode::coupled;
  int m = 3;
  std::uint64_t replicas = 1000;
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
  /// Exact mode window; default ends at z_max + m and spans 12 sites when
  /// the z range allows it.
  std::optional<Window> exact_window;
  double tol = kDefaultDominanceTol;
  unsigned workers = 0;
};

/// Checks that the suffix laws at z = z_min..z_max started from the unit
/// step are decreasing in z.
///
///  - coupled: per replica, the process from init and from its dominated
///    partner min(init, init shifted left by one) run on one event stream;
///    every suffix must stay ordered, and the partner's path must equal
///    the shifted path of the partner's right translate run on the shifted
///    stream. Requires an attractive spec (std::invalid_argument otherwise).
///  - exact: exact truncated law; law(z) must dominate law(z+1) within
///    tol + epsilon.
///  - independent: separate replica batches per z; fails on a significant
///    increase of any up-set probability from z to z+1.
MonotonicityReport verify_theorem(const RateSpec& spec, double t, Site z_min, Site z_max,
                                  const VerifyOptions& options);

/// verify_theorem for an arbitrary initial condition.
MonotonicityReport verify_monotonicity(const RateSpec& spec, const InitialCondition& init,
                                       double t, Site z_min, Site z_max,
                                       const VerifyOptions& options);

/// Interval initial condition 1 on [-N, 0].
MonotonicityReport verify_remark2(const RateSpec& spec, Site n, double t, Site z_min, Site z_max,
                                  const VerifyOptions& options);

struct Remark2Sweep {
  std::vector<MonotonicityReport> reports;  // one per N, in the given order
  /// Smallest tested N whose report passed.
  std::optional<Site> smallest_passing_n;
};

Remark2Sweep verify_remark2_sweep(const RateSpec& spec, const std::vector<Site>& ns, double t,
                                  Site z_min, Site z_max, const VerifyOptions& options);

struct SelfCheckRow {
  Site z = 0;
  double p_base = 0.0;
  double p_doubled = 0.0;
  double diff = 0.0;
  double combined_se = 0.0;
  bool within = true;
};

struct SelfCheckReport {
  Site margin = 0;
  Site doubled_margin = 0;
  std::uint64_t replicas = 0;
  double max_abs_diff = 0.0;
  Site worst_z = 0;
  bool pass = true;
  std::vector<SelfCheckRow> rows;
};

/// Profiles at the planned margin M and at 2M with common seeds; passes when
/// every per-site difference is within 3 combined standard errors.
SelfCheckReport window_self_check(const RateSpec& spec, const InitialCondition& init, double t,
                                  Site z_min, Site z_max, std::uint64_t replicas,
                                  std::uint64_t seed, const RunOptions& options = {});

/// Exact law of the truncated process on `window` at time t.
std::vector<double> exact_law(const RateSpec& spec, const InitialCondition& init,
                              const Window& window, double t, double tol = 1e-12);

/// P(eta_t(z) = 1) for z in [z_min, z_max] from exact_law.
std::vector<double> exact_occupation_profile(const RateSpec& spec, const InitialCondition& init,
                                             const Window& window, double t, Site z_min,
                                             Site z_max, double tol = 1e-12);

/// Default exact-mode window for a z range and width.
Window default_exact_window(Site z_min, Site z_max, int m);

}  // namespace spinmono
