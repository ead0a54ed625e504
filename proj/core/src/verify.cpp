#include "spinmono/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "spinmono/parallel.hpp"
#include "spinmono/random.hpp"
#include "spinmono/stats.hpp"

namespace spinmono {

namespace {

// Stream tags keep the independent-mode batches disjoint from replica seeds.
constexpr std::uint64_t kIndependentTag = 0x696E646570656E64ull;

struct Counts {
  std::vector<std::uint64_t> v;

  Counts& operator+=(const Counts& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
  }
};

struct FirstHit {
  std::uint64_t replica = 0;
  Site site = 0;
};

struct CoupledTally {
  std::vector<std::uint64_t> order;
  std::vector<std::uint64_t> identity;
  std::vector<std::optional<FirstHit>> first;

  // Blocks are folded in replica order, so the earliest hit wins.
  CoupledTally& operator+=(const CoupledTally& o) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] += o.order[i];
      identity[i] += o.identity[i];
      if (!first[i] && o.first[i]) first[i] = o.first[i];
    }
    return *this;
  }
};

double event_rate_bound(const RateSpec& spec) {
  return spec.is_zero() ? 0.0 : uniformization_bound(spec);
}

Configuration run_replica(const RateSpec& spec, const Configuration& init, double t,
                          double c_max, std::uint64_t replica_seed, Backend backend) {
  if (backend == Backend::gillespie) return simulate_gillespie(spec, init, t, replica_seed);
  return evolve_uniformized(spec, init, sample_events(c_max, init.window(), t, replica_seed));
}

RunOptions epsilon_only(double epsilon) {
  RunOptions o;
  o.epsilon = epsilon;
  return o;
}

Window simulation_window(const RateSpec& spec, double t, Site z_min, Site z_max,
                         const RunOptions& options) {
  const WindowPlan plan = plan_window(spec, t, z_min, z_max, options.epsilon);
  if (options.margin) {
    if (*options.margin < 0) throw std::invalid_argument("margin must be >= 0");
    return {z_min - *options.margin, z_max + *options.margin};
  }
  return plan.window;
}

/// Pointwise minimum of the initial configuration and its left translate.
Configuration dominated_partner(const InitialCondition& init) {
  const Configuration base = make_initial(init);
  const Configuration left = base.shifted(1);
  const Window w = hull(base.window(), left.window());
  Configuration out(std::min(base.left_tail(), left.left_tail()), w,
                    std::min(base.right_tail(), left.right_tail()));
  for (Site x = w.lo; x <= w.hi; ++x) out.set(x, std::min(base.value(x), left.value(x)));
  return out;
}

void validate_range(Site z_min, Site z_max, int m, double t) {
  if (z_min > z_max) throw std::invalid_argument("zRange must satisfy zMin <= zMax");
  if (m < 1 || m > kMaxUpsetWidth) throw std::invalid_argument("m must be in [1, 5]");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be >= 0");
}

Verdict combine(const std::vector<ZVerdict>& per_z) {
  bool inconclusive = false;
  for (const auto& v : per_z) {
    if (v.verdict == Verdict::fail) return Verdict::fail;
    if (v.verdict == Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

MonotonicityReport verify_coupled(const RateSpec& spec, const InitialCondition& init, double t,
                                  Site z_min, Site z_max, const VerifyOptions& opt,
                                  MonotonicityReport report) {
  if (!check_attractive(spec).attractive) {
    throw std::invalid_argument("coupled mode requires an attractive rate table");
  }
  const double c_max = event_rate_bound(spec);
  if (c_max > 0.0 && !check_coupling_monotone(spec, c_max).monotone) {
    throw std::invalid_argument("coupled mode: flip rule is not monotone");
  }
  const Window w = simulation_window(spec, t, z_min, z_max + opt.m - 1, epsilon_only(opt.epsilon));
  report.window = w;

  const Configuration upper = make_initial(init, w);
  const Configuration partner_full = dominated_partner(init);
  const Configuration lower = partner_full.restricted(w);
  // The partner is the left translate of `source`; run source one site to
  // the right on the correspondingly shifted stream.
  const Configuration source = partner_full.shifted(-1).restricted(w.shifted(1));
  const std::vector<Configuration> inits{upper, lower};

  const auto levels = static_cast<std::size_t>(z_max - z_min + 1);
  CoupledTally zero{std::vector<std::uint64_t>(levels, 0), std::vector<std::uint64_t>(levels, 0),
                    std::vector<std::optional<FirstHit>>(levels)};
  const CoupledTally tally = reduce_replicas(
      opt.replicas, resolve_workers(opt.workers), zero,
      [&](std::uint64_t r, CoupledTally& acc) {
        const EventStream events = sample_events(c_max, w, t, derive_seed(opt.seed, r));
        const auto outs = evolve_shared(spec, inits, events);
        const Configuration translated =
            evolve_uniformized(spec, source, events.shifted(-1)).shifted(1);
        for (std::size_t i = 0; i < levels; ++i) {
          const Site z = z_min + static_cast<Site>(i);
          bool order_bad = false;
          bool identity_bad = false;
          std::optional<Site> site;
          for (Site x = z; x < z + opt.m; ++x) {
            const bool o = outs[1].value(x) > outs[0].value(x);
            const bool d = translated.value(x) != outs[1].value(x);
            if ((o || d) && !site) site = x;
            order_bad |= o;
            identity_bad |= d;
          }
          acc.order[i] += order_bad;
          acc.identity[i] += identity_bad;
          if (site && !acc.first[i]) acc.first[i] = FirstHit{r, *site};
        }
      });

  for (std::size_t i = 0; i < levels; ++i) {
    ZVerdict v;
    v.z = z_min + static_cast<Site>(i);
    v.order_violations = tally.order[i];
    v.identity_violations = tally.identity[i];
    const std::uint64_t failed = tally.order[i] + tally.identity[i];
    v.margin = failed == 0 ? 0.0 : -static_cast<double>(failed);
    if (tally.first[i]) {
      v.first_site = tally.first[i]->site;
      v.first_replica = tally.first[i]->replica;
      v.witness = "site=" + std::to_string(tally.first[i]->site) +
                  ";replica=" + std::to_string(tally.first[i]->replica);
    }
    v.verdict = (tally.order[i] == 0 && tally.identity[i] == 0) ? Verdict::pass : Verdict::fail;
    report.per_z.push_back(std::move(v));
  }
  report.overall = combine(report.per_z);
  return report;
}

MonotonicityReport verify_exact(const RateSpec& spec, const InitialCondition& init, double t,
                                Site z_min, Site z_max, const VerifyOptions& opt,
                                MonotonicityReport report) {
  const Window w = opt.exact_window.value_or(default_exact_window(z_min, z_max, opt.m));
  if (z_min < w.lo || z_max + opt.m > w.hi) {
    throw std::invalid_argument("exact window [" + std::to_string(w.lo) + ", " +
                                std::to_string(w.hi) + "] does not hold [zMin, zMax + m]");
  }
  report.window = w;
  report.tolerance = opt.tol + opt.epsilon;
  const auto law = exact_law(spec, init, w, t);
  const auto law_shifted = exact_law(spec, init, w.shifted(1), t);
  for (Site z = z_min; z <= z_max; ++z) {
    const auto here = suffix_marginal(law, w, z, opt.m);
    const auto next = suffix_marginal(law, w, z + 1, opt.m);
    const auto next_shifted = suffix_marginal(law_shifted, w.shifted(1), z + 1, opt.m);
    const DominanceVerdict d = stochastic_dominates(here, next, report.tolerance);
    ZVerdict v;
    v.z = z;
    v.margin = d.margin;
    v.witness = d.dominates ? "" : d.worst.to_string();
    v.verdict = d.dominates ? Verdict::pass : Verdict::fail;
    v.shifted_margin = stochastic_dominates(here, next_shifted, opt.tol).margin;
    report.per_z.push_back(std::move(v));
  }
  report.overall = combine(report.per_z);
  return report;
}

std::vector<UpSet> independent_battery(int m) {
  std::vector<UpSet> battery;
  if (m <= 4) {
    for (const UpSet& u : upsets(m)) {
      if (u.size() > 0 && u.size() < (1 << m)) battery.push_back(u);
    }
    return battery;
  }
  battery.push_back(UpSet::closure(m, 1u << 1));  // site z occupied
  for (int k = 1; k <= m; ++k) {
    UpSet u{m, 0};
    for (std::uint32_t c = 0; c < (1u << m); ++c) {
      if (std::popcount(c) >= k) u.members |= 1u << c;
    }
    battery.push_back(u);
  }
  return battery;
}

MonotonicityReport verify_independent(const RateSpec& spec, const InitialCondition& init,
                                      double t, Site z_min, Site z_max, const VerifyOptions& opt,
                                      MonotonicityReport report) {
  const Window w = simulation_window(spec, t, z_min, z_max + opt.m, epsilon_only(opt.epsilon));
  report.window = w;
  const Configuration start = make_initial(init, w);
  const double c_max = event_rate_bound(spec);
  const unsigned workers = resolve_workers(opt.workers);
  const std::size_t codes = std::size_t{1} << opt.m;

  // One independent batch per z in [z_min, z_max + 1].
  std::vector<SuffixDistribution> laws;
  for (Site z = z_min; z <= z_max + 1; ++z) {
    const std::uint64_t batch_seed =
        derive_seed(derive_seed(opt.seed, kIndependentTag), static_cast<std::uint64_t>(z - z_min));
    const Counts counts = reduce_replicas(
        opt.replicas, workers, Counts{std::vector<std::uint64_t>(codes, 0)},
        [&](std::uint64_t r, Counts& acc) {
          const Configuration end = run_replica(spec, start, t, c_max,
                                                derive_seed(batch_seed, r), Backend::uniformized);
          ++acc.v[suffix(end, z, static_cast<std::size_t>(opt.m)).code()];
        });
    laws.push_back(SuffixDistribution::from_counts(opt.m, counts.v));
  }

  const auto battery = independent_battery(opt.m);
  for (Site z = z_min; z <= z_max; ++z) {
    const auto& here = laws[static_cast<std::size_t>(z - z_min)];
    const auto& next = laws[static_cast<std::size_t>(z - z_min + 1)];
    ZVerdict v;
    v.z = z;
    bool increase = false;
    bool decrease = false;
    bool first = true;
    for (const UpSet& u : battery) {
      UpSetComparison c{u, u.mass(here), u.mass(next), 0.0};
      c.radius = two_proportion_radius(c.p_z, opt.replicas, c.p_next, opt.replicas);
      const double diff = c.p_next - c.p_z;
      if (diff > c.radius) increase = true;
      if (-diff > c.radius) decrease = true;
      if (first || c.p_z - c.p_next < v.margin) {
        v.margin = c.p_z - c.p_next;
        v.witness = u.to_string();
        first = false;
      }
      v.comparisons.push_back(c);
    }
    if (increase) {
      v.verdict = Verdict::fail;
    } else if (decrease) {
      v.verdict = Verdict::pass;
    } else {
      v.verdict = Verdict::inconclusive;
    }
    if (v.verdict == Verdict::pass) v.witness.clear();
    report.per_z.push_back(std::move(v));
  }
  report.overall = combine(report.per_z);
  return report;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::coupled: return "coupled";
    case Mode::exact: return "exact";
    case Mode::independent: return "independent";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Backend b) {
  return b == Backend::gillespie ? "gillespie" : "uniformized";
}

Mode parse_mode(std::string_view s) {
  if (s == "coupled") return Mode::coupled;
  if (s == "exact") return Mode::exact;
  if (s == "independent") return Mode::independent;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

Backend parse_backend(std::string_view s) {
  if (s == "uniformized") return Backend::uniformized;
  if (s == "gillespie") return Backend::gillespie;
  throw std::invalid_argument("unknown backend '" + std::string(s) + "'");
}

OccupancyProfile estimate_occupation_profile(const RateSpec& spec, const InitialCondition& init,
                                             double t, Site z_min, Site z_max,
                                             std::uint64_t replicas, std::uint64_t seed,
                                             const RunOptions& options) {
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  if (z_min > z_max) throw std::invalid_argument("zRange must satisfy zMin <= zMax");
  OccupancyProfile profile;
  profile.window = simulation_window(spec, t, z_min, z_max, options);
  profile.margin = z_min - profile.window.lo;
  const Configuration start = make_initial(init, profile.window);
  const double c_max = event_rate_bound(spec);
  const auto levels = static_cast<std::size_t>(z_max - z_min + 1);

  const Counts counts = reduce_replicas(
      replicas, resolve_workers(options.workers), Counts{std::vector<std::uint64_t>(levels, 0)},
      [&](std::uint64_t r, Counts& acc) {
        const Configuration end =
            run_replica(spec, start, t, c_max, derive_seed(seed, r), options.backend);
        for (std::size_t i = 0; i < levels; ++i) acc.v[i] += end.value(z_min + static_cast<Site>(i));
      });

  for (std::size_t i = 0; i < levels; ++i) {
    const Interval ci = wilson_interval(counts.v[i], replicas);
    profile.rows.push_back({z_min + static_cast<Site>(i),
                            static_cast<double>(counts.v[i]) / static_cast<double>(replicas),
                            ci.low, ci.high, replicas, counts.v[i]});
  }
  return profile;
}

MonotonicityReport verify_monotonicity(const RateSpec& spec, const InitialCondition& init,
                                       double t, Site z_min, Site z_max,
                                       const VerifyOptions& options) {
  validate_range(z_min, z_max, options.m, t);
  if (options.mode != Mode::exact && options.replicas < 1) {
    throw std::invalid_argument("replicas must be >= 1");
  }
  MonotonicityReport report;
  report.mode = options.mode;
  report.init = init.describe();
  if (init.kind == InitialKind::interval) report.n_used = init.n;
  report.t = t;
  report.z_min = z_min;
  report.z_max = z_max;
  report.m = options.m;
  report.seed = options.seed;
  report.tolerance = options.tol;
  switch (options.mode) {
    case Mode::coupled:
      report.evidence = "pathwise coupling";
      report.replicas = options.replicas;
      return verify_coupled(spec, init, t, z_min, z_max, options, std::move(report));
    case Mode::exact:
      report.evidence = "exact truncated law";
      return verify_exact(spec, init, t, z_min, z_max, options, std::move(report));
    case Mode::independent:
      report.evidence = "independent Monte Carlo";
      report.replicas = options.replicas;
      return verify_independent(spec, init, t, z_min, z_max, options, std::move(report));
  }
  throw std::invalid_argument("unknown mode");
}

MonotonicityReport verify_theorem(const RateSpec& spec, double t, Site z_min, Site z_max,
                                  const VerifyOptions& options) {
  if (z_min < 0) throw std::invalid_argument("verify_theorem: zMin must be >= 0");
  return verify_monotonicity(spec, InitialCondition::step(), t, z_min, z_max, options);
}

MonotonicityReport verify_remark2(const RateSpec& spec, Site n, double t, Site z_min, Site z_max,
                                  const VerifyOptions& options) {
  if (n < 0) throw std::invalid_argument("verify_remark2: N must be >= 0");
  return verify_monotonicity(spec, InitialCondition::interval(n), t, z_min, z_max, options);
}

Remark2Sweep verify_remark2_sweep(const RateSpec& spec, const std::vector<Site>& ns, double t,
                                  Site z_min, Site z_max, const VerifyOptions& options) {
  Remark2Sweep sweep;
  for (Site n : ns) {
    sweep.reports.push_back(verify_remark2(spec, n, t, z_min, z_max, options));
    if (sweep.reports.back().overall == Verdict::pass &&
        (!sweep.smallest_passing_n || n < *sweep.smallest_passing_n)) {
      sweep.smallest_passing_n = n;
    }
  }
  return sweep;
}

SelfCheckReport window_self_check(const RateSpec& spec, const InitialCondition& init, double t,
                                  Site z_min, Site z_max, std::uint64_t replicas,
                                  std::uint64_t seed, const RunOptions& options) {
  SelfCheckReport report;
  report.replicas = replicas;
  const Site planned =
      options.margin.value_or(plan_window(spec, t, z_min, z_max, options.epsilon).margin);
  report.margin = planned;
  report.doubled_margin = 2 * planned;

  RunOptions base = options;
  base.margin = report.margin;
  RunOptions doubled = options;
  doubled.margin = report.doubled_margin;
  const auto a = estimate_occupation_profile(spec, init, t, z_min, z_max, replicas, seed, base);
  const auto b = estimate_occupation_profile(spec, init, t, z_min, z_max, replicas, seed, doubled);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    SelfCheckRow row;
    row.z = a.rows[i].z;
    row.p_base = a.rows[i].p_hat;
    row.p_doubled = b.rows[i].p_hat;
    row.diff = row.p_doubled - row.p_base;
    const double s1 = proportion_se(row.p_base, replicas);
    const double s2 = proportion_se(row.p_doubled, replicas);
    row.combined_se = std::sqrt(s1 * s1 + s2 * s2);
    row.within = std::abs(row.diff) <= 3.0 * row.combined_se;
    if (std::abs(row.diff) > report.max_abs_diff || i == 0) {
      report.max_abs_diff = std::abs(row.diff);
      report.worst_z = row.z;
    }
    report.pass = report.pass && row.within;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<double> exact_law(const RateSpec& spec, const InitialCondition& init,
                              const Window& window, double t, double tol) {
  const Configuration start = make_initial(init, window);
  const GeneratorMatrix gen =
      build_generator(spec, window, start.left_tail(), start.right_tail());
  return transient_distribution(gen, gen.encode(start), t, tol);
}

std::vector<double> exact_occupation_profile(const RateSpec& spec, const InitialCondition& init,
                                             const Window& window, double t, Site z_min,
                                             Site z_max, double tol) {
  const auto law = exact_law(spec, init, window, t, tol);
  std::vector<double> p;
  for (Site z = z_min; z <= z_max; ++z) p.push_back(suffix_marginal(law, window, z, 1).weights[1]);
  return p;
}

Window default_exact_window(Site z_min, Site z_max, int m) {
  const Site hi = z_max + m;
  return {std::min(z_min - 1, hi - 11), hi};
}

}  // namespace spinmono
