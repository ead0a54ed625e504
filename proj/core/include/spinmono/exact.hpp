#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinmono/lattice.hpp"
#include "spinmono/rates.hpp"

namespace spinmono {

inline constexpr int kDefaultMaxExactSites = 14;
inline constexpr int kMaxUpsetWidth = 5;
inline constexpr double kDefaultDominanceTol = 1e-9;

/// Generator of the spin system truncated to a window with frozen tails.
///
/// States are integers with bit i = spin at window.lo + i. The only
/// off-diagonal entries are single flips, so the matrix is kept as the
/// n x 2^n table of flip rates; entry() materializes any element.
class GeneratorMatrix {
 public:
  /// Throws std::length_error when the window has more than `max_sites` sites.
  GeneratorMatrix(const RateSpec& spec, Window window, Spin left_tail, Spin right_tail,
                  int max_sites = kDefaultMaxExactSites);

  int sites() const { return sites_; }
  std::uint32_t states() const { return std::uint32_t{1} << sites_; }
  const Window& window() const { return window_; }
  Spin left_tail() const { return left_; }
  Spin right_tail() const { return right_; }

  /// Rate of flipping site window.lo + i in `state`.
  double flip_rate(std::uint32_t state, int i) const {
    return flips_[static_cast<std::size_t>(state) * static_cast<std::size_t>(sites_) +
                  static_cast<std::size_t>(i)];
  }
  double exit_rate(std::uint32_t state) const { return exits_[state]; }
  double max_exit_rate() const { return max_exit_; }

  /// Q(from, to). Diagonal entries are minus the exit rate.
  double entry(std::uint32_t from, std::uint32_t to) const;

  std::uint32_t encode(const Configuration& config) const;
  Configuration decode(std::uint32_t state) const;

 private:
  Window window_;
  Spin left_;
  Spin right_;
  int sites_;
  std::vector<double> flips_;
  std::vector<double> exits_;
  double max_exit_ = 0.0;
};

GeneratorMatrix build_generator(const RateSpec& spec, const Window& window, Spin left_tail,
                                Spin right_tail, int max_sites = kDefaultMaxExactSites);

/// exp(tQ) applied to `initial` by the uniformization series. The series is
/// cut once the Poisson tail mass left out drops below `tol`, so entries are
/// non-negative and the total mass is within tol of the initial mass.
std::vector<double> transient_distribution(const GeneratorMatrix& gen,
                                           const std::vector<double>& initial, double t,
                                           double tol);

/// Same, from a point mass.
std::vector<double> transient_distribution(const GeneratorMatrix& gen, std::uint32_t init,
                                           double t, double tol);

/// Law of (eta(z), ..., eta(z+m-1)); weights indexed by code, bit i = site z+i.
struct SuffixDistribution {
  int m = 0;
  std::vector<double> weights;

  double total() const;
  /// Empirical law from pattern counts.
  static SuffixDistribution from_counts(int m, const std::vector<std::uint64_t>& counts);
  static SuffixDistribution point_mass(int m, std::uint32_t code);
  /// Independent Bernoulli(p_i) coordinates.
  static SuffixDistribution product(const std::vector<double>& p);
};

/// Marginal of a full distribution over the window onto [z, z+m). Throws
/// std::out_of_range when the suffix leaves the window.
SuffixDistribution suffix_marginal(const std::vector<double>& dist, const Window& window,
                                   Site z, int m);

/// Upward-closed subset of {0,1}^m; bit c of `members` marks pattern code c.
struct UpSet {
  int m = 0;
  std::uint32_t members = 0;

  bool contains(std::uint32_t code) const { return (members >> code) & 1u; }
  int size() const;
  double mass(const SuffixDistribution& d) const;
  /// Members as bit strings, e.g. "{01,10,11}" (site z first).
  std::string to_string() const;
  /// Smallest up-set containing every listed pattern.
  static UpSet closure(int m, std::uint32_t generators_mask);

  friend bool operator==(const UpSet&, const UpSet&) = default;
};

/// Every up-set of {0,1}^m, ordered by (size, members). Throws
/// std::invalid_argument for m < 1 or m > 5.
std::vector<UpSet> enumerate_upsets(int m);

/// Cached copy of enumerate_upsets(m).
const std::vector<UpSet>& upsets(int m);

struct DominanceVerdict {
  bool dominates = true;
  /// min over up-sets U of mu(U) - nu(U); >= -tol iff dominates.
  double margin = 0.0;
  /// Up-set attaining the margin (first in enumeration order on ties).
  UpSet worst;
};

/// mu >=_st nu on {0,1}^m: mu(U) >= nu(U) - tol for every up-set U.
/// Throws std::invalid_argument on a width mismatch or m > 5.
DominanceVerdict stochastic_dominates(const SuffixDistribution& mu, const SuffixDistribution& nu,
                                      double tol = kDefaultDominanceTol);

}  // namespace spinmono
