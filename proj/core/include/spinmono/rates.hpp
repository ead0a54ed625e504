#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spinmono {

using Spin = std::uint8_t;

/// Largest radius accepted by default. Exhaustive pair enumeration costs
/// 3^(2R) comparisons per center value, so this is a cost cap.
inline constexpr int kDefaultMaxRadius = 3;

/// Spins at offsets -R..R around a site.
///
/// Bit i of `code` holds the spin at offset i - R, so the least significant
/// bit is the leftmost site. The textual form lists the same spins left to
/// right, e.g. "110" is code 0b011.
struct LocalPattern {
  int radius = 0;
  std::uint32_t code = 0;

  int width() const { return 2 * radius + 1; }
  Spin center() const { return static_cast<Spin>((code >> radius) & 1u); }
  Spin at(int offset) const { return static_cast<Spin>((code >> (offset + radius)) & 1u); }

  std::string to_string() const;
  static LocalPattern parse(std::string_view bits);

  friend bool operator==(const LocalPattern&, const LocalPattern&) = default;
};

/// Translation-invariant finite-range flip rate table c(x, eta).
class RateSpec {
 public:
  /// Validates and takes ownership of a total table of 2^(2R+1) rates.
  /// Throws std::invalid_argument on a wrong size or a negative/non-finite
  /// entry, or when radius exceeds `max_radius`.
  RateSpec(int radius, std::vector<double> rates, std::string name,
           int max_radius = kDefaultMaxRadius);

  int radius() const { return radius_; }
  int width() const { return 2 * radius_ + 1; }
  std::uint32_t pattern_count() const { return static_cast<std::uint32_t>(rates_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<double>& table() const { return rates_; }

  double rate(std::uint32_t code) const { return rates_[code]; }
  double rate(const LocalPattern& p) const { return rates_.at(p.code); }

  /// Maximum rate over center-0 patterns (births).
  double max_birth() const;
  /// Maximum rate over center-1 patterns (deaths).
  double max_death() const;
  double max_rate() const;
  bool is_zero() const;

  std::uint32_t center_mask() const { return 1u << radius_; }

  friend bool operator==(const RateSpec&, const RateSpec&) = default;

 private:
  int radius_;
  std::vector<double> rates_;
  std::string name_;
};

using ModelParams = std::map<std::string, double, std::less<>>;

/// Built-in model names accepted by build_model.
std::vector<std::string> builtin_model_names();

/// Default parameters for a built-in model (used by the catalog listing).
ModelParams default_params(std::string_view name);

/// Builds a built-in model.
///
///  - contact:       params lambda >= 0, delta > 0
///  - voter:         params v > 0
///  - glauber_ising: params beta >= 0
///  - pure_death:    no params
///
/// Unknown names, missing or negative parameters and unexpected keys throw
/// std::invalid_argument. Custom tables go through make_custom.
RateSpec build_model(std::string_view name, const ModelParams& params);

/// Builds a custom table from bit-string patterns. Every one of the
/// 2^(2R+1) patterns must be present exactly once.
RateSpec make_custom(int radius, const std::map<std::string, double>& entries,
                     std::string name = "custom", int max_radius = kDefaultMaxRadius);

/// Glauber-Ising rates on spins s = 2*eta - 1 without the beta >= 0 check.
/// Negative beta gives a non-attractive (antiferromagnetic) table.
std::vector<double> glauber_table(double beta);

struct AttractivenessViolation {
  LocalPattern low;
  LocalPattern high;
  double rate_low = 0.0;
  double rate_high = 0.0;

  friend bool operator==(const AttractivenessViolation&, const AttractivenessViolation&) = default;
};

struct AttractivenessReport {
  bool attractive = true;
  std::vector<AttractivenessViolation> violations;
};

/// Exhaustive check of the attractiveness condition over all comparable
/// pattern pairs (low <= high coordinatewise, equal center spin): center-0
/// rates must not decrease along the order and center-1 rates must not
/// increase. Violations are listed in increasing (high, low) code order.
AttractivenessReport check_attractive(const RateSpec& spec);

/// c_max = max birth rate + max death rate. Throws std::domain_error for an
/// identically-zero table.
double uniformization_bound(const RateSpec& spec);

/// Probability that a uniformized event leaves the site occupied.
inline double occupation_probability(const RateSpec& spec, std::uint32_t code, double c_max) {
  const double r = spec.rate(code);
  return (code & spec.center_mask()) ? (c_max - r) / c_max : r / c_max;
}

struct CouplingReport {
  bool monotone = true;
  /// First failing pair, low <= high coordinatewise, with p1(low) > p1(high).
  std::optional<AttractivenessViolation> violation;
  double p_low = 0.0;
  double p_high = 0.0;
};

/// Exhaustively checks p1(low) <= p1(high) over every comparable pattern
/// pair, including pairs that disagree at the center. Throws
/// std::invalid_argument when c_max < max birth + max death, since then the
/// rule cannot be monotone on the disagreeing-center pairs.
CouplingReport check_coupling_monotone(const RateSpec& spec, double c_max);

/// Global 0<->1 spin flip: rate'(p) = rate(~p). Births become deaths.
RateSpec spin_flipped(const RateSpec& spec);

}  // namespace spinmono
