#include "spinmono/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinmono {

namespace {

void require_only(std::string_view model, const ModelParams& params,
                  std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("model '" + std::string(model) + "': unexpected parameter '" +
                                  key + "'");
    }
  }
}

double param(std::string_view model, const ModelParams& params, std::string_view key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument("model '" + std::string(model) + "': missing parameter '" +
                                std::string(key) + "'");
  }
  if (!std::isfinite(it->second)) {
    throw std::invalid_argument("model '" + std::string(model) + "': parameter '" +
                                std::string(key) + "' is not finite");
  }
  return it->second;
}

std::uint32_t neighbors_occupied(std::uint32_t code) {
  // R = 1: bit 0 left, bit 1 center, bit 2 right
  return (code & 1u) + ((code >> 2) & 1u);
}

}  // namespace

std::string LocalPattern::to_string() const {
  std::string out(static_cast<std::size_t>(width()), '0');
  for (int i = 0; i < width(); ++i) {
    if ((code >> i) & 1u) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

LocalPattern LocalPattern::parse(std::string_view bits) {
  if (bits.empty() || bits.size() % 2 == 0 || bits.size() > 31) {
    throw std::invalid_argument("pattern '" + std::string(bits) +
                                "' must have odd length 2R+1");
  }
  LocalPattern p;
  p.radius = static_cast<int>(bits.size() / 2);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      p.code |= 1u << i;
    } else if (bits[i] != '0') {
      throw std::invalid_argument("pattern '" + std::string(bits) + "' has a non-binary digit");
    }
  }
  return p;
}

RateSpec::RateSpec(int radius, std::vector<double> rates, std::string name, int max_radius)
    : radius_(radius), rates_(std::move(rates)), name_(std::move(name)) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  if (radius > max_radius) {
    throw std::invalid_argument("radius " + std::to_string(radius) + " exceeds the maximum " +
                                std::to_string(max_radius));
  }
  const std::size_t expected = std::size_t{1} << (2 * radius + 1);
  if (rates_.size() != expected) {
    throw std::invalid_argument("rate table for radius " + std::to_string(radius) + " needs " +
                                std::to_string(expected) + " entries, got " +
                                std::to_string(rates_.size()));
  }
  for (std::size_t code = 0; code < rates_.size(); ++code) {
    const double r = rates_[code];
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument(
          "rate for pattern " +
          LocalPattern{radius, static_cast<std::uint32_t>(code)}.to_string() +
          " must be finite and non-negative");
    }
  }
}

double RateSpec::max_birth() const {
  double best = 0.0;
  for (std::uint32_t code = 0; code < pattern_count(); ++code) {
    if (!(code & center_mask())) best = std::max(best, rates_[code]);
  }
  return best;
}

double RateSpec::max_death() const {
  double best = 0.0;
  for (std::uint32_t code = 0; code < pattern_count(); ++code) {
    if (code & center_mask()) best = std::max(best, rates_[code]);
  }
  return best;
}

double RateSpec::max_rate() const { return std::max(max_birth(), max_death()); }

bool RateSpec::is_zero() const {
  return std::all_of(rates_.begin(), rates_.end(), [](double r) { return r == 0.0; });
}

std::vector<std::string> builtin_model_names() {
  return {"contact", "voter", "glauber_ising", "pure_death"};
}

ModelParams default_params(std::string_view name) {
  if (name == "contact") return {{"lambda", 1.0}, {"delta", 1.0}};
  if (name == "voter") return {{"v", 1.0}};
  if (name == "glauber_ising") return {{"beta", 0.5}};
  if (name == "pure_death") return {};
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::vector<double> glauber_table(double beta) {
  std::vector<double> rates(8);
  for (std::uint32_t code = 0; code < 8; ++code) {
    const int s_left = (code & 1u) ? 1 : -1;
    const int s_center = (code & 2u) ? 1 : -1;
    const int s_right = (code & 4u) ? 1 : -1;
    rates[code] = std::exp(-beta * s_center * (s_left + s_right));
  }
  return rates;
}

RateSpec build_model(std::string_view name, const ModelParams& params) {
  if (name == "contact") {
    require_only(name, params, {"lambda", "delta"});
    const double lambda = param(name, params, "lambda");
    const double delta = param(name, params, "delta");
    if (lambda < 0.0) throw std::invalid_argument("contact: lambda must be >= 0");
    if (delta <= 0.0) throw std::invalid_argument("contact: delta must be > 0");
    std::vector<double> rates(8);
    for (std::uint32_t code = 0; code < 8; ++code) {
      rates[code] = (code & 2u) ? delta : lambda * neighbors_occupied(code);
    }
    return RateSpec(1, std::move(rates), "contact");
  }
  if (name == "voter") {
    require_only(name, params, {"v"});
    const double v = param(name, params, "v");
    if (v <= 0.0) throw std::invalid_argument("voter: v must be > 0");
    std::vector<double> rates(8);
    for (std::uint32_t code = 0; code < 8; ++code) {
      const std::uint32_t center = (code >> 1) & 1u;
      const std::uint32_t disagree = ((code & 1u) != center) + (((code >> 2) & 1u) != center);
      rates[code] = v * disagree / 2.0;
    }
    return RateSpec(1, std::move(rates), "voter");
  }
  if (name == "glauber_ising") {
    require_only(name, params, {"beta"});
    const double beta = param(name, params, "beta");
    if (beta < 0.0) throw std::invalid_argument("glauber_ising: beta must be >= 0");
    return RateSpec(1, glauber_table(beta), "glauber_ising");
  }
  if (name == "pure_death") {
    require_only(name, params, {});
    return RateSpec(0, {0.0, 1.0}, "pure_death");
  }
  if (name == "custom") {
    throw std::invalid_argument("custom models need a rate table; use make_custom");
  }
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

RateSpec make_custom(int radius, const std::map<std::string, double>& entries, std::string name,
                     int max_radius) {
  if (radius < 0 || radius > max_radius) {
    throw std::invalid_argument("custom: radius must be in [0, " + std::to_string(max_radius) +
                                "]");
  }
  const std::size_t count = std::size_t{1} << (2 * radius + 1);
  std::vector<double> rates(count, 0.0);
  std::vector<bool> seen(count, false);
  for (const auto& [bits, rate] : entries) {
    const LocalPattern p = LocalPattern::parse(bits);
    if (p.radius != radius) {
      throw std::invalid_argument("custom: pattern '" + bits + "' does not have width " +
                                  std::to_string(2 * radius + 1));
    }
    seen[p.code] = true;
    rates[p.code] = rate;
  }
  for (std::size_t code = 0; code < count; ++code) {
    if (!seen[code]) {
      throw std::invalid_argument(
          "custom: missing rate for pattern " +
          LocalPattern{radius, static_cast<std::uint32_t>(code)}.to_string());
    }
  }
  return RateSpec(radius, std::move(rates), std::move(name), max_radius);
}

AttractivenessReport check_attractive(const RateSpec& spec) {
  AttractivenessReport report;
  const std::uint32_t center = spec.center_mask();
  const std::uint32_t others = (spec.pattern_count() - 1) & ~center;
  for (std::uint32_t high = 0; high < spec.pattern_count(); ++high) {
    // Submasks of `high` that keep its center bit; iterated in increasing order.
    const std::uint32_t free = high & others;
    std::vector<std::uint32_t> subs;
    for (std::uint32_t s = free;; s = (s - 1) & free) {
      subs.push_back(s | (high & center));
      if (s == 0) break;
    }
    std::reverse(subs.begin(), subs.end());
    for (std::uint32_t low : subs) {
      if (low == high) continue;
      const double r_low = spec.rate(low);
      const double r_high = spec.rate(high);
      const bool bad = (high & center) ? r_low < r_high : r_low > r_high;
      if (bad) {
        report.violations.push_back({LocalPattern{spec.radius(), low},
                                     LocalPattern{spec.radius(), high}, r_low, r_high});
      }
    }
  }
  report.attractive = report.violations.empty();
  return report;
}

double uniformization_bound(const RateSpec& spec) {
  if (spec.is_zero()) {
    throw std::domain_error("rate table is identically zero: the model has no events");
  }
  const double births = spec.max_birth();
  const double deaths = spec.max_death();
  double c = births + deaths;
  // Round up so that c - D >= B holds in floating point as well.
  while (c - deaths < births || c - births < deaths) c = std::nextafter(c, HUGE_VAL);
  return c;
}

CouplingReport check_coupling_monotone(const RateSpec& spec, double c_max) {
  const double births = spec.max_birth();
  const double deaths = spec.max_death();
  if (!(c_max > 0.0) || c_max < births + deaths) {
    throw std::invalid_argument("uniformization constant " + std::to_string(c_max) +
                                " is below max birth + max death = " +
                                std::to_string(births + deaths));
  }
  CouplingReport report;
  for (std::uint32_t high = 0; high < spec.pattern_count(); ++high) {
    const double p_high = occupation_probability(spec, high, c_max);
    for (std::uint32_t s = high;; s = (s - 1) & high) {
      const std::uint32_t low = s;
      const double p_low = occupation_probability(spec, low, c_max);
      if (p_low > p_high) {
        report.monotone = false;
        report.violation = AttractivenessViolation{LocalPattern{spec.radius(), low},
                                                   LocalPattern{spec.radius(), high},
                                                   spec.rate(low), spec.rate(high)};
        report.p_low = p_low;
        report.p_high = p_high;
        return report;
      }
      if (s == 0) break;
    }
  }
  return report;
}

RateSpec spin_flipped(const RateSpec& spec) {
  const std::uint32_t all = spec.pattern_count() - 1;
  std::vector<double> rates(spec.pattern_count());
  for (std::uint32_t code = 0; code < spec.pattern_count(); ++code) {
    rates[code] = spec.rate(~code & all);
  }
  return RateSpec(spec.radius(), std::move(rates), spec.name() + "_flipped", spec.radius());
}

}  // namespace spinmono
