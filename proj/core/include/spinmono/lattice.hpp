#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinmono/rates.hpp"

namespace spinmono {

using Site = std::int64_t;

/// Closed integer interval [lo, hi].
struct Window {
  Site lo = 0;
  Site hi = 0;

  Site size() const { return hi - lo + 1; }
  bool contains(Site x) const { return lo <= x && x <= hi; }
  bool contains(const Window& w) const { return lo <= w.lo && w.hi <= hi; }
  Window shifted(Site k) const { return {lo + k, hi + k}; }

  friend bool operator==(const Window&, const Window&) = default;
};

Window hull(const Window& a, const Window& b);

/// eta[z, z+m): spins at z, z+1, ..., z+m-1.
struct SuffixPattern {
  std::vector<Spin> bits;

  std::size_t size() const { return bits.size(); }
  /// Bit i is the spin at z + i. Requires size() <= 32.
  std::uint32_t code() const;
  std::string to_string() const;

  friend bool operator==(const SuffixPattern&, const SuffixPattern&) = default;
};

/// Two-sided infinite spin configuration with constant tails.
///
/// The value at x is the core bit for x in the window, the left tail below
/// it and the right tail above it. The core is stored bit-packed in 64-bit
/// words; the observable contract is value-at-site only, so two
/// configurations compare equal when they agree at every site even if
/// their windows differ.
class Configuration {
 public:
  Configuration(Spin left_tail, Window window, Spin right_tail);
  /// `core` is a bit string, leftmost character at window.lo.
  static Configuration from_bits(Spin left_tail, Site lo, std::string_view core, Spin right_tail);

  Spin left_tail() const { return left_; }
  Spin right_tail() const { return right_; }
  const Window& window() const { return window_; }

  Spin value(Site x) const {
    if (x < window_.lo) return left_;
    if (x > window_.hi) return right_;
    return core_bit(static_cast<std::size_t>(x - window_.lo));
  }

  /// Copy with the spin at x complemented. Throws std::out_of_range when x
  /// is outside the window: the tails are frozen.
  Configuration flip(Site x) const;

  /// In-place mutators for simulation buffers.
  void set(Site x, Spin s);
  void toggle(Site x);

  /// Local pattern code around x (bit i = spin at x - R + i).
  std::uint32_t pattern_code(Site x, int radius) const;

  /// The same configuration expressed on a larger window. Throws
  /// std::invalid_argument when `w` does not contain the current window.
  Configuration widened(const Window& w) const;

  /// Restriction to `w`: core values are copied, and the spins just outside
  /// `w` become the new tails. Exact when w contains the current window;
  /// otherwise it freezes the boundary neighbours' values, which is the
  /// truncation used for finite-window simulation.
  Configuration restricted(const Window& w) const;

  /// value'(x) = value(x + k). Shifting by +1 moves everything one site left.
  Configuration shifted(Site k) const;

  /// Core as a bit string, leftmost first.
  std::string core_string() const;
  /// Occupied sites in the window.
  std::size_t count_ones() const;

  /// Raw packed words (bit j of word w is site lo + 64w + j).
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Configuration& a, const Configuration& b);

 private:
  Spin core_bit(std::size_t i) const { return static_cast<Spin>((words_[i >> 6] >> (i & 63)) & 1u); }

  Spin left_;
  Spin right_;
  Window window_;
  std::vector<std::uint64_t> words_;
};

enum class InitialKind { step, interval, custom };

/// Initial-condition family.
///
///  - step:     1 on (-inf, offset], i.e. offset = 0 is the unit step and
///              offset = -1 is its translate one site to the left.
///  - interval: 1 exactly on [-N, 0].
///  - custom:   explicit tails and core starting at `lo`.
struct InitialCondition {
  InitialKind kind = InitialKind::step;
  Site offset = 0;
  Site n = 0;
  Spin left_tail = 0;
  Spin right_tail = 0;
  Site lo = 0;
  std::string core;

  static InitialCondition step(Site offset = 0) {
    InitialCondition c;
    c.offset = offset;
    return c;
  }
  static InitialCondition interval(Site n) {
    InitialCondition c;
    c.kind = InitialKind::interval;
    c.n = n;
    return c;
  }
  static InitialCondition custom(Spin left, Site lo, std::string core, Spin right) {
    return {InitialKind::custom, 0, 0, left, right, lo, std::move(core)};
  }

  std::string describe() const;
};

/// Builds the initial configuration on its natural window (the smallest
/// window holding its non-tail structure). Throws std::invalid_argument for
/// a negative N or an empty custom core.
Configuration make_initial(const InitialCondition& init);

/// Same, expressed on `w` via Configuration::restricted.
Configuration make_initial(const InitialCondition& init, const Window& w);

SuffixPattern suffix(const Configuration& config, Site z, std::size_t m);

LocalPattern local_pattern(const Configuration& config, Site x, int radius);

/// True iff a >= b at every site. Throws std::invalid_argument when the
/// windows differ and the tails are not comparable.
bool dominates_pointwise(const Configuration& a, const Configuration& b);

/// First site (within the union of windows) where a < b, if any.
std::optional<Site> first_order_violation(const Configuration& a, const Configuration& b);

}  // namespace spinmono
