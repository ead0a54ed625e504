#include "spinmono/lattice.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace spinmono {

namespace {

std::size_t word_count(Site size) { return static_cast<std::size_t>((size + 63) / 64); }

Spin check_spin(int s, const char* what) {
  if (s != 0 && s != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
  return static_cast<Spin>(s);
}

}  // namespace

Window hull(const Window& a, const Window& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::uint32_t SuffixPattern::code() const {
  if (bits.size() > 32) throw std::length_error("suffix too wide for an integer code");
  std::uint32_t c = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) c |= std::uint32_t{bits[i]} << i;
  return c;
}

std::string SuffixPattern::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (Spin b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Configuration::Configuration(Spin left_tail, Window window, Spin right_tail)
    : left_(check_spin(left_tail, "left tail")),
      right_(check_spin(right_tail, "right tail")),
      window_(window) {
  if (window.lo > window.hi) throw std::invalid_argument("window must satisfy lo <= hi");
  words_.assign(word_count(window.size()), 0);
}

Configuration Configuration::from_bits(Spin left_tail, Site lo, std::string_view core,
                                       Spin right_tail) {
  if (core.empty()) throw std::invalid_argument("core must not be empty");
  Configuration c(left_tail, {lo, lo + static_cast<Site>(core.size()) - 1}, right_tail);
  for (std::size_t i = 0; i < core.size(); ++i) {
    if (core[i] == '1') {
      c.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    } else if (core[i] != '0') {
      throw std::invalid_argument("core '" + std::string(core) + "' has a non-binary digit");
    }
  }
  return c;
}

Configuration Configuration::flip(Site x) const {
  Configuration out = *this;
  out.toggle(x);
  return out;
}

void Configuration::set(Site x, Spin s) {
  if (!window_.contains(x)) {
    throw std::out_of_range("site " + std::to_string(x) + " is outside the window; tails are frozen");
  }
  const auto i = static_cast<std::size_t>(x - window_.lo);
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (s) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

void Configuration::toggle(Site x) {
  if (!window_.contains(x)) {
    throw std::out_of_range("site " + std::to_string(x) + " is outside the window; tails are frozen");
  }
  const auto i = static_cast<std::size_t>(x - window_.lo);
  words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
}

std::uint32_t Configuration::pattern_code(Site x, int radius) const {
  const Site first = x - radius;
  const int width = 2 * radius + 1;
  if (first >= window_.lo && x + radius <= window_.hi) {
    // Interior: at most two words.
    const auto i = static_cast<std::size_t>(first - window_.lo);
    const std::size_t w = i >> 6;
    const unsigned shift = i & 63;
    std::uint64_t bits = words_[w] >> shift;
    if (shift + static_cast<unsigned>(width) > 64) bits |= words_[w + 1] << (64 - shift);
    return static_cast<std::uint32_t>(bits & ((std::uint64_t{1} << width) - 1));
  }
  std::uint32_t code = 0;
  for (int i = 0; i < width; ++i) code |= std::uint32_t{value(first + i)} << i;
  return code;
}

Configuration Configuration::widened(const Window& w) const {
  if (!w.contains(window_)) {
    throw std::invalid_argument("widened: target window does not contain the current window");
  }
  return restricted(w);
}

Configuration Configuration::restricted(const Window& w) const {
  Configuration out(value(w.lo - 1), w, value(w.hi + 1));
  for (Site x = w.lo; x <= w.hi; ++x) {
    if (value(x)) {
      const auto i = static_cast<std::size_t>(x - w.lo);
      out.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }
  return out;
}

Configuration Configuration::shifted(Site k) const {
  Configuration out = *this;
  out.window_ = window_.shifted(-k);
  return out;
}

std::string Configuration::core_string() const {
  std::string s(static_cast<std::size_t>(window_.size()), '0');
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (core_bit(i)) s[i] = '1';
  }
  return s;
}

std::size_t Configuration::count_ones() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool operator==(const Configuration& a, const Configuration& b) {
  if (a.left_ != b.left_ || a.right_ != b.right_) return false;
  if (a.window_ == b.window_) return a.words_ == b.words_;
  const Window u = hull(a.window_, b.window_);
  for (Site x = u.lo; x <= u.hi; ++x) {
    if (a.value(x) != b.value(x)) return false;
  }
  return true;
}

std::string InitialCondition::describe() const {
  switch (kind) {
    case InitialKind::step:
      return "step(" + std::to_string(offset) + ")";
    case InitialKind::interval:
      return "interval(" + std::to_string(n) + ")";
    case InitialKind::custom:
      return "custom(" + std::to_string(left_tail) + "," + std::to_string(lo) + "," + core + "," +
             std::to_string(right_tail) + ")";
  }
  return "?";
}

Configuration make_initial(const InitialCondition& init) {
  switch (init.kind) {
    case InitialKind::step: {
      Configuration c(1, {init.offset, init.offset + 1}, 0);
      c.set(init.offset, 1);
      return c;
    }
    case InitialKind::interval: {
      if (init.n < 0) throw std::invalid_argument("interval: N must be >= 0");
      Configuration c(0, {-init.n, 0}, 0);
      for (Site x = -init.n; x <= 0; ++x) c.set(x, 1);
      return c;
    }
    case InitialKind::custom:
      return Configuration::from_bits(init.left_tail, init.lo, init.core, init.right_tail);
  }
  throw std::invalid_argument("unknown initial condition kind");
}

Configuration make_initial(const InitialCondition& init, const Window& w) {
  return make_initial(init).restricted(w);
}

SuffixPattern suffix(const Configuration& config, Site z, std::size_t m) {
  if (m == 0) throw std::invalid_argument("suffix width must be >= 1");
  SuffixPattern p;
  p.bits.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.bits[i] = config.value(z + static_cast<Site>(i));
  return p;
}

LocalPattern local_pattern(const Configuration& config, Site x, int radius) {
  return LocalPattern{radius, config.pattern_code(x, radius)};
}

std::optional<Site> first_order_violation(const Configuration& a, const Configuration& b) {
  const Window u = hull(a.window(), b.window());
  if (a.left_tail() < b.left_tail()) return u.lo - 1;
  for (Site x = u.lo; x <= u.hi; ++x) {
    if (a.value(x) < b.value(x)) return x;
  }
  if (a.right_tail() < b.right_tail()) return u.hi + 1;
  return std::nullopt;
}

bool dominates_pointwise(const Configuration& a, const Configuration& b) {
  const bool tails_ok = a.left_tail() >= b.left_tail() && a.right_tail() >= b.right_tail();
  if (!(a.window() == b.window()) && !tails_ok) {
    throw std::invalid_argument("dominates_pointwise: incomparable tails on mismatched windows");
  }
  if (!tails_ok) return false;
  if (a.window() == b.window()) {
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
      if (wb[i] & ~wa[i]) return false;
    }
    return true;
  }
  return !first_order_violation(a, b).has_value();
}

}  // namespace spinmono
