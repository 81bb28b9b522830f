#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "mdimlab/common.hpp"

namespace mdimlab {

// Finite-depth stand-ins for one-sided symbol sequences. A word of depth L
// represents every sequence sharing its first L symbols; metric values carry
// an explicit tail bound for the unknown continuation.
template <class S>
struct BasicWord {
  std::vector<S> sym;

  BasicWord() = default;
  explicit BasicWord(std::vector<S> s) : sym(std::move(s)) {}

  std::size_t depth() const { return sym.size(); }
  bool empty() const { return sym.empty(); }
  const S& at(std::size_t i) const { return sym[i]; }  // 0-based

  BasicWord drop_front(std::size_t k) const {
    if (k > sym.size())
      throw InsufficientDepthError("word too short to drop prefix");
    return BasicWord(std::vector<S>(sym.begin() + k, sym.end()));
  }

  BasicWord take_front(std::size_t k) const {
    if (k > sym.size())
      throw InsufficientDepthError("word too short to take prefix");
    return BasicWord(std::vector<S>(sym.begin(), sym.begin() + k));
  }

  bool operator==(const BasicWord&) const = default;
};

using Word = BasicWord<std::uint8_t>;
using PairSymbol = std::pair<std::uint8_t, std::uint8_t>;
using PairWord = BasicWord<PairSymbol>;

inline int symbol_diff(std::uint8_t a, std::uint8_t b) {
  return a > b ? a - b : b - a;
}
// Pair symbols use the sum of coordinate differences (the sum metric on the
// product alphabet).
inline int symbol_diff(const PairSymbol& a, const PairSymbol& b) {
  return symbol_diff(a.first, b.first) + symbol_diff(a.second, b.second);
}

struct MetricValue {
  double value = 0.0;       // sum over the shared depth
  double tail_bound = 0.0;  // rigorous bound on the unseen remainder
};

// 3-adic metric sum_{n>=1} 3^{-n} |u_n - v_n| truncated at the shared depth.
// `max_diff` is the largest possible symbol difference (2 for the {0,2}
// alphabet), giving the tail bound max_diff * 3^{-L} / 2.
template <class S>
MetricValue word_metric(const BasicWord<S>& u, const BasicWord<S>& v,
                        int max_diff = 2) {
  if (u.empty() || v.empty()) throw InputError("words must be non-empty");
  std::size_t depth = std::min(u.depth(), v.depth());
  long double acc = 0.0L, w = 1.0L;
  for (std::size_t n = 0; n < depth; ++n) {
    w /= 3.0L;
    acc += w * symbol_diff(u.at(n), v.at(n));
  }
  double tail = static_cast<double>(max_diff) *
                std::pow(3.0, -static_cast<double>(depth)) / 2.0;
  return MetricValue{static_cast<double>(acc), tail};
}

inline MetricValue cantor_metric(const Word& u, const Word& v) {
  return word_metric(u, v, 2);
}

// Exact integer numerator of the truncated metric at scale 3^L, i.e.
// sum_{n<=L} 3^{L-n} |u_n - v_n|. Comparisons against thresholds of the form
// c * 3^{L-m} are then tie-exact. L is capped so the value fits 128 bits.
template <class S>
__int128 scaled_distance(const BasicWord<S>& u, const BasicWord<S>& v,
                         std::size_t L) {
  if (L > std::min(u.depth(), v.depth()))
    throw InsufficientDepthError("scaled distance beyond the shared depth");
  if (L > 75) throw InputError("scaled distance depth exceeds 128-bit range");
  __int128 acc = 0;
  for (std::size_t n = 0; n < L; ++n)
    acc = acc * 3 + symbol_diff(u.at(n), v.at(n));
  return acc;
}

inline __int128 pow3_128(std::size_t e) {
  __int128 r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= 3;
  return r;
}

// Two-sided words with a marked origin: valid indices are
// [-origin, size-1-origin]. Used for the Z-indexed shift spaces.
template <class S>
struct BasicTwoSidedWord {
  std::vector<S> sym;
  int origin = 0;

  BasicTwoSidedWord() = default;
  BasicTwoSidedWord(std::vector<S> s, int org)
      : sym(std::move(s)), origin(org) {
    if (origin < 0 || origin >= static_cast<int>(sym.size()))
      throw InputError("origin outside the stored window");
  }

  int min_index() const { return -origin; }
  int max_index() const { return static_cast<int>(sym.size()) - 1 - origin; }
  const S& at(int i) const { return sym[static_cast<std::size_t>(i + origin)]; }

  // Left shift: (sigma x)_i = x_{i+1}. The stored window slides by one.
  BasicTwoSidedWord shifted_left() const {
    if (origin + 1 >= static_cast<int>(sym.size()))
      throw InsufficientDepthError("shift exhausts the right half");
    return BasicTwoSidedWord(sym, origin + 1);
  }

  bool operator==(const BasicTwoSidedWord&) const = default;
};

using TwoSidedWord = BasicTwoSidedWord<std::uint8_t>;
using TwoSidedPairWord = BasicTwoSidedWord<PairSymbol>;

// Two-sided 3-adic metric sum_{i in Z} 3^{-|i|} d(x_i, y_i) over the shared
// index window, with the rigorous remainder bound attached.
template <class S>
MetricValue two_sided_metric(const BasicTwoSidedWord<S>& u,
                             const BasicTwoSidedWord<S>& v, int max_diff = 2) {
  int lo = std::max(u.min_index(), v.min_index());
  int hi = std::min(u.max_index(), v.max_index());
  if (lo > hi) throw InputError("two-sided words share no indices");
  long double acc = 0.0L;
  for (int i = lo; i <= hi; ++i)
    acc += std::pow(3.0L, static_cast<long double>(-std::abs(i))) * symbol_diff(u.at(i), v.at(i));
  double tail = static_cast<double>(max_diff) *
                (std::pow(3.0, static_cast<double>(lo) - 1) * 1.5 +
                 std::pow(3.0, -static_cast<double>(hi) - 1) * 1.5);
  return MetricValue{static_cast<double>(acc), tail};
}

// Exact numerator at scale 3^R over the window [-R, R].
template <class S>
__int128 scaled_two_sided_distance(const BasicTwoSidedWord<S>& u,
                                   const BasicTwoSidedWord<S>& v, int R) {
  if (-R < u.min_index() || R > u.max_index() || -R < v.min_index() ||
      R > v.max_index())
    throw InsufficientDepthError("window exceeds the stored two-sided depth");
  if (R > 37) throw InputError("two-sided scale exceeds 128-bit range");
  __int128 acc = 0;
  const __int128 scale = pow3_128(static_cast<std::size_t>(R));
  __int128 w = scale;
  acc += w * symbol_diff(u.at(0), v.at(0));
  for (int i = 1; i <= R; ++i) {
    w /= 3;
    acc += w * (symbol_diff(u.at(i), v.at(i)) + symbol_diff(u.at(-i), v.at(-i)));
  }
  return acc;
}

// Unzips a word over a product alphabet into its coordinate words. This is a
// sum-metric isometry and commutes with the shift on both sides.
inline std::pair<TwoSidedWord, TwoSidedWord> theta(const TwoSidedPairWord& w) {
  std::vector<std::uint8_t> a(w.sym.size()), b(w.sym.size());
  for (std::size_t i = 0; i < w.sym.size(); ++i) {
    a[i] = w.sym[i].first;
    b[i] = w.sym[i].second;
  }
  return {TwoSidedWord(std::move(a), w.origin),
          TwoSidedWord(std::move(b), w.origin)};
}

inline TwoSidedPairWord theta_inverse(const TwoSidedWord& a,
                                      const TwoSidedWord& b) {
  if (a.sym.size() != b.sym.size() || a.origin != b.origin)
    throw InputError("coordinate words must share window and origin");
  std::vector<PairSymbol> s(a.sym.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {a.sym[i], b.sym[i]};
  return TwoSidedPairWord(std::move(s), a.origin);
}

inline std::pair<Word, Word> theta(const PairWord& w) {
  std::vector<std::uint8_t> a(w.sym.size()), b(w.sym.size());
  for (std::size_t i = 0; i < w.sym.size(); ++i) {
    a[i] = w.sym[i].first;
    b[i] = w.sym[i].second;
  }
  return {Word(std::move(a)), Word(std::move(b))};
}

}  // namespace mdimlab
