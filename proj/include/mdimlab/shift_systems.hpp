#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mdimlab/common.hpp"
#include "mdimlab/words.hpp"

namespace mdimlab {

using BigInt = boost::multiprecision::cpp_int;

// A self-map of finite words. Applications may shorten the word; the output
// depth is exactly the number of trustworthy symbols, so running out of depth
// is an InsufficientDepthError rather than silent garbage.
class SymbolicMap {
 public:
  SymbolicMap() = default;
  SymbolicMap(std::string name, std::function<Word(const Word&)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }

  Word apply(const Word& w) const { return fn_(w); }

  Word apply_n(Word w, int n) const {
    for (int i = 0; i < n; ++i) w = apply(w);
    return w;
  }

  // Orbit w, f(w), ..., f^{steps-1}(w).
  std::vector<Word> orbit(const Word& w, int steps) const {
    std::vector<Word> out;
    out.reserve(steps);
    out.push_back(w);
    for (int i = 1; i < steps; ++i) out.push_back(apply(out.back()));
    return out;
  }

 private:
  std::string name_;
  std::function<Word(const Word&)> fn_;
};

// Left shift dropping k symbols per application.
inline SymbolicMap make_shift(int k = 1) {
  if (k < 1) throw PreconditionError("shift step must be positive");
  return SymbolicMap("sigma^" + std::to_string(k), [k](const Word& w) {
    if (w.depth() < static_cast<std::size_t>(k) + 1)
      throw InsufficientDepthError("shift needs more symbols");
    return w.drop_front(k);
  });
}

namespace detail {
inline void require_cantor(const Word& w) {
  for (auto s : w.sym)
    if (s != 0 && s != 2) throw InputError("symbol outside the {0,2} alphabet");
}
}  // namespace detail

// The {0,2}-sequence map that, on words starting with (k-1) zeros followed by
// a 2, keeps that prefix and shifts the remainder by j*k symbols; the all-zero
// word is fixed. Each application on such a word consumes exactly j*k symbols.
inline SymbolicMap make_psi_j(int j) {
  if (j < 1) throw PreconditionError("psi_j requires j >= 1");
  return SymbolicMap("psi_" + std::to_string(j), [j](const Word& w) {
    if (w.empty()) throw InputError("empty word");
    detail::require_cantor(w);
    std::size_t k = 0;
    while (k < w.depth() && w.at(k) == 0) ++k;
    if (k == w.depth()) return w;  // the all-zero fixed point
    ++k;  // prefix length: (k-1) zeros then the leading 2
    const std::size_t consumed = static_cast<std::size_t>(j) * k;
    if (w.depth() < k + consumed)
      throw InsufficientDepthError("word too short for psi_j at its depth");
    std::vector<std::uint8_t> out;
    out.reserve(w.depth() - consumed);
    out.insert(out.end(), w.sym.begin(), w.sym.begin() + k);
    out.insert(out.end(), w.sym.begin() + k + consumed, w.sym.end());
    return Word(std::move(out));
  });
}

// Truncation: emit the first n output symbols of phi, then the constant x0.
// The image is finite (at most alphabet^n points), and the output keeps the
// input's depth so iteration is well-defined.
inline SymbolicMap make_truncation(const SymbolicMap& phi, int n,
                                   std::uint8_t x0) {
  if (n < 0) throw PreconditionError("truncation length must be >= 0");
  return SymbolicMap(
      "trunc_" + std::to_string(n) + "(" + phi.name() + ")",
      [phi, n, x0](const Word& w) {
        std::vector<std::uint8_t> out;
        out.reserve(w.depth());
        if (n > 0) {
          Word img = phi.apply(w);
          if (img.depth() < static_cast<std::size_t>(n))
            throw InsufficientDepthError("truncation needs more output depth");
          out.insert(out.end(), img.sym.begin(), img.sym.begin() + n);
        }
        while (out.size() < std::max<std::size_t>(w.depth(),
                                                  static_cast<std::size_t>(n)))
          out.push_back(x0);
        return Word(std::move(out));
      });
}

// Hybrid of a K-symbol truncated head and a symbolic tail: the output is
// (head_1..head_K, z0 repeated n-K times, psi applied to the input shifted by
// n). Its sup distance to the plain truncation is at most 3^{-n}.
inline SymbolicMap make_splice_shift(const SymbolicMap& head_map, int K,
                                     std::uint8_t z0, const SymbolicMap& psi,
                                     int n) {
  if (K < 0 || n < K + 1)
    throw PreconditionError("splice needs n >= K + 1");
  return SymbolicMap(
      "splice(" + head_map.name() + "," + psi.name() + ")",
      [head_map, K, z0, psi, n](const Word& w) {
        if (w.depth() < static_cast<std::size_t>(n) + 1)
          throw InsufficientDepthError("splice input shorter than n");
        std::vector<std::uint8_t> out;
        if (K > 0) {
          Word img = head_map.apply(w);
          if (img.depth() < static_cast<std::size_t>(K))
            throw InsufficientDepthError("head map output shorter than K");
          out.insert(out.end(), img.sym.begin(), img.sym.begin() + K);
        }
        out.resize(static_cast<std::size_t>(n), z0);
        Word tail = psi.apply(w.drop_front(static_cast<std::size_t>(n)));
        out.insert(out.end(), tail.sym.begin(), tail.sym.end());
        return Word(std::move(out));
      });
}

// --- cylinder counting -------------------------------------------------

// Number of depth-k cylinder families with n blocks of j*k free symbols:
// 2^{j*n*k}. Arbitrary precision; representatives of distinct families are
// pairwise separated at time n+1 and scale 3^{-k(j+1)}.
inline BigInt cylinder_sep_count(int j, int k, int n) {
  if (j < 1 || k < 1 || n < 1)
    throw PreconditionError("cylinder counts need positive j, k, n");
  return BigInt(1) << (static_cast<unsigned>(j) * static_cast<unsigned>(n) *
                       static_cast<unsigned>(k));
}

// Matching cover-count bound k * 2^{n j k} + 2 at the same scale.
inline BigInt cylinder_cov_bound(int j, int k, int n) {
  if (j < 1 || k < 1 || n < 1)
    throw PreconditionError("cylinder counts need positive j, k, n");
  return BigInt(k) * (BigInt(1) << (static_cast<unsigned>(n) *
                                    static_cast<unsigned>(j) *
                                    static_cast<unsigned>(k))) +
         2;
}

namespace detail {
// Depth that survives n applications of psi_j with at least k(j+1)+4 symbols
// left, enough to witness the separation scale 3^{-k(j+1)} at the last step.
inline std::size_t representative_depth(int j, int k, int n) {
  return static_cast<std::size_t>(k) * (j * (n + 1) + 2) + 4;
}
}  // namespace detail

// One cylinder representative: the depth-k prefix (k-1 zeros, 2), then n
// blocks of j*k symbols encoded by the bits of `code`, padded with zeros.
inline Word cylinder_representative(int j, int k, int n, std::uint64_t code,
                                    std::size_t pad = 0) {
  unsigned bits = static_cast<unsigned>(j) * static_cast<unsigned>(n) *
                  static_cast<unsigned>(k);
  if (bits > 63) throw ResourceError("cylinder code exceeds 64 bits");
  std::size_t depth = std::max(pad, detail::representative_depth(j, k, n));
  std::vector<std::uint8_t> sym(depth, 0);
  sym[k - 1] = 2;
  for (unsigned b = 0; b < bits; ++b)
    sym[k + b] = (code >> b) & 1u ? 2 : 0;
  return Word(std::move(sym));
}

// All 2^{j n k} cylinder representatives (feasible up to 2^20 of them).
inline std::vector<Word> cylinder_representatives(int j, int k, int n,
                                                  std::size_t pad = 0) {
  unsigned bits = static_cast<unsigned>(j) * static_cast<unsigned>(n) *
                  static_cast<unsigned>(k);
  if (bits > 20) throw ResourceError("cylinder family too large to enumerate");
  std::size_t count = std::size_t{1} << bits;
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code)
    out.push_back(cylinder_representative(j, k, n, code, pad));
  return out;
}

// Exact check that the representatives are pairwise (n+1, eps_k)-separated
// under psi_j, with eps_k = 3^{-k(j+1)}; distances are compared as integers.
inline bool representatives_separated(int j, int k, int n,
                                      const std::vector<Word>& reps) {
  SymbolicMap psi = make_psi_j(j);
  const int steps = n + 1;
  std::vector<std::vector<Word>> orbits;
  orbits.reserve(reps.size());
  for (const auto& w : reps) orbits.push_back(psi.orbit(w, steps));
  std::size_t depth = orbits.front().back().depth();
  for (const auto& orb : orbits)
    for (const auto& w : orb) depth = std::min(depth, w.depth());
  if (depth > 75) depth = 75;
  const __int128 eps_scaled =
      pow3_128(depth - static_cast<std::size_t>(k) * (j + 1));
  for (std::size_t a = 0; a < orbits.size(); ++a) {
    for (std::size_t b = a + 1; b < orbits.size(); ++b) {
      __int128 best = 0;
      for (int t = 0; t < steps; ++t) {
        __int128 d = scaled_distance(orbits[a][t], orbits[b][t], depth);
        if (d > best) best = d;
      }
      if (!(best > eps_scaled)) return false;
    }
  }
  return true;
}

// --- closed-form bound sequences ---------------------------------------

struct PsiBounds {
  std::vector<double> lower;  // k j log2 / ((k+1)(j+1) log3), k = 1..k_max
  std::vector<double> upper;  // j (k+1) log2 / (k (j+1) log3)
  double target = 0.0;        // j log2 / ((j+1) log3)
};

// Finite-scale bracketing sequences for the psi_j value; both converge to
// j log2 / ((j+1) log3) while enclosing it for every k.
inline PsiBounds psi_mdim_bounds(int j, int k_max) {
  if (j < 1 || k_max < 2)
    throw PreconditionError("psi_mdim_bounds needs j >= 1, k_max >= 2");
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  PsiBounds out;
  out.target = j * l2 / ((j + 1) * l3);
  out.lower.reserve(k_max);
  out.upper.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    out.lower.push_back(static_cast<double>(k) * j * l2 /
                        (static_cast<double>(k + 1) * (j + 1) * l3));
    out.upper.push_back(static_cast<double>(j) * (k + 1) * l2 /
                        (static_cast<double>(k) * (j + 1) * l3));
  }
  return out;
}

}  // namespace mdimlab
