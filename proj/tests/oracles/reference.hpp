#pragma once

// Slow, obviously-correct reimplementations used as test oracles. Nothing
// here calls into the library beyond Rational and Rng.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cupgame/random.hpp"
#include "cupgame/rational.hpp"

namespace ref {

using cupgame::Rational;
using Vec = std::vector<Rational>;

inline Vec desc(Vec v) {
  std::sort(v.begin(), v.end(), [](const Rational& a, const Rational& b) { return a > b; });
  return v;
}

inline std::vector<std::int64_t> desc(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline Rational sum(const Vec& v) {
  Rational s;
  for (const auto& x : v) s += x;
  return s;
}

enum class Variant { Standard, NegativeFill, Augmented };

// One round on a dense fill vector: additions and emptied indices refer to
// the sorted (fullest first) order of `fills` before the round.
inline Vec round(const Vec& fills, const Vec& additions, const std::set<std::int64_t>& emptied, Variant v,
                 const Rational& eps = Rational()) {
  Vec x = desc(fills);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += additions[i];
  // emptied indices are positions in the post-fill sorted order
  x = desc(x);
  for (auto i : emptied) {
    Rational& c = x[std::size_t(i)];
    if (v == Variant::NegativeFill) c -= 1;
    else if (v == Variant::Standard) c = std::max(Rational(0), c - 1);
    else c = std::max(Rational(0), c - (Rational(1) + eps));
  }
  return desc(x);
}

// Every selected post-fill value >= every unselected one.
inline bool greedy_selection(const Vec& post_fill, const std::vector<std::int64_t>& selected) {
  std::set<std::int64_t> s(selected.begin(), selected.end());
  Rational lo_sel, hi_unsel;
  bool any_sel = false, any_unsel = false;
  for (std::int64_t i = 0; i < std::int64_t(post_fill.size()); ++i) {
    const Rational& v = post_fill[std::size_t(i)];
    if (s.count(i)) {
      if (!any_sel || v < lo_sel) lo_sel = v;
      any_sel = true;
    } else {
      if (!any_unsel || v > hi_unsel) hi_unsel = v;
      any_unsel = true;
    }
  }
  return !any_sel || !any_unsel || lo_sel >= hi_unsel;
}

inline bool majorizes(Vec x, Vec y) {
  if (x.size() != y.size()) return false;
  x = desc(x);
  y = desc(y);
  Rational sx, sy;
  for (std::size_t m = 0; m < x.size(); ++m) {
    sx += x[m];
    sy += y[m];
    if (sx < sy) return false;
  }
  return sx == sy;
}

inline bool dominates(Vec x, Vec y) {
  if (x.size() != y.size()) return false;
  x = desc(x);
  y = desc(y);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < y[i]) return false;
  return true;
}

// Weak monopolization by brute force over every choice of cup1, cup2 in A
// and every value in B for B's cup2.
inline bool weakly_monopolizes(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  if (ref::dominates(a, b)) return true;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (const auto& b2 : b) {
        Rational c = b2 - a[j];
        if (c.sign() < 0 || c > Rational(1) || !(a[i] > b2)) continue;
        Vec built = a;
        built[i] -= 1;
        built[j] = b2;
        if (desc(built) == desc(b)) return true;
      }
    }
  return false;
}

inline std::int64_t phi(const std::vector<std::int64_t>& x) {
  std::int64_t s = 0;
  for (auto v : x) s += v * v;
  return s;
}

inline std::int64_t psi(const std::vector<std::int64_t>& x) {
  const std::int64_t n = std::int64_t(x.size());
  std::int64_t s = 0;
  for (auto v : x) s += n * (v < 0 ? -v : v);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += x[i] > x[j] ? x[i] - x[j] : x[j] - x[i];
  return s;
}

inline std::int64_t f(std::int64_t x, std::int64_t a, std::int64_t l) {
  std::int64_t v = x - a * l;
  if (v < 0) return 0;
  return v > l ? l : v;
}

inline std::int64_t phi_a(std::vector<std::int64_t> x, std::int64_t a, std::int64_t l, std::int64_t n_a) {
  x = desc(x);
  std::int64_t s = 0;
  for (std::int64_t i = 0; i < n_a; ++i) s += f(x[std::size_t(i)], a, l) * f(x[std::size_t(i)], a, l);
  return s;
}

inline std::int64_t psi_a(std::vector<std::int64_t> x, std::int64_t a, std::int64_t l, std::int64_t n_a) {
  x = desc(x);
  std::int64_t s = 0;
  for (std::int64_t i = 0; i < n_a; ++i) s += n_a * f(x[std::size_t(i)], a, l);
  for (std::int64_t i = 0; i < n_a; ++i)
    for (std::int64_t j = i + 1; j < n_a; ++j) {
      std::int64_t d = f(x[std::size_t(i)], a, l) - f(x[std::size_t(j)], a, l);
      s += d < 0 ? -d : d;
    }
  return s;
}

// q stones at `level` go up one, q go down one unless the level is a
// checkpoint (multiple of `spacing` when given).
inline std::vector<std::int64_t> stone_move(std::vector<std::int64_t> x, std::int64_t level, std::int64_t q,
                                            std::int64_t spacing = 0) {
  std::int64_t up = q, down = q;
  const bool checkpoint = spacing > 0 && level % spacing == 0;
  for (auto& v : x) {
    if (v != level) continue;
    if (up > 0) {
      ++v;
      --up;
    } else if (down > 0) {
      if (!checkpoint) --v;
      --down;
    }
  }
  return desc(x);
}

// First level k >= 3 (from the top) occupied with k-1 and k-2 empty; also
// the mirrored rule below -3 when `mirrored`.
inline std::optional<std::int64_t> gap(const std::vector<std::int64_t>& x, bool mirrored) {
  std::set<std::int64_t> occ(x.begin(), x.end());
  for (auto it = occ.rbegin(); it != occ.rend(); ++it) {
    std::int64_t k = *it;
    if (k >= 3 && !occ.count(k - 1) && !occ.count(k - 2)) return k;
  }
  if (mirrored)
    for (auto k : occ)
      if (k <= -3 && !occ.count(k + 1) && !occ.count(k + 2)) return k;
  return std::nullopt;
}

// All valid fillings of n sorted cups with p units on a 1/den grid.
inline void grid_moves(std::int64_t n, std::int64_t p, std::int64_t den,
                       const std::function<void(const Vec&)>& visit) {
  Vec cur;
  std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t i, std::int64_t left) {
    if (i == n) {
      if (left == 0) visit(cur);
      return;
    }
    for (std::int64_t u = 0; u <= std::min(den, left); ++u) {
      cur.push_back(Rational(u, den));
      rec(i + 1, left - u);
      cur.pop_back();
    }
  };
  rec(0, p * den);
}

inline void subsets(std::int64_t n, std::int64_t p, const std::function<void(const std::set<std::int64_t>&)>& visit) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    if (std::int64_t(__builtin_popcountll(mask)) != p) continue;
    std::set<std::int64_t> s;
    for (std::int64_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.insert(i);
    visit(s);
  }
}

// Plain minimax over grid moves and every emptier subset. Tiny inputs only.
inline Rational game_value(const Vec& fills, std::int64_t t, Variant v, std::int64_t den, bool greedy_only) {
  Vec x = desc(fills);
  if (t == 0) return x.front();
  const std::int64_t n = std::int64_t(x.size());
  Rational best;
  bool have = false;
  for (std::int64_t p = 1; p <= n; ++p)
    grid_moves(n, p, den, [&](const Vec& add) {
      Vec post = x;
      for (std::size_t i = 0; i < post.size(); ++i) post[i] += add[i];
      Vec sorted_post = desc(post);
      Rational worst;
      bool have_w = false;
      subsets(n, p, [&](const std::set<std::int64_t>& s) {
        std::vector<std::int64_t> sel(s.begin(), s.end());
        if (greedy_only && !greedy_selection(sorted_post, sel)) return;
        Vec zero(x.size());
        Rational val = game_value(round(sorted_post, zero, s, v), t - 1, v, den, greedy_only);
        if (!have_w || val < worst) worst = val;
        have_w = true;
      });
      if (!have || worst > best) best = worst;
      have = true;
    });
  return best;
}

}  // namespace ref
