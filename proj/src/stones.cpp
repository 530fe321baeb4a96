#include "cupgame/stones.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace cupgame {
namespace {

using i128 = __int128;

// [first, last) of the stones at `level`.
std::pair<std::size_t, std::size_t> level_range(const std::vector<std::int64_t>& pos,
                                                std::int64_t level) {
  auto lo = std::lower_bound(pos.begin(), pos.end(), level, std::greater<>());
  auto hi = std::upper_bound(pos.begin(), pos.end(), level, std::greater<>());
  return {std::size_t(lo - pos.begin()), std::size_t(hi - pos.begin())};
}

// n * sum |v| + sum_{i<j} |v_i - v_j| for v sorted non-increasing.
std::int64_t spread_potential(const std::vector<std::int64_t>& v, std::int64_t n) {
  std::int64_t abs_sum = 0;
  std::int64_t pair_sum = 0;
  const std::int64_t m = std::int64_t(v.size());
  for (std::int64_t j = 0; j < m; ++j) {
    abs_sum += std::abs(v[std::size_t(j)]);
    pair_sum += v[std::size_t(j)] * (m - 1 - 2 * j);
  }
  return n * abs_sum + pair_sum;
}

std::vector<std::int64_t> band_values(const StoneState& s, std::int64_t a, std::int64_t l,
                                      std::int64_t n_a) {
  if (n_a < 0 || n_a > s.size()) throw std::invalid_argument("n_a outside [0, n]");
  std::vector<std::int64_t> f(static_cast<std::size_t>(n_a));
  for (std::int64_t i = 0; i < n_a; ++i) f[std::size_t(i)] = f_al(s.positions()[std::size_t(i)], a, l);
  return f;
}

}  // namespace

StoneState::StoneState(std::vector<std::int64_t> positions, std::optional<std::int64_t> checkpoint)
    : positions_(std::move(positions)), checkpoint_(checkpoint) {
  if (positions_.empty()) throw std::invalid_argument("a stone game needs at least one stone");
  if (checkpoint_ && *checkpoint_ < 1) throw std::invalid_argument("checkpoint spacing must be positive");
  std::sort(positions_.begin(), positions_.end(), std::greater<>());
  if (checkpoint_ && positions_.back() < 0)
    throw std::invalid_argument("checkpointed stones cannot sit below 0");
}

StoneState StoneState::zeros(std::int64_t n, std::optional<std::int64_t> checkpoint) {
  if (n < 1) throw std::invalid_argument("a stone game needs at least one stone");
  return StoneState(std::vector<std::int64_t>(std::size_t(n), 0), checkpoint);
}

bool StoneState::is_checkpoint(std::int64_t level) const {
  return checkpoint_ && level >= 0 && level % *checkpoint_ == 0;
}

std::int64_t StoneState::count_at(std::int64_t level) const {
  auto [lo, hi] = level_range(positions_, level);
  return std::int64_t(hi - lo);
}

std::string StoneState::str() const {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < positions_.size(); ++i) out << (i ? "," : "") << positions_[i];
  out << "}";
  if (checkpoint_) out << " l=" << *checkpoint_;
  return out.str();
}

StoneState apply_stone_move(const StoneState& state, const StoneMove& move) {
  if (move.count < 1) throw std::invalid_argument("stone move count must be positive");
  auto pos = state.positions();
  auto [lo, hi] = level_range(pos, move.level);
  if (std::int64_t(hi - lo) < 2 * move.count)
    throw std::invalid_argument("need " + std::to_string(2 * move.count) + " stones at level " +
                                std::to_string(move.level) + ", found " + std::to_string(hi - lo));
  // raised stones stay at the front of the run, lowered ones at the back
  for (std::int64_t i = 0; i < move.count; ++i) ++pos[lo + std::size_t(i)];
  if (!state.is_checkpoint(move.level))
    for (std::int64_t i = 1; i <= move.count; ++i) --pos[hi - std::size_t(i)];
  return StoneState(std::move(pos), state.checkpoint());
}

std::vector<StoneMove> enumerate_valid_moves(const StoneState& state) {
  std::vector<StoneMove> out;
  const auto& pos = state.positions();
  for (std::size_t i = 0; i < pos.size();) {
    std::size_t j = i;
    while (j < pos.size() && pos[j] == pos[i]) ++j;
    if (j - i >= 2) out.push_back({pos[i], std::int64_t(j - i) / 2});
    i = j;
  }
  return out;
}

std::int64_t phi(const StoneState& state) {
  std::int64_t s = 0;
  for (auto x : state.positions()) s += x * x;
  return s;
}

std::int64_t psi(const StoneState& state) { return spread_potential(state.positions(), state.size()); }

std::int64_t f_al(std::int64_t x, std::int64_t a, std::int64_t l) {
  if (a < 0 || l < 1) throw std::invalid_argument("f needs a >= 0 and l >= 1");
  return std::max<std::int64_t>(0, std::min(x - a * l, l));
}

std::int64_t phi_a(const StoneState& state, std::int64_t a, std::int64_t l, std::int64_t n_a) {
  std::int64_t s = 0;
  for (auto f : band_values(state, a, l, n_a)) s += f * f;
  return s;
}

std::int64_t psi_a(const StoneState& state, std::int64_t a, std::int64_t l, std::int64_t n_a) {
  // f is monotone, so the band values are already sorted
  return spread_potential(band_values(state, a, l, n_a), n_a);
}

std::optional<std::int64_t> no_gaps_check(const StoneState& state) {
  const auto& pos = state.positions();
  auto occupied = [&](std::int64_t level) {
    return std::binary_search(pos.begin(), pos.end(), level, std::greater<>());
  };
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i > 0 && pos[i] == pos[i - 1]) continue;
    std::int64_t k = pos[i];
    if (k >= 3 && !occupied(k - 1) && !occupied(k - 2)) return k;
  }
  if (!state.checkpoint()) {
    for (std::size_t i = pos.size(); i-- > 0;) {
      if (i + 1 < pos.size() && pos[i] == pos[i + 1]) continue;
      std::int64_t k = pos[i];
      if (k <= -3 && !occupied(k + 1) && !occupied(k + 2)) return k;
    }
  }
  return std::nullopt;
}

LevelReport level_report(const StoneState& initial, const std::vector<StoneMove>& moves,
                         std::int64_t l) {
  if (l < 1) throw std::invalid_argument("checkpoint spacing must be positive");
  if (initial.checkpoint() && *initial.checkpoint() != l)
    throw std::invalid_argument("trace uses another checkpoint spacing");
  StoneState start(initial.positions(), l);

  StoneState final_state = start;
  for (const auto& m : moves) final_state = apply_stone_move(final_state, m);

  LevelReport report;
  const std::int64_t bands = final_state.max() / l + 1;
  std::vector<std::int64_t> n_a(std::size_t(bands), 0);
  for (auto x : final_state.positions())
    for (std::int64_t a = 0; a <= x / l && a < bands; ++a) ++n_a[std::size_t(a)];
  report.levels.resize(std::size_t(bands));
  for (std::int64_t a = 0; a < bands; ++a) {
    report.levels[std::size_t(a)].band = a;
    report.levels[std::size_t(a)].n_a = n_a[std::size_t(a)];
  }
  auto fail = [&](std::int64_t step, const std::string& what) {
    report.violations.push_back("step " + std::to_string(step) + ": " + what);
  };

  StoneState s = start;
  for (std::size_t t = 0; t < moves.size(); ++t) {
    const auto& m = moves[t];
    const std::int64_t a = m.level / l;
    const std::int64_t step = std::int64_t(t) + 1;
    StoneState next = apply_stone_move(s, m);
    if (m.level < 0 || a >= bands) {
      fail(step, "move at level " + std::to_string(m.level) + " has no band");
      s = std::move(next);
      continue;
    }
    const std::int64_t na = n_a[std::size_t(a)];
    const std::int64_t dphi = phi_a(next, a, l, na) - phi_a(s, a, l, na);
    const std::int64_t dpsi = psi_a(next, a, l, na) - psi_a(s, a, l, na);
    const std::int64_t expected = s.is_checkpoint(m.level) ? m.count : 2 * m.count;
    if (dphi != expected)
      fail(step, "band " + std::to_string(a) + " phi rose by " + std::to_string(dphi) + ", expected " +
                     std::to_string(expected));
    if (2 * dpsi < dphi * dphi)
      fail(step, "band " + std::to_string(a) + " psi rose by " + std::to_string(dpsi) + " < q^2/2 with q = " +
                     std::to_string(dphi));
    for (std::int64_t b : {a - 1, a + 1}) {
      if (b < 0 || b >= bands) continue;
      const std::int64_t nb = n_a[std::size_t(b)];
      if (phi_a(next, b, l, nb) != phi_a(s, b, l, nb) || psi_a(next, b, l, nb) != psi_a(s, b, l, nb))
        fail(step, "move in band " + std::to_string(a) + " changed band " + std::to_string(b));
    }
    auto& st = report.levels[std::size_t(a)];
    ++st.steps;
    st.q_sum += dphi;
    st.q_sq_sum += dphi * dphi;
    st.phi_gain += dphi;
    st.psi_gain += dpsi;
    ++report.total_steps;
    s = std::move(next);
  }

  std::int64_t counted = 0;
  for (auto& st : report.levels) {
    const std::int64_t a = st.band;
    st.final_phi = phi_a(final_state, a, l, st.n_a);
    st.final_psi = psi_a(final_state, a, l, st.n_a);
    counted += st.steps;
    const std::string tag = "band " + std::to_string(a) + ": ";
    if (st.final_phi - phi_a(start, a, l, st.n_a) != st.phi_gain)
      report.violations.push_back(tag + "phi gains do not add up to the final phi");
    if (st.final_phi > st.n_a * l * l) report.violations.push_back(tag + "final phi exceeds n_a l^2");
    if (st.final_psi > 2 * st.n_a * st.n_a * l) report.violations.push_back(tag + "final psi exceeds 2 n_a^2 l");
    if (st.steps > 0) {
      st.cs_bound = Rational(st.q_sum) * Rational(st.q_sum) / Rational(st.q_sq_sum);
      if (i128(st.steps) * st.q_sq_sum < i128(st.q_sum) * st.q_sum)
        report.violations.push_back(tag + "step count below (sum q)^2 / sum q^2");
    }
  }
  if (counted != std::int64_t(moves.size()))
    report.violations.push_back("band step counts do not cover the trace");
  return report;
}

double bound_b_of_t_value(std::int64_t n, double t) {
  if (n < 2 || t < 1) throw std::domain_error("b(t) needs n >= 2 and t >= 1");
  const double lg = std::log2(double(n));
  const double cube = double(n) * double(n) * double(n);
  if (t <= lg) return t;
  if (t <= cube) return std::cbrt(t) * std::pow(std::log2(cube / t + 1), 2.0 / 3.0);
  return double(n);
}

Rational bound_b_of_t(std::int64_t n, std::int64_t t) {
  if (n < 2 || t < 1) throw std::domain_error("b(t) needs n >= 2 and t >= 1");
  if (double(t) <= std::log2(double(n))) return Rational(t);
  if (i128(t) > i128(n) * n * n) return Rational(n);
  return Rational::approximate(bound_b_of_t_value(n, double(t)), std::int64_t(1) << 32);
}

Rational bound_t_of_b(std::int64_t n, std::int64_t b) {
  if (n < 2 || b < 1 || b >= n) throw std::domain_error("t(b) needs n >= 2 and 1 <= b < n");
  const double lg = std::log2(double(n) / double(b));
  const double v = double(b) + std::pow(double(b), 3) / (lg * lg);
  return Rational::approximate(v, std::int64_t(1) << 32);
}

}  // namespace cupgame
