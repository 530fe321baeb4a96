#include "cupgame/order.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "cupgame/fillers.hpp"

namespace cupgame {
namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b)
    throw std::invalid_argument("sequence lengths differ: " + std::to_string(a) + " vs " + std::to_string(b));
}

bool is_sorted_desc(const Seq& v) { return std::is_sorted(v.begin(), v.end(), std::greater<>()); }

// b minus the multiset `rest` (both sorted desc), or nullopt when rest is not
// contained in b.
std::optional<Seq> multiset_minus(const Seq& b, const Seq& rest) {
  Seq left;
  std::size_t i = 0;
  for (const auto& v : b) {
    if (i < rest.size() && rest[i] == v) {
      ++i;
      continue;
    }
    if (i < rest.size() && rest[i] > v) return std::nullopt;
    left.push_back(v);
  }
  if (i != rest.size()) return std::nullopt;
  return left;
}

std::int64_t first_index(const Seq& v, const Rational& value) {
  auto it = std::lower_bound(v.begin(), v.end(), value, std::greater<>());
  if (it == v.end() || *it != value) throw std::logic_error("value " + value.str() + " not present");
  return std::int64_t(it - v.begin());
}

// Indices of v holding `value`, in order.
std::pair<std::int64_t, std::int64_t> value_range(const Seq& v, const Rational& value) {
  auto lo = std::lower_bound(v.begin(), v.end(), value, std::greater<>());
  auto hi = std::upper_bound(v.begin(), v.end(), value, std::greater<>());
  return {std::int64_t(lo - v.begin()), std::int64_t(hi - v.begin())};
}

struct Labels {
  std::int64_t a1, a2, b1, b2;
  std::vector<std::int64_t> rest_a, rest_b;  // matched in order
};

Labels make_labels(std::int64_t n, std::int64_t a1, std::int64_t a2, std::int64_t b1, std::int64_t b2) {
  Labels l{a1, a2, b1, b2, {}, {}};
  for (std::int64_t i = 0; i < n; ++i) {
    if (i != a1 && i != a2) l.rest_a.push_back(i);
    if (i != b1 && i != b2) l.rest_b.push_back(i);
  }
  return l;
}

// B's indices for the two changed cups; when they share a value take two
// different positions.
std::pair<std::int64_t, std::int64_t> b_indices(const Seq& b, const Rational& b1v, const Rational& b2v) {
  std::int64_t j1 = first_index(b, b1v);
  std::int64_t j2 = first_index(b, b2v);
  if (j1 == j2) ++j2;
  return {j1, j2};
}

void check_move_shape(const Seq& y, const FillerMove& move) {
  if (move.size() != std::int64_t(y.size()))
    throw std::invalid_argument("move has " + std::to_string(move.size()) + " cups, state has " +
                                std::to_string(y.size()));
}

// Additions re-ordered so that y + a is non-increasing in index.
Seq normalized_additions(const Seq& y, const Seq& add) {
  Seq v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v[i] = y[i] + add[i];
  std::sort(v.begin(), v.end(), std::greater<>());
  Seq out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = v[i] - y[i];
    if (out[i].sign() < 0 || out[i] > Rational(1))
      throw std::logic_error("normalizing left addition " + out[i].str() + " at " + std::to_string(i));
  }
  return out;
}

Seq greedy_dense(const Seq& y, const Seq& add, std::int64_t p) {
  Seq v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v[i] = y[i] + add[i];
  std::sort(v.begin(), v.end(), std::greater<>());
  for (std::int64_t i = 0; i < p; ++i) v[std::size_t(i)] -= 1;
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

struct DenseMove {
  Seq add;
  std::int64_t p = 0;
};

void note(std::vector<TransferStep>* log, TransferStep s) {
  if (log) log->push_back(s);
}

// Receiving cup j gets nothing: keep the move, or fill j and add a processor.
DenseMove keep_or_extend(const Seq& y, std::int64_t j, std::int64_t k, const Rational& eps, DenseMove m,
                         std::vector<TransferStep>* log) {
  const std::int64_t n = std::int64_t(y.size());
  if (m.p <= j) {
    note(log, TransferStep::KeepMove);
    return m;
  }
  auto v = [&](std::int64_t i) { return y[std::size_t(i)] + m.add[std::size_t(i)]; };
  TransferStep s;
  if (m.p < k) {
    s = TransferStep::ExtraBelowDonor;
  } else if (m.p == k) {
    s = (k == n - 1 || v(k) - eps >= v(k + 1)) ? TransferStep::ExtraDonorNext : TransferStep::ExtraDonorSwapped;
  } else {
    s = (m.p == n - 1 || v(k) - eps >= v(m.p + 1)) ? TransferStep::ExtraDonorInside
                                                 : TransferStep::ExtraDonorPushed;
  }
  note(log, s);
  m.add[std::size_t(j)] = 1;
  ++m.p;
  return m;
}

// y sorted, x = y with +eps at j and -eps at k (j < k), m normalized on y.
// Returns a move on x.
DenseMove single_transfer(Seq y, std::int64_t j, std::int64_t k, Rational eps, DenseMove m,
                          std::vector<TransferStep>* log) {
  const std::int64_t n = std::int64_t(y.size());
  if (m.p == n) {
    note(log, TransferStep::AllProcessors);
    return m;
  }
  auto& aj = m.add[std::size_t(j)];
  auto& ak = m.add[std::size_t(k)];
  if (aj.sign() > 0 && ak < Rational(1)) {
    Rational shift = std::min({aj, Rational(1) - ak, eps});
    aj -= shift;
    ak += shift;
    y[std::size_t(j)] += shift;
    y[std::size_t(k)] -= shift;
    eps -= shift;
    note(log, TransferStep::ShiftAdditions);
    if (eps.is_zero()) return m;
  }
  if (aj.is_zero()) return keep_or_extend(y, j, k, eps, std::move(m), log);
  if (ak != Rational(1)) throw std::logic_error("majorization transfer: no branch applies");

  note(log, TransferStep::Mirrored);
  DenseMove neg{Seq(std::size_t(n)), n - m.p};
  Seq ny(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    ny[std::size_t(i)] = -y[std::size_t(n - 1 - i)];
    neg.add[std::size_t(i)] = Rational(1) - m.add[std::size_t(n - 1 - i)];
  }
  DenseMove solved = keep_or_extend(ny, n - 1 - k, n - 1 - j, eps, std::move(neg), log);
  DenseMove out{Seq(std::size_t(n)), n - solved.p};
  if (out.p == 0) return {Seq(std::size_t(n), Rational(1)), n};
  for (std::int64_t i = 0; i < n; ++i)
    out.add[std::size_t(i)] = Rational(1) - solved.add[std::size_t(n - 1 - i)];
  return out;
}

}  // namespace

Seq sorted_desc(Seq v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

Seq to_seq(const std::vector<std::int64_t>& v) { return Seq(v.begin(), v.end()); }

Seq scaled(const Seq& v, const Rational& factor) {
  Seq out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x * factor);
  return out;
}

std::optional<std::string> majorization_failure(const Seq& x, const Seq& y) {
  require_same_length(x.size(), y.size());
  Seq xs = sorted_desc(x), ys = sorted_desc(y);
  Rational sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    if (sx < sy && i + 1 < xs.size())
      return "prefix " + std::to_string(i + 1) + " sums to " + sx.str() + " < " + sy.str();
  }
  if (sx != sy) return "totals differ: " + sx.str() + " vs " + sy.str();
  return std::nullopt;
}

bool majorizes(const Seq& x, const Seq& y) { return !majorization_failure(x, y); }

bool dominates(const Seq& x, const Seq& y) {
  require_same_length(x.size(), y.size());
  Seq xs = sorted_desc(x), ys = sorted_desc(y);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] < ys[i]) return false;
  return true;
}

bool dominates(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
  require_same_length(x.size(), y.size());
  auto xs = x, ys = y;
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] < ys[i]) return false;
  return true;
}

Seq apply_perturbation(Seq y, const Perturbation& step) {
  if (step.from_index < 0 || step.to_index < 0 || step.from_index >= std::int64_t(y.size()) ||
      step.to_index >= std::int64_t(y.size()))
    throw std::invalid_argument("perturbation index out of range");
  y[std::size_t(step.to_index)] += step.amount;
  y[std::size_t(step.from_index)] -= step.amount;
  return y;
}

std::vector<Perturbation> perturbation_chain(const Seq& x, const Seq& y) {
  if (auto why = majorization_failure(x, y)) throw std::invalid_argument("not majorized: " + *why);
  const Seq xs = sorted_desc(x);
  Seq cur = sorted_desc(y);
  const std::size_t n = xs.size();
  std::vector<Perturbation> chain;
  // Each pass closes a coordinate gap or a zero of the prefix lead, so at
  // most 3n passes.
  for (;;) {
    std::size_t j = 0;
    while (j < n && xs[j] == cur[j]) ++j;
    if (j == n) break;
    // lead[m] = sum_{i<=m} (x_i - cur_i); the block ends at its next zero
    std::vector<Rational> lead(n);
    Rational run;
    for (std::size_t m = 0; m < n; ++m) lead[m] = run += xs[m] - cur[m];
    std::size_t end = j;
    while (!lead[end].is_zero()) ++end;
    std::size_t k = end;
    while (!(cur[k] > xs[k])) --k;
    Rational delta = std::min(xs[j] - cur[j], cur[k] - xs[k]);
    for (std::size_t m = j; m < k; ++m) delta = std::min(delta, lead[m]);
    if (delta.sign() <= 0) throw std::logic_error("perturbation chain stalled");
    std::int64_t pieces = delta.floor_int() + 1;
    Rational eps = delta / Rational(pieces);
    for (std::int64_t i = 0; i < pieces; ++i) chain.push_back({std::int64_t(k), std::int64_t(j), eps});
    cur[j] += delta;
    cur[k] -= delta;
  }
  return chain;
}

std::optional<MonopolyWitness> monopoly_witness(const CupState& a_state, const CupState& b_state) {
  if (a_state.size() != b_state.size()) throw std::invalid_argument("states have different cup counts");
  const Seq a = a_state.fills(), b = b_state.fills();
  const std::int64_t n = std::int64_t(a.size());
  if (n < 2) return std::nullopt;
  std::vector<std::int64_t> starts;
  for (std::int64_t i = 0; i < n; ++i)
    if (i == 0 || a[std::size_t(i)] != a[std::size_t(i - 1)]) starts.push_back(i);
  for (std::size_t u = 0; u < starts.size(); ++u) {
    for (std::size_t w = u + 1; w < starts.size(); ++w) {
      const std::int64_t i1 = starts[u], i2 = starts[w];
      const Rational& a1 = a[std::size_t(i1)];
      const Rational& a2 = a[std::size_t(i2)];
      Seq rest;
      for (std::int64_t i = 0; i < n; ++i)
        if (i != i1 && i != i2) rest.push_back(a[std::size_t(i)]);
      auto left = multiset_minus(b, rest);
      if (!left || left->size() != 2) continue;
      for (int flip = 0; flip < 2; ++flip) {
        const Rational& b1 = (*left)[std::size_t(flip)];
        const Rational& b2 = (*left)[std::size_t(1 - flip)];
        Rational c = b2 - a2;
        if (b1 != a1 - 1 || c.sign() < 0 || c > Rational(1) || !(a1 > b2)) continue;
        auto [j1, j2] = b_indices(b, b1, b2);
        return MonopolyWitness{i1, i2, j1, j2, c};
      }
    }
  }
  return std::nullopt;
}

bool weakly_monopolizes(const CupState& a, const CupState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("states have different cup counts");
  return dominates(a.fills(), b.fills()) || monopoly_witness(a, b).has_value();
}

FillerMove transfer_filler_move(const CupState& a_state, const CupState& b_state, const FillerMove& move_b) {
  if (a_state.size() != b_state.size()) throw std::invalid_argument("states have different cup counts");
  if (auto v = validate_filler_move(b_state, move_b)) throw InvalidMove(*v);
  if (dominates(a_state.fills(), b_state.fills())) return move_b;
  auto w = monopoly_witness(a_state, b_state);
  if (!w) throw std::invalid_argument("A does not weakly monopolize B");
  const std::int64_t n = a_state.size();
  const Seq a = a_state.fills(), b = b_state.fills(), add_b = move_b.additions();
  Labels l = make_labels(n, w->a_first, w->a_second, w->b_first, w->b_second);
  Seq add(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < l.rest_a.size(); ++t) add[std::size_t(l.rest_a[t])] = add_b[std::size_t(l.rest_b[t])];
  const Rational& r = add_b[std::size_t(l.b1)];
  const Rational& into_second = add_b[std::size_t(l.b2)];
  const Rational& a1 = a[std::size_t(l.a1)];
  const Rational& b2 = b[std::size_t(l.b2)];
  if (a1 + r > b2 + into_second) {
    add[std::size_t(l.a1)] = r;
    add[std::size_t(l.a2)] = into_second;
  } else {
    Rational q = a1 - b2;
    Rational s = into_second - r - q;
    add[std::size_t(l.a1)] = r + s;
    add[std::size_t(l.a2)] = q + r;
  }
  return FillerMove::dense(move_b.p(), add);
}

EmptierMove transfer_emptier_move(const CupState& a_state, const CupState& b_state, std::int64_t p,
                                  const EmptierMove& a_move) {
  if (a_state.size() != b_state.size()) throw std::invalid_argument("states have different cup counts");
  if (a_move.size() != p) throw std::invalid_argument("A's emptier move does not use p cups");
  if (dominates(a_state.fills(), b_state.fills())) return EmptierMove::prefix(p);
  auto w = monopoly_witness(a_state, b_state);
  if (!w) throw std::invalid_argument("A does not weakly monopolize B");
  const std::int64_t n = a_state.size();
  const Seq a = a_state.fills();

  // among tied cups, label a selected one as cup 1 and an unselected one as cup 2
  auto pick = [&](std::int64_t start, bool want_selected) {
    auto [lo, hi] = value_range(a, a[std::size_t(start)]);
    for (std::int64_t i = lo; i < hi; ++i)
      if (a_move.contains(i) == want_selected) return i;
    return lo;
  };
  const std::int64_t i1 = pick(w->a_first, true);
  const std::int64_t i2 = pick(w->a_second, false);
  Labels l = make_labels(n, i1, i2, w->b_first, w->b_second);
  const bool first = a_move.contains(i1), second = a_move.contains(i2);
  if (second && !first) throw std::logic_error("greedy emptied the lower labelled cup only");

  std::vector<std::int64_t> chosen;
  for (std::size_t t = 0; t < l.rest_a.size(); ++t)
    if (a_move.contains(l.rest_a[t])) chosen.push_back(l.rest_b[t]);
  if (first && second) {
    chosen.push_back(l.b1);
    chosen.push_back(l.b2);
  } else if (first) {
    chosen.push_back(l.b2);
  }
  std::sort(chosen.begin(), chosen.end());
  return EmptierMove::from_indices(std::move(chosen));
}

EmptierMove transfer_emptier_move(const CupState& a, const CupState& b, std::int64_t p, TiePolicy tie) {
  return transfer_emptier_move(a, b, p, greedy_empty(a, p, tie));
}

Seq greedy_round(const Seq& y, const FillerMove& move) {
  check_move_shape(y, move);
  return greedy_dense(y, move.additions(), move.p());
}

std::string step_name(TransferStep step) {
  switch (step) {
    case TransferStep::AllProcessors: return "all-processors";
    case TransferStep::ShiftAdditions: return "shift-additions";
    case TransferStep::KeepMove: return "keep-move";
    case TransferStep::ExtraBelowDonor: return "extra/below-donor";
    case TransferStep::ExtraDonorNext: return "extra/donor-next";
    case TransferStep::ExtraDonorSwapped: return "extra/donor-swapped";
    case TransferStep::ExtraDonorInside: return "extra/donor-inside";
    case TransferStep::ExtraDonorPushed: return "extra/donor-pushed";
    case TransferStep::Mirrored: return "mirrored";
  }
  return "?";
}

FillerMove majorization_transfer(const Seq& x, const Seq& y, const FillerMove& move_y,
                                 std::vector<TransferStep>* log) {
  require_same_length(x.size(), y.size());
  check_move_shape(y, move_y);
  if (!is_sorted_desc(x) || !is_sorted_desc(y)) throw std::invalid_argument("sequences must be sorted");
  auto chain = perturbation_chain(x, y);
  const Seq add_y = move_y.additions();
  Seq z = y;
  DenseMove m{normalized_additions(z, add_y), move_y.p()};
  for (const auto& step : chain) {
    m = single_transfer(z, step.to_index, step.from_index, step.amount, std::move(m), log);
    z = apply_perturbation(std::move(z), step);
    m.add = normalized_additions(z, m.add);
  }
  if (z != x) throw std::logic_error("perturbation chain did not reach x");
  Rational total;
  for (const auto& v : m.add) total += v;
  if (total != Rational(m.p) || m.p < 1 || m.p > std::int64_t(x.size()))
    throw std::logic_error("majorization transfer built an invalid move");
  Seq x_after = greedy_dense(x, m.add, m.p);
  Seq y_after = greedy_dense(y, add_y, move_y.p());
  if (auto why = majorization_failure(x_after, y_after))
    throw std::logic_error("majorization transfer lost majorization: " + *why);
  return FillerMove::dense(m.p, m.add);
}

std::optional<StoneMove> stone_transfer(const StoneState& x, const StoneState& y, const StoneMove& move_y) {
  if (x.size() != y.size()) throw std::invalid_argument("stone states have different sizes");
  if (!dominates(x.positions(), y.positions())) throw std::invalid_argument("x does not dominate y");
  const std::int64_t k = move_y.level;
  const auto& ys = y.positions();
  const auto& xs = x.positions();
  auto lo = std::lower_bound(ys.begin(), ys.end(), k, std::greater<>());
  auto hi = std::upper_bound(ys.begin(), ys.end(), k, std::greater<>());
  if (move_y.count < 1 || (hi - lo) < 2 * move_y.count) throw std::invalid_argument("move is not valid on y");
  const std::int64_t p = lo - ys.begin();
  const std::int64_t raised_end = p + move_y.count - 1;
  const std::int64_t r =
      std::lower_bound(xs.begin(), xs.end(), k, std::greater<>()) - xs.begin();  // first x_r <= k
  if (r > raised_end) return std::nullopt;
  return StoneMove{k, raised_end - r + 1};
}

StoneCover stone_cover_move(const Seq& x, const FillerMove& move) {
  check_move_shape(x, move);
  if (!is_sorted_desc(x)) throw std::invalid_argument("sequence must be sorted");
  for (const auto& v : x)
    if (!v.is_integer() || !(v / 2).is_integer()) throw std::invalid_argument("fills must be even integers");
  if (auto v = validate_filler_move(CupState(x, GameVariant::negative_fill()), move)) throw InvalidMove(*v);
  const Rational& k = x[std::size_t(move.p() - 1)];
  auto [q, r] = value_range(x, k);
  return StoneCover{k, (r - q) / 2};
}

Seq apply_stone_cover(Seq x, const StoneCover& cover) {
  if (cover.count == 0) return x;
  auto [q, r] = value_range(x, cover.level);
  if (r - q < 2 * cover.count) throw std::invalid_argument("not enough cups at the cover level");
  for (std::int64_t i = 0; i < cover.count; ++i) {
    x[std::size_t(q + i)] += 2;
    x[std::size_t(r - 1 - i)] -= 2;
  }
  return x;
}

FillerMove negate_round(const FillerMove& move, std::int64_t n) {
  if (move.size() != n) throw std::invalid_argument("move is for another cup count");
  if (move.p() == n) return hold_state_move(n);
  std::vector<Segment> segs;
  for (const auto& s : move.segments()) segs.push_back({Rational(1) - s.value, s.count});
  return FillerMove(n - move.p(), std::move(segs));
}

FillerMove reverse_move(const FillerMove& move) {
  std::vector<Segment> segs(move.segments().rbegin(), move.segments().rend());
  return FillerMove(move.p(), std::move(segs));
}

CupState negate_state(const CupState& state) {
  std::vector<Run> runs;
  for (const auto& r : state.runs()) runs.push_back({-r.value, r.count});
  return CupState::from_runs(std::move(runs), state.variant());
}

FillerMove MirrorFiller::next_move(const CupState& state) {
  FillerMove inner = inner_->next_move(negate_state(state));
  return reverse_move(negate_round(inner, state.size()));
}

ShadowTracker::ShadowTracker(std::int64_t n, std::int64_t spacing)
    : stones_(StoneState::zeros(n)), checkpointed_(StoneState::zeros(n, spacing)) {}

void ShadowTracker::fail(const std::string& what) {
  violations_.push_back("round " + std::to_string(rounds_) + ": " + what);
}

void ShadowTracker::advance(const Seq& cups_before, const FillerMove& move, const Seq& cups_after) {
  ++rounds_;
  try {
    const Seq doubled = scaled(to_seq(stones_.positions()), Rational(2));
    std::vector<TransferStep> steps;
    FillerMove shadow = majorization_transfer(doubled, sorted_desc(cups_before), move, &steps);
    transfer_steps_ += std::int64_t(steps.size());
    StoneCover cover = stone_cover_move(doubled, shadow);
    if (cover.count > 0) {
      StoneMove sm{(cover.level / 2).floor_int(), cover.count};
      StoneState before = stones_;
      stones_ = apply_stone_move(stones_, sm);
      if (auto tm = stone_transfer(checkpointed_, before, sm)) {
        checkpointed_ = apply_stone_move(checkpointed_, *tm);
        checkpointed_moves_.push_back(*tm);
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("transfer failed: ") + e.what());
    return;
  }
  if (auto why = majorization_failure(scaled(to_seq(stones_.positions()), Rational(2)), cups_after))
    fail("2*stones does not majorize the cups: " + *why);
  if (!dominates(checkpointed_.positions(), stones_.positions()))
    fail("checkpointed shadow " + checkpointed_.str() + " does not dominate " + stones_.str());
}

}  // namespace cupgame
