#include "cupgame/engine.hpp"

#include <algorithm>
#include <iterator>

namespace cupgame {
namespace {

// Post-fill values in sorted-index order, one piece per overlap of a run
// and a segment.
std::vector<Run> post_fill_pieces(const CupState& state, const FillerMove& move) {
  std::vector<Run> out;
  const auto& runs = state.runs();
  const auto& segs = move.segments();
  out.reserve(runs.size() + segs.size());
  std::size_t ri = 0;
  std::size_t si = 0;
  std::int64_t r_left = runs.empty() ? 0 : runs[0].count;
  std::int64_t s_left = segs.empty() ? 0 : segs[0].count;
  while (ri < runs.size() && si < segs.size()) {
    std::int64_t len = std::min(r_left, s_left);
    Rational v = runs[ri].value;
    if (!segs[si].value.is_zero()) v += segs[si].value;
    if (!out.empty() && out.back().value == v)
      out.back().count += len;
    else
      out.push_back({std::move(v), len});
    r_left -= len;
    s_left -= len;
    if (r_left == 0 && ++ri < runs.size()) r_left = runs[ri].count;
    if (s_left == 0 && ++si < segs.size()) s_left = segs[si].count;
  }
  return out;
}

bool non_increasing(const std::vector<Run>& pieces) {
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (pieces[i - 1].value < pieces[i].value) return false;
  return true;
}

}  // namespace

std::optional<MoveViolation> validate_filler_move(const CupState& state, const FillerMove& move) {
  using K = MoveViolation::Kind;
  const std::int64_t n = state.size();
  if (move.p() < 1 || move.p() > n)
    return MoveViolation{K::BadProcessorCount, "processor count " + std::to_string(move.p()) +
                                                   " outside [1, " + std::to_string(n) + "]"};
  if (move.size() != n)
    return MoveViolation{K::WrongLength, "move addresses " + std::to_string(move.size()) +
                                             " cups but the state has " + std::to_string(n)};
  Rational sum;
  for (const auto& s : move.segments()) {
    if (s.value.sign() < 0 || s.value > Rational(1))
      return MoveViolation{K::AdditionOutOfRange, "addition " + s.value.str() + " outside [0, 1]"};
    sum += s.value * s.count;
  }
  if (sum != Rational(move.p()))
    return MoveViolation{K::SumMismatch, "additions sum to " + sum.str() + " but p = " +
                                             std::to_string(move.p())};
  return std::nullopt;
}

std::optional<MoveViolation> validate_emptier_move(const CupState& state, const EmptierMove& move,
                                                   std::int64_t p) {
  using K = MoveViolation::Kind;
  if (move.size() != p)
    return MoveViolation{K::WrongSetSize, "emptier selected " + std::to_string(move.size()) +
                                              " cups but p = " + std::to_string(p)};
  if (!move.ranges().empty()) {
    const auto& last = move.ranges().back();
    if (last.first + last.count > state.size())
      return MoveViolation{K::IndexOutOfRange, "emptied index beyond cup count"};
  }
  return std::nullopt;
}

CupState apply_filler_move(const CupState& state, const FillerMove& move) {
  if (auto v = validate_filler_move(state, move)) throw InvalidMove(*v);
  return CupState::from_runs(post_fill_pieces(state, move), state.variant());
}


namespace {

// Normalized move and its post-fill state from one pass over the pieces.
struct FillResult {
  FillerMove move;
  CupState post;
};

FillResult fill_and_normalize(const CupState& state, const FillerMove& move) {
  if (auto v = validate_filler_move(state, move)) throw InvalidMove(*v);
  std::vector<Run> pieces = post_fill_pieces(state, move);
  if (non_increasing(pieces)) return {move, CupState::from_runs(std::move(pieces), state.variant())};

  // Repeated neighbour exchanges end at the sorted post-fill sequence, so the
  // result is that sequence minus the current fills.
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Run& a, const Run& b) { return b.value < a.value; });
  std::vector<Segment> segs;
  const auto& runs = state.runs();
  std::size_t ri = 0;
  std::size_t pi = 0;
  std::int64_t r_left = runs[0].count;
  std::int64_t p_left = pieces[0].count;
  while (ri < runs.size() && pi < pieces.size()) {
    std::int64_t len = std::min(r_left, p_left);
    segs.push_back({pieces[pi].value - runs[ri].value, len});
    r_left -= len;
    p_left -= len;
    if (r_left == 0 && ++ri < runs.size()) r_left = runs[ri].count;
    if (p_left == 0 && ++pi < pieces.size()) p_left = pieces[pi].count;
  }
  return {FillerMove(move.p(), std::move(segs)), CupState::from_runs(std::move(pieces), state.variant())};
}

}  // namespace

FillerMove normalize_filler_move(const CupState& state, const FillerMove& move) {
  return fill_and_normalize(state, move).move;
}

CupState apply_emptier_move(const CupState& state_after_fill, const EmptierMove& move) {
  if (!move.ranges().empty()) {
    const auto& last = move.ranges().back();
    if (last.first + last.count > state_after_fill.size())
      throw InvalidMove({MoveViolation::Kind::IndexOutOfRange, "emptied index beyond cup count"});
  }
  const auto& variant = state_after_fill.variant();
  const auto& ranges = move.ranges();
  // Emptied and untouched cups each stay in sorted order; merge the two.
  std::vector<Run> hit;
  std::vector<Run> kept;
  hit.reserve(state_after_fill.runs().size());
  kept.reserve(state_after_fill.runs().size());
  std::int64_t start = 0;
  std::size_t gi = 0;
  for (const auto& run : state_after_fill.runs()) {
    std::int64_t end = start + run.count;
    std::int64_t selected = 0;
    while (gi < ranges.size() && ranges[gi].first + ranges[gi].count <= start) ++gi;
    for (std::size_t g = gi; g < ranges.size() && ranges[g].first < end; ++g) {
      std::int64_t lo = std::max(start, ranges[g].first);
      std::int64_t hi = std::min(end, ranges[g].first + ranges[g].count);
      if (hi > lo) selected += hi - lo;
    }
    if (selected > 0) hit.push_back({variant.emptied(run.value), selected});
    if (run.count > selected) kept.push_back({run.value, run.count - selected});
    start = end;
  }
  std::vector<Run> pieces;
  pieces.reserve(hit.size() + kept.size());
  std::merge(std::make_move_iterator(hit.begin()), std::make_move_iterator(hit.end()),
             std::make_move_iterator(kept.begin()), std::make_move_iterator(kept.end()),
             std::back_inserter(pieces), [](const Run& a, const Run& b) { return b.value < a.value; });
  return CupState::from_runs(std::move(pieces), variant);
}

CupState apply_emptier_move(const CupState& state_after_fill, const EmptierMove& move,
                            std::int64_t p) {
  if (auto v = validate_emptier_move(state_after_fill, move, p)) throw InvalidMove(*v);
  return apply_emptier_move(state_after_fill, move);
}

namespace {

CupState play_round_into(const CupState& state, FillerStrategy& filler, EmptierStrategy& emptier,
                         std::int64_t round_index, RoundRecord* record) {
  FillResult fill = fill_and_normalize(state, filler.next_move(state));
  EmptierMove chosen = emptier.choose(fill.post, fill.move);
  CupState after = apply_emptier_move(fill.post, chosen, fill.move.p());
  if (record) *record = RoundRecord{std::move(fill.move), std::move(chosen), after, round_index};
  return after;
}

}  // namespace

RoundResult play_round(const CupState& state, FillerStrategy& filler, EmptierStrategy& emptier,
                       std::int64_t round_index) {
  RoundResult result;
  result.state = play_round_into(state, filler, emptier, round_index, &result.record);
  return result;
}

GameTrace run_game(const CupState& initial, FillerStrategy& filler, EmptierStrategy& emptier,
                   std::int64_t t, const RunOptions& options) {
  if (t < 0) throw std::invalid_argument("negative round count");
  GameTrace trace;
  trace.initial_state = initial;
  trace.max_backlog = initial.backlog();
  trace.record_level = options.record_level;
  const bool full = options.record_level == RecordLevel::Full;
  CupState state = initial;
  for (std::int64_t i = 1; i <= t; ++i) {
    if (options.stop_when_filler_done && filler.done()) break;
    if (options.stop_at_backlog && !(state.backlog() < *options.stop_at_backlog)) break;
    RoundRecord rec;
    state = play_round_into(state, filler, emptier, i, full ? &rec : nullptr);
    trace.rounds_played = i;
    Rational b = state.backlog();
    if (trace.max_backlog < b) trace.max_backlog = b;
    if (options.record_level != RecordLevel::Summary) trace.backlogs.push_back(b);
    if (full) trace.rounds.push_back(std::move(rec));
    if (options.observer) options.observer(i, state);
  }
  trace.final_state = std::move(state);
  return trace;
}

std::optional<std::int64_t> replay_mismatch(const GameTrace& trace) {
  CupState state = trace.initial_state;
  for (const auto& rec : trace.rounds) {
    CupState post = apply_filler_move(state, rec.filler_move);
    state = apply_emptier_move(post, rec.emptier_move, rec.filler_move.p());
    if (!(state == rec.state_after)) return rec.round_index;
  }
  return std::nullopt;
}

}  // namespace cupgame
