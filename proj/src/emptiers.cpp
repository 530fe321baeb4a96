#include "cupgame/emptiers.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace cupgame {
namespace {

// `need` distinct offsets in [0, len), Floyd's method.
std::vector<std::int64_t> sample_offsets(std::int64_t len, std::int64_t need, Rng& rng) {
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(std::size_t(need) * 2);
  for (std::int64_t j = len - need; j < len; ++j) {
    std::int64_t t = std::int64_t(rng.below(std::uint64_t(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::int64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string TiePolicy::name() const {
  switch (kind) {
    case Kind::LowestIndex:
      return "lowest";
    case Kind::HighestIndex:
      return "highest";
    case Kind::Random:
      return "random";
  }
  return "?";
}

EmptierMove greedy_empty(const CupState& state, std::int64_t p, TiePolicy tie, Rng& rng) {
  if (p < 1 || p > state.size())
    throw std::invalid_argument("greedy emptier asked for " + std::to_string(p) + " of " +
                                std::to_string(state.size()) + " cups");
  std::int64_t start = 0;
  for (const auto& run : state.runs()) {
    if (start + run.count < p) {
      start += run.count;
      continue;
    }
    std::int64_t need = p - start;
    if (need == run.count || tie.kind == TiePolicy::Kind::LowestIndex)
      return EmptierMove::prefix(p);
    std::vector<IndexRange> ranges;
    if (start > 0) ranges.push_back({0, start});
    if (tie.kind == TiePolicy::Kind::HighestIndex) {
      ranges.push_back({start + run.count - need, need});
    } else {
      for (auto off : sample_offsets(run.count, need, rng)) ranges.push_back({start + off, 1});
    }
    return EmptierMove(std::move(ranges));
  }
  throw std::logic_error("unreachable");
}

EmptierMove greedy_empty(const CupState& state, std::int64_t p, TiePolicy tie) {
  Rng rng(tie.seed);
  return greedy_empty(state, p, tie, rng);
}

EmptierMove GreedyEmptier::choose(const CupState& post_fill, const FillerMove& move) {
  return greedy_empty(post_fill, move.p(), tie_, rng_);
}

EmptierMove proportional_sample(const std::vector<Rational>& q, Rng& rng) {
  Rational sum;
  for (const auto& x : q) {
    if (x.sign() < 0 || x > Rational(1))
      throw std::invalid_argument("inclusion probability " + x.str() + " outside [0, 1]");
    sum += x;
  }
  if (!sum.is_integer() || sum.sign() <= 0)
    throw std::invalid_argument("inclusion probabilities must sum to a positive integer, got " +
                                sum.str());
  const std::int64_t p = sum.num();

  // Common denominator; all boundaries are then integers in units of 1/D.
  std::int64_t D = 1;
  bool small = true;
  for (const auto& x : q) {
    if (!x.is_small()) {
      small = false;
      break;
    }
    std::int64_t g = std::gcd(D, x.den());
    __int128 l = (__int128)(D / g) * x.den();
    if (l > (__int128(1) << 62) / std::max<std::int64_t>(p, 1)) {
      small = false;
      break;
    }
    D = std::int64_t(l);
  }

  std::vector<std::int64_t> picked;
  picked.reserve(std::size_t(p));
  if (small) {
    // Points R + kD for k < p, R uniform in [0, D).
    std::int64_t point = std::int64_t(rng.below(std::uint64_t(D)));
    std::int64_t lo = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      std::int64_t hi = lo + q[j].num() * (D / q[j].den());
      if (point < hi) {
        picked.push_back(std::int64_t(j));
        point += D;
      }
      lo = hi;
    }
  } else {
    mpz_class u = static_cast<unsigned long>(rng.next());
    Rational point(mpq_class(u, mpz_class(1) << 64));
    Rational hi;
    for (std::size_t j = 0; j < q.size(); ++j) {
      hi += q[j];
      if (point < hi) {
        picked.push_back(std::int64_t(j));
        point += 1;
      }
    }
  }
  if (std::int64_t(picked.size()) != p)
    throw std::logic_error("interval sampler selected " + std::to_string(picked.size()) +
                           " cups instead of " + std::to_string(p));
  return EmptierMove::from_indices(std::move(picked));
}

EmptierMove proportional_emptier_round(const FillerMove& filler_move, Rng& rng) {
  return proportional_sample(filler_move.additions(), rng);
}

EmptierMove ProportionalEmptier::choose(const CupState&, const FillerMove& move) {
  return proportional_emptier_round(move, rng_);
}

FillerMove wlog_transform(const FillerMove& move, const Rational& epsilon, std::int64_t n) {
  if (epsilon.sign() <= 0 || epsilon > Rational(1, 2))
    throw std::invalid_argument("spreading weight must lie in (0, 1/2], got " + epsilon.str());
  if (move.size() != n) throw std::invalid_argument("move length differs from cup count");
  Rational keep = Rational(1) - epsilon;
  Rational floor_amount = epsilon * Rational(move.p(), n);
  std::vector<Segment> segs;
  segs.reserve(move.segments().size());
  for (const auto& s : move.segments()) segs.push_back({keep * s.value + floor_amount, s.count});
  return FillerMove(move.p(), std::move(segs));
}

}  // namespace cupgame
