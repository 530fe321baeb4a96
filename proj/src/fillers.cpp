#include "cupgame/fillers.hpp"

#include <algorithm>
#include <stdexcept>

namespace cupgame {
namespace {

bool half_integral(const Rational& x) { return (x * 2).is_integer(); }

}  // namespace

FillerMove hold_state_move(std::int64_t n) { return FillerMove(n, {{Rational(1), n}}); }

FillerMove skip_move(std::int64_t n, std::int64_t i) {
  if (i < 1 || i > n) throw std::invalid_argument("skip round needs 1 <= p <= n");
  return FillerMove(i, {{Rational(1), i}, {Rational(0), n - i}});
}

WarmupStep warmup_move(const CupState& state) {
  if (state.variant().kind != GameVariant::Kind::Standard)
    throw std::invalid_argument("warmup filler plays the standard game");
  std::int64_t start = 0;
  for (const auto& run : state.runs()) {
    if (!half_integral(run.value))
      throw std::invalid_argument("warmup filler needs half-integer fills, saw " + run.value.str());
  }
  for (const auto& run : state.runs()) {
    if (run.count >= 2) {
      const std::int64_t n = state.size();
      return {FillerMove(start + 1, {{Rational(1), start}, {Rational(1, 2), 2}, {Rational(0), n - start - 2}})};
    }
    start += run.count;
  }
  return {};
}

FillerMove WarmupFiller::next_move(const CupState& state) {
  if (!done_) {
    WarmupStep step = warmup_move(state);
    if (step.move) return *step.move;
    done_ = true;
  }
  return hold_state_move(state.size());
}

FillerMove flat_split_move(const CupState& state, const Rational& level, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("split count must be positive");
  std::int64_t first = state.first_index_of(level);
  std::int64_t have = first < 0 ? 0 : state.count_at(level);
  if (have < 2 * q)
    throw std::invalid_argument("need " + std::to_string(2 * q) + " cups at level " + level.str() +
                                ", found " + std::to_string(have));
  const std::int64_t n = state.size();
  return FillerMove(first + q,
                    {{Rational(1), first}, {Rational(1, 2), 2 * q}, {Rational(0), n - first - 2 * q}});
}

BlockSplitter::BlockSplitter(Rational base, std::int64_t k, std::int64_t m)
    : base_(std::move(base)), k_(k), m_(m) {
  if (k < 1 || m < 1) throw std::invalid_argument("block spreading needs k >= 1 and m >= 1");
  if (m % (4 * k) != 0)
    throw std::invalid_argument(std::to_string(4 * k) + " does not divide block size " +
                                std::to_string(m));
  q_ = m / (4 * k);
  counts_.assign(std::size_t(2 * k + 1), 0);
  counts_[std::size_t(k)] = m;
}

std::optional<std::int64_t> BlockSplitter::pick_level() const {
  if (pending_) return pending_;
  for (std::int64_t d = 0; d < k_; ++d) {
    if (count(d) >= 2 * q_) return d;
    if (count(-d) >= 2 * q_) return -d;
  }
  return std::nullopt;
}

bool BlockSplitter::finished() const { return !pick_level().has_value(); }

std::optional<FillerMove> BlockSplitter::next(const CupState& state) {
  auto j = pick_level();
  if (!j) return std::nullopt;
  Rational lvl = level(*j);
  if (state.count_at(lvl) < 2 * q_)
    throw ModelDrift("block expects " + std::to_string(count(*j)) + " cups at " + lvl.str() +
                     " but the state has " + std::to_string(state.count_at(lvl)));
  FillerMove move = flat_split_move(state, lvl, q_);
  counts_[std::size_t(*j + k_)] -= 2 * q_;
  counts_[std::size_t(*j + 1 + k_)] += q_;
  counts_[std::size_t(*j - 1 + k_)] += q_;
  if (pending_)
    pending_.reset();
  else if (*j != 0)
    pending_ = -*j;
  ++steps_;
  return move;
}

Rational BlockSplitter::phi() const {
  Rational sum;
  for (std::int64_t j = -k_; j <= k_; ++j) sum += Rational(count(j) * j * j, 4);
  return sum;
}

std::optional<std::string> BlockSplitter::check_invariants(const CupState& state) const {
  for (const auto& run : state.runs())
    if (!half_integral(run.value)) return "fill " + run.value.str() + " is not a half-integer";
  std::int64_t total = 0;
  for (std::int64_t j = -k_; j <= k_; ++j) {
    std::int64_t c = count(j);
    total += c;
    if (c % q_ != 0)
      return "level " + level(j).str() + " holds " + std::to_string(c) + " block cups, not a multiple of " +
             std::to_string(q_);
    if (!pending_ && c != count(-j))
      return "levels " + level(j).str() + " and " + level(-j).str() + " are unbalanced";
    if (c > 0 && state.count_at(level(j)) < c)
      return "state lost block cups at level " + level(j).str();
  }
  if (total != m_) return "block size changed";
  return std::nullopt;
}

ForceUpwardResult force_upward(const CupState& state, const Rational& base, std::int64_t k,
                               std::int64_t m, TiePolicy tie) {
  if (state.variant().kind != GameVariant::Kind::NegativeFill)
    throw std::invalid_argument("upward phase is planned for the negative-fill game");
  if (k < 1 || m < 1 || m % (4 * k) != 0)
    throw std::invalid_argument(std::to_string(4 * k) + " does not divide block size " +
                                std::to_string(m));
  if (state.count_at(base) < m)
    throw std::invalid_argument("need " + std::to_string(m) + " cups at " + base.str() + ", found " +
                                std::to_string(state.count_at(base)));
  BlockSplitter block(base, k, m);
  GreedyEmptier emptier(tie);
  ForceUpwardResult result;
  CupState s = state;
  while (auto move = block.next(s)) {
    FillerMove norm = normalize_filler_move(s, *move);
    CupState post = apply_filler_move(s, norm);
    s = apply_emptier_move(post, emptier.choose(post, norm), norm.p());
    result.moves.push_back(std::move(*move));
  }
  result.top_count = s.count_at(base + Rational(k, 2));
  result.final_state = std::move(s);
  return result;
}

FillerMove opportunistic_split_move(const CupState& state) {
  for (const auto& run : state.runs())
    if (run.count >= 2) return flat_split_move(state, run.value, run.count / 2);
  return hold_state_move(state.size());
}

ChangeLimitedFiller::ChangeLimitedFiller(std::unique_ptr<FillerStrategy> inner, std::int64_t gap)
    : inner_(std::move(inner)), gap_(gap) {
  if (gap < 1) throw std::invalid_argument("gap must be at least 1");
}

FillerMove ChangeLimitedFiller::next_move(const CupState& state) {
  const std::int64_t n = state.size();
  if (!queue_.empty()) {
    std::int64_t p = queue_.front();
    queue_.pop_front();
    last_p_ = p;
    return skip_move(n, p);
  }
  if (pending_) {
    FillerMove move = std::move(*pending_);
    pending_.reset();
    last_p_ = move.p();
    return move;
  }
  FillerMove move = inner_->next_move(state);
  const std::int64_t target = move.p();
  if (!last_p_) {
    for (std::int64_t g = 0; g < gap_; ++g) queue_.push_back(target);
  } else if (target != *last_p_) {
    std::int64_t step = target > *last_p_ ? 1 : -1;
    for (std::int64_t i = *last_p_ + step;; i += step) {
      for (std::int64_t g = 0; g < gap_; ++g) queue_.push_back(i);
      if (i == target) break;
    }
  }
  if (queue_.empty()) {
    last_p_ = target;
    return move;
  }
  pending_ = std::move(move);
  return next_move(state);
}

RandomFiller::RandomFiller(std::int64_t n, std::uint64_t seed, Rational grid)
    : n_(n), grid_(std::move(grid)), rng_(seed) {
  Rational steps = Rational(1) / grid_;
  if (grid_.sign() <= 0 || !steps.is_integer() || n < 1)
    throw std::invalid_argument("random filler needs n >= 1 and grid 1/m");
  units_ = steps.num();
}

FillerMove RandomFiller::next_move(const CupState& state) {
  if (state.size() != n_) throw std::invalid_argument("random filler built for another cup count");
  const std::int64_t p = rng_.between(1, n_);
  // scatter whichever of water or empty space is scarcer
  const bool holes = 2 * p > n_;
  std::int64_t remaining = (holes ? n_ - p : p) * units_;
  std::vector<std::int64_t> u(std::size_t(n_), 0);
  while (remaining > 0) {
    auto i = std::size_t(rng_.below(std::uint64_t(n_)));
    if (u[i] == units_) continue;
    ++u[i];
    --remaining;
  }
  std::vector<Rational> adds(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < adds.size(); ++i)
    adds[i] = grid_ * (holes ? units_ - u[i] : u[i]);
  return FillerMove::dense(p, adds);
}

SpreadFiller::SpreadFiller(std::unique_ptr<FillerStrategy> inner, Rational epsilon)
    : inner_(std::move(inner)), epsilon_(std::move(epsilon)) {
  if (epsilon_.sign() <= 0 || epsilon_ > Rational(1, 2))
    throw std::invalid_argument("spreading weight must lie in (0, 1/2]");
}

FillerMove SpreadFiller::next_move(const CupState& state) {
  return wlog_transform(inner_->next_move(state), epsilon_, state.size());
}

}  // namespace cupgame
