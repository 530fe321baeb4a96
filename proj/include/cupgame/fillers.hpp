#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/random.hpp"

namespace cupgame {

// p = n with one unit per cup; a no-op against greedy.
FillerMove hold_state_move(std::int64_t n);

// p = i with one unit on each of the i fullest cups; a no-op against greedy.
FillerMove skip_move(std::int64_t n, std::int64_t i);

class HoldStateFiller : public FillerStrategy {
 public:
  FillerMove next_move(const CupState& state) override { return hold_state_move(state.size()); }
  std::string name() const override { return "hold"; }
};

struct WarmupStep {
  std::optional<FillerMove> move;  // empty when the fills are strictly decreasing
  bool done() const { return !move.has_value(); }
};

// Splits the first pair of equal cups while topping up every fuller cup.
// Standard game, half-integer fills.
WarmupStep warmup_move(const CupState& state);

class WarmupFiller : public FillerStrategy {
 public:
  FillerMove next_move(const CupState& state) override;
  bool done() const override { return done_; }
  std::string name() const override { return "warmup"; }
  GameVariant::Kind intended_variant() const override { return GameVariant::Kind::Standard; }

 private:
  bool done_ = false;
};

// Moves q of the cups at `level` up by 1/2 and q down by 1/2 against greedy
// in the negative-fill game.
FillerMove flat_split_move(const CupState& state, const Rational& level, std::int64_t q);

class ModelDrift : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spreads a block of m cups sitting at `base` until no level strictly inside
// (base - k/2, base + k/2) holds 2q = m/(2k) of them. Block contents are
// tracked as counts per half-unit level offset j in [-k, k].
class BlockSplitter {
 public:
  BlockSplitter(Rational base, std::int64_t k, std::int64_t m);

  // Next split, or nullopt when the phase is over. Throws ModelDrift when
  // the state no longer holds the tracked block.
  std::optional<FillerMove> next(const CupState& state);

  bool finished() const;
  bool mid_pair() const { return pending_.has_value(); }
  const Rational& base() const { return base_; }
  std::int64_t k() const { return k_; }
  std::int64_t m() const { return m_; }
  std::int64_t q() const { return q_; }
  std::int64_t steps() const { return steps_; }
  std::int64_t count(std::int64_t j) const { return counts_[std::size_t(j + k_)]; }
  Rational level(std::int64_t j) const { return base_ + Rational(j, 2); }
  // Sum over the block of (fill - base)^2.
  Rational phi() const;
  // Nonempty description when an invariant of the spreading process fails.
  std::optional<std::string> check_invariants(const CupState& state) const;

 private:
  std::optional<std::int64_t> pick_level() const;

  Rational base_;
  std::int64_t k_;
  std::int64_t m_;
  std::int64_t q_;
  std::vector<std::int64_t> counts_;
  std::optional<std::int64_t> pending_;
  std::int64_t steps_ = 0;
};

struct ForceUpwardResult {
  std::vector<FillerMove> moves;
  CupState final_state;
  std::int64_t top_count = 0;  // cups at base + k/2 at the end
};

// Plays a whole spreading phase against greedy in the negative-fill game.
ForceUpwardResult force_upward(const CupState& state, const Rational& base, std::int64_t k,
                               std::int64_t m, TiePolicy tie = TiePolicy::lowest());

class InfeasiblePlan : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const Rational kDefaultPlanConstant = Rational(1, 6);

struct MainFillerPlan {
  enum class Branch { Amplify, Halving };
  Branch branch = Branch::Amplify;
  std::int64_t n = 0;
  std::int64_t k = 0;
  Rational c;
  std::int64_t k_prime = 0;
  std::int64_t h = 0;        // ceil(log2(n / k))
  std::int64_t n_prime = 0;  // k' * 4^r, or 2^k on the halving branch
  std::int64_t r = 0;
  std::vector<std::int64_t> phase_cups;  // block size per phase after divisibility repair
  Rational guaranteed_backlog;
  std::int64_t round_bound = 0;  // 8 r k'^3, or k on the halving branch

  std::string describe() const;
};

MainFillerPlan plan_main_filler(std::int64_t n, std::int64_t k,
                                const Rational& c = kDefaultPlanConstant);
MainFillerPlan plan_binary_halving(std::int64_t n, std::int64_t k);

// Negative-fill lower-bound filler: chained spreading phases (or binary
// halving for tiny k), then hold forever. If the observed state stops
// matching the plan (another game variant or a non-greedy emptier) it keeps
// splitting the fullest level that holds two or more cups.
class MainFiller : public FillerStrategy {
 public:
  explicit MainFiller(MainFillerPlan plan);
  MainFiller(std::int64_t n, std::int64_t k, const Rational& c = kDefaultPlanConstant)
      : MainFiller(plan_main_filler(n, k, c)) {}

  FillerMove next_move(const CupState& state) override;
  bool done() const override { return done_; }
  std::string name() const override { return "main"; }

  const MainFillerPlan& plan() const { return plan_; }
  std::int64_t phase() const { return phase_; }
  std::int64_t planned_rounds() const { return planned_rounds_; }
  bool drifted() const { return drifted_; }
  const BlockSplitter* block() const { return block_ ? &*block_ : nullptr; }

 private:
  std::optional<FillerMove> planned_move(const CupState& state);

  MainFillerPlan plan_;
  std::optional<BlockSplitter> block_;
  std::int64_t phase_ = 0;
  std::int64_t planned_rounds_ = 0;
  bool done_ = false;
  bool drifted_ = false;
};

// Fullest level holding at least two cups, split in half; hold if none.
FillerMove opportunistic_split_move(const CupState& state);

// Ramps p by one unit at a time, holding each value for `gap` rounds, so the
// processor count only changes slowly. Ramp rounds are greedy no-ops.
class ChangeLimitedFiller : public FillerStrategy {
 public:
  ChangeLimitedFiller(std::unique_ptr<FillerStrategy> inner, std::int64_t gap);

  FillerMove next_move(const CupState& state) override;
  bool done() const override { return queue_.empty() && !pending_ && inner_->done(); }
  std::string name() const override { return "change_limited(" + inner_->name() + ")"; }
  GameVariant::Kind intended_variant() const override { return inner_->intended_variant(); }
  const FillerStrategy& inner() const { return *inner_; }

 private:
  std::unique_ptr<FillerStrategy> inner_;
  std::int64_t gap_;
  std::optional<std::int64_t> last_p_;
  std::deque<std::int64_t> queue_;  // processor counts of pending ramp rounds
  std::optional<FillerMove> pending_;
};

class RandomFiller : public FillerStrategy {
 public:
  RandomFiller(std::int64_t n, std::uint64_t seed, Rational grid = Rational(1, 2));
  FillerMove next_move(const CupState& state) override;
  std::string name() const override { return "random"; }
  GameVariant::Kind intended_variant() const override { return GameVariant::Kind::Standard; }

 private:
  std::int64_t n_;
  std::int64_t units_;
  Rational grid_;
  Rng rng_;
};

// Applies wlog_transform to every move of the inner strategy.
class SpreadFiller : public FillerStrategy {
 public:
  SpreadFiller(std::unique_ptr<FillerStrategy> inner, Rational epsilon);
  FillerMove next_move(const CupState& state) override;
  bool done() const override { return inner_->done(); }
  std::string name() const override { return "spread(" + inner_->name() + ")"; }
  GameVariant::Kind intended_variant() const override { return inner_->intended_variant(); }

 private:
  std::unique_ptr<FillerStrategy> inner_;
  Rational epsilon_;
};

}  // namespace cupgame
