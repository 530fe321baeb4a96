#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/stones.hpp"

namespace cupgame {

// Fills listed fullest first. Predicates sort their own copies, so unsorted
// input is accepted wherever a multiset is meant.
using Seq = std::vector<Rational>;

Seq sorted_desc(Seq v);
Seq to_seq(const std::vector<std::int64_t>& v);
Seq scaled(const Seq& v, const Rational& factor);

// nullopt when x majorizes y, otherwise the first failing reason.
std::optional<std::string> majorization_failure(const Seq& x, const Seq& y);
bool majorizes(const Seq& x, const Seq& y);
// Pointwise after sorting. Sums need not match.
bool dominates(const Seq& x, const Seq& y);
bool dominates(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y);

// Moves `amount` from sorted index from_index to the fuller index to_index.
struct Perturbation {
  std::int64_t from_index = 0;
  std::int64_t to_index = 0;
  Rational amount;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

Seq apply_perturbation(Seq y, const Perturbation& step);

// Steps carrying sorted y to sorted x, each amount strictly inside (0, 1).
// Throws std::invalid_argument unless x majorizes y.
std::vector<Perturbation> perturbation_chain(const Seq& x, const Seq& y);

// Labels that turn A into B by taking 1 from A's cup `a_first` and adding c
// to A's cup `a_second`. Indices are sorted positions in each state.
struct MonopolyWitness {
  std::int64_t a_first = 0;
  std::int64_t a_second = 0;
  std::int64_t b_first = 0;
  std::int64_t b_second = 0;
  Rational c;
};

std::optional<MonopolyWitness> monopoly_witness(const CupState& a, const CupState& b);
bool weakly_monopolizes(const CupState& a, const CupState& b);

// A p-processor move on A keeping A ahead of B after B plays move_b.
// Throws std::invalid_argument when A does not weakly monopolize B.
FillerMove transfer_filler_move(const CupState& a, const CupState& b, const FillerMove& move_b);

// An emptier move on B answering `a_move` (greedy on A) so that A's result
// weakly monopolizes B's. States are post-fill.
EmptierMove transfer_emptier_move(const CupState& a, const CupState& b, std::int64_t p,
                                  const EmptierMove& a_move);
EmptierMove transfer_emptier_move(const CupState& a, const CupState& b, std::int64_t p,
                                  TiePolicy tie = TiePolicy::lowest());

// Negative-fill round against greedy: fill, take 1 from the p fullest, sort.
Seq greedy_round(const Seq& y, const FillerMove& move);

// Which branch built each step of a majorization transfer.
enum class TransferStep {
  AllProcessors,     // p = n, the move is kept
  ShiftAdditions,    // part of the perturbation absorbed by the additions
  KeepMove,          // receiving cup sits below the emptied block
  ExtraBelowDonor,   // receiving cup filled, p+1 processors; donor below p+1
  ExtraDonorNext,    // donor is cup p+1 and stays in the emptied block
  ExtraDonorSwapped, // donor is cup p+1 and drops out for its successor
  ExtraDonorInside,  // donor inside the block, cup p+2 stays out
  ExtraDonorPushed,  // donor inside the block and pushed out by cup p+2
  Mirrored,          // solved on the negated sequences
};
std::string step_name(TransferStep step);

// A move on x (possibly with a different p) whose greedy round majorizes the
// greedy round of move_y on y. Sequences must be sorted and x must majorize
// y. Verifies its own result and throws std::logic_error on failure.
FillerMove majorization_transfer(const Seq& x, const Seq& y, const FillerMove& move_y,
                                 std::vector<TransferStep>* log = nullptr);

// Stone move on x so that the result still dominates y after move_y, or
// nullopt when x needs no move. x may be checkpointed.
std::optional<StoneMove> stone_transfer(const StoneState& x, const StoneState& y,
                                        const StoneMove& move_y);

struct StoneCover {
  Rational level;
  std::int64_t count = 0;
};

// x holds even integers, sorted. Returns the level x_p of the round's move and
// how many cups there go up by 2 (and down by 2).
StoneCover stone_cover_move(const Seq& x, const FillerMove& move);
Seq apply_stone_cover(Seq x, const StoneCover& cover);

// additions 1 - a, p' = n - p. A p = n move maps to itself.
FillerMove negate_round(const FillerMove& move, std::int64_t n);
FillerMove reverse_move(const FillerMove& move);
CupState negate_state(const CupState& state);

// Plays the inner strategy on the negated state and mirrors its moves.
class MirrorFiller : public FillerStrategy {
 public:
  explicit MirrorFiller(std::unique_ptr<FillerStrategy> inner) : inner_(std::move(inner)) {}
  FillerMove next_move(const CupState& state) override;
  bool done() const override { return inner_->done(); }
  std::string name() const override { return "mirror/" + inner_->name(); }

 private:
  std::unique_ptr<FillerStrategy> inner_;
};

// Follows a negative-fill game against greedy with a stone shadow s (2s
// majorizes the cups) and a checkpointed shadow w dominating s.
class ShadowTracker {
 public:
  ShadowTracker(std::int64_t n, std::int64_t spacing);

  // `move` as played on cups_before, cups_after the greedy result.
  void advance(const Seq& cups_before, const FillerMove& move, const Seq& cups_after);

  const StoneState& stones() const { return stones_; }
  const StoneState& checkpointed() const { return checkpointed_; }
  const std::vector<StoneMove>& checkpointed_moves() const { return checkpointed_moves_; }
  const std::vector<std::string>& violations() const { return violations_; }
  std::int64_t rounds() const { return rounds_; }
  std::int64_t transfer_steps() const { return transfer_steps_; }

 private:
  void fail(const std::string& what);

  StoneState stones_;
  StoneState checkpointed_;
  std::vector<StoneMove> checkpointed_moves_;
  std::vector<std::string> violations_;
  std::int64_t rounds_ = 0;
  std::int64_t transfer_steps_ = 0;
};

}  // namespace cupgame
