#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cupgame/state.hpp"

namespace cupgame {

struct MoveViolation {
  enum class Kind { BadProcessorCount, WrongLength, AdditionOutOfRange, SumMismatch, WrongSetSize, IndexOutOfRange };
  Kind kind;
  std::string message;
};

class InvalidMove : public std::invalid_argument {
 public:
  explicit InvalidMove(const MoveViolation& v) : std::invalid_argument(v.message), kind(v.kind) {}
  MoveViolation::Kind kind;
};

std::optional<MoveViolation> validate_filler_move(const CupState& state, const FillerMove& move);
std::optional<MoveViolation> validate_emptier_move(const CupState& state, const EmptierMove& move,
                                                   std::int64_t p);

// Post-fill state, re-sorted. Throws InvalidMove.
CupState apply_filler_move(const CupState& state, const FillerMove& move);

// Equivalent move whose post-fill sequence is already non-increasing in index.
FillerMove normalize_filler_move(const CupState& state, const FillerMove& move);

// Removes from each selected cup according to the state's variant.
CupState apply_emptier_move(const CupState& state_after_fill, const EmptierMove& move);
CupState apply_emptier_move(const CupState& state_after_fill, const EmptierMove& move,
                            std::int64_t p);

inline Rational backlog(const CupState& state) { return state.backlog(); }

class FillerStrategy {
 public:
  virtual ~FillerStrategy() = default;
  virtual FillerMove next_move(const CupState& state) = 0;
  // True once the strategy has reached its goal; later moves hold the state.
  virtual bool done() const { return false; }
  virtual std::string name() const = 0;
  virtual GameVariant::Kind intended_variant() const { return GameVariant::Kind::NegativeFill; }
};

class EmptierStrategy {
 public:
  virtual ~EmptierStrategy() = default;
  // `move` is normalized, so `post_fill` index i received move.addition(i).
  virtual EmptierMove choose(const CupState& post_fill, const FillerMove& move) = 0;
  virtual std::string name() const = 0;
  virtual bool is_greedy() const { return false; }
};

struct RoundRecord {
  FillerMove filler_move;
  EmptierMove emptier_move;
  CupState state_after;
  std::int64_t round_index = 0;
};

struct RoundResult {
  CupState state;
  RoundRecord record;
};

RoundResult play_round(const CupState& state, FillerStrategy& filler, EmptierStrategy& emptier,
                       std::int64_t round_index = 1);

enum class RecordLevel { Full, BacklogOnly, Summary };

struct RunOptions {
  RecordLevel record_level = RecordLevel::BacklogOnly;
  std::optional<Rational> stop_at_backlog;
  bool stop_when_filler_done = false;
  // Called after every round with the round number (1-based) and new state.
  std::function<void(std::int64_t, const CupState&)> observer;
};

struct GameTrace {
  CupState initial_state;
  std::vector<RoundRecord> rounds;       // Full only
  std::vector<Rational> backlogs;        // Full and BacklogOnly
  CupState final_state;
  std::int64_t rounds_played = 0;
  Rational max_backlog;
  std::optional<std::uint64_t> seed;
  RecordLevel record_level = RecordLevel::BacklogOnly;
};

GameTrace run_game(const CupState& initial, FillerStrategy& filler, EmptierStrategy& emptier,
                   std::int64_t t, const RunOptions& options = {});

// Re-applies every recorded round; returns the first round whose state
// differs from the recording, or nullopt when the trace is consistent.
std::optional<std::int64_t> replay_mismatch(const GameTrace& trace);

}  // namespace cupgame
