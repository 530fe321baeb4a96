#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cupgame/engine.hpp"
#include "cupgame/random.hpp"

namespace cupgame {

struct TiePolicy {
  enum class Kind { LowestIndex, HighestIndex, Random };
  Kind kind = Kind::LowestIndex;
  std::uint64_t seed = 0;

  static TiePolicy lowest() { return {Kind::LowestIndex, 0}; }
  static TiePolicy highest() { return {Kind::HighestIndex, 0}; }
  static TiePolicy random(std::uint64_t seed) { return {Kind::Random, seed}; }
  std::string name() const;
};

// The p fullest cups of a sorted state. Cups tied with the p-th fullest are
// chosen per policy; a Random policy draws from `rng`.
EmptierMove greedy_empty(const CupState& state_after_fill, std::int64_t p, TiePolicy tie, Rng& rng);
// Random policy seeded from tie.seed.
EmptierMove greedy_empty(const CupState& state_after_fill, std::int64_t p, TiePolicy tie);

class GreedyEmptier : public EmptierStrategy {
 public:
  explicit GreedyEmptier(TiePolicy tie = TiePolicy::lowest()) : tie_(tie), rng_(tie.seed) {}
  EmptierMove choose(const CupState& post_fill, const FillerMove& move) override;
  std::string name() const override { return "greedy/" + tie_.name(); }
  bool is_greedy() const override { return true; }

 private:
  TiePolicy tie_;
  Rng rng_;
};

// Circular-interval sampler: exactly sum(q) distinct indices, index j included
// with probability q[j].
EmptierMove proportional_sample(const std::vector<Rational>& q, Rng& rng);
EmptierMove proportional_emptier_round(const FillerMove& filler_move, Rng& rng);

class ProportionalEmptier : public EmptierStrategy {
 public:
  explicit ProportionalEmptier(std::uint64_t seed) : rng_(seed) {}
  EmptierMove choose(const CupState& post_fill, const FillerMove& move) override;
  std::string name() const override { return "proportional"; }

 private:
  Rng rng_;
};

// (1 - eps) * a_i + eps * p / n for every cup; eps in (0, 1/2].
FillerMove wlog_transform(const FillerMove& move, const Rational& epsilon, std::int64_t n);

struct OracleConfig {
  Rational grid = Rational(1, 2);
  std::int64_t horizon = 0;
  std::int64_t max_nodes = 5'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OracleEmptier { Free, Greedy };

// Exact game value over grid-quantized filler moves: the largest backlog the
// filler can force after `cfg.horizon` rounds.
Rational opt_oracle(const CupState& state, const OracleConfig& cfg,
                    OracleEmptier emptier = OracleEmptier::Free);

struct OracleLine {
  Rational value;
  FillerMove first_move;  // best first filler move; empty when horizon = 0
  std::int64_t nodes = 0;
};
OracleLine opt_oracle_line(const CupState& state, const OracleConfig& cfg, OracleEmptier emptier);

}  // namespace cupgame
