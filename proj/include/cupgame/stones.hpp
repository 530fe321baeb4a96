#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cupgame/rational.hpp"

namespace cupgame {

struct StoneMove {
  std::int64_t level = 0;
  std::int64_t count = 0;  // q

  friend bool operator==(const StoneMove&, const StoneMove&) = default;
};

// Integer stone positions, sorted non-increasing. With a checkpoint spacing
// the state plays the checkpointed game: positions stay >= 0 and stones
// split at a multiple of the spacing do not move down.
class StoneState {
 public:
  StoneState() = default;
  explicit StoneState(std::vector<std::int64_t> positions,
                      std::optional<std::int64_t> checkpoint = std::nullopt);
  static StoneState zeros(std::int64_t n, std::optional<std::int64_t> checkpoint = std::nullopt);

  std::int64_t size() const { return std::int64_t(positions_.size()); }
  const std::vector<std::int64_t>& positions() const { return positions_; }
  const std::optional<std::int64_t>& checkpoint() const { return checkpoint_; }
  bool is_checkpoint(std::int64_t level) const;
  std::int64_t count_at(std::int64_t level) const;
  std::int64_t max() const { return positions_.front(); }
  std::string str() const;

  friend bool operator==(const StoneState&, const StoneState&) = default;

 private:
  std::vector<std::int64_t> positions_;
  std::optional<std::int64_t> checkpoint_;
};

// Throws std::invalid_argument when fewer than 2q stones sit at the level.
StoneState apply_stone_move(const StoneState& state, const StoneMove& move);

// One entry per level holding two or more stones, count = largest legal q.
// Highest level first.
std::vector<StoneMove> enumerate_valid_moves(const StoneState& state);

std::int64_t phi(const StoneState& state);
std::int64_t psi(const StoneState& state);

std::int64_t f_al(std::int64_t x, std::int64_t a, std::int64_t l);
// Band potentials over the n_a largest stones.
std::int64_t phi_a(const StoneState& state, std::int64_t a, std::int64_t l, std::int64_t n_a);
std::int64_t psi_a(const StoneState& state, std::int64_t a, std::int64_t l, std::int64_t n_a);

// Level k >= 3 that is occupied while k-1 and k-2 are empty, scanning from
// the top. Without checkpoints the mirrored rule is also checked for k <= -3.
std::optional<std::int64_t> no_gaps_check(const StoneState& state);

struct LevelStats {
  std::int64_t band = 0;
  std::int64_t n_a = 0;
  std::int64_t steps = 0;
  std::int64_t q_sum = 0;
  std::int64_t q_sq_sum = 0;
  std::int64_t phi_gain = 0;
  std::int64_t psi_gain = 0;
  std::int64_t final_phi = 0;
  std::int64_t final_psi = 0;
  Rational cs_bound;  // (sum q)^2 / sum q^2, 0 when the band saw no steps
};

struct LevelReport {
  std::vector<LevelStats> levels;  // bands 0..max with n_a > 0
  std::int64_t total_steps = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Replays `moves` from `initial` in the checkpointed game with spacing l and
// checks the per-band accounting: each step raises its band's phi by q_t and
// its psi by at least q_t^2/2, leaves the neighbouring bands alone, the band
// step counts meet the Cauchy-Schwarz bound, and the final phi_a, psi_a stay
// below n_a l^2 and 2 n_a^2 l.
LevelReport level_report(const StoneState& initial, const std::vector<StoneMove>& moves,
                         std::int64_t l);

// Trade-off curve and its inverse, logarithms base 2, returned to 2^-32.
Rational bound_b_of_t(std::int64_t n, std::int64_t t);
Rational bound_t_of_b(std::int64_t n, std::int64_t b);
double bound_b_of_t_value(std::int64_t n, double t);

}  // namespace cupgame
