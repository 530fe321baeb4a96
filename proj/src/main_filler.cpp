#include <bit>
#include <cmath>
#include <sstream>

#include "cupgame/fillers.hpp"

namespace cupgame {
namespace {

std::int64_t ceil_log2_ratio(std::int64_t n, std::int64_t k) {
  std::int64_t h = 0;
  while ((std::int64_t(1) << h) * k < n) ++h;
  return h;
}

// ceil(k / (c * log2(n/k))), exact when n/k is a power of two
std::int64_t amplified_scale(std::int64_t n, std::int64_t k, const Rational& c) {
  if (n % k == 0 && std::has_single_bit(std::uint64_t(n / k))) {
    std::int64_t lg = std::countr_zero(std::uint64_t(n / k));
    return (Rational(k) / (c * lg)).ceil().floor_int();
  }
  double x = double(k) / (c.to_double() * std::log2(double(n) / double(k)));
  return std::int64_t(std::ceil(x - 1e-9));
}

}  // namespace

std::string MainFillerPlan::describe() const {
  std::ostringstream out;
  if (branch == Branch::Halving) {
    out << "halving n=" << n << " k=" << k << " cups=" << n_prime << " rounds<=" << round_bound
        << " backlog>=" << guaranteed_backlog;
    return out.str();
  }
  out << "amplify n=" << n << " k=" << k << " c=" << c << " k'=" << k_prime << " h=" << h
      << " n'=" << n_prime << " r=" << r << " blocks=";
  for (std::size_t i = 0; i < phase_cups.size(); ++i) out << (i ? "," : "") << phase_cups[i];
  out << " backlog>=" << guaranteed_backlog << " rounds<=" << round_bound;
  return out.str();
}

MainFillerPlan plan_binary_halving(std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("halving plan needs n >= 1 and k >= 1");
  if (k >= 62 || (std::int64_t(1) << k) > n)
    throw InfeasiblePlan("halving needs 2^" + std::to_string(k) + " cups but n = " + std::to_string(n));
  MainFillerPlan plan;
  plan.branch = MainFillerPlan::Branch::Halving;
  plan.n = n;
  plan.k = k;
  plan.n_prime = std::int64_t(1) << k;
  plan.h = ceil_log2_ratio(n, k);
  plan.guaranteed_backlog = Rational(k, 2);
  plan.round_bound = k;
  return plan;
}

MainFillerPlan plan_main_filler(std::int64_t n, std::int64_t k, const Rational& c) {
  if (n < 1 || k < 1) throw std::invalid_argument("plan needs n >= 1 and k >= 1");
  if (c.sign() <= 0) throw std::invalid_argument("plan constant must be positive");
  if (Rational(k) > c * n)
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds c*n = " + (c * n).str());
  if (double(k) < c.to_double() * std::log2(double(n))) {
    MainFillerPlan plan = plan_binary_halving(n, k);
    plan.c = c;
    return plan;
  }
  if (k >= n) throw InfeasiblePlan("log(n/k) vanishes for k >= n");

  MainFillerPlan plan;
  plan.n = n;
  plan.k = k;
  plan.c = c;
  plan.h = ceil_log2_ratio(n, k);
  plan.k_prime = amplified_scale(n, k, c);
  if (plan.k_prime < 1) throw InfeasiblePlan("amplified scale is below 1");
  std::int64_t np = plan.k_prime;
  std::int64_t r = 0;
  while (np <= n / 4) {
    np *= 4;
    ++r;
  }
  if (r < 1)
    throw InfeasiblePlan("no working size k'*4^r <= n with r >= 1 (k' = " + std::to_string(plan.k_prime) +
                         ", n = " + std::to_string(n) + ")");
  plan.n_prime = np;
  plan.r = r;
  const std::int64_t unit = 4 * plan.k_prime;
  std::int64_t m = np;
  for (std::int64_t i = 0; i < r; ++i) {
    m -= m % unit;
    if (m == 0) throw InfeasiblePlan("phase " + std::to_string(i) + " has no full block left");
    plan.phase_cups.push_back(m);
    m /= 4;
  }
  plan.guaranteed_backlog = Rational(r * plan.k_prime, 2);
  plan.round_bound = 8 * r * plan.k_prime * plan.k_prime * plan.k_prime;
  return plan;
}

MainFiller::MainFiller(MainFillerPlan plan) : plan_(std::move(plan)) {}

std::optional<FillerMove> MainFiller::planned_move(const CupState& state) {
  if (plan_.branch == MainFillerPlan::Branch::Halving) {
    if (planned_rounds_ >= plan_.k) return std::nullopt;
    Rational level(planned_rounds_, 2);
    std::int64_t q = std::int64_t(1) << (plan_.k - 1 - planned_rounds_);
    if (state.count_at(level) < 2 * q)
      throw ModelDrift("halving expects " + std::to_string(2 * q) + " cups at " + level.str());
    ++planned_rounds_;
    return flat_split_move(state, level, q);
  }
  while (phase_ < plan_.r) {
    if (!block_) block_.emplace(Rational(phase_ * plan_.k_prime, 2), plan_.k_prime,
                                plan_.phase_cups[std::size_t(phase_)]);
    if (auto move = block_->next(state)) {
      ++planned_rounds_;
      return move;
    }
    block_.reset();
    ++phase_;
  }
  return std::nullopt;
}

FillerMove MainFiller::next_move(const CupState& state) {
  if (state.size() != plan_.n) throw std::invalid_argument("main filler planned for another cup count");
  if (!done_ && !drifted_) {
    try {
      if (auto move = planned_move(state)) return *move;
      done_ = true;
    } catch (const ModelDrift&) {
      drifted_ = true;
    }
  }
  if (drifted_) return opportunistic_split_move(state);
  return hold_state_move(state.size());
}

}  // namespace cupgame
