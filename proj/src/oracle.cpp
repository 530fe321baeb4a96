#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "cupgame/emptiers.hpp"

namespace cupgame {
namespace {

struct Key {
  std::vector<Rational> fills;
  std::int64_t t;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = std::hash<std::int64_t>{}(k.t);
    for (const auto& f : k.fills) h = h * 1000003u ^ f.hash();
    return h;
  }
};

class Solver {
 public:
  Solver(const OracleConfig& cfg, const GameVariant& variant, OracleEmptier mode)
      : cfg_(cfg), variant_(variant), mode_(mode) {
    Rational steps = Rational(1) / cfg.grid;
    if (cfg.grid.sign() <= 0 || !steps.is_integer())
      throw std::invalid_argument("oracle grid must be 1/m for a positive integer m");
    if (cfg.horizon < 0) throw std::invalid_argument("negative oracle horizon");
    units_ = steps.num();
  }

  // fills sorted non-increasing
  Rational value(const std::vector<Rational>& fills, std::int64_t t, FillerMove* best_move) {
    if (++nodes_ > cfg_.max_nodes)
      throw BudgetExceeded("oracle exceeded its budget of " + std::to_string(cfg_.max_nodes) +
                           " nodes");
    if (t == 0) return fills.front();
    Key key{fills, t};
    if (!best_move) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    const std::int64_t n = std::int64_t(fills.size());
    std::optional<Rational> best;
    std::vector<std::int64_t> u(std::size_t(n), 0);
    // odometer over per-cup unit counts
    while (true) {
      std::int64_t total = std::accumulate(u.begin(), u.end(), std::int64_t(0));
      if (total > 0 && total % units_ == 0) {
        std::int64_t p = total / units_;
        std::vector<Rational> post(fills);
        for (std::int64_t i = 0; i < n; ++i) post[std::size_t(i)] += cfg_.grid * u[std::size_t(i)];
        Rational v = respond(post, p, t);
        if (!best || *best < v) {
          best = v;
          if (best_move) {
            std::vector<Rational> adds;
            for (auto x : u) adds.push_back(cfg_.grid * x);
            *best_move = FillerMove::dense(p, adds);
          }
        }
      }
      std::size_t i = 0;
      while (i < u.size() && u[i] == units_) u[i++] = 0;
      if (i == u.size()) break;
      ++u[i];
    }
    memo_.emplace(std::move(key), *best);
    return *best;
  }

  std::int64_t nodes() const { return nodes_; }

 private:
  Rational respond(const std::vector<Rational>& post, std::int64_t p, std::int64_t t) {
    const std::size_t n = post.size();
    auto after = [&](const std::vector<bool>& chosen) {
      std::vector<Rational> next(post);
      for (std::size_t i = 0; i < n; ++i)
        if (chosen[i]) next[i] = variant_.emptied(next[i]);
      std::sort(next.begin(), next.end(), [](const Rational& a, const Rational& b) { return b < a; });
      return value(next, t - 1, nullptr);
    };
    if (mode_ == OracleEmptier::Greedy) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return post[b] < post[a]; });
      std::vector<bool> chosen(n, false);
      for (std::int64_t i = 0; i < p; ++i) chosen[order[std::size_t(i)]] = true;
      return after(chosen);
    }
    std::vector<bool> chosen(n, false);
    std::fill(chosen.end() - p, chosen.end(), true);
    std::optional<Rational> worst;
    do {
      Rational v = after(chosen);
      if (!worst || v < *worst) worst = v;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
    return *worst;
  }

  OracleConfig cfg_;
  GameVariant variant_;
  OracleEmptier mode_;
  std::int64_t units_ = 1;
  std::int64_t nodes_ = 0;
  std::unordered_map<Key, Rational, KeyHash> memo_;
};

}  // namespace

OracleLine opt_oracle_line(const CupState& state, const OracleConfig& cfg, OracleEmptier emptier) {
  Solver solver(cfg, state.variant(), emptier);
  OracleLine line;
  line.value = solver.value(state.fills(), cfg.horizon, &line.first_move);
  line.nodes = solver.nodes();
  return line;
}

Rational opt_oracle(const CupState& state, const OracleConfig& cfg, OracleEmptier emptier) {
  return opt_oracle_line(state, cfg, emptier).value;
}

}  // namespace cupgame
