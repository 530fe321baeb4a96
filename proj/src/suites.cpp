#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "cupgame/harness.hpp"
#include "cupgame/order.hpp"
#include "cupgame/stones.hpp"

namespace cupgame::harness {
namespace {

constexpr std::size_t kMaxListed = 20;

// Hand-rolled generators. Everything is drawn on a grid so that the exact
// predicates see plenty of ties.

Rational grid_value(Rng& rng, std::int64_t lo, std::int64_t hi, std::int64_t den) {
  return Rational(rng.between(lo * den, hi * den), den);
}

Seq random_sorted(Rng& rng, std::int64_t n, std::int64_t lo, std::int64_t hi, std::int64_t den) {
  Seq v(static_cast<std::size_t>(n));
  for (auto& x : v) x = grid_value(rng, lo, hi, den);
  return sorted_desc(std::move(v));
}

// x obtained from y by sortedness-preserving transfers towards fuller cups.
Seq random_majorizer(Rng& rng, const Seq& y, std::int64_t den) {
  Seq x = y;
  const std::int64_t n = std::int64_t(y.size());
  const std::int64_t steps = rng.between(0, 2 * n);
  for (std::int64_t s = 0; s < steps; ++s) {
    std::int64_t j = rng.between(0, n - 1), k = rng.between(0, n - 1);
    if (j == k) continue;
    if (j > k) std::swap(j, k);
    Seq z = x;
    Rational amount(rng.between(1, 3 * den), den);
    z[std::size_t(j)] += amount;
    z[std::size_t(k)] -= amount;
    if (std::is_sorted(z.begin(), z.end(), std::greater<>())) x = std::move(z);
  }
  return x;
}

// p units on a 1/den grid, at most 1 per cup.
FillerMove random_grid_move(Rng& rng, std::int64_t n, std::int64_t den, std::optional<std::int64_t> p_fixed = {}) {
  const std::int64_t p = p_fixed ? *p_fixed : rng.between(1, n);
  std::vector<std::int64_t> units(static_cast<std::size_t>(n), 0);
  std::int64_t left = p * den;
  // fill free slots uniformly at random
  std::vector<std::int64_t> slots;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t u = 0; u < den; ++u) slots.push_back(i);
  for (std::int64_t i = std::int64_t(slots.size()) - 1; i > 0 && left > 0; --i) {
    std::int64_t j = rng.between(0, i);
    std::swap(slots[std::size_t(i)], slots[std::size_t(j)]);
  }
  for (std::int64_t s = std::int64_t(slots.size()) - 1; left > 0; --s, --left) ++units[std::size_t(slots[std::size_t(s)])];
  std::vector<Rational> add;
  for (auto u : units) add.push_back(Rational(u, den));
  return FillerMove::dense(p, add);
}

class Suite {
 public:
  Suite(SuiteReport& report, std::uint64_t case_seed, EnvelopeMonitor* monitor = nullptr)
      : report_(report), seed_(case_seed), monitor_(monitor) {}
  bool check(bool ok, const std::string& what) {
    ++report_.checks;
    if (!ok) report_.fail(seed_, what);
    return ok;
  }
  void count(const std::string& key, std::int64_t by = 1) {
    auto& d = report_.details[key];
    d = (d.is_null() ? 0 : d.get<std::int64_t>()) + by;
  }
  void envelope(std::int64_t n, std::int64_t t, const Rational& backlog) {
    if (monitor_) monitor_->check(n, t, backlog);
  }

 private:
  SuiteReport& report_;
  std::uint64_t seed_;
  EnvelopeMonitor* monitor_;
};

std::string show(const Seq& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + "}";
}

// ---- order-fuzz ------------------------------------------------------------

void order_case(Suite& s, Rng& rng) {
  const std::int64_t n = rng.between(1, 8);
  const std::int64_t den = rng.coin() ? 2 : 4;

  // partial order
  Seq y = random_sorted(rng, n, -4, 4, den);
  Seq x = random_majorizer(rng, y, den);
  Seq w = random_majorizer(rng, x, den);
  s.check(majorizes(y, y), "majorization not reflexive on " + show(y));
  s.check(majorizes(x, y), "generator produced non-majorizing pair " + show(x) + " " + show(y));
  s.check(majorizes(w, y), "majorization not transitive: " + show(w) + " " + show(x) + " " + show(y));
  if (majorizes(y, x)) s.check(x == y, "majorization not antisymmetric: " + show(x) + " " + show(y));
  s.count("partial_order");

  // appending a common multiset
  Seq extra = random_sorted(rng, rng.between(0, 4), -4, 4, den);
  Seq xe = x, ye = y;
  xe.insert(xe.end(), extra.begin(), extra.end());
  ye.insert(ye.end(), extra.begin(), extra.end());
  s.check(majorizes(xe, ye), "appending " + show(extra) + " broke majorization");
  s.count("common_append");

  // pointwise dominance of unsorted sequences survives sorting
  Seq a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    b[std::size_t(i)] = grid_value(rng, -4, 4, den);
    a[std::size_t(i)] = b[std::size_t(i)] + grid_value(rng, 0, 2, den);
  }
  s.check(dominates(sorted_desc(a), sorted_desc(b)), "sorted dominance failed for " + show(a) + " " + show(b));
  Rational sa, sb;
  for (auto& v : a) sa += v;
  for (auto& v : b) sb += v;
  if (sa == sb) s.check(sorted_desc(a) == sorted_desc(b), "equal-sum dominance without equality");
  s.count("dominance");

  // perturbation chain
  auto chain = perturbation_chain(x, y);
  Seq z = y;
  bool ok = true;
  for (const auto& step : chain) {
    ok &= step.amount.sign() > 0 && step.amount < Rational(1) && step.to_index < step.from_index;
    z = apply_perturbation(z, step);
    ok &= std::is_sorted(z.begin(), z.end(), std::greater<>()) && majorizes(x, z);
  }
  s.check(ok && z == x, "perturbation chain from " + show(y) + " to " + show(x) + " misbehaved");
  s.count("perturbation_chain");

  // majorization transfer against greedy
  FillerMove my = normalize_filler_move(CupState(y, GameVariant::negative_fill()), random_grid_move(rng, n, den));
  try {
    std::vector<TransferStep> steps;
    FillerMove mx = majorization_transfer(x, y, my, &steps);
    s.check(majorizes(greedy_round(x, mx), greedy_round(y, my)),
            "majorization transfer lost order for " + show(x) + " " + show(y));
    for (auto st : steps) s.count("transfer/" + step_name(st));
  } catch (const std::exception& e) {
    s.check(false, std::string("majorization transfer threw: ") + e.what());
  }
  s.count("majorization_transfer");

  // monopolization: build B from A, then transfer a random filler move and
  // every emptier move
  {
    const std::int64_t n = rng.between(2, 8);
    GameVariant variant = rng.coin() ? GameVariant::negative_fill() : GameVariant::standard();
    Seq av = random_sorted(rng, n, variant.allows_negative() ? -3 : 0, 5, den);
    Seq bv = av;
    if (rng.below(3) == 0) {
      for (auto& v : bv) {
        v -= grid_value(rng, 0, 1, den);
        if (!variant.allows_negative() && v.sign() < 0) v = 0;
      }
    } else {
      std::int64_t i = rng.between(0, n - 1), j = rng.between(0, n - 2);
      if (j >= i) ++j;
      Rational c(rng.between(0, den), den);
      if (!(av[std::size_t(i)] > av[std::size_t(j)] + c)) std::swap(i, j);
      if (av[std::size_t(i)] > av[std::size_t(j)] + c && (variant.allows_negative() || av[std::size_t(i)] >= Rational(1))) {
        bv[std::size_t(i)] -= 1;
        bv[std::size_t(j)] += c;
        s.count("monopoly_pairs");
      }
    }
    CupState A(av, variant), B(bv, variant);
    if (s.check(weakly_monopolizes(A, B), "generated pair not weakly monopolizing: " + A.str() + " " + B.str())) {
      FillerMove mb = random_grid_move(rng, n, den);
      try {
        FillerMove ma = transfer_filler_move(A, B, mb);
        s.check(ma.p() == mb.p(), "filler transfer changed p");
        CupState A2 = apply_filler_move(A, ma), B2 = apply_filler_move(B, mb);
        s.check(weakly_monopolizes(A2, B2), "filler transfer lost order: " + A.str() + " " + B.str());
        for (std::int64_t p = 1; p <= n; ++p) {
          TiePolicy tie = rng.coin() ? TiePolicy::lowest() : TiePolicy::random(rng.next());
          EmptierMove ga = greedy_empty(A2, p, tie);
          EmptierMove eb = transfer_emptier_move(A2, B2, p, ga);
          s.check(eb.size() == p && !validate_emptier_move(B2, eb, p), "emptier transfer built an invalid move");
          s.check(weakly_monopolizes(apply_emptier_move(A2, ga, p), apply_emptier_move(B2, eb, p)),
                  "emptier transfer lost order at p=" + std::to_string(p) + ": " + A2.str() + " " + B2.str());
        }
      } catch (const std::exception& e) {
        s.check(false, std::string("monopoly transfer threw: ") + e.what());
      }
    }
    s.count("monopoly_transfers");
  }

  // stone domination transfer, plain or checkpointed dominator
  for (const std::int64_t sn = rng.between(2, 8);;) {
    std::vector<std::int64_t> ys(static_cast<std::size_t>(sn)), xs(static_cast<std::size_t>(sn));
    std::optional<std::int64_t> spacing;
    if (rng.coin()) spacing = rng.between(1, 4);
    for (std::int64_t i = 0; i < sn; ++i) {
      ys[std::size_t(i)] = rng.between(-2, 3);
      xs[std::size_t(i)] = ys[std::size_t(i)] + rng.between(0, 2);
      if (spacing) xs[std::size_t(i)] = std::max<std::int64_t>(xs[std::size_t(i)], 0);
    }
    StoneState Y(ys), X(xs, spacing);
    auto moves = enumerate_valid_moves(Y);
    if (moves.empty()) continue;
    StoneMove m = moves[rng.below(moves.size())];
    m.count = rng.between(1, m.count);
    auto tm = stone_transfer(X, Y, m);
    StoneState X2 = tm ? apply_stone_move(X, *tm) : X;
    s.check(dominates(X2.positions(), apply_stone_move(Y, m).positions()),
            "stone transfer lost dominance: " + X.str() + " " + Y.str());
    s.count(tm ? "stone_transfer/move" : "stone_transfer/noop");
    break;
  }

  // stone cover of an arbitrary round on even fills
  {
    Seq ev(static_cast<std::size_t>(n));
    for (auto& v : ev) v = Rational(2 * rng.between(-2, 2));
    ev = sorted_desc(ev);
    FillerMove m = random_grid_move(rng, n, den);
    StoneCover cover = stone_cover_move(ev, m);
    s.check(majorizes(apply_stone_cover(ev, cover), greedy_round(ev, m)),
            "stone cover does not majorize the round on " + show(ev));
    s.count("stone_cover");
  }

  // negation
  {
    FillerMove m = random_grid_move(rng, n, den);
    FillerMove neg = negate_round(m, n);
    if (m.p() < n) {
      s.check(negate_round(neg, n) == m, "negation is not an involution");
      s.check(neg.p() == n - m.p(), "negated move has the wrong p");
    }
    Seq y0 = random_sorted(rng, n, -3, 3, den);
    Seq direct = greedy_round(y0, m);
    Seq mirrored = greedy_round(scaled(sorted_desc(scaled(y0, Rational(-1))), Rational(1)), reverse_move(neg));
    s.check(sorted_desc(scaled(direct, Rational(-1))) == mirrored, "mirrored round is not the negated round");
    s.count("negation");
  }
}

// Mirror co-simulation: a filler and its mirror stay exact negations.
void mirror_case(Suite& s, Rng& rng) {
  const std::int64_t n = rng.between(2, 12);
  const std::uint64_t seed = rng.next();
  std::unique_ptr<FillerStrategy> plain, mirrored;
  if (rng.coin()) {
    plain = std::make_unique<RandomFiller>(n, seed);
    mirrored = std::make_unique<MirrorFiller>(std::make_unique<RandomFiller>(n, seed));
  } else {
    std::int64_t k = 1;
    while ((std::int64_t(2) << k) <= n) ++k;
    plain = std::make_unique<MainFiller>(plan_binary_halving(n, k));
    mirrored = std::make_unique<MirrorFiller>(std::make_unique<MainFiller>(plan_binary_halving(n, k)));
  }
  GreedyEmptier e1, e2;
  CupState a = CupState::zeros(n, GameVariant::negative_fill()), b = a;
  for (int r = 0; r < 40; ++r) {
    a = play_round(a, *plain, e1).state;
    b = play_round(b, *mirrored, e2).state;
    s.envelope(n, r + 1, a.backlog());
    if (!s.check(negate_state(a) == b, "mirror diverged at round " + std::to_string(r + 1))) return;
  }
  s.count("mirror_games");
}

// ---- potentials -------------------------------------------------------------

// Returns moves played.
std::int64_t potentials_game(Suite& s, Rng& rng, std::int64_t moves) {
  const std::int64_t n = rng.between(2, 40);
  std::optional<std::int64_t> spacing;
  if (rng.coin()) spacing = rng.between(1, 6);
  StoneState st = StoneState::zeros(n, spacing);
  std::int64_t played = 0;
  for (; played < moves; ++played) {
    auto options = enumerate_valid_moves(st);
    if (options.empty()) break;
    StoneMove m = options[rng.below(options.size())];
    m.count = rng.between(1, m.count);
    StoneState next = apply_stone_move(st, m);
    const std::int64_t q = m.count;
    const std::string where = st.str() + " move (" + std::to_string(m.level) + "," + std::to_string(q) + ")";
    if (!st.is_checkpoint(m.level)) {
      s.check(phi(next) - phi(st) == 2 * q, "phi did not rise by 2q: " + where);
      s.check(psi(next) - psi(st) >= 2 * q * q, "psi rose by less than 2q^2: " + where);
      s.count("symmetric_moves");
    } else if (m.level == 0) {
      s.check(phi(next) - phi(st) == q, "phi did not rise by q at the floor: " + where);
      s.check(psi(next) - psi(st) >= q * q, "psi rose by less than q^2 at the floor: " + where);
      s.count("floor_checkpoint_moves");
    } else {
      const std::int64_t a = m.level / *spacing;
      std::int64_t na = 0;
      for (auto x : next.positions()) na += x >= m.level;
      s.check(phi_a(next, a, *spacing, na) - phi_a(st, a, *spacing, na) == q,
              "band phi did not rise by q: " + where);
      s.check(psi_a(next, a, *spacing, na) - psi_a(st, a, *spacing, na) >= q * q,
              "band psi rose by less than q^2: " + where);
      s.count("upper_checkpoint_moves");
    }
    st = std::move(next);
  }
  return played;
}

// ---- no-gaps ------------------------------------------------------------------

void no_gaps_case(Suite& s, Rng& rng, std::int64_t moves) {
  const std::int64_t n = rng.between(2, 64);
  const std::int64_t spacing = rng.between(1, 8);
  const StoneState start = StoneState::zeros(n, spacing);
  StoneState st = start;
  std::vector<StoneMove> trace;
  for (std::int64_t t = 0; t < moves; ++t) {
    auto options = enumerate_valid_moves(st);
    if (options.empty()) break;
    StoneMove m = options[rng.below(options.size())];
    m.count = rng.between(1, m.count);
    st = apply_stone_move(st, m);
    trace.push_back(m);
    auto gap = no_gaps_check(st);
    if (!s.check(!gap, "gap below level " + std::to_string(gap.value_or(0)) + " in " + st.str())) return;
  }
  LevelReport report = level_report(start, trace, spacing);
  s.check(report.ok(), "level report: " + (report.ok() ? std::string() : report.violations.front()));
  s.count("moves", std::int64_t(trace.size()));
  s.count("level_reports");
  if (report.ok()) s.count("level_reports_ok");
}

// ---- oracle-equivalence ---------------------------------------------------------

// Every multiset of starting fills drawn from `levels`.
void fill_multisets(const std::vector<Rational>& levels, std::int64_t n, std::size_t from, std::vector<Rational>& cur,
                    const std::function<void(const std::vector<Rational>&)>& visit) {
  if (std::int64_t(cur.size()) == n) {
    visit(cur);
    return;
  }
  for (std::size_t i = from; i < levels.size(); ++i) {
    cur.push_back(levels[i]);
    fill_multisets(levels, n, i, cur, visit);
    cur.pop_back();
  }
}

void oracle_sweep(SuiteReport& report, std::uint64_t seed, std::int64_t max_level_halves) {
  Suite s(report, seed);
  std::vector<Rational> levels;
  for (std::int64_t h = 0; h <= max_level_halves; ++h) levels.push_back(Rational(h, 2));
  for (GameVariant variant : {GameVariant::standard(), GameVariant::negative_fill()}) {
    for (std::int64_t n = 2; n <= 3; ++n) {
      std::vector<Rational> cur;
      fill_multisets(levels, n, 0, cur, [&](const std::vector<Rational>& fills) {
        CupState start(fills, variant);
        for (std::int64_t t = 1; t <= 3; ++t) {
          OracleConfig cfg;
          cfg.horizon = t;
          Rational free = opt_oracle(start, cfg, OracleEmptier::Free);
          Rational greedy = opt_oracle(start, cfg, OracleEmptier::Greedy);
          s.check(free == greedy, variant.name() + " " + start.str() + " t=" + std::to_string(t) + ": free " +
                                      free.str() + " vs greedy " + greedy.str());
          s.count("positions");
        }
        ++report.cases;
      });
    }
  }
}

// ---- cosimulation ------------------------------------------------------------------

class FunctionFiller : public FillerStrategy {
 public:
  FunctionFiller(std::string name, std::function<FillerMove(const CupState&)> f)
      : name_(std::move(name)), f_(std::move(f)) {}
  FillerMove next_move(const CupState& state) override { return f_(state); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<FillerMove(const CupState&)> f_;
};

void cosim_case(Suite& s, Rng& rng, std::int64_t max_rounds) {
  const std::int64_t n = rng.between(2, 32);
  const std::int64_t t = rng.between(1, max_rounds);
  const std::int64_t spacing = rng.between(1, 6);
  std::unique_ptr<FillerStrategy> filler;
  switch (rng.below(3)) {
    case 0: filler = std::make_unique<RandomFiller>(n, rng.next()); break;
    case 1: filler = std::make_unique<RandomFiller>(n, rng.next(), Rational(1, 4)); break;
    default: filler = std::make_unique<FunctionFiller>("split", opportunistic_split_move); break;
  }
  GreedyEmptier greedy(rng.coin() ? TiePolicy::lowest() : TiePolicy::random(rng.next()));
  ShadowTracker tracker(n, spacing);
  CupState state = CupState::zeros(n, GameVariant::negative_fill());
  for (std::int64_t r = 1; r <= t; ++r) {
    RoundResult res = play_round(state, *filler, greedy, r);
    tracker.advance(state.fills(), res.record.filler_move, res.state.fills());
    state = std::move(res.state);
    s.envelope(n, r, state.backlog());
    if (!tracker.violations().empty()) break;
  }
  s.check(tracker.violations().empty(),
          filler->name() + " n=" + std::to_string(n) + ": " +
              (tracker.violations().empty() ? std::string() : tracker.violations().front()));
  LevelReport report = level_report(StoneState::zeros(n, spacing), tracker.checkpointed_moves(), spacing);
  s.check(report.ok(), "shadow level report: " + (report.ok() ? std::string() : report.violations.front()));
  s.count("level_reports");
  if (report.ok()) s.count("level_reports_ok");
  s.count("rounds", tracker.rounds());
  s.count("transfer_steps", tracker.transfer_steps());
  s.count("shadow_moves", std::int64_t(tracker.checkpointed_moves().size()));
}

// ---- proportional-marginals --------------------------------------------------------

void marginals_case(Suite& s, Rng& rng, std::int64_t draws) {
  const std::int64_t n = rng.between(2, 16);
  const std::int64_t den = 8;
  const std::int64_t p = rng.between(1, n - 1);
  // p*den units spread over cups, at most den each
  std::vector<std::int64_t> units(static_cast<std::size_t>(n), 0);
  for (std::int64_t left = p * den; left > 0;) {
    std::int64_t i = rng.between(0, n - 1);
    if (units[std::size_t(i)] < den) {
      ++units[std::size_t(i)];
      --left;
    }
  }
  std::vector<Rational> q;
  for (auto u : units) q.push_back(Rational(u, den));
  std::vector<std::int64_t> hits(static_cast<std::size_t>(n), 0);
  Rng sampler(rng.next());
  bool sizes_ok = true;
  for (std::int64_t d = 0; d < draws; ++d) {
    EmptierMove m = proportional_sample(q, sampler);
    auto idx = m.indices();
    sizes_ok &= std::int64_t(idx.size()) == p && std::adjacent_find(idx.begin(), idx.end()) == idx.end();
    for (auto i : idx) {
      if (i < 0 || i >= n) {
        sizes_ok = false;
        continue;
      }
      ++hits[std::size_t(i)];
    }
  }
  s.check(sizes_ok, "a draw did not return exactly p distinct indices");
  for (std::int64_t j = 0; j < n; ++j) {
    const double qj = q[std::size_t(j)].to_double();
    const double sigma = std::sqrt(double(draws) * qj * (1 - qj));
    const double dev = std::abs(double(hits[std::size_t(j)]) - double(draws) * qj);
    s.check(dev <= 3 * sigma, "index " + std::to_string(j) + " with q=" + q[std::size_t(j)].str() + " hit " +
                                  std::to_string(hits[std::size_t(j)]) + " of " + std::to_string(draws) +
                                  " (" + std::to_string(dev / std::max(sigma, 1e-12)) + " sigma)");
  }
  s.count("indices", n);
  s.count("draws", draws);
}

struct SuiteDef {
  std::int64_t default_cases;
  std::function<void(Suite&, Rng&)> run_case;
};

std::map<std::string, SuiteDef> suite_table() {
  return {
      {"order-fuzz",
       {10000,
        [](Suite& s, Rng& rng) {
          order_case(s, rng);
          if (rng.below(10) == 0) mirror_case(s, rng);
        }}},
      {"potentials", {1500, [](Suite& s, Rng& rng) { potentials_game(s, rng, 200); }}},
      {"no-gaps", {1000, [](Suite& s, Rng& rng) { no_gaps_case(s, rng, 1000); }}},
      {"cosimulation", {1000, [](Suite& s, Rng& rng) { cosim_case(s, rng, 1000); }}},
      {"proportional-marginals", {20, [](Suite& s, Rng& rng) { marginals_case(s, rng, 100000); }}},
  };
}

}  // namespace

void SuiteReport::fail(std::uint64_t case_seed, const std::string& what) {
  ++violation_count;
  if (violations.size() < kMaxListed) violations.push_back(what);
  if (reproducers.size() < kMaxListed &&
      std::find(reproducers.begin(), reproducers.end(), case_seed) == reproducers.end())
    reproducers.push_back(case_seed);
}

json SuiteReport::to_json() const {
  return json{{"schema", kVerifySchema},
              {"suite", suite},
              {"seed", seed},
              {"cases", cases},
              {"checks", checks},
              {"passed", passed()},
              {"violation_count", violation_count},
              {"violations", violations},
              {"reproducer_seeds", reproducers},
              {"details", details},
              {"seconds", seconds}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"order-fuzz", "potentials", "no-gaps", "oracle-equivalence",
                                              "cosimulation", "proportional-marginals"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  SuiteReport report;
  report.suite = name;
  report.seed = options.seed;
  auto t0 = std::chrono::steady_clock::now();
  if (name == "oracle-equivalence") {
    oracle_sweep(report, options.seed, 3);
  } else {
    auto table = suite_table();
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown suite '" + name + "'");
    std::vector<std::uint64_t> seeds;
    if (options.case_seed) {
      seeds.push_back(*options.case_seed);
    } else {
      const std::int64_t cases = options.cases > 0 ? options.cases : it->second.default_cases;
      for (std::int64_t i = 0; i < cases; ++i) seeds.push_back(derive_seed(options.seed, std::uint64_t(i)));
    }
    for (auto cs : seeds) {
      Suite s(report, cs, options.monitor);
      Rng rng(cs);
      try {
        it->second.run_case(s, rng);
      } catch (const std::exception& e) {
        s.check(false, std::string("case threw: ") + e.what());
      }
      ++report.cases;
    }
  }
  if (options.inject_failure) report.fail(options.case_seed.value_or(derive_seed(options.seed, 0)), "injected failure");
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace cupgame::harness
