#include <doctest.h>

#include <sstream>

#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/fillers.hpp"
#include "cupgame/trace_io.hpp"
#include "oracles/reference.hpp"

using namespace cupgame;
using R = Rational;

namespace {

CupState neg(std::vector<Rational> v) { return CupState(v, GameVariant::negative_fill()); }
CupState stdv(std::vector<Rational> v) { return CupState(v, GameVariant::standard()); }

FillerMove random_move(Rng& rng, std::int64_t n, std::int64_t den) {
  const std::int64_t p = rng.between(1, n);
  std::vector<std::int64_t> units(static_cast<std::size_t>(n), 0);
  for (std::int64_t left = p * den; left > 0;) {
    auto i = std::size_t(rng.between(0, n - 1));
    if (units[i] < den) {
      ++units[i];
      --left;
    }
  }
  std::vector<Rational> add;
  for (auto u : units) add.push_back(R(u, den));
  return FillerMove::dense(p, add);
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("rational arithmetic agrees with GMP, including past int64") {
  Rng rng(5);
  for (int i = 0; i < 3000; ++i) {
    std::int64_t scale = rng.coin() ? 1000 : (std::int64_t(1) << 40);
    std::int64_t an = rng.between(-scale, scale), ad = rng.between(1, scale);
    std::int64_t bn = rng.between(-scale, scale), bd = rng.between(1, scale);
    mpq_class qa(an, ad), qb(bn, bd);
    qa.canonicalize();
    qb.canonicalize();
    R a(an, ad), b(bn, bd);
    CHECK((a + b).to_mpq() == qa + qb);
    CHECK((a - b).to_mpq() == qa - qb);
    CHECK((a * b).to_mpq() == qa * qb);
    if (bn != 0) CHECK((a / b).to_mpq() == qa / qb);
    CHECK((a < b) == (qa < qb));
    CHECK((a == b) == (qa == qb));
    R big = a * b * b * a;
    CHECK(big.to_mpq() == qa * qb * qb * qa);
    CHECK((big - big).is_zero());
    if (!big.is_zero()) CHECK(big / big == R(1));
  }
}

TEST_CASE("rational normal form and parsing") {
  CHECK(R(2, 4) == R(1, 2));
  CHECK(R(1, -2).den() == 2);
  CHECK(R(1, -2).num() == -1);
  CHECK(R::parse("-3/6") == R(-1, 2));
  CHECK(R::parse("7") == R(7));
  CHECK(R(7, 2).floor_int() == 3);
  CHECK(R(-7, 2).floor_int() == -4);
  CHECK(R(3, 2).str() == "3/2");
  CHECK_THROWS(R(1, 0));
  CHECK_THROWS(R::parse("1/x"));
}

TEST_CASE("filler move validation") {
  CupState s = stdv({0, 0, 0});
  CHECK_FALSE(validate_filler_move(s, FillerMove::dense(2, {1, R(1, 2), R(1, 2)})));
  auto sum = validate_filler_move(s, FillerMove::dense(2, {1, 1, R(1, 2)}));
  REQUIRE(sum);
  CHECK(sum->kind == MoveViolation::Kind::SumMismatch);
  auto big_p = validate_filler_move(s, FillerMove::dense(4, {1, 1, 1}));
  REQUIRE(big_p);
  CHECK(big_p->kind == MoveViolation::Kind::BadProcessorCount);
  auto range = validate_filler_move(s, FillerMove::dense(1, {R(3, 2), R(-1, 2), 0}));
  REQUIRE(range);
  CHECK(range->kind == MoveViolation::Kind::AdditionOutOfRange);
  CHECK_THROWS_AS(apply_filler_move(s, FillerMove::dense(2, {1, 1, R(1, 2)})), InvalidMove);
}

TEST_CASE("applying filler moves") {
  CHECK(apply_filler_move(stdv({0, 0}), FillerMove::dense(1, {R(1, 2), R(1, 2)})) == stdv({R(1, 2), R(1, 2)}));
  CHECK(apply_filler_move(stdv({1, 0}), FillerMove::dense(1, {0, 1})) == stdv({1, 1}));
  CHECK(apply_filler_move(stdv({1, 1, 0}), FillerMove::dense(2, {1, R(1, 2), R(1, 2)})) ==
        stdv({2, R(3, 2), R(1, 2)}));
}

TEST_CASE("normalizing keeps the post-fill multiset and sorts it") {
  CupState a = stdv({1, 0});
  CHECK(normalize_filler_move(a, FillerMove::dense(1, {0, 1})) == FillerMove::dense(1, {0, 1}));
  CupState b = stdv({1, R(1, 2)});
  FillerMove nb = normalize_filler_move(b, FillerMove::dense(1, {0, 1}));
  CHECK(nb.additions() == std::vector<Rational>{R(1, 2), R(1, 2)});

  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t n = rng.between(1, 9);
    std::vector<Rational> fills;
    for (std::int64_t j = 0; j < n; ++j) fills.push_back(R(rng.between(-6, 6), 2));
    CupState s = neg(fills);
    FillerMove m = random_move(rng, n, 4);
    FillerMove nm = normalize_filler_move(s, m);
    CHECK_FALSE(validate_filler_move(s, nm));
    CHECK(nm.p() == m.p());
    auto x = s.fills(), add = nm.additions();
    ref::Vec post, expect;
    for (std::size_t j = 0; j < x.size(); ++j) post.push_back(x[j] + add[j]);
    for (std::size_t j = 0; j < x.size(); ++j) expect.push_back(x[j] + m.additions()[j]);
    CHECK(ref::desc(post) == post);
    CHECK(ref::desc(expect) == post);
  }
}

TEST_CASE("emptying per variant") {
  EmptierMove both = EmptierMove::prefix(2);
  CHECK(apply_emptier_move(stdv({R(1, 2), 2}), both) == stdv({1, 0}));
  CHECK(apply_emptier_move(neg({R(1, 2), 2}), both) == neg({1, R(-1, 2)}));
  CupState aug({2}, GameVariant::augmented(R(1, 2)));
  CHECK(apply_emptier_move(aug, EmptierMove::prefix(1)) == CupState({R(1, 2)}, GameVariant::augmented(R(1, 2))));
  CHECK_THROWS_AS(apply_emptier_move(stdv({1, 1}), EmptierMove::prefix(1), 2), InvalidMove);
  CHECK_THROWS(GameVariant::augmented(R(0)));
  CHECK_THROWS(stdv({R(-1, 2)}));
}

TEST_CASE("engine rounds match the dense reference engine") {
  Rng rng(17);
  for (int g = 0; g < 300; ++g) {
    const std::int64_t n = rng.between(1, 8);
    const int kind = int(rng.below(3));
    GameVariant v = kind == 0 ? GameVariant::standard()
                    : kind == 1 ? GameVariant::negative_fill()
                                : GameVariant::augmented(R(rng.between(1, 4), 4));
    ref::Variant rv = kind == 0 ? ref::Variant::Standard : kind == 1 ? ref::Variant::NegativeFill : ref::Variant::Augmented;
    CupState s = CupState::zeros(n, v);
    ref::Vec dense(static_cast<std::size_t>(n));
    for (int r = 0; r < 30; ++r) {
      FillerMove m = normalize_filler_move(s, random_move(rng, n, 2));
      CupState post = apply_filler_move(s, m);
      std::vector<std::int64_t> pick;
      for (std::int64_t i = 0; i < n; ++i) pick.push_back(i);
      for (std::int64_t i = n - 1; i > 0; --i) std::swap(pick[std::size_t(i)], pick[rng.below(std::uint64_t(i + 1))]);
      pick.resize(std::size_t(m.p()));
      EmptierMove e = EmptierMove::from_indices(pick);
      s = apply_emptier_move(post, e, m.p());
      dense = ref::round(dense, m.additions(), std::set<std::int64_t>(pick.begin(), pick.end()), rv, v.epsilon);
      REQUIRE(s.fills() == dense);
    }
  }
}

TEST_CASE("round examples") {
  GreedyEmptier greedy;
  HoldStateFiller hold;
  CHECK(play_round(neg({0, 0}), hold, greedy).state == neg({0, 0}));

  class Fixed : public FillerStrategy {
   public:
    explicit Fixed(FillerMove m) : m_(std::move(m)) {}
    FillerMove next_move(const CupState&) override { return m_; }
    std::string name() const override { return "fixed"; }
    FillerMove m_;
  };
  Fixed split(flat_split_move(neg({0, 0, 0, 0}), 0, 2));
  CHECK(play_round(neg({0, 0, 0, 0}), split, greedy).state == neg({R(1, 2), R(1, 2), R(-1, 2), R(-1, 2)}));

  for (TiePolicy tie : {TiePolicy::lowest(), TiePolicy::highest(), TiePolicy::random(3)}) {
    GreedyEmptier g(tie);
    WarmupFiller w;
    CHECK(play_round(stdv({0, 0}), w, g).state == stdv({R(1, 2), 0}));
  }
}

TEST_CASE("backlog is the maximum fill") {
  CHECK(stdv({0, 0, 0}).backlog() == R(0));
  CHECK(neg({R(3, 2), R(1, 2), R(-1, 2)}).backlog() == R(3, 2));
  CHECK(neg({-1, -2}).backlog() == R(-1));
}

TEST_CASE("run_game bookkeeping") {
  GreedyEmptier greedy;
  WarmupFiller w;
  GameTrace none = run_game(CupState::zeros(2, GameVariant::standard()), w, greedy, 0);
  CHECK(none.rounds_played == 0);
  CHECK(none.backlogs.empty());

  WarmupFiller w2;
  GameTrace t = run_game(CupState::zeros(2, GameVariant::standard()), w2, greedy, 8);
  CHECK(t.final_state.backlog() >= R(1, 2));

  RunOptions full;
  full.record_level = RecordLevel::Full;
  auto play = [&](std::uint64_t seed) {
    RandomFiller f(4, seed);
    GreedyEmptier g(TiePolicy::random(seed));
    return run_game(CupState::zeros(4, GameVariant::negative_fill()), f, g, 100, full);
  };
  GameTrace a = play(77), b = play(77);
  CHECK(trace_to_json(a) == trace_to_json(b));
  CHECK_FALSE(replay_mismatch(a));
  GameTrace broken = a;
  broken.rounds[40].state_after = neg({5, 0, 0, -5});
  REQUIRE(replay_mismatch(broken));
  CHECK(*replay_mismatch(broken) == 41);
}

TEST_CASE("stop conditions") {
  GreedyEmptier greedy;
  WarmupFiller w;
  RunOptions opt;
  opt.stop_at_backlog = R(3, 2);
  GameTrace t = run_game(CupState::zeros(8, GameVariant::standard()), w, greedy, 1000, opt);
  CHECK(t.final_state.backlog() >= R(3, 2));
  CHECK(t.rounds_played < 1000);
  CHECK(std::int64_t(t.backlogs.size()) == t.rounds_played);
}

TEST_CASE("negative fill conserves total; standard dominates negative fill") {
  Rng rng(23);
  for (int g = 0; g < 200; ++g) {
    const std::int64_t n = rng.between(2, 8);
    CupState s = CupState::zeros(n, GameVariant::standard());
    CupState z = CupState::zeros(n, GameVariant::negative_fill());
    ref::Vec st(static_cast<std::size_t>(n)), ng(static_cast<std::size_t>(n));
    for (int r = 0; r < 40; ++r) {
      FillerMove m = random_move(rng, n, 2);
      std::vector<std::int64_t> pick;
      for (std::int64_t i = 0; i < n; ++i) pick.push_back(i);
      for (std::int64_t i = n - 1; i > 0; --i) std::swap(pick[std::size_t(i)], pick[rng.below(std::uint64_t(i + 1))]);
      pick.resize(std::size_t(m.p()));
      // same moves by sorted index in both games
      z = apply_emptier_move(apply_filler_move(z, m), EmptierMove::from_indices(pick), m.p());
      s = apply_emptier_move(apply_filler_move(s, m), EmptierMove::from_indices(pick), m.p());
      CHECK(z.total() == R(0));
      CHECK(ref::dominates(s.fills(), z.fills()));
      st = ref::round(st, m.additions(), {pick.begin(), pick.end()}, ref::Variant::Standard);
      ng = ref::round(ng, m.additions(), {pick.begin(), pick.end()}, ref::Variant::NegativeFill);
      CHECK(st == s.fills());
      CHECK(ng == z.fills());
    }
  }
}

TEST_CASE("trace JSON and CSV round trip") {
  RandomFiller f(5, 3);
  GreedyEmptier g;
  RunOptions full;
  full.record_level = RecordLevel::Full;
  GameTrace t = run_game(CupState::zeros(5, GameVariant::negative_fill()), f, g, 25, full);
  t.seed = 3;
  auto j = trace_to_json(t);
  CHECK(j["schema"] == kTraceSchema);
  CHECK(j["initial"][0] == "0/1");
  GameTrace back = trace_from_json(j);
  CHECK(back.final_state == t.final_state);
  CHECK(back.rounds.size() == t.rounds.size());
  CHECK(trace_to_json(back) == j);
  j["schema"] = "other";
  CHECK_THROWS(trace_from_json(j));

  std::ostringstream csv;
  write_backlog_csv(csv, t);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# ", 0) == 0);
  std::getline(in, line);
  CHECK(line == "round,backlog_num,backlog_den,backlog");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 26);
}

}  // TEST_SUITE
