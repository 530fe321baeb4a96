#include <doctest.h>

#include "cupgame/emptiers.hpp"
#include "cupgame/fillers.hpp"
#include "cupgame/order.hpp"
#include "oracles/reference.hpp"

using namespace cupgame;
using R = Rational;

namespace {

CupState neg(std::vector<Rational> v) { return CupState(v, GameVariant::negative_fill()); }

std::set<std::int64_t> top(std::int64_t p) {
  std::set<std::int64_t> s;
  for (std::int64_t i = 0; i < p; ++i) s.insert(i);
  return s;
}

// greedy negative-fill round, computed by the reference engine
ref::Vec ref_greedy(const ref::Vec& fills, const FillerMove& m) {
  return ref::round(fills, m.additions(), top(m.p()), ref::Variant::NegativeFill);
}

Seq random_sorted(Rng& rng, std::int64_t n, std::int64_t lo, std::int64_t hi, std::int64_t den) {
  Seq v(static_cast<std::size_t>(n));
  for (auto& x : v) x = R(rng.between(lo * den, hi * den), den);
  return ref::desc(v);
}

// Repeatedly moves mass from a lower cup to a higher one.
Seq random_majorizer(Rng& rng, Seq y, std::int64_t den) {
  const std::int64_t n = std::int64_t(y.size());
  for (int t = rng.between(0, 4); t > 0 && n > 1; --t) {
    std::int64_t hi = rng.between(0, n - 2), lo = rng.between(hi + 1, n - 1);
    R amt(rng.between(1, 2 * den), den);
    y[std::size_t(hi)] += amt;
    y[std::size_t(lo)] -= amt;
    y = ref::desc(y);
  }
  return y;
}

FillerMove random_move(Rng& rng, std::int64_t n, std::int64_t den) {
  const std::int64_t p = rng.between(1, n);
  std::vector<Rational> add(static_cast<std::size_t>(n));
  for (std::int64_t left = p * den; left > 0;) {
    auto j = std::size_t(rng.between(0, n - 1));
    if (add[j] < R(1)) {
      add[j] += R(1, den);
      --left;
    }
  }
  return FillerMove::dense(p, add);
}

}  // namespace

TEST_SUITE("order") {

TEST_CASE("majorization and dominance examples") {
  CHECK(majorizes({2, 0, -2}, {1, 0, -1}));
  CHECK_FALSE(majorizes({1, 1}, {2, 0}));
  CHECK(majorizes({0, 2}, {1, 1}));
  CHECK_FALSE(majorizes({2, 0}, {1, 0}));
  CHECK(dominates(Seq{2, 1, 0}, Seq{1, 1, 0}));
  CHECK_FALSE(dominates(Seq{2, 0, 0}, Seq{1, 1, 0}));
}

TEST_CASE("predicates agree with brute force") {
  Rng rng(41);
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t n = rng.between(1, 6);
    Seq x = random_sorted(rng, n, -2, 2, 2);
    Seq y = rng.coin() ? random_majorizer(rng, x, 2) : random_sorted(rng, n, -2, 2, 2);
    CHECK(majorizes(x, y) == ref::majorizes(x, y));
    CHECK(majorizes(y, x) == ref::majorizes(y, x));
    CHECK(dominates(x, y) == ref::dominates(x, y));
  }
}

TEST_CASE("perturbation chains") {
  auto chain = perturbation_chain({2, 0}, {1, 1});
  REQUIRE(chain.size() == 2);
  for (const auto& step : chain) {
    CHECK(step.amount == R(1, 2));
    CHECK(step.to_index == 0);
    CHECK(step.from_index == 1);
  }
  CHECK(perturbation_chain({1, 1}, {1, 1}).empty());
  CHECK_THROWS(perturbation_chain({1, 1}, {2, 0}));

  Rng rng(42);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t den = rng.coin() ? 2 : 3;
    Seq y = random_sorted(rng, rng.between(1, 7), -3, 3, den);
    Seq x = random_majorizer(rng, y, den);
    Seq z = y;
    for (const auto& step : perturbation_chain(x, y)) {
      CHECK(step.amount.sign() > 0);
      CHECK(step.amount < R(1));
      z = apply_perturbation(z, step);
      CHECK(ref::majorizes(x, z));
    }
    CHECK(z == x);
  }
}

TEST_CASE("weak monopolization examples") {
  CHECK(weakly_monopolizes(neg({2, 1}), neg({1, R(3, 2)})));
  CHECK(weakly_monopolizes(neg({2, 1}), neg({1, 2})));
  CHECK_FALSE(weakly_monopolizes(neg({1, 1}), neg({2, 0})));

  Rng rng(43);
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t n = rng.between(1, 5);
    Seq a = random_sorted(rng, n, -2, 2, 2);
    Seq b = random_sorted(rng, n, -2, 2, 2);
    CHECK(weakly_monopolizes(neg(a), neg(b)) == ref::weakly_monopolizes(a, b));
  }
}

TEST_CASE("monopolization survives a transferred round") {
  CupState A = neg({2, 1}), B = neg({1, R(3, 2)});
  FillerMove mb = FillerMove::dense(1, {R(1, 2), R(1, 2)});
  FillerMove ma = transfer_filler_move(A, B, mb);
  CupState A2 = apply_filler_move(A, ma), B2 = apply_filler_move(B, mb);
  CHECK(ref::weakly_monopolizes(A2.fills(), B2.fills()));
  EmptierMove ga = greedy_empty(A2, 1, TiePolicy::lowest());
  EmptierMove eb = transfer_emptier_move(A2, B2, 1, ga);
  CHECK(eb.size() == 1);
  CHECK(ref::weakly_monopolizes(apply_emptier_move(A2, ga, 1).fills(), apply_emptier_move(B2, eb, 1).fills()));
  CHECK_THROWS(transfer_filler_move(neg({1, 1}), neg({2, 0}), mb));

  Rng rng(44);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t n = rng.between(2, 6);
    Seq a = random_sorted(rng, n, -2, 3, 2);
    Seq b = a;
    std::int64_t u = rng.between(0, n - 1), w = rng.between(0, n - 2);
    if (w >= u) ++w;
    R c(rng.between(0, 2), 2);
    if (!(a[std::size_t(u)] > a[std::size_t(w)] + c)) continue;
    b[std::size_t(u)] -= 1;
    b[std::size_t(w)] += c;
    CupState A(a, GameVariant::negative_fill()), B(b, GameVariant::negative_fill());
    REQUIRE(ref::weakly_monopolizes(A.fills(), B.fills()));
    FillerMove mb2 = random_move(rng, n, 2);
    FillerMove ma2 = transfer_filler_move(A, B, mb2);
    CHECK(ma2.p() == mb2.p());
    CHECK_FALSE(validate_filler_move(A, ma2));
    CupState A3 = apply_filler_move(A, ma2), B3 = apply_filler_move(B, mb2);
    REQUIRE(ref::weakly_monopolizes(A3.fills(), B3.fills()));
    for (std::int64_t p = 1; p <= n; ++p) {
      EmptierMove g = greedy_empty(A3, p, TiePolicy::random(rng.next()));
      EmptierMove e = transfer_emptier_move(A3, B3, p, g);
      CHECK_FALSE(validate_emptier_move(B3, e, p));
      CHECK(ref::weakly_monopolizes(apply_emptier_move(A3, g, p).fills(), apply_emptier_move(B3, e, p).fills()));
    }
  }
}

TEST_CASE("majorization transfer against greedy") {
  Seq x{1, -1}, y{0, 0};
  FillerMove my = FillerMove::dense(1, {R(1, 2), R(1, 2)});
  FillerMove mx = majorization_transfer(x, y, my);
  CHECK_FALSE(validate_filler_move(neg(x), mx));
  CHECK(ref::majorizes(ref_greedy(x, mx), ref_greedy(y, my)));
  CHECK_THROWS(majorization_transfer({0, 0}, {1, -1}, my));

  Rng rng(45);
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t n = rng.between(1, 7);
    const std::int64_t den = rng.coin() ? 2 : 4;
    Seq ys = random_sorted(rng, n, -3, 3, den);
    Seq xs = random_majorizer(rng, ys, den);
    FillerMove m = normalize_filler_move(neg(ys), random_move(rng, n, den));
    FillerMove t = majorization_transfer(xs, ys, m);
    CHECK_FALSE(validate_filler_move(neg(xs), t));
    CHECK(ref::majorizes(ref_greedy(xs, t), ref_greedy(ys, m)));
  }
}

TEST_CASE("stone domination transfer") {
  StoneState x({1, 0, 0, 0}), y({0, 0, 0, 0});
  StoneMove my{0, 1};
  auto none = stone_transfer(x, y, my);
  CHECK_FALSE(none);
  CHECK(ref::dominates(to_seq(x.positions()), to_seq(apply_stone_move(y, my).positions())));

  auto some = stone_transfer(y, y, my);
  REQUIRE(some);
  CHECK(*some == StoneMove{0, 1});

  Rng rng(46);
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t n = rng.between(2, 8);
    std::optional<std::int64_t> spacing;
    if (rng.coin()) spacing = rng.between(1, 4);
    std::vector<std::int64_t> ys(static_cast<std::size_t>(n)), xs(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
      ys[j] = rng.between(-2, 3);
      xs[j] = ys[j] + rng.between(0, 2);
      if (spacing) xs[j] = std::max<std::int64_t>(xs[j], 0);
    }
    StoneState Y(ys), X(xs, spacing);
    auto moves = enumerate_valid_moves(Y);
    if (moves.empty()) continue;
    StoneMove m = moves[rng.below(moves.size())];
    m.count = rng.between(1, m.count);
    auto t = stone_transfer(X, Y, m);
    StoneState X2 = t ? apply_stone_move(X, *t) : X;
    CHECK(ref::dominates(to_seq(X2.positions()), to_seq(apply_stone_move(Y, m).positions())));
  }
}

TEST_CASE("stone cover of a round") {
  FillerMove m = FillerMove::dense(1, {R(1, 2), R(1, 2)});
  StoneCover c = stone_cover_move({0, 0}, m);
  CHECK(c.level == R(0));
  CHECK(c.count == 1);
  CHECK(apply_stone_cover({0, 0}, c) == Seq{2, -2});
  CHECK_THROWS(stone_cover_move({1, 0}, m));

  Rng rng(47);
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t n = rng.between(1, 7);
    Seq ev(static_cast<std::size_t>(n));
    for (auto& v : ev) v = R(2 * rng.between(-2, 2));
    ev = ref::desc(ev);
    FillerMove mv = random_move(rng, n, rng.coin() ? 2 : 4);
    CHECK(ref::majorizes(apply_stone_cover(ev, stone_cover_move(ev, mv)), ref_greedy(ev, mv)));
  }
}

TEST_CASE("negated rounds") {
  FillerMove m = FillerMove::dense(1, {R(1, 2), R(1, 2), 0});
  FillerMove n = negate_round(m, 3);
  CHECK(n == FillerMove::dense(2, {R(1, 2), R(1, 2), 1}));
  CHECK(negate_round(n, 3) == m);
  CHECK(negate_round(hold_state_move(3), 3) == hold_state_move(3));

  // the negated round on -y is minus the round on y
  Rng rng(48);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t k = rng.between(2, 6);
    FillerMove mv = random_move(rng, k, 2);
    Seq y = random_sorted(rng, k, -3, 3, 2);
    Seq minus_y;
    for (auto& v : ref::desc(y)) minus_y.push_back(-v);
    minus_y = ref::desc(minus_y);
    ref::Vec direct = ref_greedy(y, mv);
    ref::Vec mirrored = ref_greedy(minus_y, reverse_move(negate_round(mv, k)));
    for (auto& v : direct) v = -v;
    CHECK(ref::desc(direct) == mirrored);
  }
}

TEST_CASE("mirror filler plays the negated game") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::int64_t n = 2 + std::int64_t(seed % 9);
    RandomFiller plain(n, seed);
    MirrorFiller mirrored(std::make_unique<RandomFiller>(n, seed));
    GreedyEmptier e1, e2;
    CupState a = CupState::zeros(n, GameVariant::negative_fill()), b = a;
    ref::Vec shadow = a.fills();
    for (int r = 0; r < 60; ++r) {
      FillerMove m = normalize_filler_move(a, plain.next_move(a));
      shadow = ref_greedy(shadow, m);
      a = apply_emptier_move(apply_filler_move(a, m), e1.choose(apply_filler_move(a, m), m), m.p());
      b = play_round(b, mirrored, e2).state;
      REQUIRE(a.fills() == shadow);
      REQUIRE(negate_state(a) == b);
    }
  }
}

}  // TEST_SUITE
