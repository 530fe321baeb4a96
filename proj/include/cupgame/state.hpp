#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cupgame/rational.hpp"

namespace cupgame {

struct GameVariant {
  enum class Kind { Standard, NegativeFill, Augmented };

  Kind kind = Kind::Standard;
  Rational epsilon;  // only meaningful for Augmented, in (0, 1]

  static GameVariant standard() { return {Kind::Standard, Rational()}; }
  static GameVariant negative_fill() { return {Kind::NegativeFill, Rational()}; }
  static GameVariant augmented(const Rational& eps);

  bool allows_negative() const { return kind == Kind::NegativeFill; }
  // Amount removed from one emptied cup holding `fill`.
  Rational emptied(const Rational& fill) const;
  std::string name() const;
  static GameVariant parse(const std::string& name, const std::optional<Rational>& eps);

  friend bool operator==(const GameVariant&, const GameVariant&) = default;
};

// `count` consecutive sorted positions sharing one value.
struct Run {
  Rational value;
  std::int64_t count = 0;

  friend bool operator==(const Run&, const Run&) = default;
};

// Sorted multiset of cup fills, stored as maximal runs of equal values in
// non-increasing order. Index i always refers to the i-th fullest cup.
class CupState {
 public:
  CupState() = default;
  CupState(const std::vector<Rational>& fills, GameVariant variant);

  static CupState zeros(std::int64_t n, GameVariant variant);
  // Runs may arrive in any order and may repeat values.
  static CupState from_runs(std::vector<Run> runs, GameVariant variant);

  std::int64_t size() const { return n_; }
  const std::vector<Run>& runs() const { return runs_; }
  const GameVariant& variant() const { return variant_; }

  std::vector<Rational> fills() const;
  Rational fill(std::int64_t index) const;
  Rational backlog() const;
  Rational total() const;
  std::int64_t count_at(const Rational& level) const;
  // First sorted index holding `level`, or -1.
  std::int64_t first_index_of(const Rational& level) const;

  CupState with_variant(GameVariant v) const;
  std::string str() const;

  friend bool operator==(const CupState& a, const CupState& b) {
    return a.n_ == b.n_ && a.runs_ == b.runs_;
  }

 private:
  void check() const;

  std::vector<Run> runs_;
  std::int64_t n_ = 0;
  GameVariant variant_;
};

// Run-length additions in sorted-index order.
struct Segment {
  Rational value;
  std::int64_t count = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

class FillerMove {
 public:
  FillerMove() = default;
  FillerMove(std::int64_t p, std::vector<Segment> segments);

  static FillerMove dense(std::int64_t p, const std::vector<Rational>& additions);

  std::int64_t p() const { return p_; }
  std::int64_t size() const { return n_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<Rational> additions() const;
  Rational addition(std::int64_t index) const;

  friend bool operator==(const FillerMove& a, const FillerMove& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.segments_ == b.segments_;
  }

 private:
  std::int64_t p_ = 0;
  std::int64_t n_ = 0;
  std::vector<Segment> segments_;
};

struct IndexRange {
  std::int64_t first = 0;
  std::int64_t count = 0;

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Set of sorted cup indices (0-based) stored as disjoint ascending ranges.
class EmptierMove {
 public:
  EmptierMove() = default;
  explicit EmptierMove(std::vector<IndexRange> ranges);

  static EmptierMove from_indices(std::vector<std::int64_t> indices);
  static EmptierMove prefix(std::int64_t p) { return EmptierMove({{0, p}}); }

  const std::vector<IndexRange>& ranges() const { return ranges_; }
  std::vector<std::int64_t> indices() const;
  std::int64_t size() const { return size_; }
  bool contains(std::int64_t index) const;

  friend bool operator==(const EmptierMove& a, const EmptierMove& b) {
    return a.ranges_ == b.ranges_;
  }

 private:
  std::vector<IndexRange> ranges_;
  std::int64_t size_ = 0;
};

}  // namespace cupgame
