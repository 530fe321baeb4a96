#include "cupgame/state.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cupgame {

GameVariant GameVariant::augmented(const Rational& eps) {
  if (eps.sign() <= 0 || eps > Rational(1))
    throw std::invalid_argument("augmentation epsilon must lie in (0, 1], got " + eps.str());
  return {Kind::Augmented, eps};
}

Rational GameVariant::emptied(const Rational& fill) const {
  switch (kind) {
    case Kind::NegativeFill:
      return fill - 1;
    case Kind::Standard:
      return fill > Rational(1) ? fill - 1 : Rational(0);
    case Kind::Augmented: {
      Rational r = fill - 1 - epsilon;
      return r.sign() > 0 ? r : Rational(0);
    }
  }
  return fill;
}

std::string GameVariant::name() const {
  switch (kind) {
    case Kind::Standard:
      return "standard";
    case Kind::NegativeFill:
      return "negative_fill";
    case Kind::Augmented:
      return "augmented";
  }
  return "?";
}

GameVariant GameVariant::parse(const std::string& name, const std::optional<Rational>& eps) {
  if (name == "standard") return standard();
  if (name == "negative_fill" || name == "negative-fill") return negative_fill();
  if (name == "augmented") {
    if (!eps) throw std::invalid_argument("augmented variant needs epsilon");
    return augmented(*eps);
  }
  throw std::invalid_argument("unknown game variant '" + name + "'");
}

CupState::CupState(const std::vector<Rational>& fills, GameVariant variant) {
  std::vector<Run> runs;
  runs.reserve(fills.size());
  for (const auto& f : fills) runs.push_back({f, 1});
  *this = from_runs(std::move(runs), std::move(variant));
}

CupState CupState::zeros(std::int64_t n, GameVariant variant) {
  if (n < 1) throw std::invalid_argument("a game needs at least one cup");
  return from_runs({{Rational(0), n}}, std::move(variant));
}

CupState CupState::from_runs(std::vector<Run> runs, GameVariant variant) {
  CupState s;
  s.variant_ = std::move(variant);
  bool sorted = true;
  for (std::size_t i = 1; i < runs.size() && sorted; ++i)
    sorted = !(runs[i - 1].value < runs[i].value);
  if (!sorted) {
    std::stable_sort(runs.begin(), runs.end(),
                     [](const Run& a, const Run& b) { return b.value < a.value; });
  }
  s.runs_.reserve(runs.size());
  for (auto& r : runs) {
    if (r.count < 0) throw std::invalid_argument("negative run length");
    if (r.count == 0) continue;
    s.n_ += r.count;
    if (!s.runs_.empty() && s.runs_.back().value == r.value)
      s.runs_.back().count += r.count;
    else
      s.runs_.push_back(std::move(r));
  }
  s.check();
  return s;
}

void CupState::check() const {
  if (n_ < 1) throw std::invalid_argument("a game needs at least one cup");
  if (!variant_.allows_negative() && runs_.back().value.sign() < 0)
    throw std::invalid_argument("negative fill " + runs_.back().value.str() + " in " +
                                variant_.name() + " game");
}

std::vector<Rational> CupState::fills() const {
  std::vector<Rational> out;
  out.reserve(std::size_t(n_));
  for (const auto& r : runs_) out.insert(out.end(), std::size_t(r.count), r.value);
  return out;
}

Rational CupState::fill(std::int64_t index) const {
  if (index < 0 || index >= n_) throw std::out_of_range("cup index out of range");
  for (const auto& r : runs_) {
    if (index < r.count) return r.value;
    index -= r.count;
  }
  throw std::logic_error("unreachable");
}

Rational CupState::backlog() const { return runs_.front().value; }

Rational CupState::total() const {
  Rational t;
  for (const auto& r : runs_) t += r.value * r.count;
  return t;
}

std::int64_t CupState::count_at(const Rational& level) const {
  auto it = std::partition_point(runs_.begin(), runs_.end(),
                                 [&](const Run& r) { return level < r.value; });
  return it != runs_.end() && it->value == level ? it->count : 0;
}

std::int64_t CupState::first_index_of(const Rational& level) const {
  auto it = std::partition_point(runs_.begin(), runs_.end(),
                                 [&](const Run& r) { return level < r.value; });
  if (it == runs_.end() || !(it->value == level)) return -1;
  std::int64_t pos = 0;
  for (auto r = runs_.begin(); r != it; ++r) pos += r->count;
  return pos;
}

CupState CupState::with_variant(GameVariant v) const {
  CupState s = *this;
  s.variant_ = std::move(v);
  s.check();
  return s;
}

std::string CupState::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& r : runs_) {
    for (std::int64_t i = 0; i < std::min<std::int64_t>(r.count, 4); ++i) {
      os << (first ? "" : ",") << r.value;
      first = false;
    }
    if (r.count > 4) os << ",...x" << r.count;
  }
  os << '}';
  return os.str();
}

FillerMove::FillerMove(std::int64_t p, std::vector<Segment> segments) : p_(p) {
  segments_.reserve(segments.size());
  for (auto& s : segments) {
    if (s.count < 0) throw std::invalid_argument("negative segment length");
    if (s.count == 0) continue;
    n_ += s.count;
    if (!segments_.empty() && segments_.back().value == s.value)
      segments_.back().count += s.count;
    else
      segments_.push_back(std::move(s));
  }
}

FillerMove FillerMove::dense(std::int64_t p, const std::vector<Rational>& additions) {
  std::vector<Segment> segs;
  segs.reserve(additions.size());
  for (const auto& a : additions) segs.push_back({a, 1});
  return FillerMove(p, std::move(segs));
}

std::vector<Rational> FillerMove::additions() const {
  std::vector<Rational> out;
  out.reserve(std::size_t(n_));
  for (const auto& s : segments_) out.insert(out.end(), std::size_t(s.count), s.value);
  return out;
}

Rational FillerMove::addition(std::int64_t index) const {
  if (index < 0 || index >= n_) throw std::out_of_range("cup index out of range");
  for (const auto& s : segments_) {
    if (index < s.count) return s.value;
    index -= s.count;
  }
  throw std::logic_error("unreachable");
}

EmptierMove::EmptierMove(std::vector<IndexRange> ranges) {
  std::sort(ranges.begin(), ranges.end(),
            [](const IndexRange& a, const IndexRange& b) { return a.first < b.first; });
  for (const auto& r : ranges) {
    if (r.count < 0 || r.first < 0) throw std::invalid_argument("bad index range");
    if (r.count == 0) continue;
    if (!ranges_.empty()) {
      auto& last = ranges_.back();
      if (r.first < last.first + last.count)
        throw std::invalid_argument("emptier move repeats cup index " + std::to_string(r.first));
      if (r.first == last.first + last.count) {
        last.count += r.count;
        size_ += r.count;
        continue;
      }
    }
    ranges_.push_back(r);
    size_ += r.count;
  }
}

EmptierMove EmptierMove::from_indices(std::vector<std::int64_t> indices) {
  std::vector<IndexRange> ranges;
  ranges.reserve(indices.size());
  for (auto i : indices) ranges.push_back({i, 1});
  return EmptierMove(std::move(ranges));
}

std::vector<std::int64_t> EmptierMove::indices() const {
  std::vector<std::int64_t> out;
  out.reserve(std::size_t(size_));
  for (const auto& r : ranges_)
    for (std::int64_t i = 0; i < r.count; ++i) out.push_back(r.first + i);
  return out;
}

bool EmptierMove::contains(std::int64_t index) const {
  for (const auto& r : ranges_)
    if (index >= r.first && index < r.first + r.count) return true;
  return false;
}

}  // namespace cupgame
