#include "cupgame/trace_io.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace cupgame {

using nlohmann::json;

json rational_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw std::invalid_argument("expected a rational string, got " + j.dump());
}

json trace_to_json(const GameTrace& trace) {
  json j;
  j["schema"] = kTraceSchema;
  j["variant"] = trace.initial_state.variant().name();
  if (trace.initial_state.variant().kind == GameVariant::Kind::Augmented)
    j["epsilon"] = rational_json(trace.initial_state.variant().epsilon);
  j["n"] = trace.initial_state.size();
  j["seed"] = trace.seed ? json(*trace.seed) : json(nullptr);
  json initial = json::array();
  for (const auto& f : trace.initial_state.fills()) initial.push_back(rational_json(f));
  j["initial"] = std::move(initial);
  json rounds = json::array();
  if (trace.record_level == RecordLevel::Full) {
    for (const auto& rec : trace.rounds) {
      json r;
      r["round"] = rec.round_index;
      r["p"] = rec.filler_move.p();
      json adds = json::array();
      for (const auto& a : rec.filler_move.additions()) adds.push_back(rational_json(a));
      r["additions"] = std::move(adds);
      r["emptied_indices"] = rec.emptier_move.indices();
      r["backlog"] = rational_json(rec.state_after.backlog());
      rounds.push_back(std::move(r));
    }
  } else {
    for (std::size_t i = 0; i < trace.backlogs.size(); ++i)
      rounds.push_back({{"round", i + 1}, {"backlog", rational_json(trace.backlogs[i])}});
  }
  j["rounds"] = std::move(rounds);
  j["final"] = {{"backlog", rational_json(trace.final_state.backlog())},
                {"rounds_played", trace.rounds_played}};
  return j;
}

GameTrace trace_from_json(const json& j) {
  if (j.value("schema", "") != kTraceSchema)
    throw std::invalid_argument("unsupported trace schema '" + j.value("schema", "") + "'");
  std::optional<Rational> eps;
  if (j.contains("epsilon")) eps = rational_from_json(j["epsilon"]);
  GameVariant variant = GameVariant::parse(j.at("variant").get<std::string>(), eps);
  std::vector<Rational> fills;
  for (const auto& f : j.at("initial")) fills.push_back(rational_from_json(f));
  GameTrace trace;
  trace.initial_state = CupState(fills, variant);
  trace.record_level = RecordLevel::Full;
  if (!j.at("seed").is_null()) trace.seed = j["seed"].get<std::uint64_t>();
  CupState state = trace.initial_state;
  trace.max_backlog = state.backlog();
  for (const auto& r : j.at("rounds")) {
    if (!r.contains("additions"))
      throw std::invalid_argument("trace was recorded without moves and cannot be replayed");
    std::vector<Rational> adds;
    for (const auto& a : r["additions"]) adds.push_back(rational_from_json(a));
    FillerMove fm = FillerMove::dense(r.at("p").get<std::int64_t>(), adds);
    EmptierMove em = EmptierMove::from_indices(r.at("emptied_indices").get<std::vector<std::int64_t>>());
    CupState post = apply_filler_move(state, fm);
    state = apply_emptier_move(post, em, fm.p());
    Rational recorded = rational_from_json(r.at("backlog"));
    std::int64_t idx = r.value("round", std::int64_t(trace.rounds.size() + 1));
    if (state.backlog() != recorded)
      throw std::invalid_argument("replay diverges from recorded backlog at round " +
                                  std::to_string(idx));
    trace.backlogs.push_back(recorded);
    if (trace.max_backlog < recorded) trace.max_backlog = recorded;
    trace.rounds.push_back({std::move(fm), std::move(em), state, idx});
  }
  trace.rounds_played = std::int64_t(trace.rounds.size());
  trace.final_state = state;
  return trace;
}

void write_backlog_csv(std::ostream& os, const GameTrace& trace) {
  os << "# " << kBacklogCsvSchema << "\n";
  os << "round,backlog_num,backlog_den,backlog\n";
  auto row = [&](std::int64_t round, const Rational& b) {
    mpq_class q = b.to_mpq();
    os << round << ',' << q.get_num().get_str() << ',' << q.get_den().get_str() << ','
       << std::setprecision(17) << b.to_double() << '\n';
  };
  row(0, trace.initial_state.backlog());
  for (std::size_t i = 0; i < trace.backlogs.size(); ++i) row(std::int64_t(i + 1), trace.backlogs[i]);
}

}  // namespace cupgame
