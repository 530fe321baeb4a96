#include "cupgame/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "cupgame/order.hpp"
#include "cupgame/stones.hpp"
#include "cupgame/trace_io.hpp"

#ifndef CUPGAME_BUILD_ID
#define CUPGAME_BUILD_ID "unknown"
#endif

namespace cupgame::harness {
namespace {

Rational rational_field(const json& j, const char* key, const Rational& fallback) {
  if (!j.contains(key)) return fallback;
  return rational_from_json(j.at(key));
}

std::int64_t int_field(const json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return j.at(key).get<std::int64_t>();
}

RecordLevel parse_record_level(const std::string& s) {
  if (s == "full") return RecordLevel::Full;
  if (s == "backlog_only") return RecordLevel::BacklogOnly;
  if (s == "summary") return RecordLevel::Summary;
  throw ConfigError("unknown record_level '" + s + "'");
}

TiePolicy parse_tie(const json& spec, std::uint64_t seed) {
  std::string tie = spec.value("tie", "lowest");
  if (tie == "lowest") return TiePolicy::lowest();
  if (tie == "highest") return TiePolicy::highest();
  if (tie == "random") return TiePolicy::random(seed);
  throw ConfigError("unknown tie policy '" + tie + "'");
}

// Writes `value` at a dotted path such as "filler.k".
void set_path(json& doc, const std::string& path, const json& value) {
  json* cur = &doc;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("bad sweep path '" + path + "'");
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    if (!cur->contains(key)) (*cur)[key] = json::object();
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string decimal(const Rational& r) {
  std::ostringstream out;
  out << std::setprecision(10) << r.to_double();
  return out.str();
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.document = doc;
  try {
    std::optional<Rational> eps;
    if (doc.contains("epsilon")) eps = rational_from_json(doc.at("epsilon"));
    cfg.variant = GameVariant::parse(doc.value("variant", "negative_fill"), eps);
    cfg.n = int_field(doc, "n", 0);
    if (cfg.n < 1) throw ConfigError("'n' must be a positive integer");
    if (!doc.contains("filler")) throw ConfigError("missing 'filler'");
    cfg.filler = doc.at("filler");
    if (cfg.filler.is_string()) cfg.filler = json{{"name", cfg.filler}};
    cfg.emptier = doc.value("emptier", json{{"name", "greedy"}});
    if (cfg.emptier.is_string()) cfg.emptier = json{{"name", cfg.emptier}};
    cfg.rounds = int_field(doc, "rounds", 0);
    if (doc.contains("stop")) {
      const json& stop = doc.at("stop");
      if (stop.contains("backlog")) cfg.stop_at_backlog = rational_from_json(stop.at("backlog"));
      cfg.stop_when_filler_done = stop.value("when_filler_done", false);
    }
    if (cfg.rounds < 1) throw ConfigError("'rounds' must be a positive integer");
    cfg.seed = doc.value("seed", std::uint64_t(1));
    cfg.repetitions = int_field(doc, "repetitions", 1);
    if (cfg.repetitions < 1) throw ConfigError("'repetitions' must be positive");
    cfg.workers = int_field(doc, "workers", 0);
    cfg.record_level = parse_record_level(doc.value("record_level", "backlog_only"));
    if (doc.contains("output")) {
      const json& out = doc.at("output");
      cfg.trace_json = out.value("trace_json", "");
      cfg.backlog_csv = out.value("backlog_csv", "");
      cfg.sweep_csv = out.value("sweep_csv", "");
    }
    cfg.sweep = doc.value("sweep", json::object());
    if (!cfg.sweep.is_object()) throw ConfigError("'sweep' must map paths to arrays");
    for (auto it = cfg.sweep.begin(); it != cfg.sweep.end(); ++it)
      if (!it.value().is_array() || it.value().empty())
        throw ConfigError("sweep range '" + it.key() + "' must be a nonempty array");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!cfg.trace_json.empty() && cfg.record_level != RecordLevel::Full)
    throw ConfigError("trace_json output needs record_level \"full\"");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

void apply_env_overrides(ExperimentConfig& cfg) {
  auto read = [](const char* name) -> std::optional<std::uint64_t> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    unsigned long long x = std::strtoull(v, &end, 10);
    if (*end) throw ConfigError(std::string(name) + " must be a non-negative integer");
    return x;
  };
  if (auto s = read("CUPGAME_SEED")) {
    cfg.seed = *s;
    cfg.document["seed"] = *s;
  }
  if (auto w = read("CUPGAME_WORKERS")) {
    cfg.workers = std::int64_t(*w);
    cfg.document["workers"] = *w;
  }
}

std::uint64_t config_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::string build_id() { return CUPGAME_BUILD_ID; }

std::unique_ptr<FillerStrategy> make_filler(const json& spec_in, std::int64_t n, std::uint64_t seed) {
  json spec = spec_in.is_string() ? json{{"name", spec_in}} : spec_in;
  if (!spec.is_object() || !spec.contains("name")) throw ConfigError("filler needs a name");
  const std::string name = spec.at("name").get<std::string>();
  if (name == "hold") return std::make_unique<HoldStateFiller>();
  if (name == "warmup") return std::make_unique<WarmupFiller>();
  if (name == "main") {
    std::int64_t k = int_field(spec, "k", 0);
    if (k < 1) throw ConfigError("main filler needs k >= 1");
    return std::make_unique<MainFiller>(n, k, rational_field(spec, "c", kDefaultPlanConstant));
  }
  if (name == "halving") return std::make_unique<MainFiller>(plan_binary_halving(n, int_field(spec, "k", 0)));
  if (name == "random")
    return std::make_unique<RandomFiller>(n, seed, rational_field(spec, "grid", Rational(1, 2)));
  auto inner = [&]() {
    if (!spec.contains("inner")) throw ConfigError(name + " filler needs an 'inner' filler");
    return make_filler(spec.at("inner"), n, seed);
  };
  if (name == "spread") return std::make_unique<SpreadFiller>(inner(), rational_field(spec, "epsilon", Rational(1, 2)));
  if (name == "change_limited") return std::make_unique<ChangeLimitedFiller>(inner(), int_field(spec, "gap", n));
  if (name == "mirror") return std::make_unique<MirrorFiller>(inner());
  throw ConfigError("unknown filler '" + name + "'");
}

std::unique_ptr<EmptierStrategy> make_emptier(const json& spec_in, std::uint64_t seed) {
  json spec = spec_in.is_string() ? json{{"name", spec_in}} : spec_in;
  const std::string name = spec.value("name", "greedy");
  if (name == "greedy") return std::make_unique<GreedyEmptier>(parse_tie(spec, seed));
  if (name == "proportional") return std::make_unique<ProportionalEmptier>(seed);
  throw ConfigError("unknown emptier '" + name + "'");
}

std::string strategy_id(const json& spec) {
  if (spec.is_string()) return spec.get<std::string>();
  std::string id = spec.value("name", "?");
  std::string params;
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (it.key() == "name") continue;
    params += (params.empty() ? "" : ";") + it.key() + "=" +
              (it.value().is_object() ? strategy_id(it.value()) : it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
  }
  return params.empty() ? id : id + "(" + params + ")";
}

double EnvelopeMonitor::bound(std::int64_t n, std::int64_t t) {
  const double ln = std::log(double(std::max<std::int64_t>(n, 2)));
  const double curve = bound_b_of_t_value(std::max<std::int64_t>(n, 2), double(t));
  return kSlack * std::min(curve, std::sqrt(double(t) * ln) * std::sqrt(ln));
}

void EnvelopeMonitor::check(std::int64_t n, std::int64_t t, const Rational& backlog) {
  ++checks_;
  const double limit = bound(n, t);
  if (backlog.to_double() <= limit) return;
  ++violation_count_;
  if (examples_.size() < 10)
    examples_.push_back("n=" + std::to_string(n) + " t=" + std::to_string(t) + " backlog " + backlog.str() +
                        " > " + std::to_string(limit));
}

void EnvelopeMonitor::attach(RunOptions& options, std::int64_t n) {
  auto previous = options.observer;
  options.observer = [this, n, previous](std::int64_t t, const CupState& state) {
    check(n, t, state.backlog());
    if (previous) previous(t, state);
  };
}

void EnvelopeMonitor::merge(const EnvelopeMonitor& other) {
  checks_ += other.checks_;
  violation_count_ += other.violation_count_;
  for (const auto& e : other.examples_)
    if (examples_.size() < 10) examples_.push_back(e);
}

json RunSummary::to_json() const {
  json j{{"n", n},
         {"variant", variant},
         {"filler", filler},
         {"emptier", emptier},
         {"seed", seed},
         {"rounds", rounds_played},
         {"final_backlog", final_backlog.str()},
         {"max_backlog", max_backlog.str()},
         {"filler_done", filler_done},
         {"checks",
          {{"conservation", conservation_checks},
           {"conservation_violations", conservation_violations},
           {"envelope", envelope_checks},
           {"envelope_violations", envelope_violations}}},
         {"wall_time", wall_time}};
  if (plan) {
    j["plan"] = {{"describe", plan->describe()},
                 {"k_prime", plan->k_prime},
                 {"h", plan->h},
                 {"r", plan->r},
                 {"n_prime", plan->n_prime},
                 {"guaranteed_backlog", plan->guaranteed_backlog.str()},
                 {"round_bound", plan->round_bound}};
  }
  return j;
}

RunSummary run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, EnvelopeMonitor* monitor,
                          GameTrace* trace_out) {
  auto filler = make_filler(cfg.filler, cfg.n, derive_seed(seed, 1));
  auto emptier = make_emptier(cfg.emptier, derive_seed(seed, 2));
  RunSummary s;
  s.n = cfg.n;
  s.variant = cfg.variant.name();
  s.filler = filler->name();
  s.emptier = emptier->name();
  s.seed = seed;
  if (auto* main = dynamic_cast<MainFiller*>(filler.get())) s.plan = main->plan();

  RunOptions opt;
  opt.record_level = cfg.record_level;
  opt.stop_at_backlog = cfg.stop_at_backlog;
  opt.stop_when_filler_done = cfg.stop_when_filler_done;
  const CupState start = CupState::zeros(cfg.n, cfg.variant);
  const Rational total = start.total();
  const bool conserves = cfg.variant.allows_negative();
  opt.observer = [&](std::int64_t, const CupState& state) {
    if (!conserves) return;
    ++s.conservation_checks;
    if (state.total() != total) ++s.conservation_violations;
  };
  EnvelopeMonitor local;
  if (emptier->is_greedy()) local.attach(opt, cfg.n);

  auto t0 = std::chrono::steady_clock::now();
  GameTrace trace = run_game(start, *filler, *emptier, cfg.rounds, opt);
  s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  trace.seed = seed;
  s.rounds_played = trace.rounds_played;
  s.final_backlog = trace.final_state.backlog();
  s.max_backlog = trace.max_backlog;
  s.filler_done = filler->done();
  s.envelope_checks = local.checks();
  s.envelope_violations = local.violation_count();
  if (monitor) monitor->merge(local);
  if (trace_out) *trace_out = std::move(trace);
  return s;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& cfg) {
  std::vector<json> docs{cfg.document};
  for (auto it = cfg.sweep.begin(); it != cfg.sweep.end(); ++it) {
    std::vector<json> next;
    for (const auto& d : docs)
      for (const auto& v : it.value()) {
        json copy = d;
        set_path(copy, it.key(), v);
        next.push_back(std::move(copy));
      }
    docs = std::move(next);
  }
  std::vector<ExperimentConfig> out;
  for (auto& d : docs) {
    d.erase("sweep");
    ExperimentConfig one = parse_config(d);
    one.workers = cfg.workers;
    for (std::int64_t r = 0; r < one.repetitions; ++r) {
      ExperimentConfig rep = one;
      rep.seed = one.repetitions == 1 ? one.seed : derive_seed(one.seed, std::uint64_t(r));
      rep.repetitions = 1;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

void write_sweep_header(std::ostream& csv, const ExperimentConfig& cfg) {
  csv << "# schema " << kSweepCsvSchema << " build=" << build_id() << " config_hash=" << hex64(config_hash(cfg.document))
      << "\n";
  csv << "index,n,k,t,seed,variant,filler,emptier,status,rounds_used,final_backlog,final_backlog_float,"
         "max_backlog,max_backlog_float,guaranteed_backlog,round_bound,t_of_b,wall_time,error\n";
}

void write_sweep_row(std::ostream& csv, const SweepRow& row) {
  const RunSummary& s = row.summary;
  csv << row.index << ',' << row.n << ',' << (row.k ? std::to_string(*row.k) : "") << ',' << row.t << ','
      << row.seed << ',' << csv_escape(row.variant) << ',' << csv_escape(row.filler) << ','
      << csv_escape(row.emptier) << ',' << (row.ok ? "ok" : "error") << ',';
  if (row.ok) {
    csv << s.rounds_played << ',' << s.final_backlog.str() << ',' << decimal(s.final_backlog) << ','
        << s.max_backlog.str() << ',' << decimal(s.max_backlog) << ',';
    if (s.plan) csv << s.plan->guaranteed_backlog.str() << ',' << s.plan->round_bound;
    else csv << ',';
    csv << ',';
    if (row.k && *row.k >= 1 && *row.k < row.n && row.n >= 2) csv << decimal(bound_t_of_b(row.n, *row.k));
    csv << ',' << std::setprecision(6) << s.wall_time << ",\n";
  } else {
    csv << ",,,,,,,,," << csv_escape(row.error) << "\n";
  }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream& csv, EnvelopeMonitor* monitor) {
  const std::vector<ExperimentConfig> runs = expand_sweep(cfg);
  if (runs.empty()) throw ConfigError("sweep expands to no runs");
  write_sweep_header(csv, cfg);
  std::vector<std::optional<SweepRow>> done(runs.size());
  std::vector<SweepRow> rows;
  std::size_t next_to_write = 0;
  std::atomic<std::size_t> next_job{0};
  std::mutex sink;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next_job.fetch_add(1);
      if (i >= runs.size()) return;
      const ExperimentConfig& run = runs[i];
      SweepRow row;
      row.index = std::int64_t(i);
      row.n = run.n;
      if (run.filler.is_object() && run.filler.contains("k") && run.filler.at("k").is_number_integer())
        row.k = run.filler.at("k").get<std::int64_t>();
      row.t = run.rounds;
      row.seed = run.seed;
      row.variant = run.variant.name();
      row.filler = strategy_id(run.filler);
      row.emptier = strategy_id(run.emptier);
      EnvelopeMonitor local;
      try {
        row.summary = run_experiment(run, run.seed, &local);
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      std::lock_guard<std::mutex> lock(sink);
      if (monitor) monitor->merge(local);
      done[i] = std::move(row);
      while (next_to_write < done.size() && done[next_to_write]) {
        write_sweep_row(csv, *done[next_to_write]);
        csv.flush();
        rows.push_back(*done[next_to_write]);
        ++next_to_write;
      }
    }
  };
  std::int64_t workers = cfg.workers > 0 ? cfg.workers : std::int64_t(std::thread::hardware_concurrency());
  workers = std::clamp<std::int64_t>(workers, 1, std::int64_t(runs.size()));
  std::vector<std::thread> pool;
  for (std::int64_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::vector<std::int64_t> log_spaced(std::int64_t lo, std::int64_t hi, std::int64_t per_octave) {
  if (lo < 1 || hi < lo || per_octave < 1) throw std::invalid_argument("bad log-spaced range");
  std::vector<std::int64_t> out;
  const double step = std::pow(2.0, 1.0 / double(per_octave));
  for (double x = double(lo); x <= double(hi) * (1 + 1e-12); x *= step) {
    std::int64_t v = std::llround(x);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

std::vector<CurvePoint> run_curve(std::int64_t n, const std::vector<std::int64_t>& horizons, EnvelopeMonitor* monitor) {
  if (n < 2) throw std::invalid_argument("curve needs n >= 2");
  if (horizons.empty()) throw std::invalid_argument("curve needs at least one horizon");
  for (std::size_t i = 0; i < horizons.size(); ++i)
    if (horizons[i] < 1 || (i && horizons[i] <= horizons[i - 1]))
      throw std::invalid_argument("horizons must be positive and increasing");
  const std::int64_t t_max = horizons.back();

  // Candidates: binary halving at the largest k that fits, and the main
  // filler at every power-of-two k it accepts.
  std::vector<std::pair<std::string, std::unique_ptr<FillerStrategy>>> candidates;
  std::int64_t halving_k = 1;
  while ((std::int64_t(1) << (halving_k + 1)) <= n && halving_k + 1 < 62) ++halving_k;
  candidates.emplace_back("halving(k=" + std::to_string(halving_k) + ")",
                          std::make_unique<MainFiller>(plan_binary_halving(n, halving_k)));
  for (std::int64_t k = 2; Rational(k) <= kDefaultPlanConstant * n; k *= 2) {
    try {
      MainFillerPlan plan = plan_main_filler(n, k);
      if (plan.branch != MainFillerPlan::Branch::Amplify) continue;
      candidates.emplace_back("main(k=" + std::to_string(k) + ")", std::make_unique<MainFiller>(plan));
    } catch (const InfeasiblePlan&) {
    }
  }

  std::vector<CurvePoint> points(horizons.size());
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    points[i].t = horizons[i];
    points[i].bound = bound_b_of_t(n, horizons[i]);
    points[i].measured = Rational(-1);
  }
  for (auto& [label, filler] : candidates) {
    GreedyEmptier greedy;
    RunOptions opt;
    opt.record_level = RecordLevel::BacklogOnly;
    opt.stop_when_filler_done = true;
    EnvelopeMonitor local;
    local.attach(opt, n);
    GameTrace trace = run_game(CupState::zeros(n, GameVariant::negative_fill()), *filler, greedy, t_max, opt);
    if (monitor) monitor->merge(local);
    // once done the filler holds, so its best backlog stays available
    Rational best;
    std::size_t h = 0;
    for (std::int64_t t = 1; t <= t_max && h < horizons.size(); ++t) {
      if (t <= std::int64_t(trace.backlogs.size())) best = std::max(best, trace.backlogs[std::size_t(t - 1)]);
      while (h < horizons.size() && horizons[h] == t) {
        if (best > points[h].measured) {
          points[h].measured = best;
          points[h].filler = label;
        }
        ++h;
      }
    }
  }
  return points;
}

void write_curve_csv(std::ostream& csv, std::int64_t n, const std::vector<CurvePoint>& points) {
  csv << "# schema " << kCurveCsvSchema << " build=" << build_id() << " n=" << n << "\n";
  csv << "t,measured_backlog,measured_backlog_float,bound_b_of_t,bound_b_of_t_float,filler\n";
  for (const auto& p : points)
    csv << p.t << ',' << p.measured.str() << ',' << decimal(p.measured) << ',' << p.bound.str() << ','
        << decimal(p.bound) << ',' << csv_escape(p.filler) << "\n";
}

}  // namespace cupgame::harness
