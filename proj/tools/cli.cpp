#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "spinmono/engine.hpp"
#include "spinmono/random.hpp"

#ifndef SPINMONO_VERSION
#define SPINMONO_VERSION "0.0.0"
#endif

namespace spinmono::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json& require_object(const json& v, const std::string& field) {
  if (!v.is_object()) throw ConfigError(field, "expected an object");
  return v;
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
  return d;
}

std::int64_t get_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_unsigned(const json& v, const std::string& field) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(field, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Spin get_spin(const json& v, const std::string& field) {
  const auto s = get_integer(v, field);
  if (s != 0 && s != 1) throw ConfigError(field, "expected 0 or 1");
  return static_cast<Spin>(s);
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

std::pair<Site, Site> get_pair(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(field, "expected [lo, hi]");
  const Site lo = get_integer(v[0], field + "[0]");
  const Site hi = get_integer(v[1], field + "[1]");
  if (lo > hi) throw ConfigError(field, "expected lo <= hi");
  return {lo, hi};
}

ModelConfig parse_model(const json& v) {
  require_object(v, "model");
  reject_unknown(v, "model", {"name", "params", "radius", "rates", "csv"});
  ModelConfig model;
  if (!v.contains("name")) throw ConfigError("model.name", "missing");
  model.name = get_string(v["name"], "model.name");
  if (v.contains("params")) {
    require_object(v["params"], "model.params");
    for (const auto& [key, value] : v["params"].items()) {
      model.params[key] = get_number(value, "model.params." + key);
    }
  }
  if (v.contains("rates") && v.contains("csv")) {
    throw ConfigError("model.rates", "give either rates or csv, not both");
  }
  if (v.contains("rates")) {
    require_object(v["rates"], "model.rates");
    for (const auto& [key, value] : v["rates"].items()) {
      model.rates[key] = get_number(value, "model.rates." + key);
    }
  }
  if (v.contains("csv")) model.csv = get_string(v["csv"], "model.csv");
  if (v.contains("radius")) {
    const auto r = get_integer(v["radius"], "model.radius");
    if (r < 0) throw ConfigError("model.radius", "must be >= 0");
    model.radius = static_cast<int>(r);
  }
  const bool table = v.contains("rates") || v.contains("csv");
  if (model.name == "custom" && !table) throw ConfigError("model.rates", "custom model needs rates");
  if (v.contains("rates") && !model.radius) throw ConfigError("model.radius", "missing");
  if (table && !model.params.empty()) {
    throw ConfigError("model.params", "not allowed together with a rate table");
  }
  return model;
}

InitialCondition parse_init(const json& v) {
  require_object(v, "init");
  if (!v.contains("kind")) throw ConfigError("init.kind", "missing");
  const std::string kind = get_string(v["kind"], "init.kind");
  if (kind == "step") {
    reject_unknown(v, "init", {"kind"});
    return InitialCondition::step();
  }
  if (kind == "interval") {
    reject_unknown(v, "init", {"kind", "N"});
    if (!v.contains("N")) throw ConfigError("init.N", "missing");
    const auto n = get_integer(v["N"], "init.N");
    if (n < 0) throw ConfigError("init.N", "must be >= 0");
    return InitialCondition::interval(n);
  }
  if (kind == "custom") {
    reject_unknown(v, "init", {"kind", "leftTail", "rightTail", "lo", "core"});
    for (const char* key : {"leftTail", "rightTail", "lo", "core"}) {
      if (!v.contains(key)) throw ConfigError(std::string("init.") + key, "missing");
    }
    const std::string core = get_string(v["core"], "init.core");
    if (core.empty() || core.find_first_not_of("01") != std::string::npos) {
      throw ConfigError("init.core", "expected a non-empty bit string");
    }
    return InitialCondition::custom(get_spin(v["leftTail"], "init.leftTail"),
                                    get_integer(v["lo"], "init.lo"), core,
                                    get_spin(v["rightTail"], "init.rightTail"));
  }
  throw ConfigError("init.kind", "expected step, interval or custom");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_manifest(const RunContext& ctx, const std::string& command,
                    const ExperimentConfig& config) {
  json manifest{{"tool", "spinmono"},
                {"version", SPINMONO_VERSION},
                {"command", command},
                {"seed", config.seed},
                {"config", to_json(config)}};
  write_json(ctx.out_dir / "manifest.json", manifest);
}

json violation_json(const AttractivenessViolation& v) {
  return {{"low", v.low.to_string()},
          {"high", v.high.to_string()},
          {"rate_low", v.rate_low},
          {"rate_high", v.rate_high}};
}

VerifyOptions verify_options(const ExperimentConfig& c, const RunContext& ctx) {
  VerifyOptions o;
  o.mode = c.mode;
  o.m = c.m;
  o.replicas = c.replicas;
  o.seed = c.seed;
  o.epsilon = c.epsilon_trunc;
  o.exact_window = c.window;
  o.workers = ctx.workers;
  return o;
}

RunOptions run_options(const ExperimentConfig& c, const RunContext& ctx) {
  RunOptions o;
  o.epsilon = c.epsilon_trunc;
  o.backend = c.backend;
  o.workers = ctx.workers;
  return o;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::pass: return kSuccess;
    case Verdict::fail: return kViolation;
    case Verdict::inconclusive: return kInconclusive;
  }
  return kViolation;
}

std::ostream& log_of(const RunContext& ctx) {
  static std::ostringstream sink;
  if (ctx.log) return *ctx.log;
  sink.str({});
  return sink;
}

int run_models(const RunContext& ctx) {
  std::vector<RateSpec> specs;
  json listing = json::array();
  for (const auto& name : builtin_model_names()) {
    const ModelParams params = default_params(name);
    specs.push_back(build_model(name, params));
    json entry = rate_table_json(specs.back());
    entry["params"] = json::object();
    for (const auto& [k, v] : params) entry["params"][k] = v;
    listing.push_back(entry);
  }
  std::ostringstream csv;
  write_rate_table_csv(csv, specs);
  write_text(ctx.out_dir / "models.csv", csv.str());
  write_json(ctx.out_dir / "models.json", json{{"models", listing}});
  auto& log = log_of(ctx);
  for (const auto& spec : specs) {
    log << spec.name() << " (R=" << spec.radius() << ")";
    for (std::uint32_t c = 0; c < spec.pattern_count(); ++c) {
      log << ' ' << LocalPattern{spec.radius(), c}.to_string() << '=' << format_double(spec.rate(c));
    }
    log << '\n';
  }
  return kSuccess;
}

int run_check(const ExperimentConfig& config, const RunContext& ctx) {
  const RateSpec spec = to_rate_spec(config.model);
  const AttractivenessReport attr = check_attractive(spec);
  json doc{{"model", spec.name()}, {"radius", spec.radius()}, {"attractive", attr.attractive}};
  doc["violations"] = json::array();
  for (const auto& v : attr.violations) doc["violations"].push_back(violation_json(v));

  std::ostringstream csv;
  csv << "kind,low,high,rate_low,rate_high\n";
  for (const auto& v : attr.violations) {
    csv << "attractiveness," << v.low.to_string() << ',' << v.high.to_string() << ','
        << format_double(v.rate_low) << ',' << format_double(v.rate_high) << '\n';
  }

  bool coupling_ok = true;
  if (spec.is_zero()) {
    doc["coupling"] = {{"status", "skipped: identically-zero table has no events"}};
  } else {
    const double c_max = uniformization_bound(spec);
    const CouplingReport coupling = check_coupling_monotone(spec, c_max);
    coupling_ok = coupling.monotone;
    doc["coupling"] = {{"c_max", c_max}, {"monotone", coupling.monotone}};
    if (coupling.violation) {
      doc["coupling"]["violation"] = violation_json(*coupling.violation);
      doc["coupling"]["violation"]["p_low"] = coupling.p_low;
      doc["coupling"]["violation"]["p_high"] = coupling.p_high;
      csv << "coupling," << coupling.violation->low.to_string() << ','
          << coupling.violation->high.to_string() << ',' << format_double(coupling.p_low) << ','
          << format_double(coupling.p_high) << '\n';
    }
  }
  write_json(ctx.out_dir / "check.json", doc);
  write_text(ctx.out_dir / "check.csv", csv.str());

  auto& log = log_of(ctx);
  log << "attractive: " << (attr.attractive ? "true" : "false") << '\n';
  for (const auto& v : attr.violations) {
    log << "violation: " << v.low.to_string() << " <= " << v.high.to_string() << " but rates "
        << format_double(v.rate_low) << ", " << format_double(v.rate_high) << '\n';
  }
  if (doc["coupling"].contains("monotone")) {
    log << "coupling monotone at c_max=" << format_double(doc["coupling"]["c_max"].get<double>())
        << ": " << (coupling_ok ? "true" : "false") << '\n';
  }
  return attr.attractive && coupling_ok ? kSuccess : kViolation;
}

int run_simulate(const ExperimentConfig& config, const RunContext& ctx) {
  const RateSpec spec = to_rate_spec(config.model);
  const WindowPlan plan =
      plan_window(spec, config.t, config.z_min, config.z_max, config.epsilon_trunc);
  const Configuration start = make_initial(config.init, plan.window);
  const std::uint64_t replica_seed = derive_seed(config.seed, 0);
  Configuration end = start;
  if (config.backend == Backend::gillespie) {
    end = simulate_gillespie(spec, start, config.t, replica_seed);
  } else {
    end = evolve_uniformized(spec, start, sample_events(spec, plan, config.t, replica_seed));
  }
  std::ostringstream csv;
  csv << "x,spin\n";
  for (Site x = end.window().lo; x <= end.window().hi; ++x) {
    csv << x << ',' << int{end.value(x)} << '\n';
  }
  write_text(ctx.out_dir / "simulate.csv", csv.str());
  write_json(ctx.out_dir / "simulate.json",
             json{{"leftTail", end.left_tail()},
                  {"lo", end.window().lo},
                  {"hi", end.window().hi},
                  {"core", end.core_string()},
                  {"rightTail", end.right_tail()},
                  {"backend", to_string(config.backend)}});
  log_of(ctx) << "window [" << end.window().lo << ", " << end.window().hi << "]: "
              << end.core_string() << '\n';
  return kSuccess;
}

int run_profile(const ExperimentConfig& config, const RunContext& ctx) {
  const RateSpec spec = to_rate_spec(config.model);
  auto& log = log_of(ctx);
  if (!check_attractive(spec).attractive) log << "warning: rate table is not attractive\n";
  const OccupancyProfile profile =
      estimate_occupation_profile(spec, config.init, config.t, config.z_min, config.z_max,
                                  config.replicas, config.seed, run_options(config, ctx));
  std::ostringstream csv;
  write_profile_csv(csv, profile);
  write_text(ctx.out_dir / "profile.csv", csv.str());
  for (const auto& row : profile.rows) {
    log << "z=" << row.z << " p_hat=" << format_double(row.p_hat) << " ["
        << format_double(row.ci_low) << ", " << format_double(row.ci_high) << "]\n";
  }
  return kSuccess;
}

void log_report(std::ostream& log, const MonotonicityReport& report) {
  log << to_string(report.mode) << " mode (" << report.evidence << "), init " << report.init
      << ": " << to_string(report.overall) << '\n';
  for (const auto& v : report.per_z) {
    log << "  z=" << v.z << " " << to_string(v.verdict) << " margin=" << format_double(v.margin);
    if (!v.witness.empty()) log << " witness=" << v.witness;
    log << '\n';
  }
}

int run_verify(const ExperimentConfig& config, const RunContext& ctx) {
  const RateSpec spec = to_rate_spec(config.model);
  if (config.z_min < 0) throw ConfigError("zRange", "verify needs zMin >= 0");
  const MonotonicityReport report = verify_monotonicity(
      spec, config.init, config.t, config.z_min, config.z_max, verify_options(config, ctx));
  std::ostringstream csv;
  write_verify_csv(csv, report);
  write_text(ctx.out_dir / "verify.csv", csv.str());
  write_json(ctx.out_dir / "report.json", report_json(report));
  log_report(log_of(ctx), report);
  return verdict_exit(report.overall);
}

int run_verify_remark2(const ExperimentConfig& config, const RunContext& ctx) {
  const RateSpec spec = to_rate_spec(config.model);
  if (config.z_min < 0) throw ConfigError("zRange", "verify-remark2 needs zMin >= 0");
  const Remark2Sweep sweep = verify_remark2_sweep(spec, config.n_values, config.t, config.z_min,
                                                  config.z_max, verify_options(config, ctx));
  json doc{{"reports", json::array()}};
  Verdict worst = Verdict::pass;
  for (const auto& report : sweep.reports) {
    std::ostringstream csv;
    write_verify_csv(csv, report);
    write_text(ctx.out_dir / ("verify-remark2_N" + std::to_string(*report.n_used) + ".csv"),
               csv.str());
    doc["reports"].push_back(report_json(report));
    log_report(log_of(ctx), report);
    if (report.overall == Verdict::fail) {
      worst = Verdict::fail;
    } else if (report.overall == Verdict::inconclusive && worst == Verdict::pass) {
      worst = Verdict::inconclusive;
    }
  }
  doc["smallest_passing_N"] =
      sweep.smallest_passing_n ? json(*sweep.smallest_passing_n) : json(nullptr);
  write_json(ctx.out_dir / "report.json", doc);
  return verdict_exit(worst);
}

int run_self_check(const ExperimentConfig& config, const RunContext& ctx) {
  const RateSpec spec = to_rate_spec(config.model);
  const SelfCheckReport report =
      window_self_check(spec, config.init, config.t, config.z_min, config.z_max,
                        config.replicas, config.seed, run_options(config, ctx));
  std::ostringstream csv;
  csv << "z,p_base,p_doubled,diff,combined_se,within\n";
  json rows = json::array();
  for (const auto& row : report.rows) {
    csv << row.z << ',' << format_double(row.p_base) << ',' << format_double(row.p_doubled) << ','
        << format_double(row.diff) << ',' << format_double(row.combined_se) << ','
        << (row.within ? "true" : "false") << '\n';
    rows.push_back({{"z", row.z},
                    {"p_base", row.p_base},
                    {"p_doubled", row.p_doubled},
                    {"diff", row.diff},
                    {"combined_se", row.combined_se},
                    {"within", row.within}});
  }
  write_text(ctx.out_dir / "self-check.csv", csv.str());
  write_json(ctx.out_dir / "self-check.json",
             json{{"margin", report.margin},
                  {"doubled_margin", report.doubled_margin},
                  {"replicas", report.replicas},
                  {"max_abs_diff", report.max_abs_diff},
                  {"worst_z", report.worst_z},
                  {"pass", report.pass},
                  {"rows", rows}});
  log_of(ctx) << "margins " << report.margin << " vs " << report.doubled_margin
              << ": max |diff| = " << format_double(report.max_abs_diff) << " at z="
              << report.worst_z << " -> " << (report.pass ? "pass" : "fail") << '\n';
  return report.pass ? kSuccess : kViolation;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  require_object(doc, "<root>");
  reject_unknown(doc, "", {"model", "init", "t", "zRange", "m", "replicas", "seed",
                           "epsilonTrunc", "mode", "window", "N", "backend"});
  ExperimentConfig c;
  if (doc.contains("model")) c.model = parse_model(doc["model"]);
  if (doc.contains("init")) c.init = parse_init(doc["init"]);
  if (doc.contains("t")) {
    c.t = get_number(doc["t"], "t");
    if (c.t < 0.0) throw ConfigError("t", "must be >= 0");
  }
  if (doc.contains("zRange")) std::tie(c.z_min, c.z_max) = get_pair(doc["zRange"], "zRange");
  if (doc.contains("m")) {
    const auto m = get_integer(doc["m"], "m");
    if (m < 1 || m > 5) throw ConfigError("m", "must be in [1, 5]");
    c.m = static_cast<int>(m);
  }
  if (doc.contains("replicas")) {
    c.replicas = get_unsigned(doc["replicas"], "replicas");
    if (c.replicas < 1) throw ConfigError("replicas", "must be >= 1");
  }
  if (doc.contains("seed")) c.seed = get_unsigned(doc["seed"], "seed");
  if (doc.contains("epsilonTrunc")) {
    c.epsilon_trunc = get_number(doc["epsilonTrunc"], "epsilonTrunc");
    if (!(c.epsilon_trunc > 0.0 && c.epsilon_trunc < 1.0)) {
      throw ConfigError("epsilonTrunc", "must lie in (0, 1)");
    }
  }
  if (doc.contains("mode")) {
    try {
      c.mode = parse_mode(get_string(doc["mode"], "mode"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("mode", "expected coupled, exact or independent");
    }
  }
  if (doc.contains("window")) {
    const auto [lo, hi] = get_pair(doc["window"], "window");
    c.window = Window{lo, hi};
  }
  if (doc.contains("N")) {
    c.n_values.clear();
    const json& n = doc["N"];
    if (n.is_array()) {
      if (n.empty()) throw ConfigError("N", "expected at least one value");
      for (std::size_t i = 0; i < n.size(); ++i) {
        c.n_values.push_back(get_integer(n[i], "N[" + std::to_string(i) + "]"));
      }
    } else {
      c.n_values.push_back(get_integer(n, "N"));
    }
    for (Site v : c.n_values) {
      if (v < 0) throw ConfigError("N", "must be >= 0");
    }
  }
  if (doc.contains("backend")) {
    try {
      c.backend = parse_backend(get_string(doc["backend"], "backend"));
    } catch (const std::invalid_argument&) {
      throw ConfigError("backend", "expected uniformized or gillespie");
    }
  }
  // Fail early on model errors so the diagnostic names the model field.
  if (!c.model.csv) {
    try {
      (void)to_rate_spec(c.model);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("model", e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json model{{"name", c.model.name}};
  if (!c.model.params.empty()) {
    model["params"] = json::object();
    for (const auto& [k, v] : c.model.params) model["params"][k] = v;
  }
  if (c.model.radius) model["radius"] = *c.model.radius;
  if (!c.model.rates.empty()) model["rates"] = c.model.rates;
  if (c.model.csv) model["csv"] = *c.model.csv;

  json init;
  switch (c.init.kind) {
    case InitialKind::step: init = {{"kind", "step"}}; break;
    case InitialKind::interval: init = {{"kind", "interval"}, {"N", c.init.n}}; break;
    case InitialKind::custom:
      init = {{"kind", "custom"},
              {"leftTail", c.init.left_tail},
              {"rightTail", c.init.right_tail},
              {"lo", c.init.lo},
              {"core", c.init.core}};
      break;
  }
  json doc{{"model", model},
           {"init", init},
           {"t", c.t},
           {"zRange", {c.z_min, c.z_max}},
           {"m", c.m},
           {"replicas", c.replicas},
           {"seed", c.seed},
           {"epsilonTrunc", c.epsilon_trunc},
           {"mode", to_string(c.mode)},
           {"N", c.n_values},
           {"backend", to_string(c.backend)}};
  if (c.window) doc["window"] = {c.window->lo, c.window->hi};
  return doc;
}

RateSpec to_rate_spec(const ModelConfig& model) {
  if (model.csv) {
    std::ifstream in(*model.csv);
    if (!in) throw ConfigError("model.csv", "cannot open " + *model.csv);
    return read_rate_table_csv(in, model.name);
  }
  if (!model.rates.empty() || model.name == "custom") {
    return make_custom(model.radius.value_or(1), model.rates, model.name);
  }
  return build_model(model.name, model.params);
}

json rate_table_json(const RateSpec& spec) {
  json rates = json::object();
  for (std::uint32_t c = 0; c < spec.pattern_count(); ++c) {
    rates[LocalPattern{spec.radius(), c}.to_string()] = spec.rate(c);
  }
  return {{"name", spec.name()}, {"radius", spec.radius()}, {"rates", rates}};
}

void write_rate_table_csv(std::ostream& out, const std::vector<RateSpec>& specs) {
  out << "model,pattern,rate\n";
  for (const auto& spec : specs) {
    for (std::uint32_t c = 0; c < spec.pattern_count(); ++c) {
      out << csv_field(spec.name()) << ',' << LocalPattern{spec.radius(), c}.to_string() << ','
          << format_double(spec.rate(c)) << '\n';
    }
  }
}

RateSpec read_rate_table_csv(std::istream& in, const std::string& model) {
  std::string line;
  if (!std::getline(in, line) || line != "model,pattern,rate") {
    throw ConfigError("model.csv", "expected header model,pattern,rate");
  }
  std::map<std::string, double> entries;
  std::optional<int> radius;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos) {
      throw ConfigError("model.csv", "malformed row '" + line + "'");
    }
    if (line.substr(0, a) != model) continue;
    const std::string pattern = line.substr(a + 1, b - a - 1);
    const std::string value = line.substr(b + 1);
    double rate = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), rate);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
      throw ConfigError("model.csv", "bad rate '" + value + "'");
    }
    radius = static_cast<int>(pattern.size() / 2);
    entries[pattern] = rate;
  }
  if (!radius) throw ConfigError("model.csv", "no rows for model '" + model + "'");
  return make_custom(*radius, entries, model);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_profile_csv(std::ostream& out, const OccupancyProfile& profile) {
  out << "z,p_hat,ci_low,ci_high,n\n";
  for (const auto& row : profile.rows) {
    out << row.z << ',' << format_double(row.p_hat) << ',' << format_double(row.ci_low) << ','
        << format_double(row.ci_high) << ',' << row.n << '\n';
  }
}

void write_verify_csv(std::ostream& out, const MonotonicityReport& report) {
  out << "z,mode,verdict,witness,margin\n";
  for (const auto& v : report.per_z) {
    out << v.z << ',' << to_string(report.mode) << ',' << to_string(v.verdict) << ','
        << csv_field(v.witness) << ',' << format_double(v.margin) << '\n';
  }
}

json report_json(const MonotonicityReport& r) {
  json doc{{"mode", to_string(r.mode)},
           {"evidence", r.evidence},
           {"init", r.init},
           {"t", r.t},
           {"zRange", {r.z_min, r.z_max}},
           {"m", r.m},
           {"replicas", r.replicas},
           {"seed", r.seed},
           {"window", {r.window.lo, r.window.hi}},
           {"tolerance", r.tolerance},
           {"overall", to_string(r.overall)}};
  if (r.n_used) doc["N"] = *r.n_used;
  json per_z = json::array();
  for (const auto& v : r.per_z) {
    json e{{"z", v.z}, {"verdict", to_string(v.verdict)}, {"margin", v.margin},
           {"witness", v.witness}};
    switch (r.mode) {
      case Mode::coupled:
        e["order_violations"] = v.order_violations;
        e["identity_violations"] = v.identity_violations;
        if (v.first_site) e["first_site"] = *v.first_site;
        if (v.first_replica) e["first_replica"] = *v.first_replica;
        break;
      case Mode::exact:
        if (v.shifted_margin) e["shifted_margin"] = *v.shifted_margin;
        break;
      case Mode::independent: {
        json cmp = json::array();
        for (const auto& c : v.comparisons) {
          cmp.push_back({{"upset", c.upset.to_string()},
                         {"p_z", c.p_z},
                         {"p_next", c.p_next},
                         {"radius", c.radius}});
        }
        e["comparisons"] = cmp;
        break;
      }
    }
    per_z.push_back(e);
  }
  doc["perZ"] = per_z;
  return doc;
}

int run(const std::string& command, const ExperimentConfig& config, const RunContext& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  int code = kSuccess;
  if (command == "models") {
    code = run_models(ctx);
  } else if (command == "check") {
    code = run_check(config, ctx);
  } else if (command == "simulate") {
    code = run_simulate(config, ctx);
  } else if (command == "profile") {
    code = run_profile(config, ctx);
  } else if (command == "verify") {
    code = run_verify(config, ctx);
  } else if (command == "verify-remark2") {
    code = run_verify_remark2(config, ctx);
  } else if (command == "self-check") {
    code = run_self_check(config, ctx);
  } else {
    throw ConfigError("command", "unknown command '" + command + "'");
  }
  write_manifest(ctx, command, config);
  return code;
}

}  // namespace spinmono::cli
