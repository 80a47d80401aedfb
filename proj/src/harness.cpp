// Copyright 2026 The akrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "akrel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "akrel/benchmarks.hpp"
#include "akrel/error_bound.hpp"
#include "akrel/errors.hpp"
#include "akrel/evaluator.hpp"

namespace akrel {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kConfig, "config key '" + key + "': " + what);
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) config_error(key, "expected a number");
  return j.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) config_error(key, "expected a non-negative integer");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    // Accept 1e4-style literals when they are whole numbers.
    const double v = j.get<double>();
    if (v >= 0.0 && v <= 9.0e15 && std::floor(v) == v) return static_cast<std::uint64_t>(v);
  }
  config_error(key, "expected a non-negative integer");
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) config_error(key, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) config_error(key, "expected true or false");
  return j.get<bool>();
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_error(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) config_error(where.empty() ? k : where + "." + k, "unknown key");
  }
}

RandomVector parse_variables(const json& arr) {
  if (!arr.is_array() || arr.empty()) config_error("variables", "expected a non-empty array");
  std::vector<Marginal> marginals;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "variables[" + std::to_string(i) + "]";
    const json& v = arr[i];
    check_keys(v, where, {"name", "kind", "param1", "param2"});
    for (const char* req : {"kind", "param1", "param2"}) {
      if (!v.contains(req)) config_error(where + "." + req, "missing");
    }
    names.push_back(v.contains("name") ? get_string(v["name"], where + ".name")
                                       : "x" + std::to_string(i + 1));
    MarginalKind kind;
    try {
      kind = marginal_kind_from_string(get_string(v["kind"], where + ".kind"));
    } catch (const Error& e) {
      config_error(where + ".kind", e.what());
    }
    try {
      marginals.emplace_back(kind, get_number(v["param1"], where + ".param1"),
                             get_number(v["param2"], where + ".param2"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;
      config_error(where, e.what());
    }
  }
  return RandomVector(std::move(marginals), std::move(names));
}

void apply_preset(EngineConfig& e, const Preset& p, bool with_gamma) {
  e.n_pool_initial = p.n_pool_initial;
  e.n_pool_increment = p.n_pool_increment;
  e.cov_thr = p.cov_thr;
  if (with_gamma) e.gamma = p.gamma;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_value(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += json(k).dump();
        out += ':';
        dump_value(v, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_value(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt17(v) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

double finite_or(const json& j, double fallback) {
  return j.is_null() ? fallback : j.get<double>();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation over mean; 0 for fewer than two values.
double cov_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return m != 0.0 ? sd / std::abs(m) : 0.0;
}

std::vector<std::uint64_t> sweep_seeds(const RunConfig& cfg) {
  std::vector<std::uint64_t> seeds = cfg.seeds;
  if (seeds.empty()) {
    for (std::size_t i = 0; i < cfg.repetitions; ++i) seeds.push_back(cfg.engine.seed + i);
  } else if (cfg.repetitions != 0 && cfg.repetitions != seeds.size()) {
    throw Error(ErrorCode::kConfig, "config key 'seeds': length differs from 'repetitions'");
  }
  if (seeds.size() < 2) {
    throw Error(ErrorCode::kConfig, "a sweep needs at least 2 repetitions");
  }
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) {
    throw Error(ErrorCode::kConfig, "sweep seeds must be distinct");
  }
  return seeds;
}

// Runs the engine and, when requested, evaluates g on the final pool.
RunOutcome run_with_oracle(const RunConfig& cfg, const LimitState& g) {
  RunOutcome out = run_engine(g, cfg.random_vector(), cfg.engine);
  RunReport& r = out.report;
  if (cfg.true_error && out.pool) {
    const double pf_pool = pool_failure_fraction(g, out.pool->samples());
    r.pf_pool_oracle = pf_pool;
    if (pf_pool > 0.0) r.true_eps = true_error_vs_oracle(r.pf_hat, pf_pool);
  }
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = {
      {"table2", "series4", 100000, 100000, 0.015, 20.0},
      {"table3", "series4", 10000, 10000, 0.05, 5.0},
      {"table4", "rastrigin2", 10000, 10000, 0.015, 20.0},
      {"table5", "rastrigin2", 10000, 10000, 0.05, 5.0},
      {"table7", "oscillator6", 10000, 10000, 0.022, 20.0},
      {"table8", "oscillator6", 10000, 10000, 0.05, 5.0},
      {"table10", "tube9", 10000, 10000, 0.05, 20.0},
      {"table11", "tube9", 10000, 10000, 0.05, 5.0},
  };
  return p;
}

const Preset& preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::kConfig, "unknown preset '" + name + "'");
}

const RandomVector& RunConfig::random_vector() const {
  if (variables) return *variables;
  return bench::get(benchmark).rv;
}

RunConfig parse_config(const json& doc) {
  check_keys(doc, "",
             {"benchmark", "evaluator", "variables", "preset", "method", "learning", "eps_thr",
              "cov_thr", "n_pool_initial", "n_pool_increment", "n_initial_train", "eff_stop",
              "u_stop", "gamma", "delta_alpha", "confidence_q", "alpha_ci", "seed", "max_calls",
              "max_pool", "n_mcs", "kriging", "repetitions", "seeds", "jobs", "compare",
              "output_dir", "write_pool_csv", "true_error"});
  RunConfig cfg;
  EngineConfig& e = cfg.engine;

  if (doc.contains("preset")) {
    cfg.preset = get_string(doc["preset"], "preset");
    const Preset* p = nullptr;
    try {
      p = &preset(cfg.preset);
    } catch (const Error& err) {
      config_error("preset", err.what());
    }
    cfg.benchmark = p->benchmark;
    apply_preset(e, *p, true);
    e.max_calls = bench::get(p->benchmark).default_max_calls;
  }
  if (doc.contains("benchmark")) {
    const std::string name = get_string(doc["benchmark"], "benchmark");
    if (!cfg.preset.empty() && name != cfg.benchmark) {
      config_error("benchmark", "preset '" + cfg.preset + "' is defined for " + cfg.benchmark);
    }
    const bench::Benchmark* b = nullptr;
    try {
      b = &bench::get(name);
    } catch (const Error& err) {
      config_error("benchmark", err.what());
    }
    if (cfg.preset.empty()) apply_preset(e, preset(b->preset), false);
    cfg.benchmark = name;
    e.max_calls = b->default_max_calls;
  }
  if (doc.contains("evaluator")) {
    cfg.evaluator_command = get_string(doc["evaluator"], "evaluator");
    if (cfg.evaluator_command.empty()) config_error("evaluator", "must not be empty");
  }
  if (doc.contains("variables")) cfg.variables = parse_variables(doc["variables"]);
  if (cfg.benchmark.empty() == cfg.evaluator_command.empty()) {
    config_error("benchmark", "give exactly one of 'benchmark' (or 'preset') and 'evaluator'");
  }
  if (!cfg.evaluator_command.empty()) {
    if (!cfg.variables) config_error("variables", "required with 'evaluator'");
    cfg.true_error = false;
  } else if (cfg.variables) {
    config_error("variables", "only allowed with 'evaluator'");
  }

  if (doc.contains("method")) {
    try {
      e.method = method_from_string(get_string(doc["method"], "method"));
    } catch (const Error& err) {
      config_error("method", err.what());
    }
  }
  if (doc.contains("learning")) {
    try {
      e.learning = learning_function_from_string(get_string(doc["learning"], "learning"));
    } catch (const Error& err) {
      config_error("learning", err.what());
    }
  }

  auto number = [&](const char* key, double& field, double lo, double hi, bool open_lo,
                    bool open_hi) {
    if (!doc.contains(key)) return;
    const double v = get_number(doc[key], key);
    const bool ok = (open_lo ? v > lo : v >= lo) && (open_hi ? v < hi : v <= hi);
    if (!ok) {
      config_error(key, std::string("value ") + fmt17(v) + " out of range " + (open_lo ? "(" : "[") +
                            fmt17(lo) + ", " + fmt17(hi) + (open_hi ? ")" : "]"));
    }
    field = v;
  };
  auto count = [&](const char* key, std::size_t& field, std::size_t lo) {
    if (!doc.contains(key)) return;
    const auto v = get_count(doc[key], key);
    if (v < lo) config_error(key, "must be >= " + std::to_string(lo));
    field = static_cast<std::size_t>(v);
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  number("eps_thr", e.eps_thr, 0.0, 1.0, true, true);
  number("cov_thr", e.cov_thr, 0.0, kInf, true, true);
  number("eff_stop", e.eff_stop, 0.0, kInf, false, true);
  number("u_stop", e.u_stop, 0.0, kInf, true, true);
  number("gamma", e.gamma, 0.0, kInf, true, true);
  number("delta_alpha", e.delta_alpha, 0.0, kInf, true, true);
  number("confidence_q", e.confidence_q, 0.0, 1.0, true, true);
  number("alpha_ci", e.alpha_ci, 0.0, kInf, true, true);
  count("n_pool_initial", e.n_pool_initial, 1);
  count("n_pool_increment", e.n_pool_increment, 0);
  count("n_initial_train", e.n_initial_train, 2);
  count("max_calls", e.max_calls, 1);
  count("max_pool", e.max_pool, 1);
  count("n_mcs", e.n_mcs, 1);
  if (doc.contains("seed")) e.seed = get_count(doc["seed"], "seed");

  if (doc.contains("kriging")) {
    const json& k = doc["kriging"];
    check_keys(k, "kriging", {"n_starts", "budget_per_dim", "theta_lo", "theta_hi", "standardize"});
    if (k.contains("n_starts")) {
      const auto v = get_count(k["n_starts"], "kriging.n_starts");
      if (v < 1) config_error("kriging.n_starts", "must be >= 1");
      e.fit.n_starts = static_cast<int>(v);
    }
    if (k.contains("budget_per_dim")) {
      const auto v = get_count(k["budget_per_dim"], "kriging.budget_per_dim");
      if (v < 1) config_error("kriging.budget_per_dim", "must be >= 1");
      e.fit.budget_per_dim = static_cast<int>(v);
    }
    if (k.contains("theta_lo")) e.fit.theta_lo = get_number(k["theta_lo"], "kriging.theta_lo");
    if (k.contains("theta_hi")) e.fit.theta_hi = get_number(k["theta_hi"], "kriging.theta_hi");
    if (!(e.fit.theta_lo > 0.0 && e.fit.theta_lo < e.fit.theta_hi)) {
      config_error("kriging.theta_lo", "need 0 < theta_lo < theta_hi");
    }
    if (k.contains("standardize")) e.fit.standardize = get_bool(k["standardize"], "kriging.standardize");
  }

  count("repetitions", cfg.repetitions, 0);
  count("jobs", cfg.jobs, 1);
  if (doc.contains("seeds")) {
    if (!doc["seeds"].is_array()) config_error("seeds", "expected an array of integers");
    for (const auto& s : doc["seeds"]) cfg.seeds.push_back(get_count(s, "seeds"));
  }
  if (doc.contains("compare")) {
    const json& c = doc["compare"];
    check_keys(c, "compare", {"methods", "eps_thr"});
    if (c.contains("methods")) {
      if (!c["methods"].is_array() || c["methods"].empty()) {
        config_error("compare.methods", "expected a non-empty array");
      }
      cfg.compare_methods.clear();
      for (const auto& m : c["methods"]) {
        try {
          cfg.compare_methods.push_back(method_from_string(get_string(m, "compare.methods")));
        } catch (const Error& err) {
          config_error("compare.methods", err.what());
        }
      }
    }
    if (c.contains("eps_thr")) {
      if (!c["eps_thr"].is_array() || c["eps_thr"].empty()) {
        config_error("compare.eps_thr", "expected a non-empty array");
      }
      for (const auto& v : c["eps_thr"]) {
        const double x = get_number(v, "compare.eps_thr");
        if (!(x > 0.0 && x < 1.0)) config_error("compare.eps_thr", "values must lie in (0, 1)");
        cfg.compare_eps.push_back(x);
      }
    }
  }
  if (doc.contains("output_dir")) cfg.output_dir = get_string(doc["output_dir"], "output_dir");
  if (doc.contains("write_pool_csv")) cfg.write_pool_csv = get_bool(doc["write_pool_csv"], "write_pool_csv");
  if (doc.contains("true_error")) cfg.true_error = get_bool(doc["true_error"], "true_error");
  if (cfg.compare_eps.empty()) cfg.compare_eps.push_back(e.eps_thr);

  e.validate();
  return cfg;
}

RunConfig parse_config_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + err.what());
  }
  return parse_config(doc);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

json config_to_json(const RunConfig& cfg) {
  const EngineConfig& e = cfg.engine;
  json j;
  if (!cfg.benchmark.empty()) j["benchmark"] = cfg.benchmark;
  if (!cfg.evaluator_command.empty()) {
    j["evaluator"] = cfg.evaluator_command;
    json vars = json::array();
    const RandomVector& rv = *cfg.variables;
    for (std::size_t i = 0; i < rv.dim(); ++i) {
      const Marginal& m = rv.marginals()[i];
      vars.push_back({{"name", rv.names()[i]}, {"kind", to_string(m.kind())},
                      {"param1", m.param1()}, {"param2", m.param2()}});
    }
    j["variables"] = vars;
  }
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  j["method"] = to_string(e.method);
  j["learning"] = to_string(e.learning);
  j["eps_thr"] = e.eps_thr;
  j["cov_thr"] = e.cov_thr;
  j["n_pool_initial"] = e.n_pool_initial;
  j["n_pool_increment"] = e.n_pool_increment;
  j["n_initial_train"] = e.n_initial_train;
  j["eff_stop"] = e.eff_stop;
  j["u_stop"] = e.u_stop;
  j["gamma"] = e.gamma;
  j["delta_alpha"] = e.delta_alpha;
  j["confidence_q"] = e.confidence_q;
  j["alpha_ci"] = e.alpha_ci;
  j["seed"] = e.seed;
  j["max_calls"] = e.max_calls;
  j["max_pool"] = e.max_pool;
  j["n_mcs"] = e.n_mcs;
  j["kriging"] = {{"n_starts", e.fit.n_starts},
                  {"budget_per_dim", e.fit.budget_per_dim},
                  {"theta_lo", e.fit.theta_lo},
                  {"theta_hi", e.fit.theta_hi},
                  {"standardize", e.fit.standardize}};
  j["repetitions"] = cfg.repetitions;
  if (!cfg.seeds.empty()) j["seeds"] = cfg.seeds;
  j["jobs"] = cfg.jobs;
  json methods = json::array();
  for (Method m : cfg.compare_methods) methods.push_back(to_string(m));
  j["compare"] = {{"methods", methods}, {"eps_thr", cfg.compare_eps}};
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  j["write_pool_csv"] = cfg.write_pool_csv;
  j["true_error"] = cfg.true_error;
  return j;
}

LimitState make_limit_state(const RunConfig& cfg) {
  if (!cfg.evaluator_command.empty()) {
    auto proc = std::make_shared<SubprocessEvaluator>(cfg.evaluator_command);
    return [proc](std::span<const double> x) { return (*proc)(x); };
  }
  return bench::get(cfg.benchmark).g;
}

std::string dump_json(const json& j) {
  std::string out;
  dump_value(j, out);
  return out;
}

json report_to_json(const RunReport& r) {
  json j;
  j["method"] = to_string(r.method);
  j["seed"] = r.seed;
  j["n_calls"] = r.n_calls_text();
  j["n_calls_total"] = r.n_calls;
  j["n_initial"] = r.n_initial;
  j["n_adaptive"] = r.n_adaptive;
  j["pf_hat"] = r.pf_hat;
  j["cov_pf"] = r.cov_pf;
  j["eps_max_hat"] = r.eps_max_hat ? json(*r.eps_max_hat) : json(nullptr);
  j["alpha_initial"] = r.alpha_initial;
  j["alpha_final"] = r.alpha_final;
  j["pool_size"] = r.pool_size;
  j["pool_growths"] = r.pool_growths;
  j["pool_fingerprint"] = r.pool_fingerprint;
  j["converged"] = r.converged;
  j["flag"] = r.flag;
  j["pf_pool_oracle"] = r.pf_pool_oracle ? json(*r.pf_pool_oracle) : json(nullptr);
  j["true_eps"] = r.true_eps ? json(*r.true_eps) : json(nullptr);
  j["kriging"] = {{"theta", r.theta},
                  {"beta", r.beta},
                  {"sigma2", r.sigma2},
                  {"nugget", r.nugget},
                  {"clamped_variances", r.clamped_variances}};
  j["initial_training"] = r.initial_training;
  j["wall_time"] = r.wall_time;
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"iteration", t.iteration},
                     {"event", t.event},
                     {"n_calls", t.n_calls},
                     {"pool_size", t.pool_size},
                     {"alpha", t.alpha},
                     {"n_omega2", t.n_omega2},
                     {"score", t.score},
                     {"eps_max", t.eps_max < 0.0 ? json(nullptr) : json(t.eps_max)},
                     {"pf_hat", t.pf_hat},
                     {"selected", t.selected}});
  }
  j["trace"] = trace;
  return j;
}

RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    r.method = method_from_string(j.at("method").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_calls = j.at("n_calls_total").get<std::size_t>();
    r.n_initial = j.at("n_initial").get<std::size_t>();
    r.n_adaptive = j.at("n_adaptive").get<std::size_t>();
    r.pf_hat = j.at("pf_hat").get<double>();
    r.cov_pf = finite_or(j.at("cov_pf"), std::numeric_limits<double>::infinity());
    if (!j.at("eps_max_hat").is_null()) r.eps_max_hat = j["eps_max_hat"].get<double>();
    r.alpha_initial = j.at("alpha_initial").get<double>();
    r.alpha_final = j.at("alpha_final").get<double>();
    r.pool_size = j.at("pool_size").get<std::size_t>();
    r.pool_growths = j.at("pool_growths").get<std::size_t>();
    r.pool_fingerprint = j.at("pool_fingerprint").get<std::uint64_t>();
    r.converged = j.at("converged").get<bool>();
    r.flag = j.at("flag").get<std::string>();
    if (!j.at("pf_pool_oracle").is_null()) r.pf_pool_oracle = j["pf_pool_oracle"].get<double>();
    if (!j.at("true_eps").is_null()) r.true_eps = j["true_eps"].get<double>();
    const json& k = j.at("kriging");
    r.theta = k.at("theta").get<std::vector<double>>();
    r.beta = k.at("beta").get<double>();
    r.sigma2 = k.at("sigma2").get<double>();
    r.nugget = k.at("nugget").get<double>();
    r.clamped_variances = k.at("clamped_variances").get<std::size_t>();
    r.initial_training = j.at("initial_training").get<std::vector<std::size_t>>();
    r.wall_time = j.at("wall_time").get<double>();
    for (const auto& t : j.at("trace")) {
      TraceRecord rec;
      rec.iteration = t.at("iteration").get<std::size_t>();
      rec.event = t.at("event").get<std::string>();
      rec.n_calls = t.at("n_calls").get<std::size_t>();
      rec.pool_size = t.at("pool_size").get<std::size_t>();
      rec.alpha = t.at("alpha").get<double>();
      rec.n_omega2 = t.at("n_omega2").get<std::size_t>();
      rec.score = t.at("score").get<double>();
      rec.eps_max = finite_or(t.at("eps_max"), -1.0);
      rec.pf_hat = t.at("pf_hat").get<double>();
      rec.selected = t.at("selected").get<std::size_t>();
      r.trace.push_back(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed report: ") + e.what());
  }
}

std::string trace_csv(const RunReport& r) {
  std::string out = "iteration,event,n_calls,pool_size,alpha,n_omega2,score,eps_max,pf_hat,selected\n";
  for (const auto& t : r.trace) {
    out += std::to_string(t.iteration) + ',' + t.event + ',' + std::to_string(t.n_calls) + ',' +
           std::to_string(t.pool_size) + ',' + fmt17(t.alpha) + ',' + std::to_string(t.n_omega2) +
           ',' + fmt17(t.score) + ',' + (t.eps_max < 0.0 ? std::string() : fmt17(t.eps_max)) + ',' +
           fmt17(t.pf_hat) + ',' + std::to_string(t.selected) + '\n';
  }
  return out;
}

std::string pool_csv(const RunOutcome& outcome) {
  if (!outcome.pool || outcome.pool->dim() != 2) return {};
  const DesignPool& pool = *outcome.pool;
  const EsrPartition part = build_partition(pool.density(), pool.density_order(),
                                            outcome.report.alpha_final, pool.pf_hat());
  std::string out = "x1,x2,density,pred_mean,in_esr,evaluated\n";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out += fmt17(pool.samples()(i, 0)) + ',' + fmt17(pool.samples()(i, 1)) + ',' +
           fmt17(pool.density()[i]) + ',' + fmt17(pool.mean()[i]) + ',' +
           (part.in_esr[i] ? '1' : '0') + ',' + (pool.evaluated(i) ? '1' : '0') + '\n';
  }
  return out;
}

RunOutcome run_single(const RunConfig& cfg) {
  const LimitState g = make_limit_state(cfg);
  RunOutcome out = run_with_oracle(cfg, g);
  if (!cfg.output_dir.empty()) {
    const auto dir = ensure_dir(cfg.output_dir);
    write_file(dir / "config.json", dump_json(config_to_json(cfg)) + "\n");
    write_file(dir / "report.json", dump_json(report_to_json(out.report)) + "\n");
    write_file(dir / "trace.csv", trace_csv(out.report));
    if (cfg.write_pool_csv && out.pool && out.pool->dim() == 2) {
      write_file(dir / "pool.csv", pool_csv(out));
    }
  }
  return out;
}

AggregateReport aggregate(std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.seed < b.seed; });
  AggregateReport a;
  std::vector<double> calls;
  std::vector<double> gaps;
  std::size_t covered = 0;
  for (const auto& row : rows) {
    if (!row.ok) {
      ++a.n_failed;
      continue;
    }
    ++a.n_ok;
    calls.push_back(static_cast<double>(row.report.n_calls));
    if (row.report.eps_max_hat && row.report.true_eps) {
      gaps.push_back(*row.report.eps_max_hat - *row.report.true_eps);
      if (*row.report.true_eps <= *row.report.eps_max_hat) ++covered;
    }
  }
  a.mean_calls = mean_of(calls);
  a.cov_calls = cov_of(calls);
  a.n_gap = gaps.size();
  a.mean_gap = mean_of(gaps);
  a.cov_gap = cov_of(gaps);
  a.coverage = gaps.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(gaps.size());
  a.rows = std::move(rows);
  return a;
}

AggregateReport run_sweep(const RunConfig& cfg) {
  const auto seeds = sweep_seeds(cfg);
  std::vector<SweepRow> rows(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      SweepRow& row = rows[i];
      row.seed = seeds[i];
      RunConfig one = cfg;
      one.engine.seed = seeds[i];
      try {
        const LimitState g = make_limit_state(one);
        row.report = run_with_oracle(one, g).report;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.jobs, seeds.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  AggregateReport agg = aggregate(std::move(rows));
  if (!cfg.output_dir.empty()) {
    const auto dir = ensure_dir(cfg.output_dir);
    write_file(dir / "config.json", dump_json(config_to_json(cfg)) + "\n");
    write_file(dir / "sweep.json", dump_json(aggregate_to_json(agg)) + "\n");
    write_file(dir / "sweep.csv", sweep_csv(agg));
  }
  return agg;
}

json aggregate_to_json(const AggregateReport& a) {
  json rows = json::array();
  for (const auto& row : a.rows) {
    json r = {{"seed", row.seed}, {"ok", row.ok}};
    if (row.ok) {
      r["report"] = report_to_json(row.report);
    } else {
      r["error"] = row.error;
    }
    rows.push_back(r);
  }
  return {{"n_ok", a.n_ok},
          {"n_failed", a.n_failed},
          {"mean_calls", a.mean_calls},
          {"cov_calls", a.cov_calls},
          {"n_gap", a.n_gap},
          {"mean_gap", a.mean_gap},
          {"cov_gap", a.cov_gap},
          {"coverage", a.coverage},
          {"rows", rows}};
}

std::string sweep_csv(const AggregateReport& a) {
  std::string out = "seed,ok,n_calls,n_initial,n_adaptive,pf_hat,cov_pf,eps_max_hat,true_eps,pool_size,flag\n";
  for (const auto& row : a.rows) {
    const RunReport& r = row.report;
    out += std::to_string(row.seed) + ',' + (row.ok ? "1" : "0") + ',';
    if (row.ok) {
      out += std::to_string(r.n_calls) + ',' + std::to_string(r.n_initial) + ',' +
             std::to_string(r.n_adaptive) + ',' + fmt17(r.pf_hat) + ',' + fmt17(r.cov_pf) + ',' +
             (r.eps_max_hat ? fmt17(*r.eps_max_hat) : "") + ',' +
             (r.true_eps ? fmt17(*r.true_eps) : "") + ',' + std::to_string(r.pool_size) + ',' +
             r.flag + '\n';
    } else {
      out += ",,,,,,,,\n";
    }
  }
  return out;
}

CompareTable compare_methods(const RunConfig& cfg) {
  const LimitState g = make_limit_state(cfg);
  const RandomVector& rv = cfg.random_vector();
  CompareTable table;
  std::optional<DesignPool> largest;
  for (double eps : cfg.compare_eps) {
    for (Method m : cfg.compare_methods) {
      if (m == Method::kMcs) continue;
      EngineConfig e = cfg.engine;
      e.method = m;
      e.eps_thr = eps;
      RunOutcome out = run_engine(g, rv, e);
      if (!table.rows.empty()) {
        const RunReport& first = table.rows.front().report;
        if (first.pool_fingerprint != out.report.pool_fingerprint ||
            first.initial_training != out.report.initial_training) {
          throw Error(ErrorCode::kConfig, "compare: runs do not share the candidate pool");
        }
      }
      if (!largest || out.pool->size() > largest->size()) largest = std::move(out.pool);
      table.rows.push_back({m, eps, std::move(out.report)});
    }
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::kConfig, "config key 'compare.methods': no surrogate method to compare");
  }

  // Growth increments come from fixed substreams, so every run's pool is a
  // prefix of the largest one; one sweep of g serves all rows.
  const SampleMatrix& s = largest->samples();
  std::vector<std::size_t> fails_upto(s.rows() + 1, 0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    fails_upto[i + 1] = fails_upto[i] + (g(s.row(i)) <= 0.0 ? 1 : 0);
  }
  table.pf_pool_oracle =
      static_cast<double>(fails_upto[s.rows()]) / static_cast<double>(s.rows());
  for (auto& row : table.rows) {
    const std::size_t n = row.report.pool_size;
    const double pf = static_cast<double>(fails_upto[n]) / static_cast<double>(n);
    row.report.pf_pool_oracle = pf;
    if (pf > 0.0) row.report.true_eps = true_error_vs_oracle(row.report.pf_hat, pf);
  }

  if (!cfg.output_dir.empty()) {
    const auto dir = ensure_dir(cfg.output_dir);
    write_file(dir / "config.json", dump_json(config_to_json(cfg)) + "\n");
    write_file(dir / "compare.json", dump_json(compare_to_json(table)) + "\n");
    write_file(dir / "compare.csv", compare_csv(table));
  }
  return table;
}

json compare_to_json(const CompareTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"method", to_string(row.method)},
                    {"eps_thr", row.eps_thr},
                    {"report", report_to_json(row.report)}});
  }
  return {{"pf_pool_oracle", t.pf_pool_oracle}, {"rows", rows}};
}

std::string compare_csv(const CompareTable& t) {
  std::string out = "method,eps_thr,n_calls,pf_hat,cov_pf,eps_max_hat,true_eps,pf_pool_oracle\n";
  for (const auto& row : t.rows) {
    const RunReport& r = row.report;
    out += to_string(row.method) + ',' + fmt17(row.eps_thr) + ",\"" + r.n_calls_text() + "\"," +
           fmt17(r.pf_hat) + ',' + fmt17(r.cov_pf) + ',' +
           (r.eps_max_hat ? fmt17(*r.eps_max_hat) : "") + ',' +
           (r.true_eps ? fmt17(*r.true_eps) : "") + ',' +
           (r.pf_pool_oracle ? fmt17(*r.pf_pool_oracle) : "") + '\n';
  }
  return out;
}

}  // namespace akrel
