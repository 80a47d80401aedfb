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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "akrel/benchmarks.hpp"
#include "akrel/errors.hpp"
#include "akrel/evaluator.hpp"
#include "akrel/harness.hpp"

namespace akrel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("akrel_test_" + name);
  fs::remove_all(p);
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kInvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// Small and quick: 1e4 candidates with a loose COV target.
json quick_config() {
  return json{{"benchmark", "series4"}, {"method", "REAK"},       {"eps_thr", 0.05},
              {"seed", 1},              {"n_pool_initial", 1e4}, {"n_pool_increment", 1e4},
              {"cov_thr", 0.2}};
}

TEST(Config, MinimalFillsDefaults) {
  const RunConfig c = parse_config_string(
      R"({"benchmark": "series4", "method": "REAK", "eps_thr": 0.05, "seed": 1})");
  EXPECT_EQ(c.benchmark, "series4");
  EXPECT_EQ(c.engine.method, Method::kReak);
  EXPECT_EQ(c.engine.gamma, 5.0);
  EXPECT_EQ(c.engine.delta_alpha, 0.01);
  EXPECT_EQ(c.engine.eff_stop, 1e-3);
  EXPECT_EQ(c.engine.cov_thr, 0.015);
  EXPECT_EQ(c.engine.n_pool_initial, 100000u);
  EXPECT_EQ(c.engine.max_calls, 910u);
  EXPECT_EQ(c.engine.n_initial_train, 12u);
  EXPECT_EQ(c.compare_eps, std::vector<double>{0.05});
}

TEST(Config, RangeAndKeyErrors) {
  const std::string msg = message_of(R"({"benchmark": "series4", "eps_thr": 1.5})");
  EXPECT_NE(msg.find("eps_thr"), std::string::npos) << msg;
  EXPECT_NE(msg.find("out of range"), std::string::npos) << msg;
  EXPECT_NE(message_of(R"({"benchmark": "series4", "epsthr": 0.1})").find("epsthr"), std::string::npos);
  EXPECT_NE(message_of(R"({"benchmark": "series4", "kriging": {"nstarts": 2}})").find("nstarts"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"benchmark": "nope"})").find("benchmark"), std::string::npos);
  EXPECT_NE(message_of(R"({"method": "REAK"})").find("benchmark"), std::string::npos);
  EXPECT_NE(message_of(R"({"preset": "table2", "benchmark": "tube9"})").find("preset"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"evaluator": "cat"})").find("variables"), std::string::npos);
  EXPECT_NE(message_of(R"({"benchmark": "series4", "n_pool_initial": 10.5})").find("n_pool_initial"),
            std::string::npos);
  EXPECT_NE(message_of("{not json").find("JSON"), std::string::npos);
  EXPECT_EQ(code_of([] { parse_config_string(R"({"benchmark": "series4", "gamma": -1})"); }),
            ErrorCode::kConfig);
}

TEST(Config, PresetExpands) {
  const RunConfig c = parse_config_string(R"({"preset": "table2", "method": "AKMCS"})");
  EXPECT_EQ(c.benchmark, "series4");
  EXPECT_EQ(c.engine.n_pool_initial, 100000u);
  EXPECT_EQ(c.engine.n_pool_increment, 100000u);
  EXPECT_EQ(c.engine.cov_thr, 0.015);
  EXPECT_EQ(c.engine.gamma, 20.0);
  EXPECT_EQ(c.engine.max_calls, 910u);
  const RunConfig t3 = parse_config_string(R"({"preset": "table3", "gamma": 7})");
  EXPECT_EQ(t3.engine.n_pool_initial, 10000u);
  EXPECT_EQ(t3.engine.cov_thr, 0.05);
  EXPECT_EQ(t3.engine.gamma, 7.0);
  for (const auto& p : presets()) EXPECT_EQ(preset(p.name).benchmark, p.benchmark);
  EXPECT_THROW(preset("table99"), Error);
}

TEST(Config, ExternalVariables) {
  const RunConfig c = parse_config_string(R"({
    "evaluator": "cat",
    "variables": [{"name": "a", "kind": "normal", "param1": 0, "param2": 1},
                  {"kind": "gumbel", "param1": 10, "param2": 2}]})");
  ASSERT_EQ(c.random_vector().dim(), 2u);
  EXPECT_EQ(c.random_vector().names()[1], "x2");
  EXPECT_EQ(c.random_vector().marginals()[1].kind(), MarginalKind::kGumbel);
  EXPECT_FALSE(c.true_error);
  EXPECT_NE(message_of(R"({"evaluator": "cat", "variables": [{"kind": "normal", "param1": 0, "param2": -1}]})")
                .find("variables[0]"),
            std::string::npos);
}

TEST(Config, JsonRoundTrip) {
  json doc = quick_config();
  doc["kriging"] = {{"n_starts", 3}, {"theta_hi", 20.0}};
  doc["compare"] = {{"methods", {"AKMCS", "REAK"}}, {"eps_thr", {0.05, 0.01}}};
  const RunConfig a = parse_config(doc);
  const json ja = config_to_json(a);
  const RunConfig b = parse_config(ja);
  EXPECT_EQ(dump_json(ja), dump_json(config_to_json(b)));
  EXPECT_EQ(b.engine.fit.n_starts, 3);
  EXPECT_EQ(b.compare_eps, (std::vector<double>{0.05, 0.01}));
}

TEST(Json, NonFiniteBecomesNullAndDoublesAreExact) {
  const json j = {{"a", std::nan("")}, {"b", INFINITY}, {"c", 0.1}, {"d", 1.0 / 3.0}};
  const std::string s = dump_json(j);
  EXPECT_NE(s.find("\"a\":null"), std::string::npos) << s;
  EXPECT_NE(s.find("\"b\":null"), std::string::npos) << s;
  const json back = json::parse(s);
  EXPECT_EQ(back["c"].get<double>(), 0.1);
  EXPECT_EQ(back["d"].get<double>(), 1.0 / 3.0);
}

TEST(Run, WritesArtifactsAndReportRoundTrips) {
  const fs::path dir = scratch("run");
  json doc = quick_config();
  doc["output_dir"] = dir.string();
  const RunConfig cfg = parse_config(doc);
  const RunOutcome out = run_single(cfg);
  const RunReport& r = out.report;
  ASSERT_TRUE(r.pf_pool_oracle.has_value());
  ASSERT_TRUE(r.true_eps.has_value());
  EXPECT_DOUBLE_EQ(*r.true_eps, std::abs(r.pf_hat / *r.pf_pool_oracle - 1.0));

  const json rep = json::parse(read_file(dir / "report.json"));
  EXPECT_EQ(rep["n_calls"], "12 + " + std::to_string(r.n_adaptive));
  const RunReport back = report_from_json(rep);
  EXPECT_EQ(back.pf_hat, r.pf_hat);
  EXPECT_EQ(back.theta, r.theta);
  EXPECT_EQ(back.eps_max_hat, r.eps_max_hat);
  EXPECT_EQ(back.true_eps, r.true_eps);
  EXPECT_EQ(back.pool_fingerprint, r.pool_fingerprint);
  EXPECT_EQ(back.trace.size(), r.trace.size());
  EXPECT_EQ(dump_json(report_to_json(back)), dump_json(report_to_json(r)));

  const std::string trace = read_file(dir / "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')),
            "iteration,event,n_calls,pool_size,alpha,n_omega2,score,eps_max,pf_hat,selected");
  const std::string pool = read_file(dir / "pool.csv");
  EXPECT_EQ(pool.substr(0, pool.find('\n')), "x1,x2,density,pred_mean,in_esr,evaluated");
  EXPECT_EQ(static_cast<std::size_t>(std::count(pool.begin(), pool.end(), '\n')), r.pool_size + 1);
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  fs::remove_all(dir);
}

TEST(Run, CrudeMonteCarloReport) {
  const RunConfig cfg = parse_config_string(
      R"({"benchmark": "series4", "method": "MCS", "n_mcs": 200000, "seed": 4})");
  const RunOutcome out = run_single(cfg);
  EXPECT_EQ(out.report.n_calls_text(), "200000");
  EXPECT_NEAR(out.report.pf_hat, 4.498e-3, 3 * std::sqrt(4.5e-3 / 2e5));
}

SweepRow row(std::uint64_t seed, std::size_t calls, double eps_max, double eps) {
  SweepRow r;
  r.seed = seed;
  r.ok = true;
  r.report.n_calls = calls;
  r.report.eps_max_hat = eps_max;
  r.report.true_eps = eps;
  return r;
}

TEST(Aggregate, RecomputesStatistics) {
  std::vector<SweepRow> rows = {row(3, 60, 0.05, 0.01), row(1, 40, 0.04, 0.05),
                                row(2, 50, 0.03, 0.02)};
  SweepRow bad;
  bad.seed = 9;
  bad.error = "boom";
  rows.push_back(bad);
  const AggregateReport a = aggregate(rows);
  EXPECT_EQ(a.n_ok, 3u);
  EXPECT_EQ(a.n_failed, 1u);
  EXPECT_EQ(a.rows.front().seed, 1u);
  EXPECT_DOUBLE_EQ(a.mean_calls, 50.0);
  EXPECT_NEAR(a.cov_calls, 10.0 / 50.0, 1e-12);  // sample sd with n - 1
  EXPECT_NEAR(a.mean_gap, (0.04 - 0.01 + 0.01) / 3.0, 1e-15);
  EXPECT_NEAR(a.coverage, 2.0 / 3.0, 1e-15);
  const std::string csv = sweep_csv(a);
  EXPECT_EQ(static_cast<int>(std::count(csv.begin(), csv.end(), '\n')), 5);
}

TEST(Sweep, SeedRules) {
  json doc = quick_config();
  doc["seeds"] = {3, 3};
  EXPECT_EQ(code_of([&] { run_sweep(parse_config(doc)); }), ErrorCode::kConfig);
  doc = quick_config();
  doc["repetitions"] = 1;
  EXPECT_EQ(code_of([&] { run_sweep(parse_config(doc)); }), ErrorCode::kConfig);
  doc = quick_config();
  doc["seeds"] = {1, 2, 3};
  doc["repetitions"] = 2;
  EXPECT_EQ(code_of([&] { run_sweep(parse_config(doc)); }), ErrorCode::kConfig);
}

TEST(Sweep, ParallelMatchesSerial) {
  const fs::path dir = scratch("sweep");
  json doc = quick_config();
  doc["seeds"] = {5, 2, 7};
  doc["jobs"] = 3;
  doc["output_dir"] = dir.string();
  const AggregateReport par = run_sweep(parse_config(doc));
  doc["jobs"] = 1;
  doc.erase("output_dir");
  const AggregateReport ser = run_sweep(parse_config(doc));
  ASSERT_EQ(par.rows.size(), 3u);
  EXPECT_EQ(par.rows[0].seed, 2u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(par.rows[i].ok) << par.rows[i].error;
    EXPECT_EQ(par.rows[i].report.pf_hat, ser.rows[i].report.pf_hat);
    EXPECT_EQ(par.rows[i].report.n_calls, ser.rows[i].report.n_calls);
  }
  EXPECT_EQ(par.mean_calls, ser.mean_calls);
  EXPECT_TRUE(fs::exists(dir / "sweep.json"));
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
  fs::remove_all(dir);
}

TEST(Compare, SharesPoolAndInitialTraining) {
  json doc = quick_config();
  doc["compare"] = {{"eps_thr", {0.05}}};
  const CompareTable t = compare_methods(parse_config(doc));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].method, Method::kAkMcs);
  EXPECT_EQ(t.rows[2].method, Method::kReak);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.report.initial_training, t.rows[0].report.initial_training);
    EXPECT_EQ(r.report.pool_fingerprint, t.rows[0].report.pool_fingerprint);
    ASSERT_TRUE(r.report.pf_pool_oracle.has_value());
    // Pool prefix oracle agrees with a direct evaluation.
    const auto& b = bench::get("series4");
    SampleMatrix s = lhs_sample(b.rv, 10000, 1, 1);
    for (std::size_t k = 0; k < r.report.pool_growths; ++k) {
      s.append(plain_sample(b.rv, 10000, 1, 1000 + k));
    }
    EXPECT_EQ(*r.report.pf_pool_oracle, pool_failure_fraction(b.g, s));
  }
  EXPECT_FALSE(t.rows[0].report.eps_max_hat.has_value());
  EXPECT_EQ(t.rows[1].report.eps_max_hat.value(), 0.05);
  const std::string csv = compare_csv(t);
  EXPECT_NE(csv.find("\"12 + "), std::string::npos);
}

// Line-oriented evaluator reading whitespace-separated values into v.
std::string py(const std::string& expr) {
  return "python3 -u -c 'import sys\nfor line in iter(sys.stdin.readline, \"\"):\n    v = [float(t) for t in line.split()]\n    print(repr(" +
         expr + "))'";
}

TEST(Evaluator, SubprocessRoundTrip) {
  SubprocessEvaluator ev(py("3 - v[0] - v[1]"));
  const double a[2] = {1.0, 0.25};
  EXPECT_DOUBLE_EQ(ev(a), 1.75);
  const double b[2] = {-2.0, 0.5};
  EXPECT_DOUBLE_EQ(ev(b), 4.5);
}

TEST(Evaluator, FailuresAreEvaluatorErrors) {
  const double x[1] = {1.0};
  EXPECT_EQ(code_of([&] { SubprocessEvaluator ev("echo oops"); ev(x); }), ErrorCode::kEvaluator);
  EXPECT_EQ(code_of([&] { SubprocessEvaluator ev("true"); ev(x); }), ErrorCode::kEvaluator);
  // inf - inf prints nan.
  EXPECT_EQ(code_of([&] { SubprocessEvaluator ev(py("1e400 - 1e400")); ev(x); }),
            ErrorCode::kEvaluator);
}

TEST(Evaluator, DrivesAnEngineRun) {
  json doc = {{"evaluator", py("2 - v[0]")},
              {"variables", {{{"kind", "normal"}, {"param1", 0}, {"param2", 1}}}},
              {"method", "AKMCS"},
              {"cov_thr", 0.1},
              {"n_pool_initial", 10000}};
  const RunConfig cfg = parse_config(doc);
  const RunOutcome out = run_single(cfg);
  EXPECT_TRUE(out.report.converged) << out.report.flag;
  EXPECT_NEAR(out.report.pf_hat, 0.02275, 0.005);
  EXPECT_FALSE(out.report.true_eps.has_value());
}

}  // namespace
}  // namespace akrel
