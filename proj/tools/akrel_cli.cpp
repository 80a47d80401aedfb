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

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "akrel/akrel.h"

namespace {

int exit_code(akrel_status s) {
  switch (s) {
    case AKREL_OK: return 0;
    case AKREL_ERR_CONFIG: return 2;
    case AKREL_ERR_NOT_CONVERGED: return 3;
    case AKREL_ERR_EVALUATOR: return 4;
    default: return 1;
  }
}

int fail(akrel_status s) {
  std::fprintf(stderr, "akrel: %s: %s\n", akrel_status_string(s), akrel_last_error());
  return exit_code(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  akrel_string_free(s);
  return out;
}

std::string fmt(const nlohmann::json& v) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
  return buf;
}

struct Common {
  std::string config;
  std::string output;
  bool json = false;
};

akrel_status load(const Common& c, akrel_config** cfg) {
  akrel_status s = akrel_config_from_file(c.config.c_str(), cfg);
  if (s != AKREL_OK) return s;
  std::string dir = c.output;
  int has = 0;
  akrel_config_has_output_dir(*cfg, &has);
  if (dir.empty() && !has) {
    if (const char* env = std::getenv("AKREL_OUTPUT_DIR")) dir = env;
  }
  if (!dir.empty()) s = akrel_config_set_output_dir(*cfg, dir.c_str());
  return s;
}

void print_report_line(const nlohmann::json& r) {
  std::printf("%-6s n_calls %-10s pf_hat %-12s cov %-10s eps_max %-10s true_eps %-10s pool %s%s\n",
              r["method"].get<std::string>().c_str(), r["n_calls"].get<std::string>().c_str(),
              fmt(r["pf_hat"]).c_str(), fmt(r["cov_pf"]).c_str(), fmt(r["eps_max_hat"]).c_str(),
              fmt(r["true_eps"]).c_str(), std::to_string(r["pool_size"].get<std::uint64_t>()).c_str(),
              r["flag"].get<std::string>().empty()
                  ? ""
                  : ("  [" + r["flag"].get<std::string>() + "]").c_str());
}

int cmd_run(const Common& c) {
  akrel_config* cfg = nullptr;
  akrel_status s = load(c, &cfg);
  if (s != AKREL_OK) return fail(s);
  akrel_result* res = nullptr;
  s = akrel_run(cfg, &res);
  akrel_config_free(cfg);
  if (!res) return fail(s);
  char* text = nullptr;
  akrel_result_json(res, &text);
  const std::string json = take(text);
  akrel_result_free(res);
  if (c.json) {
    std::printf("%s\n", json.c_str());
  } else {
    print_report_line(nlohmann::json::parse(json));
  }
  return s == AKREL_OK ? 0 : fail(s);
}

int cmd_sweep(const Common& c, std::size_t reps, std::size_t jobs) {
  akrel_config* cfg = nullptr;
  akrel_status s = load(c, &cfg);
  if (s == AKREL_OK && reps > 0) s = akrel_config_set_repetitions(cfg, reps);
  if (s == AKREL_OK) s = akrel_config_set_jobs(cfg, jobs);
  if (s != AKREL_OK) {
    akrel_config_free(cfg);
    return fail(s);
  }
  akrel_result* res = nullptr;
  s = akrel_sweep(cfg, &res);
  akrel_config_free(cfg);
  if (s != AKREL_OK) return fail(s);
  char* text = nullptr;
  akrel_result_json(res, &text);
  const std::string json = take(text);
  akrel_result_free(res);
  if (c.json) {
    std::printf("%s\n", json.c_str());
    return 0;
  }
  const auto a = nlohmann::json::parse(json);
  for (const auto& row : a["rows"]) {
    std::printf("seed %-6s ", std::to_string(row["seed"].get<std::uint64_t>()).c_str());
    if (row["ok"].get<bool>()) {
      print_report_line(row["report"]);
    } else {
      std::printf("FAILED: %s\n", row["error"].get<std::string>().c_str());
    }
  }
  std::printf("runs %s ok, %s failed; mean n_calls %s (cov %s); mean eps_max - eps %s (cov %s); coverage %s\n",
              std::to_string(a["n_ok"].get<std::uint64_t>()).c_str(),
              std::to_string(a["n_failed"].get<std::uint64_t>()).c_str(), fmt(a["mean_calls"]).c_str(),
              fmt(a["cov_calls"]).c_str(), fmt(a["mean_gap"]).c_str(), fmt(a["cov_gap"]).c_str(),
              fmt(a["coverage"]).c_str());
  return 0;
}

int cmd_compare(const Common& c) {
  akrel_config* cfg = nullptr;
  akrel_status s = load(c, &cfg);
  if (s != AKREL_OK) return fail(s);
  akrel_result* res = nullptr;
  s = akrel_compare(cfg, &res);
  akrel_config_free(cfg);
  if (s != AKREL_OK) return fail(s);
  char* text = nullptr;
  akrel_result_json(res, &text);
  const std::string json = take(text);
  akrel_result_free(res);
  if (c.json) {
    std::printf("%s\n", json.c_str());
    return 0;
  }
  const auto t = nlohmann::json::parse(json);
  std::printf("pool failure fraction (true g): %s\n", fmt(t["pf_pool_oracle"]).c_str());
  for (const auto& row : t["rows"]) {
    std::printf("eps_thr %-6s ", fmt(row["eps_thr"]).c_str());
    print_report_line(row["report"]);
  }
  return 0;
}

int cmd_list() {
  char* text = nullptr;
  const akrel_status s = akrel_list_benchmarks(&text);
  if (s != AKREL_OK) return fail(s);
  for (const auto& b : nlohmann::json::parse(take(text))) {
    std::printf("%-12s dim %-2s ref pf %-10s preset %-8s %s\n", b["name"].get<std::string>().c_str(),
                std::to_string(b["dim"].get<int>()).c_str(), fmt(b["reference_pf"]).c_str(),
                b["preset"].get<std::string>().c_str(), b["description"].get<std::string>().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Kriging reliability analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", akrel_version());

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one analysis");
  run->add_option("--config", run_opts.config, "JSON config file")->required();
  run->add_option("--output", run_opts.output, "Output directory (default: config or $AKREL_OUTPUT_DIR)");
  run->add_flag("--json", run_opts.json, "Print the full report as JSON");

  Common sweep_opts;
  std::size_t reps = 0;
  std::size_t jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Repeat an analysis over seeds and aggregate");
  sweep->add_option("--config", sweep_opts.config, "JSON config file")->required();
  sweep->add_option("--reps", reps, "Number of seeds (overrides the config)");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--output", sweep_opts.output, "Output directory");
  sweep->add_flag("--json", sweep_opts.json, "Print the aggregate as JSON");

  Common cmp_opts;
  auto* compare = app.add_subcommand("compare", "Compare methods on one shared pool");
  compare->add_option("--config", cmp_opts.config, "JSON config file")->required();
  compare->add_option("--output", cmp_opts.output, "Output directory");
  compare->add_flag("--json", cmp_opts.json, "Print the table as JSON");

  auto* list = app.add_subcommand("list-benchmarks", "List built-in benchmarks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*run) return cmd_run(run_opts);
  if (*sweep) return cmd_sweep(sweep_opts, reps, jobs);
  if (*compare) return cmd_compare(cmp_opts);
  if (*list) return cmd_list();
  return 1;
}
