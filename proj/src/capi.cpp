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

#include "akrel/akrel.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <optional>
#include <string>

#include "akrel/benchmarks.hpp"
#include "akrel/errors.hpp"
#include "akrel/harness.hpp"

struct akrel_config {
  akrel::RunConfig cfg;
};

struct akrel_result {
  nlohmann::json doc;
  std::optional<akrel::RunReport> report;
};

namespace {

thread_local std::string g_last_error;

akrel_status map_code(akrel::ErrorCode code) {
  using akrel::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return AKREL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDomain: return AKREL_ERR_DOMAIN;
    case ErrorCode::kDimensionMismatch: return AKREL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIllConditioned: return AKREL_ERR_ILL_CONDITIONED;
    case ErrorCode::kDegenerateEsr: return AKREL_ERR_DEGENERATE_ESR;
    case ErrorCode::kConfig: return AKREL_ERR_CONFIG;
    case ErrorCode::kEvaluator: return AKREL_ERR_EVALUATOR;
    case ErrorCode::kIo: return AKREL_ERR_IO;
  }
  return AKREL_ERR_INTERNAL;
}

template <class F>
akrel_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const akrel::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return AKREL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AKREL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AKREL_ERR_INTERNAL;
  }
}

akrel_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return AKREL_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

akrel_status finish_run(akrel::RunOutcome&& outcome, akrel_result** out) {
  auto* r = new akrel_result;
  r->doc = akrel::report_to_json(outcome.report);
  r->report = std::move(outcome.report);
  *out = r;
  if (r->report->flagged()) {
    g_last_error = "run flagged: " + r->report->flag;
    return AKREL_ERR_NOT_CONVERGED;
  }
  return AKREL_OK;
}

}  // namespace

extern "C" {

const char* akrel_version(void) { return "0.1.0"; }

const char* akrel_last_error(void) { return g_last_error.c_str(); }

const char* akrel_status_string(akrel_status status) {
  switch (status) {
    case AKREL_OK: return "ok";
    case AKREL_ERR_INTERNAL: return "internal error";
    case AKREL_ERR_CONFIG: return "configuration error";
    case AKREL_ERR_NOT_CONVERGED: return "not converged";
    case AKREL_ERR_EVALUATOR: return "evaluator failure";
    case AKREL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AKREL_ERR_DOMAIN: return "domain error";
    case AKREL_ERR_ILL_CONDITIONED: return "ill-conditioned model";
    case AKREL_ERR_DEGENERATE_ESR: return "degenerate sampling region";
    case AKREL_ERR_IO: return "i/o error";
  }
  return "unknown status";
}

void akrel_string_free(char* s) { std::free(s); }

akrel_status akrel_config_from_file(const char* path, akrel_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new akrel_config{akrel::parse_config_file(path)};
    return AKREL_OK;
  });
}

akrel_status akrel_config_from_string(const char* json, akrel_config** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new akrel_config{akrel::parse_config_string(json)};
    return AKREL_OK;
  });
}

akrel_status akrel_config_set_output_dir(akrel_config* cfg, const char* dir) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    cfg->cfg.output_dir = dir ? dir : "";
    return AKREL_OK;
  });
}

akrel_status akrel_config_set_repetitions(akrel_config* cfg, size_t repetitions) {
  if (!cfg) return null_arg("cfg");
  cfg->cfg.repetitions = repetitions;
  if (!cfg->cfg.seeds.empty() && cfg->cfg.seeds.size() != repetitions) cfg->cfg.seeds.clear();
  return AKREL_OK;
}

akrel_status akrel_config_set_jobs(akrel_config* cfg, size_t jobs) {
  if (!cfg) return null_arg("cfg");
  if (jobs == 0) {
    g_last_error = "jobs must be >= 1";
    return AKREL_ERR_CONFIG;
  }
  cfg->cfg.jobs = jobs;
  return AKREL_OK;
}

akrel_status akrel_config_has_output_dir(const akrel_config* cfg, int* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = cfg->cfg.output_dir.empty() ? 0 : 1;
  return AKREL_OK;
}

akrel_status akrel_config_to_json(const akrel_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = copy_string(akrel::dump_json(akrel::config_to_json(cfg->cfg)));
    return AKREL_OK;
  });
}

void akrel_config_free(akrel_config* cfg) { delete cfg; }

akrel_status akrel_run(const akrel_config* cfg, akrel_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { return finish_run(akrel::run_single(cfg->cfg), out); });
}

akrel_status akrel_run_callback(const akrel_config* cfg, akrel_limit_state_fn g, void* user,
                                akrel_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!g) return null_arg("g");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    akrel::LimitState ls = [g, user](std::span<const double> x) {
      int ok = 1;
      const double v = g(x.data(), x.size(), user, &ok);
      if (!ok) throw akrel::Error(akrel::ErrorCode::kEvaluator, "limit state callback reported failure");
      return v;
    };
    akrel::RunOutcome outcome = akrel::run_engine(ls, cfg->cfg.random_vector(), cfg->cfg.engine);
    if (cfg->cfg.true_error && outcome.pool) {
      const double pf = akrel::pool_failure_fraction(ls, outcome.pool->samples());
      outcome.report.pf_pool_oracle = pf;
      if (pf > 0.0) outcome.report.true_eps = akrel::true_error_vs_oracle(outcome.report.pf_hat, pf);
    }
    return finish_run(std::move(outcome), out);
  });
}

akrel_status akrel_sweep(const akrel_config* cfg, akrel_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const akrel::AggregateReport agg = akrel::run_sweep(cfg->cfg);
    *out = new akrel_result{akrel::aggregate_to_json(agg), std::nullopt};
    if (agg.n_failed > 0) {
      g_last_error = std::to_string(agg.n_failed) + " of " + std::to_string(agg.rows.size()) +
                     " seeds failed";
    }
    return AKREL_OK;
  });
}

akrel_status akrel_compare(const akrel_config* cfg, akrel_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new akrel_result{akrel::compare_to_json(akrel::compare_methods(cfg->cfg)), std::nullopt};
    return AKREL_OK;
  });
}

akrel_status akrel_result_summary(const akrel_result* result, akrel_summary* out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  if (!result->report) {
    g_last_error = "summary is only available for single runs";
    return AKREL_ERR_INVALID_ARGUMENT;
  }
  const akrel::RunReport& r = *result->report;
  *out = akrel_summary{};
  out->pf_hat = r.pf_hat;
  out->cov_pf = r.cov_pf;
  out->n_calls = r.n_calls;
  out->n_initial = r.n_initial;
  out->n_adaptive = r.n_adaptive;
  out->has_eps_max = r.eps_max_hat.has_value();
  out->eps_max_hat = r.eps_max_hat.value_or(0.0);
  out->has_true_eps = r.true_eps.has_value();
  out->true_eps = r.true_eps.value_or(0.0);
  out->pool_size = r.pool_size;
  out->converged = r.converged && !r.flagged();
  return AKREL_OK;
}

akrel_status akrel_result_json(const akrel_result* result, char** out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = copy_string(akrel::dump_json(result->doc));
    return AKREL_OK;
  });
}

void akrel_result_free(akrel_result* result) { delete result; }

akrel_status akrel_list_benchmarks(char** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& name : akrel::bench::names()) {
      const auto& b = akrel::bench::get(name);
      arr.push_back({{"name", b.name},
                     {"description", b.description},
                     {"dim", b.rv.dim()},
                     {"reference_pf", b.reference_pf},
                     {"preset", b.preset}});
    }
    *out = copy_string(akrel::dump_json(arr));
    return AKREL_OK;
  });
}

}  // extern "C"
