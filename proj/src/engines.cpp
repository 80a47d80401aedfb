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

#include "akrel/engines.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "akrel/error_bound.hpp"
#include "akrel/errors.hpp"
#include "akrel/learning.hpp"
#include "akrel/rng.hpp"

namespace akrel {

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double checked_eval(const LimitState& g, std::span<const double> x, std::size_t index) {
  double v = 0.0;
  try {
    v = g(x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEvaluator) throw;
    throw Error(ErrorCode::kEvaluator,
                "limit state failed at sample " + std::to_string(index) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kEvaluator,
                "limit state failed at sample " + std::to_string(index) + ": " + e.what());
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kEvaluator,
                "limit state returned a non-finite value at sample " + std::to_string(index));
  }
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kConfig, what);
}

class SurrogateRun {
 public:
  SurrogateRun(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg)
      : g_(g), rv_(rv), cfg_(cfg) {}

  RunOutcome run();

 private:
  void add_training(std::size_t index);
  void refit();
  ErrorBound bound(const EsrPartition& part);
  void record(const char* event, double score, double eps, std::size_t n_omega2,
              std::size_t selected);
  void finish(RunOutcome& out);

  const LimitState& g_;
  const RandomVector& rv_;
  EngineConfig cfg_;
  std::optional<DesignPool> pool_;
  Eigen::MatrixXd tx_;
  Eigen::VectorXd ty_;
  std::shared_ptr<const KrigingModel> model_;
  RunReport rep_;
  double alpha_ = 0.0;
  double pf_ = 0.0;
  std::size_t iteration_ = 0;
};

void SurrogateRun::add_training(std::size_t index) {
  const auto x = pool_->samples().row(index);
  const double y = checked_eval(g_, x, index);
  pool_->mark_evaluated(index, y);
  const auto m = tx_.rows();
  tx_.conservativeResize(m + 1, static_cast<Eigen::Index>(rv_.dim()));
  ty_.conservativeResize(m + 1);
  for (std::size_t k = 0; k < x.size(); ++k) tx_(m, static_cast<Eigen::Index>(k)) = x[k];
  ty_(m) = y;
  ++rep_.n_calls;
}

void SurrogateRun::refit() {
  FitOptions opts = cfg_.fit;
  opts.seed = cfg_.seed;
  opts.stream_id = stream::kMleStarts + static_cast<std::uint64_t>(tx_.rows());
  if (model_) opts.warm_start = model_->theta();
  model_ = std::make_shared<const KrigingModel>(KrigingModel::fit(tx_, ty_, opts));
  pool_->refresh(model_);
}

ErrorBound SurrogateRun::bound(const EsrPartition& part) {
  pool_->compute_exact(part.omega2_idx);
  WrongSignCounts counts;
  for (std::size_t i : part.omega1_idx) {
    if (pool_->pred_fail(i)) ++counts.n_omega1_fail;
  }
  for (std::size_t i : part.omega2_idx) {
    const double p = pool_->evaluated(i) ? 0.0 : wrong_sign_prob(pool_->mean()[i], pool_->sd(i));
    if (pool_->pred_fail(i)) {
      ++counts.n_omega2_fail;
      counts.p_wrong_fail.push_back(p);
    } else {
      counts.p_wrong_safe.push_back(p);
    }
  }
  ErrorBoundOptions opts;
  opts.alpha_ci = cfg_.alpha_ci;
  opts.confidence_q = cfg_.confidence_q;
  opts.seed = cfg_.seed;
  opts.stream_id = stream::kQuantileMc + iteration_;
  return max_error_rate(counts, opts);
}

void SurrogateRun::record(const char* event, double score, double eps, std::size_t n_omega2,
                          std::size_t selected) {
  TraceRecord r;
  r.iteration = iteration_++;
  r.event = event;
  r.n_calls = rep_.n_calls;
  r.pool_size = pool_->size();
  r.alpha = alpha_;
  r.n_omega2 = n_omega2;
  r.score = score;
  r.eps_max = eps;
  r.pf_hat = pf_;
  r.selected = selected;
  rep_.trace.push_back(std::move(r));
}

RunOutcome SurrogateRun::run() {
  const auto t0 = std::chrono::steady_clock::now();
  const Method method = cfg_.method;
  rep_.method = method;
  rep_.seed = cfg_.seed;

  pool_.emplace(rv_, lhs_sample(rv_, cfg_.n_pool_initial, cfg_.seed, stream::kInitialPool));
  rep_.pool_fingerprint = pool_->fingerprint();

  const auto nr = static_cast<double>(rv_.dim());
  const double alpha_init = method == Method::kReak    ? cfg_.gamma * cfg_.eps_thr * nr * nr
                            : method == Method::kIskra ? cfg_.eps_thr
                                                       : 0.0;
  rep_.alpha_initial = alpha_init;
  alpha_ = alpha_init;

  // Initial training subset: partial Fisher-Yates over the pool indices.
  const std::size_t n_pool = pool_->size();
  const std::size_t n0 = std::min(cfg_.n_initial_train, n_pool);
  std::vector<std::size_t> idx(n_pool);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(cfg_.seed, stream::kInitialTraining);
  for (std::size_t i = 0; i < n0; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n_pool - i));
    std::swap(idx[i], idx[j]);
  }
  rep_.initial_training.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n0));
  for (std::size_t i : rep_.initial_training) add_training(i);
  rep_.n_initial = rep_.n_calls;
  refit();
  pf_ = pool_->pf_hat();
  double pf_ref = pf_;

  std::size_t expansions = 0;
  bool stop_run = false;
  bool bound_ok = true;
  while (!stop_run) {
    EsrPartition part;
    while (true) {
      part = build_partition(pool_->density(), pool_->density_order(), alpha_, pf_ref);
      if (part.degenerate && rep_.flag.empty()) rep_.flag = "degenerate partition";
      std::vector<std::uint8_t> mask(pool_->size());
      bool any = false;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = part.in_esr[i] && !pool_->evaluated(i);
        any = any || mask[i];
      }
      if (!any) {
        record("stop", 0.0, -1.0, part.omega2_idx.size(), 0);
        break;
      }
      const bool use_eff = cfg_.learning == LearningFunction::kEff;
      const Selection sel = use_eff ? pool_->select_max_eff(mask) : pool_->select_min_u(mask);
      const bool done = use_eff ? sel.value <= cfg_.eff_stop : sel.value >= cfg_.u_stop;
      record(done ? "stop" : "learn", sel.value, -1.0, part.omega2_idx.size(), sel.index);
      if (done) break;
      if (rep_.n_calls >= cfg_.max_calls) {
        rep_.converged = false;
        rep_.flag = "max_calls reached";
        stop_run = true;
        break;
      }
      if (is_duplicate_of(tx_, pool_->samples().row(sel.index))) {
        // Never evaluate the same point twice; drop it from the candidates.
        pool_->mark_evaluated(sel.index, std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      add_training(sel.index);
      ++rep_.n_adaptive;
      refit();
      pf_ref = pf_;
      pf_ = pool_->pf_hat();
    }
    if (stop_run) break;

    if (method == Method::kReak) {
      const ErrorBound eb = bound(part);
      rep_.eps_max_hat = eb.eps_max;
      record("bound", rep_.trace.back().score, eb.eps_max, part.omega2_idx.size(), 0);
      if (eb.eps_max > cfg_.eps_thr) {
        if (alpha_ > 0.0) {
          ++expansions;
          alpha_ = std::max(0.0, alpha_init - static_cast<double>(expansions) * cfg_.delta_alpha);
          pf_ref = pf_;
          record("expand", 0.0, -1.0, 0, 0);
          continue;
        }
        bound_ok = false;
      } else {
        bound_ok = true;
      }
    } else if (method == Method::kIskra) {
      rep_.eps_max_hat = alpha_;
    }

    if (cov_of_pf(pf_, pool_->size()) > cfg_.cov_thr) {
      const std::size_t old = pool_->size();
      if (cfg_.n_pool_increment == 0 || old + cfg_.n_pool_increment > cfg_.max_pool) {
        rep_.converged = false;
        rep_.flag = "pool size limit reached";
        break;
      }
      pool_->append(plain_sample(rv_, cfg_.n_pool_increment, cfg_.seed,
                                 stream::kPoolGrowth + rep_.pool_growths));
      pool_->refresh_tail(old);
      ++rep_.pool_growths;
      pf_ = pool_->pf_hat();
      pf_ref = pf_;
      record("grow", 0.0, -1.0, 0, 0);
      continue;
    }
    if (!bound_ok) {
      rep_.converged = false;
      rep_.flag = "error bound above threshold at alpha = 0";
    }
    break;
  }

  RunOutcome out;
  finish(out);
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void SurrogateRun::finish(RunOutcome& out) {
  rep_.pf_hat = pool_->pf_hat();
  rep_.cov_pf = cov_of_pf(rep_.pf_hat, pool_->size());
  rep_.alpha_final = alpha_;
  rep_.pool_size = pool_->size();
  rep_.theta = model_->theta();
  rep_.beta = model_->beta();
  rep_.sigma2 = model_->sigma2();
  rep_.nugget = model_->nugget();
  rep_.clamped_variances = pool_->clamped_variances();
  out.report = std::move(rep_);
  out.pool = std::move(pool_);
  out.train_x = std::move(tx_);
  out.train_y = std::move(ty_);
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kMcs: return "MCS";
    case Method::kAkMcs: return "AKMCS";
    case Method::kIskra: return "ISKRA";
    case Method::kReak: return "REAK";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  const std::string u = upper(name);
  if (u == "MCS") return Method::kMcs;
  if (u == "AKMCS" || u == "AK-MCS") return Method::kAkMcs;
  if (u == "ISKRA") return Method::kIskra;
  if (u == "REAK") return Method::kReak;
  throw Error(ErrorCode::kConfig, "unknown method '" + name + "' (expected MCS, AKMCS, ISKRA or REAK)");
}

std::string to_string(LearningFunction lf) { return lf == LearningFunction::kEff ? "EFF" : "U"; }

LearningFunction learning_function_from_string(const std::string& name) {
  const std::string u = upper(name);
  if (u == "EFF") return LearningFunction::kEff;
  if (u == "U") return LearningFunction::kU;
  throw Error(ErrorCode::kConfig, "unknown learning function '" + name + "' (expected EFF or U)");
}

void EngineConfig::validate() const {
  require(eps_thr > 0.0 && eps_thr < 1.0, "eps_thr must lie in (0, 1)");
  require(cov_thr > 0.0, "cov_thr must be > 0");
  require(n_initial_train >= 2, "n_initial_train must be >= 2");
  require(delta_alpha > 0.0, "delta_alpha must be > 0");
  require(gamma > 0.0, "gamma must be > 0");
  require(eff_stop >= 0.0, "eff_stop must be >= 0");
  require(u_stop > 0.0, "u_stop must be > 0");
  require(confidence_q > 0.0 && confidence_q < 1.0, "confidence_q must lie in (0, 1)");
  require(alpha_ci > 0.0, "alpha_ci must be > 0");
  require(max_calls >= 1, "max_calls must be >= 1");
  if (method == Method::kMcs) {
    require(n_mcs >= 1, "n_mcs must be >= 1");
  } else {
    require(n_pool_initial >= n_initial_train, "n_pool_initial must be >= n_initial_train");
    require(max_pool >= n_pool_initial, "max_pool must be >= n_pool_initial");
  }
}

std::string RunReport::n_calls_text() const {
  if (method == Method::kMcs) return std::to_string(n_calls);
  return std::to_string(n_initial) + " + " + std::to_string(n_adaptive);
}

double cov_of_pf(double pf, std::size_t n) {
  if (!(pf > 0.0) || n == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt((1.0 - pf) / (pf * static_cast<double>(n)));
}

double true_error_vs_oracle(double pf_hat, double pf_ref) {
  if (!(pf_ref > 0.0)) {
    throw Error(ErrorCode::kDomain, "true error is undefined for a zero reference probability");
  }
  return std::abs(pf_hat / pf_ref - 1.0);
}

double pool_failure_fraction(const LimitState& g, const SampleMatrix& samples) {
  if (samples.rows() == 0) return 0.0;
  std::size_t fails = 0;
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    if (checked_eval(g, samples.row(i), i) <= 0.0) ++fails;
  }
  return static_cast<double>(fails) / static_cast<double>(samples.rows());
}

RunReport crude_mcs(const LimitState& g, const RandomVector& rv, std::size_t n,
                    std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "crude_mcs needs n >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const SampleMatrix s = plain_sample(rv, n, seed, stream::kCrudeMcs);
  RunReport r;
  r.method = Method::kMcs;
  r.seed = seed;
  r.pf_hat = pool_failure_fraction(g, s);
  r.cov_pf = cov_of_pf(r.pf_hat, n);
  r.n_calls = n;
  r.pool_size = n;
  r.pool_fingerprint = 0;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunOutcome run_ak_mcs(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg) {
  EngineConfig c = cfg;
  c.method = Method::kAkMcs;
  c.validate();
  return SurrogateRun(g, rv, c).run();
}

RunOutcome run_iskra(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg) {
  EngineConfig c = cfg;
  c.method = Method::kIskra;
  c.validate();
  return SurrogateRun(g, rv, c).run();
}

RunOutcome run_reak(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg) {
  EngineConfig c = cfg;
  c.method = Method::kReak;
  c.validate();
  return SurrogateRun(g, rv, c).run();
}

RunOutcome run_engine(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg) {
  switch (cfg.method) {
    case Method::kMcs: {
      cfg.validate();
      RunOutcome out;
      out.report = crude_mcs(g, rv, cfg.n_mcs, cfg.seed);
      return out;
    }
    case Method::kAkMcs: return run_ak_mcs(g, rv, cfg);
    case Method::kIskra: return run_iskra(g, rv, cfg);
    case Method::kReak: return run_reak(g, rv, cfg);
  }
  throw Error(ErrorCode::kConfig, "unknown method");
}

}  // namespace akrel
