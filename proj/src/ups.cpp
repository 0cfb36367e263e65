#include "upsel/ups.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace upsel {

void UpsTuning::validate() const {
  if (!(t > 0.0)) throw std::invalid_argument("UpsTuning: t must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("UpsTuning: lambda must be nonnegative");
  if (!(u > 0.0)) throw std::invalid_argument("UpsTuning: u must be positive");
}

UpsTuning ideal_tuning(std::int64_t p, const PhaseParams& par) {
  ProblemSize sz = calibrate(p, par);
  double lp = std::log(static_cast<double>(p));
  UpsTuning t;
  t.t = std::sqrt(2.0 * par.q_effective() * lp);
  t.lambda = std::sqrt(2.0 * par.vartheta * lp);
  t.u = sz.tau;
  t.source = TuningSource::ideal;
  return t;
}

std::pair<double, double> estimate_tuning(const Eigen::VectorXd& inner, double t_star) {
  double p = static_cast<double>(inner.size());
  std::int64_t count = 0;
  double sum = 0.0;
  for (int j = 0; j < inner.size(); ++j)
    if (inner[j] > t_star) {
      ++count;
      sum += inner[j];
    }
  if (count == 0)
    throw std::runtime_error("estimate_tuning: no coordinate exceeds the threshold");
  double fbar = static_cast<double>(count) / p;
  double lambda_hat = std::sqrt(std::max(0.0, -2.0 * std::log(fbar)));
  double u_hat = (sum / p) / fbar;  // mean of exceedances
  return {lambda_hat, u_hat};
}

UpsTuning estimated_tuning(const Eigen::VectorXd& inner, double t_star, Sidedness side) {
  UpsTuning t;
  t.t = t_star;
  t.source = TuningSource::estimated;
  if (side == Sidedness::two_sided) {
    auto [l, u] = estimate_tuning(inner.cwiseAbs(), t_star);
    t.lambda = l;
    t.u = u;
  } else {
    auto [l, u] = estimate_tuning(inner, t_star);
    t.lambda = l;
    t.u = u;
  }
  return t;
}

namespace {

std::vector<int> mask_support(std::uint32_t mask, int k) {
  std::vector<int> s;
  for (int b = 0; b < k; ++b)
    if (mask & (1u << b)) s.push_back(b);
  return s;
}

// objective of the pattern given the Cholesky factor of A
double pattern_objective(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& w, double lambda, double u,
                         std::uint32_t mask) {
  int k = static_cast<int>(w.size());
  Eigen::VectorXd resid = w;
  int nnz = 0;
  for (int b = 0; b < k; ++b)
    if (mask & (1u << b)) {
      resid -= u * a.col(b);
      ++nnz;
    }
  Eigen::VectorXd half = llt.matrixL().solve(resid);
  return 0.5 * half.squaredNorm() + 0.5 * lambda * lambda * nnz;
}

}  // namespace

PStepResult p_step_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& w, double lambda,
                       double u, const PStepOptions& opt) {
  int k = static_cast<int>(a.rows());
  if (a.cols() != k || w.size() != k) throw std::invalid_argument("p_step_fit: size mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("p_step_fit: component matrix not positive definite");

  PStepResult out;
  if (k <= opt.k_max) {
    std::uint32_t best_mask = 0;
    int best_nnz = 0;
    double best = pattern_objective(llt, a, w, lambda, u, 0);
    std::uint32_t total = 1u << k;
    for (std::uint32_t mask = 1; mask < total; ++mask) {
      double obj = pattern_objective(llt, a, w, lambda, u, mask);
      int nnz = __builtin_popcount(mask);
      bool better = obj < best;
      if (!better && obj == best) {
        if (nnz < best_nnz)
          better = true;
        else if (nnz == best_nnz)
          better = mask_support(mask, k) < mask_support(best_mask, k);
      }
      if (better) {
        best = obj;
        best_mask = mask;
        best_nnz = nnz;
      }
    }
    out.mu = Eigen::VectorXd::Zero(k);
    for (int b = 0; b < k; ++b)
      if (best_mask & (1u << b)) out.mu[b] = u;
    out.objective = best;
    out.exhaustive = true;
    return out;
  }

  // Oversize component: greedy forward selection on the same objective.
  std::vector<char> in(static_cast<std::size_t>(k), 0);
  Eigen::VectorXd resid = w;
  Eigen::VectorXd half = llt.matrixL().solve(resid);
  double cur = 0.5 * half.squaredNorm();
  int nnz = 0;
  for (;;) {
    int best_j = -1;
    double best_obj = cur;
    for (int j = 0; j < k; ++j) {
      if (in[static_cast<std::size_t>(j)]) continue;
      Eigen::VectorXd r2 = resid - u * a.col(j);
      Eigen::VectorXd h2 = llt.matrixL().solve(r2);
      double obj = 0.5 * h2.squaredNorm() + 0.5 * lambda * lambda * (nnz + 1);
      if (obj < best_obj) {
        best_obj = obj;
        best_j = j;
      }
    }
    if (best_j < 0) break;
    in[static_cast<std::size_t>(best_j)] = 1;
    resid -= u * a.col(best_j);
    ++nnz;
    cur = best_obj;
  }
  out.mu = Eigen::VectorXd::Zero(k);
  for (int j = 0; j < k; ++j)
    if (in[static_cast<std::size_t>(j)]) out.mu[j] = u;
  out.objective = cur;
  out.exhaustive = false;
  return out;
}

void SelectionProblem::validate() const {
  if (!inner) throw std::invalid_argument("SelectionProblem: inner products missing");
  if (!graph) throw std::invalid_argument("SelectionProblem: dependence graph missing");
  if (!gram && !omega) throw std::invalid_argument("SelectionProblem: no A-matrix source");
  if (graph->p() != p()) throw std::invalid_argument("SelectionProblem: graph size mismatch");
}

namespace {

Eigen::MatrixXd a_submatrix(const SelectionProblem& prob, const std::vector<int>& idx) {
  int k = static_cast<int>(idx.size());
  Eigen::MatrixXd a(k, k);
  if (prob.gram) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) a(r, c) = (*prob.gram)(idx[r], idx[c]);
  } else {
    a = prob.omega->submatrix(idx);
  }
  return a;
}

}  // namespace

SelectionResult ups_estimate(const SelectionProblem& prob, const UpsTuning& tuning,
                             const PStepOptions& opt) {
  prob.validate();
  tuning.validate();
  const Eigen::VectorXd& inner = *prob.inner;

  SelectionResult res;
  res.beta = Eigen::VectorXd::Zero(prob.p());
  res.tuning = tuning;
  res.method = "ups";

  SurvivorSet surv = survivors(inner, tuning.t, prob.side);
  res.survivor_count = static_cast<int>(surv.indices.size());
  ComponentSet comps = components(surv, *prob.graph);

  for (const auto& idx : comps.components) {
    res.component_size_histogram[static_cast<int>(idx.size())]++;
    Eigen::MatrixXd a = a_submatrix(prob, idx);
    Eigen::VectorXd w(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) w[static_cast<Eigen::Index>(r)] = inner[idx[r]];

    // Two-sided fits reduce to the {0,u} problem after flipping signs:
    // with D = diag(sgn w), minimizing over sgn-consistent patterns equals
    // the one-sided fit on (D A D, |w|).
    Eigen::VectorXd signs = Eigen::VectorXd::Ones(w.size());
    if (prob.side == Sidedness::two_sided) {
      for (int r = 0; r < w.size(); ++r) signs[r] = w[r] < 0.0 ? -1.0 : 1.0;
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) a(r, c) *= signs[r] * signs[c];
      w = w.cwiseAbs();
    }

    try {
      PStepResult fit = p_step_fit(a, w, tuning.lambda, tuning.u, opt);
      if (!fit.exhaustive) ++res.oversize_components;
      for (std::size_t r = 0; r < idx.size(); ++r)
        res.beta[idx[r]] = signs[static_cast<Eigen::Index>(r)] * fit.mu[static_cast<Eigen::Index>(r)];
    } catch (const std::exception&) {
      ++res.failed_components;  // leave zeros in this component
    }
  }
  return res;
}

SelectionResult ups_estimate(const Dataset& ds, const SparseSym& omega_star,
                             const UpsTuning& tuning, const PStepOptions& opt) {
  SelectionProblem prob;
  prob.graph = &omega_star;
  prob.side = ds.two_sided ? Sidedness::two_sided : Sidedness::one_sided;
  Eigen::VectorXd inner;
  Eigen::MatrixXd gram;
  if (ds.kind == DatasetKind::stein) {
    if (!ds.omega) throw std::invalid_argument("ups_estimate: Stein dataset lacks omega");
    inner = ds.y;
    prob.omega = ds.omega.get();
  } else {
    inner = ds.x.transpose() * ds.y;
    gram = empirical_gram(ds.x);
    prob.gram = &gram;
  }
  prob.inner = &inner;
  return ups_estimate(prob, tuning, opt);
}

namespace {

double sample_sd(const Eigen::VectorXd& v) {
  double n = static_cast<double>(v.size());
  double mean = v.mean();
  double ss = (v.array() - mean).square().sum();
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

SelectionResult refine(const SelectionProblem& prob, const UpsTuning& tuning,
                       const RefineConfig& cfg, const PStepOptions& opt) {
  prob.validate();
  if (!prob.gram)
    throw std::invalid_argument("refine: needs a random-design problem (Gram matrix)");
  const Eigen::VectorXd& xty = *prob.inner;

  SelectionResult fit = ups_estimate(prob, tuning, opt);
  Eigen::VectorXd w_prev = xty;
  double s_prev = sample_sd(w_prev);
  int rounds = 0;

  for (int j = 1; j <= cfg.max_rounds; ++j) {
    Eigen::VectorXd correction = (*prob.gram) * fit.beta - prob.graph->multiply(fit.beta);
    Eigen::VectorXd w = xty - correction;
    double s = sample_sd(w);
    double ratio = s_prev > 0.0 ? s / s_prev : (s > 0.0 ? 2.0 : 1.0);
    if (ratio > cfg.accept_ratio) break;

    UpsTuning round_tuning = tuning;
    if (tuning.source == TuningSource::estimated)
      round_tuning = estimated_tuning(w, tuning.t, prob.side);

    SelectionProblem round_prob = prob;
    round_prob.inner = &w;
    fit = ups_estimate(round_prob, round_tuning, opt);
    rounds = j;
    w_prev = w;
    s_prev = s;
  }
  fit.refinement_rounds = rounds;
  fit.method = "ups_refined";
  return fit;
}

HammingCount hamming(const Eigen::VectorXd& est, const Eigen::VectorXd& truth) {
  if (est.size() != truth.size()) throw std::invalid_argument("hamming: length mismatch");
  HammingCount h;
  for (int j = 0; j < est.size(); ++j) {
    int se = est[j] > 0.0 ? 1 : (est[j] < 0.0 ? -1 : 0);
    int st = truth[j] > 0.0 ? 1 : (truth[j] < 0.0 ? -1 : 0);
    if (se == st) continue;
    if (st == 0)
      ++h.fp;
    else
      ++h.fn;
  }
  h.total = h.fp + h.fn;
  return h;
}

std::string selection_to_json(const SelectionResult& res, double wall_ms) {
  nlohmann::json j;
  std::vector<int> support;
  for (int i = 0; i < res.beta.size(); ++i)
    if (res.beta[i] != 0.0) support.push_back(i);
  j["support"] = support;
  std::vector<double> values;
  values.reserve(support.size());
  for (int i : support) values.push_back(res.beta[i]);
  j["values"] = values;
  j["method"] = res.method;
  j["tuning"] = {{"t", res.tuning.t},
                 {"lambda", res.tuning.lambda},
                 {"u", res.tuning.u},
                 {"source", res.tuning.source == TuningSource::ideal
                                ? "ideal"
                                : (res.tuning.source == TuningSource::estimated ? "estimated"
                                                                                : "manual")}};
  j["survivor_count"] = res.survivor_count;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [size, count] : res.component_size_histogram)
    hist[std::to_string(size)] = count;
  j["component_size_histogram"] = hist;
  j["oversize_components"] = res.oversize_components;
  j["failed_components"] = res.failed_components;
  j["refinement_rounds"] = res.refinement_rounds;
  j["wall_ms"] = wall_ms;
  return j.dump(2);
}

}  // namespace upsel
