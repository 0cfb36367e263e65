#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>

#include "upsel/core.hpp"
#include "upsel/datagen.hpp"
#include "upsel/graphops.hpp"

namespace upsel {

enum class TuningSource { ideal, estimated, manual };

struct UpsTuning {
  double t = 0.0;       // screening threshold t*
  double lambda = 0.0;  // penalty level
  double u = 0.0;       // fitted nonzero magnitude
  TuningSource source = TuningSource::manual;

  void validate() const;  // t > 0, lambda >= 0, u > 0
};

// t* = sqrt(2 q ln p) with q defaulting to (vartheta+r)^2/(4r),
// lambda = sqrt(2 vartheta ln p), u = tau_p.
UpsTuning ideal_tuning(std::int64_t p, const PhaseParams& par);

// Exceedance-based estimates: Fbar = (1/p) #{y_j > t*}, lambda_hat =
// sqrt(-2 ln Fbar), u_hat = mean of the exceedances. Throws when nothing
// exceeds t*.
std::pair<double, double> estimate_tuning(const Eigen::VectorXd& inner, double t_star);

// Convenience wrapper building a full UpsTuning; applies |inner| first for
// two-sided screening.
UpsTuning estimated_tuning(const Eigen::VectorXd& inner, double t_star, Sidedness side);

struct PStepOptions {
  int k_max = 20;  // exhaustive enumeration cap; above it greedy forward selection
};

struct PStepResult {
  Eigen::VectorXd mu;      // entries in {0, u}
  double objective = 0.0;  // 1/2 r'A^{-1}r + 1/2 lambda^2 |S| at the minimizer
  bool exhaustive = true;  // false when the greedy fallback ran
};

// Minimizes 1/2 (w - A mu)' A^{-1} (w - A mu) + 1/2 lambda^2 ||mu||_0 over
// mu in {0,u}^K. Ties: fewer nonzeros, then lexicographically smallest support.
PStepResult p_step_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& w, double lambda,
                       double u, const PStepOptions& opt = {});

// Everything a selector needs for one fit. gram XOR omega supplies the
// A-matrix; graph supplies the component structure.
struct SelectionProblem {
  const Eigen::VectorXd* inner = nullptr;  // X'Y (random design) or Ytilde (Stein)
  const Eigen::MatrixXd* gram = nullptr;   // X'X
  const CorrMatrix* omega = nullptr;       // known correlation (Stein)
  const SparseSym* graph = nullptr;        // dependence graph (regularized Gram or known zeros)
  Sidedness side = Sidedness::one_sided;

  int p() const { return inner ? static_cast<int>(inner->size()) : 0; }
  void validate() const;
};

struct SelectionResult {
  Eigen::VectorXd beta;
  UpsTuning tuning;
  std::string method;
  int survivor_count = 0;
  std::map<int, int> component_size_histogram;
  int oversize_components = 0;
  int failed_components = 0;
  int refinement_rounds = 0;
};

std::string selection_to_json(const SelectionResult& res, double wall_ms = 0.0);

// Screen at tuning.t, split survivors into components, run the P-step on each.
// Two-sided problems are reduced to the one-sided fit by conjugating each
// component with the signs of w, so fitted nonzeros are sgn(w_j) * u.
SelectionResult ups_estimate(const SelectionProblem& prob, const UpsTuning& tuning,
                             const PStepOptions& opt = {});

// Spec-shaped convenience overload: derives inner products and Gram from the
// dataset. Prefer the SelectionProblem form when fitting several methods.
SelectionResult ups_estimate(const Dataset& ds, const SparseSym& omega_star,
                             const UpsTuning& tuning, const PStepOptions& opt = {});

struct RefineConfig {
  int max_rounds = 3;
  double accept_ratio = 1.05;  // S(W_j)/S(W_{j-1}) acceptance cap
};

// Iteratively subtracts the off-support design noise: W_j = X'Y - (X'X - Omega*) beta_{j-1},
// refitting UPS on each accepted W_j. Estimated tuning is re-estimated per round.
SelectionResult refine(const SelectionProblem& prob, const UpsTuning& tuning,
                       const RefineConfig& cfg = {}, const PStepOptions& opt = {});

struct HammingCount {
  std::int64_t total = 0;
  std::int64_t fp = 0;  // nonzero estimate where truth is zero
  std::int64_t fn = 0;  // zero or wrong-signed estimate where truth is nonzero
};

HammingCount hamming(const Eigen::VectorXd& est, const Eigen::VectorXd& truth);

}  // namespace upsel
