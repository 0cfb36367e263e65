#pragma once

#include <cstdint>

namespace upsel {

// Shared asymptotic calibration: a single exponent triple (vartheta, theta, r)
// fixes the sparsity level eps_p = p^{-vartheta}, the signal strength
// tau_p = sqrt(2 r ln p) and, for random designs, the sample size
// n_p = round(p^theta). Natural logs everywhere.
struct PhaseParams {
  double vartheta = 0.5;  // sparsity exponent, in (0,1)
  double theta = 0.0;     // sample-size exponent, in (0,1]; 0 = no design (sequence model)
  double r = 1.0;         // signal-strength exponent, > 0
  double q = 0.0;         // screening-threshold exponent; 0 = default (vartheta+r)^2/(4r)
  double a = 0.0;         // reference off-diagonal magnitude for closed-form boundaries
  double omega0 = 0.5;    // cap on d(Omega) for the correlation class, in (0,1)
  double gamma = 0.5;     // row-decay exponent of the matrix class
  double cap_a = 3.0;     // row-sum cap of the matrix class

  double q_effective() const { return q > 0.0 ? q : (vartheta + r) * (vartheta + r) / (4.0 * r); }
};

// Throws std::invalid_argument when a field is out of range.
void validate(const PhaseParams& par);

struct ProblemSize {
  std::int64_t p = 0;
  std::int64_t n = 0;  // 0 when theta == 0 (sequence model)
  double eps = 0.0;    // p^{-vartheta}
  double tau = 0.0;    // sqrt(2 r ln p)
  double s = 0.0;      // expected number of signals, p * eps
};

// Rejects p < 2 and invalid params.
ProblemSize calibrate(std::int64_t p, const PhaseParams& par);

// Phi and 1 - Phi for the standard normal; absolute error below 1e-12,
// and the tail stays relatively accurate far out (needed for thresholds
// around sqrt(2 q ln p)).
double gaussian_cdf(double x);
double gaussian_tail(double x);

// Constant eta(vartheta, r, omega0) controlling the allowed threshold window:
//   sqrt(vartheta r) / ((vartheta + r) sqrt(1 + 2 omega0))
//     * min{ 2 vartheta / r, 1 - vartheta / r, sqrt(2 (1 - omega0)) - 1 + vartheta / r }.
double eta_constant(double vartheta, double r, double omega0);

// Size of the stochastic gap between the regression inner products and their
// sequence-model counterparts: sqrt(2 ln p) * p^{-(theta - (1 - vartheta))/2}.
double design_gap(double p, double theta, double vartheta);

}  // namespace upsel
