#include "upsel/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace upsel {

void validate(const PhaseParams& par) {
  auto bad = [](const std::string& what) { throw std::invalid_argument("PhaseParams: " + what); };
  if (!(par.vartheta > 0.0 && par.vartheta < 1.0)) bad("vartheta must lie in (0,1)");
  if (!(par.r > 0.0)) bad("r must be positive");
  if (!(par.theta >= 0.0 && par.theta <= 1.0)) bad("theta must lie in [0,1]");
  if (!(par.q >= 0.0)) bad("q must be nonnegative");
  if (!(par.a > -0.5 && par.a < 0.5)) bad("a must lie in (-1/2, 1/2)");
  if (!(par.omega0 > 0.0 && par.omega0 < 0.5)) bad("omega0 must lie in (0, 1/2)");
  if (!(par.gamma > 0.0 && par.gamma < 1.0)) bad("gamma must lie in (0,1)");
  if (!(par.cap_a > 0.0)) bad("cap_a must be positive");
}

ProblemSize calibrate(std::int64_t p, const PhaseParams& par) {
  if (p < 2) throw std::invalid_argument("calibrate: p must be at least 2");
  validate(par);
  ProblemSize sz;
  sz.p = p;
  double lp = std::log(static_cast<double>(p));
  sz.eps = std::pow(static_cast<double>(p), -par.vartheta);
  sz.tau = std::sqrt(2.0 * par.r * lp);
  sz.s = static_cast<double>(p) * sz.eps;
  sz.n = par.theta > 0.0
             ? static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(p), par.theta)))
             : 0;
  return sz;
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double gaussian_tail(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

double eta_constant(double vartheta, double r, double omega0) {
  if (!(vartheta > 0.0 && omega0 > 0.0 && omega0 < 0.5))
    throw std::invalid_argument("eta_constant: need vartheta > 0 and omega0 in (0, 1/2)");
  if (!(r > vartheta))
    throw std::invalid_argument("eta_constant: need r > vartheta (middle term nonpositive)");
  double lead = std::sqrt(vartheta * r) / ((vartheta + r) * std::sqrt(1.0 + 2.0 * omega0));
  double m = std::min({2.0 * vartheta / r, 1.0 - vartheta / r,
                       std::sqrt(2.0 * (1.0 - omega0)) - 1.0 + vartheta / r});
  return lead * m;
}

double design_gap(double p, double theta, double vartheta) {
  if (!(p >= 2.0)) throw std::invalid_argument("design_gap: p must be at least 2");
  if (!(theta > 1.0 - vartheta))
    throw std::invalid_argument("design_gap: need theta > 1 - vartheta");
  double lp = std::log(p);
  return std::sqrt(2.0 * lp) * std::pow(p, -(theta - (1.0 - vartheta)) / 2.0);
}

}  // namespace upsel
