#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>

#include "upsel/matrices.hpp"
#include "upsel/rng.hpp"

namespace upsel {

// Signal distribution pi: beta_j ~ (1-eps) nu_0 + eps pi.
enum class PriorKind { point_mass, uniform, two_sided_mixture };

struct SignalPrior {
  PriorKind kind = PriorKind::point_mass;
  double center = 1.0;      // tau
  double half_width = 0.0;  // w; support [tau-w, tau+w] (mirrored for two-sided)

  bool two_sided() const { return kind == PriorKind::two_sided_mixture; }
  double draw(RngStream& rng) const;
  void validate() const;  // throws on tau - w <= 0 etc.
};

enum class DatasetKind { stein, random_design_gaussian, random_design_uniform };

struct Dataset {
  DatasetKind kind = DatasetKind::stein;
  std::uint64_t seed = 0;
  Eigen::VectorXd beta;            // length p
  Eigen::MatrixXd x;               // n x p; empty for Stein
  Eigen::VectorXd y;               // length n; for Stein, Ytilde of length p
  std::shared_ptr<const CorrMatrix> omega;
  bool two_sided = false;          // prior sidedness, drives screening later

  int p() const { return static_cast<int>(beta.size()); }
  int n() const { return static_cast<int>(x.rows()); }
};

Eigen::VectorXd draw_beta(int p, double eps, const SignalPrior& prior, RngStream& rng);

// Rows i.i.d. N(0, Omega/n): row = (1/sqrt(n)) B zeta with B B^T = Omega.
Eigen::MatrixXd draw_design_gaussian(int n, int p, const CholFactor& factor, RngStream& rng);

// X = (1/sqrt(n)) M S with M entries i.i.d. Uniform(-sqrt(3), sqrt(3)) and S = sym_sqrt(Omega).
Eigen::MatrixXd draw_design_uniform(int n, int p, const Eigen::MatrixXd& sym_sqrt, RngStream& rng);

// Y = X beta + z. Null rng = zero noise (deterministic fixture hook).
Eigen::VectorXd draw_response(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                              RngStream* rng);

// Ytilde = Omega beta + B zeta. Null rng = zero noise.
Eigen::VectorXd draw_stein(const CorrMatrix& omega, const CholFactor& factor,
                           const Eigen::VectorXd& beta, RngStream* rng);

// Directory layout: beta.csv, y.csv (and x.csv for designs), omega.csv, meta.json.
void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

}  // namespace upsel
