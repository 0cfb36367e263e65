#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "upsel/matrices.hpp"

namespace upsel {

// Sparse symmetric matrix used for the regularized Gram and as the dependence
// graph: off-diagonal nonzeros are the edges. Entries stored in both rows.
class SparseSym {
 public:
  using Entry = std::pair<int, double>;

  SparseSym() = default;
  explicit SparseSym(int p) : diag_(static_cast<std::size_t>(p), 1.0),
                              rows_(static_cast<std::size_t>(p)) {}
  static SparseSym from_corr(const CorrMatrix& omega);

  int p() const { return static_cast<int>(diag_.size()); }
  double diag(int i) const { return diag_[static_cast<std::size_t>(i)]; }
  void set_diag(int i, double v) { diag_[static_cast<std::size_t>(i)] = v; }
  const std::vector<Entry>& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  void add_edge(int i, int j, double v);  // stores (i,j) and (j,i)
  std::int64_t edge_count() const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;

 private:
  std::vector<double> diag_;
  std::vector<std::vector<Entry>> rows_;
};

// Exact X'X. Warns to stderr when 2 n p^2 exceeds flop_warn_ceiling.
Eigen::MatrixXd empirical_gram(const Eigen::MatrixXd& x, double flop_warn_ceiling = 1e12);

// Entrywise hard threshold of the off-diagonals, default threshold 1/ln(p);
// diagonal kept as-is.
SparseSym regularize(const Eigen::MatrixXd& gram, double threshold);
double default_regularize_threshold(int p);  // 1/ln(p)

enum class Sidedness { one_sided, two_sided };

struct SurvivorSet {
  std::vector<int> indices;  // sorted ascending
  double threshold = 0.0;
  Sidedness side = Sidedness::one_sided;
};

// one_sided keeps j with inner[j] >= t; two_sided with |inner[j]| >= t.
SurvivorSet survivors(const Eigen::VectorXd& inner, double t, Sidedness side);

struct ComponentSet {
  std::vector<std::vector<int>> components;  // each sorted; ordered by smallest index
  int max_size = 0;
};

// Connected components of the survivor set under the graph's off-diagonal
// edges (union-find).
ComponentSet components(const SurvivorSet& surv, const SparseSym& graph);

std::string components_to_json(const ComponentSet& cs);

}  // namespace upsel
