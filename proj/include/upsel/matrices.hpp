#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <utility>
#include <vector>

#include "upsel/rng.hpp"

namespace upsel {

// Membership report for the correlation-matrix classes. row_norm_max is
// max_i sum_j |w_ij|^gamma (diagonal included); d is the larger of the matrix
// 1-norm and inf-norm of the strict upper triangle; delta0 the largest
// off-diagonal magnitude.
struct ClassReport {
  bool in_class = false;  // row_norm_max <= cap_a
  bool in_star = false;   // additionally d <= omega0
  bool in_plus = false;   // additionally all off-diagonals nonnegative
  double row_norm_max = 0.0;
  double d = 0.0;
  double delta0 = 0.0;
};

// Sparse factor B with B B^T = Omega (fill-reducing Cholesky, so B = P^T L).
class CholFactor {
 public:
  CholFactor() = default;
  CholFactor(Eigen::SparseMatrix<double> l,
             Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p);

  // B z
  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd dense_b() const;  // small p only, for verification
  std::int64_t nonzeros() const { return l_.nonZeros(); }

 private:
  Eigen::SparseMatrix<double> l_;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm_;  // P with P Omega P^T = L L^T
};

// Symmetric p x p matrix with unit diagonal and sparse off-diagonal part.
// Off-diagonals are stored symmetrically (each entry appears in both rows),
// sorted by column index within a row.
class CorrMatrix {
 public:
  using Entry = std::pair<int, double>;
  using Row = std::vector<Entry>;

  static CorrMatrix identity(int p);
  static CorrMatrix tridiagonal(int p, double a);
  static CorrMatrix pentadiagonal(int p, double a1, double a2);
  // About avg_offdiag nonzero off-diagonals per row on average, each equal to
  // +-magnitude with independent signs; redraws until positive definite.
  static CorrMatrix random_sparse(int p, double avg_offdiag, double magnitude, RngStream& rng,
                                  int max_tries = 32);

  int p() const { return p_; }
  double entry(int i, int j) const;  // 1 on the diagonal, 0 where nothing is stored
  const Row& row(int i) const { return rows_[i]; }
  std::int64_t offdiag_count() const;  // counted once per unordered pair
  int bandwidth() const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd submatrix(const std::vector<int>& idx) const;
  Eigen::MatrixXd to_dense() const;
  Eigen::SparseMatrix<double> to_eigen() const;

  ClassReport check_class(double gamma, double cap_a, double omega0) const;

  CholFactor sqrt_factor() const;       // throws if not positive definite
  Eigen::MatrixXd sym_sqrt() const;     // dense eigendecomposition; moderate p only

  // Triplet CSV "i,j,value": upper triangle, 0-based, unit diagonal implicit.
  void save_triplets(std::ostream& out) const;
  static CorrMatrix load_triplets(std::istream& in, int p);

 private:
  explicit CorrMatrix(int p);
  void set_pair(int i, int j, double v);  // stage during construction
  void finalize();                        // sort rows, validate

  int p_ = 0;
  std::vector<Row> rows_;
};

}  // namespace upsel
