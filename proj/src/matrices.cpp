#include "upsel/matrices.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace upsel {

CholFactor::CholFactor(Eigen::SparseMatrix<double> l,
                       Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p)
    : l_(std::move(l)), perm_(std::move(p)) {}

Eigen::VectorXd CholFactor::apply(const Eigen::VectorXd& z) const {
  return perm_.transpose() * (l_ * z);
}

Eigen::MatrixXd CholFactor::dense_b() const {
  return perm_.transpose() * Eigen::MatrixXd(l_);
}

CorrMatrix::CorrMatrix(int p) : p_(p), rows_(static_cast<std::size_t>(p)) {
  if (p < 1) throw std::invalid_argument("CorrMatrix: p must be at least 1");
}

void CorrMatrix::set_pair(int i, int j, double v) {
  if (i == j || i < 0 || j < 0 || i >= p_ || j >= p_)
    throw std::invalid_argument("CorrMatrix: bad off-diagonal index");
  if (!(std::abs(v) < 1.0))
    throw std::invalid_argument("CorrMatrix: off-diagonal magnitudes must be < 1");
  if (v == 0.0) return;
  rows_[i].push_back({j, v});
  rows_[j].push_back({i, v});
}

void CorrMatrix::finalize() {
  for (auto& r : rows_) {
    std::sort(r.begin(), r.end());
    for (std::size_t k = 1; k < r.size(); ++k)
      if (r[k].first == r[k - 1].first)
        throw std::invalid_argument("CorrMatrix: duplicate off-diagonal entry");
  }
}

CorrMatrix CorrMatrix::identity(int p) { return CorrMatrix(p); }

CorrMatrix CorrMatrix::tridiagonal(int p, double a) {
  if (!(std::abs(a) < 0.5))
    throw std::invalid_argument("tridiagonal: |a| must be below 1/2");
  CorrMatrix m(p);
  for (int i = 0; i + 1 < p; ++i) m.set_pair(i, i + 1, a);
  m.finalize();
  return m;
}

CorrMatrix CorrMatrix::pentadiagonal(int p, double a1, double a2) {
  CorrMatrix m(p);
  for (int i = 0; i + 1 < p; ++i) m.set_pair(i, i + 1, a1);
  for (int i = 0; i + 2 < p; ++i) m.set_pair(i, i + 2, a2);
  m.finalize();
  return m;
}

CorrMatrix CorrMatrix::random_sparse(int p, double avg_offdiag, double magnitude, RngStream& rng,
                                     int max_tries) {
  if (avg_offdiag < 0.0 || avg_offdiag > p - 1.0)
    throw std::invalid_argument("random_sparse: avg_offdiag out of range");
  if (avg_offdiag > 0.0 && !(avg_offdiag * magnitude < 1.0))
    throw std::invalid_argument("random_sparse: need avg_offdiag * magnitude < 1");
  auto target = static_cast<std::int64_t>(std::llround(static_cast<double>(p) * avg_offdiag / 2.0));
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    CorrMatrix m(p);
    std::unordered_set<std::int64_t> used;
    used.reserve(static_cast<std::size_t>(target) * 2);
    while (static_cast<std::int64_t>(used.size()) < target) {
      int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      std::int64_t key = static_cast<std::int64_t>(i) * p + j;
      if (!used.insert(key).second) continue;
      m.set_pair(i, j, rng.bernoulli(0.5) ? magnitude : -magnitude);
    }
    m.finalize();
    if (target == 0) return m;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(m.to_eigen());
    if (llt.info() == Eigen::Success) return m;
  }
  throw std::runtime_error("random_sparse: no positive definite draw within retry budget");
}

double CorrMatrix::entry(int i, int j) const {
  if (i == j) return 1.0;
  const Row& r = rows_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, int col) { return e.first < col; });
  return (it != r.end() && it->first == j) ? it->second : 0.0;
}

std::int64_t CorrMatrix::offdiag_count() const {
  std::int64_t c = 0;
  for (const auto& r : rows_) c += static_cast<std::int64_t>(r.size());
  return c / 2;
}

int CorrMatrix::bandwidth() const {
  int b = 0;
  for (int i = 0; i < p_; ++i)
    for (const auto& [j, v] : rows_[i]) b = std::max(b, std::abs(i - j));
  return b;
}

Eigen::VectorXd CorrMatrix::multiply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = v;
  for (int i = 0; i < p_; ++i) {
    double acc = 0.0;
    for (const auto& [j, w] : rows_[i]) acc += w * v[j];
    out[i] += acc;
  }
  return out;
}

Eigen::MatrixXd CorrMatrix::submatrix(const std::vector<int>& idx) const {
  int k = static_cast<int>(idx.size());
  Eigen::MatrixXd a(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) a(r, c) = entry(idx[r], idx[c]);
  return a;
}

Eigen::MatrixXd CorrMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p_, p_);
  for (int i = 0; i < p_; ++i)
    for (const auto& [j, v] : rows_[i]) m(i, j) = v;
  return m;
}

Eigen::SparseMatrix<double> CorrMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(p_) + 2 * static_cast<std::size_t>(offdiag_count()));
  for (int i = 0; i < p_; ++i) {
    trip.emplace_back(i, i, 1.0);
    for (const auto& [j, v] : rows_[i]) trip.emplace_back(i, j, v);
  }
  Eigen::SparseMatrix<double> s(p_, p_);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

ClassReport CorrMatrix::check_class(double gamma, double cap_a, double omega0) const {
  ClassReport rep;
  rep.in_plus = true;
  std::vector<double> colsum_upper(static_cast<std::size_t>(p_), 0.0);
  double rowsum_upper_max = 0.0;
  for (int i = 0; i < p_; ++i) {
    double pownorm = 1.0;  // diagonal contributes |1|^gamma
    double upper = 0.0;
    for (const auto& [j, v] : rows_[i]) {
      double av = std::abs(v);
      pownorm += std::pow(av, gamma);
      rep.delta0 = std::max(rep.delta0, av);
      if (v < 0.0) rep.in_plus = false;
      if (j > i) {
        upper += av;
        colsum_upper[static_cast<std::size_t>(j)] += av;
      }
    }
    rep.row_norm_max = std::max(rep.row_norm_max, pownorm);
    rowsum_upper_max = std::max(rowsum_upper_max, upper);
  }
  double colsum_upper_max = 0.0;
  for (double c : colsum_upper) colsum_upper_max = std::max(colsum_upper_max, c);
  rep.d = std::max(rowsum_upper_max, colsum_upper_max);
  rep.in_class = rep.row_norm_max <= cap_a;
  rep.in_star = rep.in_class && rep.d <= omega0;
  rep.in_plus = rep.in_plus && rep.in_star;
  return rep;
}

CholFactor CorrMatrix::sqrt_factor() const {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(to_eigen());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sqrt_factor: matrix is not positive definite");
  return CholFactor(llt.matrixL(), llt.permutationP());
}

Eigen::MatrixXd CorrMatrix::sym_sqrt() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense());
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_sqrt: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("sym_sqrt: matrix is not positive definite");
  return es.operatorSqrt();
}

void CorrMatrix::save_triplets(std::ostream& out) const {
  out << "i,j,value\n";
  char buf[64];
  for (int i = 0; i < p_; ++i)
    for (const auto& [j, v] : rows_[i])
      if (j > i) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", i, j, v);
        out << buf;
      }
}

CorrMatrix CorrMatrix::load_triplets(std::istream& in, int p) {
  CorrMatrix m(p);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("i,", 0) == 0) continue;  // header
    }
    std::istringstream ls(line);
    int i = 0, j = 0;
    double v = 0.0;
    char c1 = 0, c2 = 0;
    if (!(ls >> i >> c1 >> j >> c2 >> v) || c1 != ',' || c2 != ',')
      throw std::runtime_error("load_triplets: malformed row: " + line);
    if (j <= i) throw std::runtime_error("load_triplets: expected upper-triangle entries");
    m.set_pair(i, j, v);
  }
  m.finalize();
  return m;
}

}  // namespace upsel
