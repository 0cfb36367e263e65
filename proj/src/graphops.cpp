#include "upsel/graphops.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace upsel {

SparseSym SparseSym::from_corr(const CorrMatrix& omega) {
  SparseSym s(omega.p());
  for (int i = 0; i < omega.p(); ++i)
    s.rows_[static_cast<std::size_t>(i)].assign(omega.row(i).begin(), omega.row(i).end());
  return s;
}

void SparseSym::add_edge(int i, int j, double v) {
  rows_[static_cast<std::size_t>(i)].push_back({j, v});
  rows_[static_cast<std::size_t>(j)].push_back({i, v});
}

std::int64_t SparseSym::edge_count() const {
  std::int64_t c = 0;
  for (const auto& r : rows_) c += static_cast<std::int64_t>(r.size());
  return c / 2;
}

Eigen::VectorXd SparseSym::multiply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(p());
  for (int i = 0; i < p(); ++i) {
    double acc = diag_[static_cast<std::size_t>(i)] * v[i];
    for (const auto& [j, w] : rows_[static_cast<std::size_t>(i)]) acc += w * v[j];
    out[i] = acc;
  }
  return out;
}

Eigen::MatrixXd empirical_gram(const Eigen::MatrixXd& x, double flop_warn_ceiling) {
  double flops = 2.0 * static_cast<double>(x.rows()) * static_cast<double>(x.cols()) *
                 static_cast<double>(x.cols());
  if (flops > flop_warn_ceiling)
    std::cerr << "warning: Gram computation needs ~" << flops << " flops (ceiling "
              << flop_warn_ceiling << ")\n";
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  return g.selfadjointView<Eigen::Lower>();
}

double default_regularize_threshold(int p) { return 1.0 / std::log(static_cast<double>(p)); }

SparseSym regularize(const Eigen::MatrixXd& gram, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("regularize: threshold must be positive");
  int p = static_cast<int>(gram.rows());
  SparseSym s(p);
  for (int i = 0; i < p; ++i) s.set_diag(i, gram(i, i));
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < j; ++i)
      if (std::abs(gram(i, j)) >= threshold) s.add_edge(i, j, gram(i, j));
  return s;
}

SurvivorSet survivors(const Eigen::VectorXd& inner, double t, Sidedness side) {
  SurvivorSet out;
  out.threshold = t;
  out.side = side;
  for (int j = 0; j < inner.size(); ++j) {
    double v = side == Sidedness::two_sided ? std::abs(inner[j]) : inner[j];
    if (v >= t) out.indices.push_back(j);
  }
  return out;
}

namespace {

// Plain union-find with path halving and union by size.
struct DisjointSets {
  std::vector<int> parent, size;
  explicit DisjointSets(int n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

ComponentSet components(const SurvivorSet& surv, const SparseSym& graph) {
  int m = static_cast<int>(surv.indices.size());
  std::vector<int> pos(static_cast<std::size_t>(graph.p()), -1);
  for (int k = 0; k < m; ++k) pos[static_cast<std::size_t>(surv.indices[k])] = k;

  DisjointSets ds(m);
  for (int k = 0; k < m; ++k) {
    int i = surv.indices[k];
    for (const auto& [j, v] : graph.row(i)) {
      (void)v;
      int kj = pos[static_cast<std::size_t>(j)];
      if (kj > k) ds.unite(k, kj);
    }
  }

  ComponentSet out;
  std::vector<int> slot(static_cast<std::size_t>(m), -1);
  for (int k = 0; k < m; ++k) {  // survivors ascend, so roots appear by smallest member
    int root = ds.find(k);
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<int>(out.components.size());
      out.components.emplace_back();
    }
    out.components[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(
        surv.indices[k]);
  }
  for (const auto& c : out.components) out.max_size = std::max(out.max_size, static_cast<int>(c.size()));
  return out;
}

std::string components_to_json(const ComponentSet& cs) {
  std::ostringstream out;
  out << "{\"max_size\":" << cs.max_size << ",\"components\":[";
  for (std::size_t c = 0; c < cs.components.size(); ++c) {
    if (c) out << ",";
    out << "[";
    for (std::size_t k = 0; k < cs.components[c].size(); ++k) {
      if (k) out << ",";
      out << cs.components[c][k];
    }
    out << "]";
  }
  out << "]}";
  return out.str();
}

}  // namespace upsel
