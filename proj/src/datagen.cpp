#include "upsel/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace upsel {

void SignalPrior::validate() const {
  if (half_width < 0.0) throw std::invalid_argument("SignalPrior: negative half_width");
  if (kind == PriorKind::point_mass) {
    if (center == 0.0) throw std::invalid_argument("SignalPrior: point mass at 0");
    return;
  }
  if (!(center - half_width > 0.0))
    throw std::invalid_argument("SignalPrior: support must stay away from 0");
}

double SignalPrior::draw(RngStream& rng) const {
  switch (kind) {
    case PriorKind::point_mass:
      return center;
    case PriorKind::uniform:
      return rng.uniform(center - half_width, center + half_width);
    case PriorKind::two_sided_mixture: {
      double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      return sign * rng.uniform(center - half_width, center + half_width);
    }
  }
  throw std::logic_error("SignalPrior: unknown kind");
}

Eigen::VectorXd draw_beta(int p, double eps, const SignalPrior& prior, RngStream& rng) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("draw_beta: eps outside [0,1]");
  prior.validate();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < p; ++j)
    if (rng.uniform() < eps) beta[j] = prior.draw(rng);
  return beta;
}

Eigen::MatrixXd draw_design_gaussian(int n, int p, const CholFactor& factor, RngStream& rng) {
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd zeta(p);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) zeta[j] = rng.normal();
    x.row(i) = scale * factor.apply(zeta).transpose();
  }
  return x;
}

Eigen::MatrixXd draw_design_uniform(int n, int p, const Eigen::MatrixXd& sym_sqrt,
                                    RngStream& rng) {
  if (sym_sqrt.rows() != p || sym_sqrt.cols() != p)
    throw std::invalid_argument("draw_design_uniform: square-root size mismatch");
  const double bound = 1.7320508075688772;  // sqrt(3), unit variance
  Eigen::MatrixXd m(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = rng.uniform(-bound, bound);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  return scale * (m * sym_sqrt);
}

Eigen::VectorXd draw_response(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                              RngStream* rng) {
  if (x.cols() != beta.size()) throw std::invalid_argument("draw_response: dimension mismatch");
  Eigen::VectorXd y = x * beta;
  if (rng)
    for (int i = 0; i < y.size(); ++i) y[i] += rng->normal();
  return y;
}

Eigen::VectorXd draw_stein(const CorrMatrix& omega, const CholFactor& factor,
                           const Eigen::VectorXd& beta, RngStream* rng) {
  if (omega.p() != beta.size()) throw std::invalid_argument("draw_stein: dimension mismatch");
  Eigen::VectorXd ytilde = omega.multiply(beta);
  if (rng) {
    Eigen::VectorXd zeta(beta.size());
    for (int j = 0; j < zeta.size(); ++j) zeta[j] = rng->normal();
    ytilde += factor.apply(zeta);
  }
  return ytilde;
}

namespace {

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[40];
  for (int i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v[i]);
    out << buf;
  }
}

Eigen::VectorXd read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) vals.push_back(std::stod(line));
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[40];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, j + 1 < m.cols() ? "%.17g," : "%.17g\n", m(i, j));
      out << buf;
    }
  }
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::runtime_error("ragged matrix in " + path);
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

const char* kind_name(DatasetKind k) {
  switch (k) {
    case DatasetKind::stein:
      return "stein";
    case DatasetKind::random_design_gaussian:
      return "random_design_gaussian";
    case DatasetKind::random_design_uniform:
      return "random_design_uniform";
  }
  return "?";
}

DatasetKind kind_from(const std::string& s) {
  if (s == "stein") return DatasetKind::stein;
  if (s == "random_design_gaussian") return DatasetKind::random_design_gaussian;
  if (s == "random_design_uniform") return DatasetKind::random_design_uniform;
  throw std::runtime_error("unknown dataset kind: " + s);
}

}  // namespace

void save_dataset(const std::string& dir, const Dataset& ds) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_vector(dir + "/beta.csv", ds.beta);
  write_vector(dir + "/y.csv", ds.y);
  if (ds.kind != DatasetKind::stein) write_matrix(dir + "/x.csv", ds.x);
  if (ds.omega) {
    std::ofstream om(dir + "/omega.csv");
    ds.omega->save_triplets(om);
  }
  nlohmann::json meta;
  meta["kind"] = kind_name(ds.kind);
  meta["seed"] = ds.seed;
  meta["p"] = ds.p();
  meta["n"] = ds.kind == DatasetKind::stein ? 0 : ds.n();
  meta["two_sided"] = ds.two_sided;
  std::ofstream mf(dir + "/meta.json");
  if (!mf) throw std::runtime_error("cannot write " + dir + "/meta.json");
  mf << meta.dump(2) << "\n";
}

Dataset load_dataset(const std::string& dir) {
  std::ifstream mf(dir + "/meta.json");
  if (!mf) throw std::runtime_error("cannot read " + dir + "/meta.json");
  nlohmann::json meta = nlohmann::json::parse(mf);
  Dataset ds;
  ds.kind = kind_from(meta.at("kind").get<std::string>());
  ds.seed = meta.at("seed").get<std::uint64_t>();
  ds.two_sided = meta.value("two_sided", false);
  int p = meta.at("p").get<int>();
  ds.beta = read_vector(dir + "/beta.csv");
  ds.y = read_vector(dir + "/y.csv");
  if (ds.beta.size() != p) throw std::runtime_error("beta.csv length disagrees with meta.json");
  if (ds.kind != DatasetKind::stein) ds.x = read_matrix(dir + "/x.csv");
  std::ifstream om(dir + "/omega.csv");
  if (om) ds.omega = std::make_shared<CorrMatrix>(CorrMatrix::load_triplets(om, p));
  return ds;
}

}  // namespace upsel
