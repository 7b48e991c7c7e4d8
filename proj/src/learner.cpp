#include "mrsim/learner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mrsim/rng.hpp"

namespace mrsim {

void FeatureConfig::validate() const {
  if (num_frequencies <= 0) throw std::invalid_argument("num_frequencies must be > 0");
  if (length_scales.size() == 0 || length_scales.minCoeff() <= 0.0)
    throw std::invalid_argument("length_scales must be positive");
  if (lambda < 1e-6) throw std::invalid_argument("lambda must be >= 1e-6");
  if (outlier_threshold <= 0.0) throw std::invalid_argument("outlier_threshold must be > 0");
}

Eigen::MatrixXd make_features(const FeatureConfig& cfg) {
  cfg.validate();
  const int n = cfg.num_frequencies;
  const int d = cfg.input_dim();
  Rng rng(cfg.seed);
  Eigen::MatrixXd omega(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) omega(i, j) = rng.normal();
  for (int j = 0; j < d; ++j) omega.col(j) /= cfg.length_scales[j];
  return omega;
}

DisturbanceModel::DisturbanceModel(const FeatureConfig& cfg)
    : cfg_(cfg), omega_(make_features(cfg)) {
  const int m = 2 * cfg_.num_frequencies;
  factor_ = Eigen::MatrixXd::Zero(m, m);
  factor_.diagonal().setConstant(std::sqrt(cfg_.lambda));
  moments_ = Eigen::MatrixXd::Zero(m, 3);
  weights_ = Eigen::MatrixXd::Zero(m, 3);
}

Eigen::VectorXd DisturbanceModel::phi(const Eigen::VectorXd& xi) const {
  if (xi.size() != omega_.cols())
    throw std::invalid_argument("feature input has wrong dimension");
  const Eigen::VectorXd proj = omega_ * xi;
  Eigen::VectorXd f(2 * proj.size());
  f.head(proj.size()) = proj.array().cos();
  f.tail(proj.size()) = proj.array().sin();
  return f;
}

namespace {

// Rank-one Cholesky update: L L^T + w w^T -> L' L'^T, in place.
void chol_update(Eigen::MatrixXd& L, Eigen::VectorXd w) {
  const int n = static_cast<int>(L.rows());
  for (int k = 0; k < n; ++k) {
    const double r = std::hypot(L(k, k), w[k]);
    const double c = r / L(k, k);
    const double s = w[k] / L(k, k);
    L(k, k) = r;
    if (k + 1 < n) {
      L.col(k).tail(n - k - 1) = (L.col(k).tail(n - k - 1) + s * w.tail(n - k - 1)) / c;
      w.tail(n - k - 1) = c * w.tail(n - k - 1) - s * L.col(k).tail(n - k - 1);
    }
  }
}

}  // namespace

bool DisturbanceModel::update(const TrainingPair& pair) {
  if (!pair.xi.allFinite() || !pair.y.allFinite())
    throw std::invalid_argument("training pair must be finite");
  if (pair.xi.size() != omega_.cols())
    throw std::invalid_argument("training input has wrong dimension");
  if (pair.y.norm() > cfg_.outlier_threshold) {
    ++n_rejected_;
    return false;
  }
  const Eigen::VectorXd f = phi(pair.xi) / std::sqrt(double(cfg_.num_frequencies));
  chol_update(factor_, f);
  moments_ += f * pair.y.transpose();
  ++n_updates_;
  resolve_weights();
  return true;
}

void DisturbanceModel::resolve_weights() {
  weights_ = factor_.triangularView<Eigen::Lower>().solve(moments_);
  factor_.transpose().triangularView<Eigen::Upper>().solveInPlace(weights_);
}

Vec3 DisturbanceModel::predict(const Eigen::VectorXd& xi) const {
  if (n_updates_ == 0) {
    if (xi.size() != omega_.cols())
      throw std::invalid_argument("feature input has wrong dimension");
    return Vec3::Zero();
  }
  const Eigen::VectorXd f = phi(xi) / std::sqrt(double(cfg_.num_frequencies));
  return weights_.transpose() * f;
}

Eigen::MatrixXd DisturbanceModel::predict_jacobian(const Eigen::VectorXd& xi) const {
  const int n = cfg_.num_frequencies;
  if (xi.size() != omega_.cols())
    throw std::invalid_argument("feature input has wrong dimension");
  const Eigen::VectorXd proj = omega_ * xi;
  const Eigen::ArrayXd c = proj.array().cos();
  const Eigen::ArrayXd s = proj.array().sin();
  const double scale = 1.0 / std::sqrt(double(n));
  // d phi / d xi stacks [-diag(sin) Omega; diag(cos) Omega].
  Eigen::MatrixXd j(3, omega_.cols());
  j = scale * (weights_.bottomRows(n).transpose() * c.matrix().asDiagonal() -
               weights_.topRows(n).transpose() * s.matrix().asDiagonal()) *
      omega_;
  return j;
}

std::array<Eigen::MatrixXd, 3> DisturbanceModel::predict_hessian(
    const Eigen::VectorXd& xi) const {
  const int n = cfg_.num_frequencies;
  if (xi.size() != omega_.cols())
    throw std::invalid_argument("feature input has wrong dimension");
  const Eigen::VectorXd proj = omega_ * xi;
  const Eigen::ArrayXd c = proj.array().cos();
  const Eigen::ArrayXd s = proj.array().sin();
  const double scale = 1.0 / std::sqrt(double(n));
  std::array<Eigen::MatrixXd, 3> h;
  for (int k = 0; k < 3; ++k) {
    // Each feature's second derivative is -phi_i Omega_i Omega_i^T.
    const Eigen::ArrayXd q =
        -scale * (weights_.col(k).head(n).array() * c + weights_.col(k).tail(n).array() * s);
    h[k] = omega_.transpose() * q.matrix().asDiagonal() * omega_;
  }
  return h;
}

DisturbanceTriple DisturbanceModel::disturbance_triple(
    const Eigen::VectorXd& xi, const Eigen::VectorXd& xi_dot,
    const Eigen::VectorXd& xi_ddot) const {
  DisturbanceTriple out;
  out.f = predict(xi);
  if (n_updates_ == 0) return out;
  const Eigen::MatrixXd j = predict_jacobian(xi);
  const auto h = predict_hessian(xi);
  out.f_dot = j * xi_dot;
  const Vec3 jddot = j * xi_ddot;
  for (int k = 0; k < 3; ++k)
    out.f_ddot[k] = xi_dot.dot(h[k] * xi_dot) + jddot[k];
  return out;
}

double DisturbanceModel::condition_estimate() const {
  const auto diag = factor_.diagonal();
  const double lo = diag.minCoeff(), hi = diag.maxCoeff();
  return (hi / lo) * (hi / lo);
}

namespace {

void write_row(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
  os << name << ',' << m.rows() << ',' << m.cols();
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      os << ',' << buf;
    }
  os << "\r\n";
}

Eigen::MatrixXd read_row(std::istream& is, const std::string& want) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("model blob truncated");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  std::stringstream ss(line);
  std::string name, cell;
  std::getline(ss, name, ',');
  if (name != want) throw std::runtime_error("model blob: expected " + want);
  std::getline(ss, cell, ',');
  const long rows = std::stol(cell);
  std::getline(ss, cell, ',');
  const long cols = std::stol(cell);
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("model blob truncated");
      m(i, j) = std::stod(cell);
    }
  return m;
}

}  // namespace

void DisturbanceModel::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write model blob: " + path);
  os << "issgpr,1\r\n";
  os << "params," << cfg_.num_frequencies << ',' << cfg_.input_dim() << ',';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", cfg_.lambda);
  os << buf << ',' << cfg_.seed << ',';
  std::snprintf(buf, sizeof buf, "%.17g", cfg_.outlier_threshold);
  os << buf << ',' << n_updates_ << ',' << n_rejected_ << "\r\n";
  write_row(os, "length_scales", cfg_.length_scales);
  write_row(os, "omega", omega_);
  write_row(os, "factor", factor_);
  write_row(os, "moments", moments_);
  write_row(os, "weights", weights_);
}

DisturbanceModel DisturbanceModel::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read model blob: " + path);
  std::string line;
  std::getline(is, line);
  if (line.rfind("issgpr,1", 0) != 0) throw std::runtime_error("not a model blob: " + path);
  std::getline(is, line);
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  std::stringstream ss(line);
  std::string cell;
  std::getline(ss, cell, ',');
  if (cell != "params") throw std::runtime_error("model blob: expected params");
  FeatureConfig cfg;
  std::getline(ss, cell, ',');
  cfg.num_frequencies = std::stoi(cell);
  std::getline(ss, cell, ',');
  const int d = std::stoi(cell);
  std::getline(ss, cell, ',');
  cfg.lambda = std::stod(cell);
  std::getline(ss, cell, ',');
  cfg.seed = std::stoull(cell);
  std::getline(ss, cell, ',');
  cfg.outlier_threshold = std::stod(cell);
  std::getline(ss, cell, ',');
  const long n_upd = std::stol(cell);
  std::getline(ss, cell, ',');
  const long n_rej = std::stol(cell);
  cfg.length_scales = read_row(is, "length_scales").col(0);
  if (cfg.length_scales.size() != d)
    throw std::runtime_error("model blob: length_scales size mismatch");
  DisturbanceModel model(cfg);
  model.omega_ = read_row(is, "omega");
  model.factor_ = read_row(is, "factor");
  model.moments_ = read_row(is, "moments");
  model.weights_ = read_row(is, "weights");
  model.n_updates_ = n_upd;
  model.n_rejected_ = n_rej;
  return model;
}

Eigen::VectorXd make_input(const Vec3& p, const Vec3& v, double psi, FeatureSet set) {
  const bool yaw = set == FeatureSet::pos_vel_yaw;
  Eigen::VectorXd xi(yaw ? 8 : 6);
  xi.head<3>() = p;
  xi.segment<3>(3) = v;
  if (yaw) {
    xi[6] = std::sin(psi);
    xi[7] = std::cos(psi);
  }
  return xi;
}

TrainingPair build_pair(const LearnerSample& prev, const LearnerSample& cur,
                        double dt, FeatureSet set, const Vec3& g) {
  if (dt <= 0.0) throw std::invalid_argument("sample spacing must be positive");
  TrainingPair pair;
  pair.xi = make_input(cur.p, cur.v, cur.psi, set);
  pair.y = (cur.v - prev.v) / dt - (prev.u * prev.z + g);
  return pair;
}

}  // namespace mrsim
