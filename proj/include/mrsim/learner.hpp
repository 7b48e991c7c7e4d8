#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mrsim/types.hpp"

namespace mrsim {

/// Configuration of the random-Fourier-feature disturbance model.
struct FeatureConfig {
  int num_frequencies = 50;              // N, random frequency rows
  Eigen::VectorXd length_scales;         // per-input-dimension, > 0
  double lambda = 1e-3;                  // ridge regularizer, >= 1e-6
  std::uint64_t seed = 1;
  double outlier_threshold = 30.0;       // m/s^2, ||y|| gate on training pairs

  int input_dim() const { return static_cast<int>(length_scales.size()); }
  void validate() const;
};

/// Draws the N x d frequency matrix: i.i.d. standard normals (row by row,
/// column within row) scaled per column by the inverse length scale.
Eigen::MatrixXd make_features(const FeatureConfig& cfg);

struct TrainingPair {
  Eigen::VectorXd xi;  // model input
  Vec3 y;              // m/s^2, observed acceleration residual
};

/// Online model of the acceleration disturbance f_e(xi) in R^3, fit by
/// regularized linear regression on sparse random Fourier features:
///   f_e(xi) = (1/sqrt(N)) W^T [cos(Omega xi); sin(Omega xi)].
/// Updates maintain a Cholesky factor of the regularized information matrix
/// through rank-one updates, so the weights after any number of updates equal
/// the batch ridge solution over all accepted pairs.
class DisturbanceModel {
 public:
  explicit DisturbanceModel(const FeatureConfig& cfg);

  /// Raw feature vector [cos(Omega xi); sin(Omega xi)] of size 2N (the
  /// 1/sqrt(N) factor is applied at prediction time).
  Eigen::VectorXd phi(const Eigen::VectorXd& xi) const;

  /// Incorporates one training pair. Returns false (and counts the pair as
  /// rejected) when ||y|| exceeds the outlier threshold; throws
  /// std::invalid_argument on non-finite or wrongly sized input.
  bool update(const TrainingPair& pair);

  /// Predicted disturbance; exactly zero before the first accepted update.
  Vec3 predict(const Eigen::VectorXd& xi) const;

  /// d f_e / d xi, 3 x d.
  Eigen::MatrixXd predict_jacobian(const Eigen::VectorXd& xi) const;

  /// Per-output-row Hessians d^2 f_e[k] / d xi^2, each d x d (symmetric).
  std::array<Eigen::MatrixXd, 3> predict_hessian(const Eigen::VectorXd& xi) const;

  /// f_e, f_e_dot = J xi_dot, f_e_ddot = xi_dot^T H xi_dot + J xi_ddot
  /// evaluated along a state path with the given input derivatives.
  DisturbanceTriple disturbance_triple(const Eigen::VectorXd& xi,
                                       const Eigen::VectorXd& xi_dot,
                                       const Eigen::VectorXd& xi_ddot) const;

  const Eigen::MatrixXd& frequencies() const { return omega_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const FeatureConfig& config() const { return cfg_; }
  long updates_accepted() const { return n_updates_; }
  long updates_rejected() const { return n_rejected_; }

  /// Lower bound on the information-matrix condition number, from the
  /// Cholesky diagonal; cheap enough to log every run.
  double condition_estimate() const;

  /// Round-trips the full model (config, frequencies, factor, moments,
  /// weights) through a flat CSV blob.
  void save(const std::string& path) const;
  static DisturbanceModel load(const std::string& path);

 private:
  FeatureConfig cfg_;
  Eigen::MatrixXd omega_;    // N x d
  Eigen::MatrixXd factor_;   // 2N x 2N lower-triangular L, L L^T = lambda I + sum phi_s phi_s^T
  Eigen::MatrixXd moments_;  // 2N x 3, sum phi_s y^T (phi_s = phi / sqrt(N))
  Eigen::MatrixXd weights_;  // 2N x 3 ridge solution
  long n_updates_ = 0;
  long n_rejected_ = 0;

  void resolve_weights();
};

/// One outer-rate feedback sample, as consumed by build_pair.
struct LearnerSample {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 z = Vec3(0.0, 0.0, 1.0);  // thrust axis (world)
  double u = 0.0;                // m/s^2, thrust believed applied
  double psi = 0.0;              // rad
};

enum class FeatureSet { pos_vel, pos_vel_yaw };

/// Model input built from a feedback sample: (p, v) optionally extended with
/// (sin psi, cos psi).
Eigen::VectorXd make_input(const Vec3& p, const Vec3& v, double psi, FeatureSet set);

/// Training pair from two consecutive samples dt apart:
///   xi = input(cur), y = (v_cur - v_prev) / dt - (u_prev z_prev + g).
TrainingPair build_pair(const LearnerSample& prev, const LearnerSample& cur,
                        double dt, FeatureSet set, const Vec3& g);

}  // namespace mrsim
