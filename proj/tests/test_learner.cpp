#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mrsim/learner.hpp"
#include "mrsim/rng.hpp"

using namespace mrsim;

namespace {

FeatureConfig small_config(int d = 4, int n = 20, std::uint64_t seed = 5) {
  FeatureConfig cfg;
  cfg.num_frequencies = n;
  cfg.length_scales = Eigen::VectorXd::Constant(d, 1.0);
  cfg.lambda = 1e-3;
  cfg.seed = seed;
  cfg.outlier_threshold = 30.0;
  return cfg;
}

Eigen::VectorXd random_input(Rng& rng, int d, double scale = 1.5) {
  Eigen::VectorXd xi(d);
  for (int i = 0; i < d; ++i) xi[i] = scale * rng.normal();
  return xi;
}

// Independent oracle: dense normal-equations ridge solve over all pairs.
Eigen::MatrixXd batch_ridge(const DisturbanceModel& model,
                            const std::vector<TrainingPair>& pairs) {
  const int m = 2 * model.config().num_frequencies;
  const double root_n = std::sqrt(static_cast<double>(model.config().num_frequencies));
  Eigen::MatrixXd a = model.config().lambda * Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, 3);
  for (const TrainingPair& pr : pairs) {
    const Eigen::VectorXd ph = model.phi(pr.xi) / root_n;
    a += ph * ph.transpose();
    b += ph * pr.y.transpose();
  }
  return a.ldlt().solve(b);
}

}  // namespace

TEST_CASE("feature vector has constant energy and cos/sin parity") {
  const FeatureConfig cfg = small_config(6, 40);
  const DisturbanceModel model(cfg);
  Rng rng(1);
  const int n = cfg.num_frequencies;
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd xi = random_input(rng, 6);
    const Eigen::VectorXd ph = model.phi(xi);
    REQUIRE(ph.size() == 2 * n);
    CHECK(ph.squaredNorm() == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    const Eigen::VectorXd pm = model.phi(-xi);
    CHECK((pm.head(n) - ph.head(n)).norm() < 1e-12);   // cos block even
    CHECK((pm.tail(n) + ph.tail(n)).norm() < 1e-12);   // sin block odd
  }
  const Eigen::VectorXd at_zero = model.phi(Eigen::VectorXd::Zero(6));
  CHECK((at_zero.head(n) - Eigen::VectorXd::Ones(n)).norm() == 0.0);
  CHECK(at_zero.tail(n).norm() == 0.0);
}

TEST_CASE("frequency draw is seed-deterministic and length-scale weighted") {
  FeatureConfig cfg = small_config(3, 30, 123);
  cfg.length_scales << 1.0, 2.0, 4.0;
  const Eigen::MatrixXd w1 = make_features(cfg);
  const Eigen::MatrixXd w2 = make_features(cfg);
  CHECK((w1 - w2).norm() == 0.0);
  cfg.seed = 124;
  CHECK((make_features(cfg) - w1).norm() > 0.0);

  // Doubling one length scale halves that column of the draw.
  FeatureConfig wide = cfg;
  wide.seed = 123;
  FeatureConfig wider = wide;
  wider.length_scales = wide.length_scales;
  wider.length_scales[2] *= 2.0;
  const Eigen::MatrixXd a = make_features(wide);
  const Eigen::MatrixXd b = make_features(wider);
  CHECK((a.col(2) - 2.0 * b.col(2)).norm() < 1e-14);
  CHECK((a.col(0) - b.col(0)).norm() == 0.0);
}

TEST_CASE("incremental updates reproduce the batch ridge solution") {
  const FeatureConfig cfg = small_config(4, 25, 9);
  DisturbanceModel model(cfg);
  Rng rng(2);
  std::vector<TrainingPair> pairs;
  int checked = 0;
  for (int k = 1; k <= 200; ++k) {
    TrainingPair pr;
    pr.xi = random_input(rng, 4);
    pr.y = Vec3(rng.normal(), rng.normal(), rng.normal()) * 3.0;
    REQUIRE(model.update(pr));
    pairs.push_back(pr);
    if (k == 1 || k == 10 || k == 200) {
      const Eigen::MatrixXd expect = batch_ridge(model, pairs);
      const double rel = (model.weights() - expect).norm() / expect.norm();
      CHECK(rel < 1e-8);
      ++checked;
    }
  }
  CHECK(checked == 3);
  CHECK(model.updates_accepted() == 200);
  CHECK(model.condition_estimate() >= 1.0);
}

TEST_CASE("repeated identical pairs match a batch with duplicates") {
  const FeatureConfig cfg = small_config(3, 15, 4);
  DisturbanceModel model(cfg);
  TrainingPair pr;
  pr.xi = Eigen::Vector3d(0.5, -1.0, 0.25);
  pr.y = Vec3(1.0, -2.0, 0.5);
  std::vector<TrainingPair> pairs;
  for (int i = 0; i < 7; ++i) {
    model.update(pr);
    pairs.push_back(pr);
  }
  const Eigen::MatrixXd expect = batch_ridge(model, pairs);
  CHECK((model.weights() - expect).norm() / expect.norm() < 1e-10);
}

TEST_CASE("prediction is zero before training and fits a constant field") {
  // Length scales wide enough that the sampled region is well inside one
  // kernel width, where the random sinusoidal basis can represent a constant.
  FeatureConfig cfg = small_config(6, 60, 21);
  cfg.length_scales.setConstant(4.0);
  DisturbanceModel model(cfg);
  Rng rng(3);
  CHECK(model.predict(random_input(rng, 6)).norm() == 0.0);

  const Vec3 c(2.0, -1.0, 0.5);
  for (int i = 0; i < 500; ++i) {
    TrainingPair pr;
    pr.xi = random_input(rng, 6, 0.8);
    pr.y = c;
    model.update(pr);
  }
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd xi = random_input(rng, 6, 0.5);
    worst = std::max(worst, (model.predict(xi) - c).norm());
  }
  CHECK(worst < 0.05);
}

TEST_CASE("analytic jacobian matches finite differences") {
  const FeatureConfig cfg = small_config(5, 30, 31);
  DisturbanceModel model(cfg);
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    TrainingPair pr;
    pr.xi = random_input(rng, 5);
    pr.y = Vec3(std::sin(pr.xi[0]), pr.xi[1], std::cos(pr.xi[2]));
    model.update(pr);
  }
  const double eps = 1e-5;
  for (int draw = 0; draw < 100; ++draw) {
    const Eigen::VectorXd xi = random_input(rng, 5);
    const Eigen::MatrixXd jac = model.predict_jacobian(xi);
    const double scale = std::max(1.0, jac.norm());
    for (int j = 0; j < 5; ++j) {
      Eigen::VectorXd xp = xi, xm = xi;
      xp[j] += eps;
      xm[j] -= eps;
      const Vec3 fd = (model.predict(xp) - model.predict(xm)) / (2 * eps);
      CHECK((fd - jac.col(j)).norm() < 1e-6 * scale);
    }
  }
}

TEST_CASE("hessians are symmetric and match finite differences") {
  const FeatureConfig cfg = small_config(4, 25, 41);
  DisturbanceModel model(cfg);
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    TrainingPair pr;
    pr.xi = random_input(rng, 4);
    pr.y = Vec3(pr.xi[0] * pr.xi[1], std::sin(pr.xi[2]), 1.0);
    model.update(pr);
  }
  const double eps = 1e-4;
  for (int draw = 0; draw < 100; ++draw) {
    const Eigen::VectorXd xi = random_input(rng, 4);
    const auto hs = model.predict_hessian(xi);
    for (int k = 0; k < 3; ++k) {
      CHECK((hs[k] - hs[k].transpose()).norm() < 1e-12);
    }
    if (draw < 10) {
      // Spot-check the values against second differences of predict().
      for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) {
          Eigen::VectorXd pp = xi, pm = xi, mp = xi, mm = xi;
          pp[a] += eps; pp[b] += eps;
          pm[a] += eps; pm[b] -= eps;
          mp[a] -= eps; mp[b] += eps;
          mm[a] -= eps; mm[b] -= eps;
          const Vec3 fd = (model.predict(pp) - model.predict(pm) -
                           model.predict(mp) + model.predict(mm)) /
                          (4 * eps * eps);
          for (int k = 0; k < 3; ++k)
            CHECK(hs[k](a, b) == doctest::Approx(fd[k]).epsilon(1e-4).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("path derivatives follow the chain rule") {
  const FeatureConfig cfg = small_config(4, 30, 51);
  DisturbanceModel model(cfg);
  Rng rng(6);
  for (int i = 0; i < 60; ++i) {
    TrainingPair pr;
    pr.xi = random_input(rng, 4);
    pr.y = Vec3(std::sin(pr.xi[0] + pr.xi[3]), pr.xi[1] * pr.xi[2], std::cos(pr.xi[1]));
    model.update(pr);
  }
  // Path xi(t) with analytic first/second derivatives.
  auto path = [](double t) {
    Eigen::VectorXd xi(4);
    xi << std::sin(t), 0.5 * t, std::cos(2 * t), t * t * 0.1;
    return xi;
  };
  auto path_dot = [](double t) {
    Eigen::VectorXd d(4);
    d << std::cos(t), 0.5, -2 * std::sin(2 * t), 0.2 * t;
    return d;
  };
  auto path_ddot = [](double t) {
    Eigen::VectorXd d(4);
    d << -std::sin(t), 0.0, -4 * std::cos(2 * t), 0.2;
    return d;
  };
  const double h = 1e-5;
  for (double t : {0.3, 1.1, 2.4}) {
    const DisturbanceTriple tr =
        model.disturbance_triple(path(t), path_dot(t), path_ddot(t));
    const Vec3 f0 = model.predict(path(t));
    CHECK((tr.f - f0).norm() == 0.0);
    const Vec3 fd1 = (model.predict(path(t + h)) - model.predict(path(t - h))) / (2 * h);
    CHECK((tr.f_dot - fd1).norm() < 1e-6 * std::max(1.0, fd1.norm()));
    const Vec3 fd2 =
        (model.predict(path(t + h)) - 2 * f0 + model.predict(path(t - h))) / (h * h);
    CHECK((tr.f_ddot - fd2).norm() < 1e-4 * std::max(1.0, fd2.norm()));
  }
}

TEST_CASE("outlier gate rejects large residuals without touching the fit") {
  const FeatureConfig cfg = small_config(3, 15, 61);
  DisturbanceModel model(cfg);
  TrainingPair ok;
  ok.xi = Eigen::Vector3d(0.1, 0.2, 0.3);
  ok.y = Vec3(1, 1, 1);
  REQUIRE(model.update(ok));
  const Eigen::MatrixXd w_before = model.weights();
  TrainingPair wild = ok;
  wild.y = Vec3(100, 0, 0);
  CHECK_FALSE(model.update(wild));
  CHECK(model.updates_rejected() == 1);
  CHECK(model.updates_accepted() == 1);
  CHECK((model.weights() - w_before).norm() == 0.0);

  TrainingPair bad = ok;
  bad.y.x() = std::nan("");
  CHECK_THROWS_AS(model.update(bad), std::invalid_argument);
  TrainingPair wrong = ok;
  wrong.xi = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(model.update(wrong), std::invalid_argument);
}

TEST_CASE("same seed and data give bitwise-identical models") {
  const FeatureConfig cfg = small_config(4, 20, 77);
  DisturbanceModel a(cfg), b(cfg);
  CHECK((a.frequencies() - b.frequencies()).norm() == 0.0);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    TrainingPair pr;
    pr.xi = random_input(rng, 4);
    pr.y = Vec3(rng.normal(), rng.normal(), rng.normal());
    a.update(pr);
    b.update(pr);
  }
  CHECK((a.weights() - b.weights()).norm() == 0.0);
  Rng probe(9);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd xi = random_input(probe, 4);
    const Vec3 pa = a.predict(xi), pb = b.predict(xi);
    CHECK(std::memcmp(pa.data(), pb.data(), sizeof(double) * 3) == 0);
  }
}

TEST_CASE("save/load round-trips the model exactly") {
  const std::string path = std::string(MRSIM_TEST_TMPDIR) + "/model_roundtrip.csv";
  const FeatureConfig cfg = small_config(4, 18, 91);
  DisturbanceModel a(cfg);
  Rng rng(10);
  for (int i = 0; i < 30; ++i) {
    TrainingPair pr;
    pr.xi = random_input(rng, 4);
    pr.y = Vec3(rng.normal(), 2.0, -(rng.normal()));
    a.update(pr);
  }
  a.save(path);
  const DisturbanceModel b = DisturbanceModel::load(path);
  CHECK(b.updates_accepted() == a.updates_accepted());
  CHECK((a.frequencies() - b.frequencies()).norm() == 0.0);
  CHECK((a.weights() - b.weights()).norm() == 0.0);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd xi = random_input(rng, 4);
    CHECK((a.predict(xi) - b.predict(xi)).norm() == 0.0);
    CHECK((a.predict_jacobian(xi) - b.predict_jacobian(xi)).norm() == 0.0);
  }
  // Updates continue seamlessly after a reload.
  DisturbanceModel c = DisturbanceModel::load(path);
  TrainingPair pr;
  pr.xi = random_input(rng, 4);
  pr.y = Vec3(0.5, 0.5, 0.5);
  a.update(pr);
  c.update(pr);
  CHECK((a.weights() - c.weights()).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("training pair assembly matches the residual definition") {
  LearnerSample prev;
  prev.p = Vec3(1, 2, 3);
  prev.v = Vec3(0.5, 0, 0);
  prev.z = Vec3(0, 0, 1);
  prev.u = 11.0;
  prev.psi = 0.4;
  LearnerSample cur = prev;
  cur.v = Vec3(0.6, 0.05, -0.02);
  cur.p = Vec3(1.005, 2.0, 3.0);
  cur.psi = 0.5;
  const Vec3 g(0, 0, -9.81);
  const double dt = 0.01;

  const TrainingPair pv = build_pair(prev, cur, dt, FeatureSet::pos_vel, g);
  REQUIRE(pv.xi.size() == 6);
  CHECK((pv.xi.head<3>() - cur.p).norm() == 0.0);
  CHECK((pv.xi.tail<3>() - cur.v).norm() == 0.0);
  const Vec3 expect_y = (cur.v - prev.v) / dt - (prev.u * prev.z + g);
  CHECK((pv.y - expect_y).norm() < 1e-14);

  const TrainingPair py = build_pair(prev, cur, dt, FeatureSet::pos_vel_yaw, g);
  REQUIRE(py.xi.size() == 8);
  CHECK(py.xi[6] == doctest::Approx(std::sin(cur.psi)));
  CHECK(py.xi[7] == doctest::Approx(std::cos(cur.psi)));
  CHECK((py.y - expect_y).norm() < 1e-14);

  const Eigen::VectorXd in = make_input(cur.p, cur.v, cur.psi, FeatureSet::pos_vel_yaw);
  CHECK((in - py.xi).norm() == 0.0);
}

TEST_CASE("configuration validation rejects degenerate settings") {
  FeatureConfig cfg = small_config();
  cfg.num_frequencies = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.length_scales[1] = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.outlier_threshold = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
