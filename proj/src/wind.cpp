#include "mrsim/wind.hpp"

#include <cmath>
#include <stdexcept>

namespace mrsim {

double Rng::normal() {
  // 1 - uniform() keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace {

Vec3 gaussian_bump(const WindField& w, const Vec3& p) {
  const Vec3 d = (p - w.center).cwiseQuotient(w.width);
  return w.peak * std::exp(-0.5 * d.squaredNorm());
}

}  // namespace

Vec3 eval_wind(const WindField& w, const Vec3& p, const Vec3& v, double psi) {
  Vec3 f = Vec3::Zero();
  switch (w.type) {
    case WindField::Type::none:
      return Vec3::Zero();
    case WindField::Type::uniform_gust:
      f = w.peak;
      break;
    case WindField::Type::position_jet:
      f = gaussian_bump(w, p);
      break;
    case WindField::Type::yaw_plate:
      // Plate exposure scales the jet by heading: full effect facing psi0,
      // none facing the opposite way.
      f = gaussian_bump(w, p) * (0.5 * (1.0 + std::cos(psi - w.psi0)));
      break;
  }
  f += w.offset - w.drag * v;
  const double n = f.norm();
  if (n > w.f_max) f *= w.f_max / n;
  return f;
}

TurbulenceNoise::TurbulenceNoise(double sigma, double omega_n, std::uint64_t seed)
    : sigma_(sigma), omega_n_(omega_n), rng_(seed) {
  if (sigma < 0.0 || omega_n <= 0.0)
    throw std::invalid_argument("turbulence parameters must be positive");
}

Vec3 TurbulenceNoise::step(double dt) {
  // Exact discretization of dx = -omega_n x dt + sqrt(2 omega_n) sigma dW.
  const double a = std::exp(-omega_n_ * dt);
  const double s = sigma_ * std::sqrt(1.0 - a * a);
  for (int i = 0; i < 3; ++i) value_[i] = a * value_[i] + s * rng_.normal();
  return value_;
}

}  // namespace mrsim
