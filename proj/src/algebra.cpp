#include "spinorlab/algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace spinorlab {

namespace {

DiracMatrices build_matrices() {
  const Complex i(0.0, 1.0);
  DiracMatrices d;
  d.pauli[0] << 0, 1, 1, 0;
  d.pauli[1] << 0, -i, i, 0;
  d.pauli[2] << 1, 0, 0, -1;
  d.beta.setZero();
  d.beta.block<2, 2>(0, 0) = Mat2::Identity();
  d.beta.block<2, 2>(2, 2) = -Mat2::Identity();
  for (int j = 0; j < 3; ++j) {
    d.alpha[j].setZero();
    d.alpha[j].block<2, 2>(0, 2) = d.pauli[j];
    d.alpha[j].block<2, 2>(2, 0) = d.pauli[j];
  }
  return d;
}

}  // namespace

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices d = build_matrices();
  return d;
}

double bracket(const FrequencyPoint& p) {
  if (p.m > 0.0) return std::sqrt(p.m * p.m + p.xi.squaredNorm());
  return p.xi.norm();
}

Mat4 dirac_symbol(const FrequencyPoint& p) {
  const DiracMatrices& d = dirac_matrices();
  Mat4 a = p.m * d.beta;
  for (int j = 0; j < 3; ++j) a += p.xi[j] * d.alpha[j];
  return a;
}

Mat4 projector(const FrequencyPoint& p, Sign theta) {
  const double b = bracket(p);
  if (b <= 0.0)
    throw std::domain_error("projector: degenerate frequency (m=0, xi=0)");
  return 0.5 * (Mat4::Identity() + (sign_value(theta) / b) * dirac_symbol(p));
}

Mat4 propagator_symbol(double t, const FrequencyPoint& p) {
  const double b = bracket(p);
  if (b <= 0.0) return Mat4::Identity();
  const Complex i(0.0, 1.0);
  return std::cos(t * b) * Mat4::Identity() -
         i * (std::sin(t * b) / b) * dirac_symbol(p);
}

double operator_norm(const Mat4& a) {
  Eigen::JacobiSVD<Mat4> svd(a);
  return svd.singularValues()(0);
}

double beta_commutation_residual(const FrequencyPoint& p, Sign theta) {
  const DiracMatrices& d = dirac_matrices();
  const double b = bracket(p);
  if (b <= 0.0)
    throw std::domain_error("beta_commutation_residual: degenerate frequency");
  Mat4 lhs = d.beta * projector(p, theta);
  Mat4 rhs = (projector(p, flip(theta)) + sign_value(theta) * (p.m / b) * d.beta) * d.beta;
  return operator_norm(lhs - rhs);
}

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("angle_between: zero vector");
  double c = a.dot(b) / (na * nb);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

double null_pair_norm(int k1, int k2, const Vec3& d1, const Vec3& d2,
                      Sign theta1, Sign theta2, double m, int l) {
  const double sep =
      (sign_value(theta1) * d1 - sign_value(theta2) * d2).norm();
  if (sep > std::ldexp(1.0, -l) * (1.0 + 1e-12))
    throw std::invalid_argument("null_pair_norm: |t1 d1 - t2 d2| > 2^{-l}");
  if (m > 0.0) {
    if (k1 < 0 || k2 < 0)
      throw std::invalid_argument("null_pair_norm: m>0 requires k1,k2 >= 0");
    if (l < 1 || l > std::min(k1, k2) + 10)
      throw std::invalid_argument("null_pair_norm: l out of range for m>0");
  }
  FrequencyPoint p1{std::ldexp(1.0, k1) * d1, m};
  FrequencyPoint p2{std::ldexp(1.0, k2) * d2, m};
  return operator_norm(projector(p1, theta1) * dirac_matrices().beta *
                       projector(p2, theta2));
}

double pipi_norm(const Vec3& xi, const Vec3& eta, Sign theta1, Sign theta2,
                 double m) {
  FrequencyPoint p1{xi, m};
  FrequencyPoint p2{eta, m};
  return operator_norm(projector(p1, theta1) * projector(p2, theta2));
}

}  // namespace spinorlab
