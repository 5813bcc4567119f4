#pragma once

#include <Eigen/Dense>
#include <complex>

// Exact 4x4 Dirac algebra: matrices, half-wave projectors, propagator
// symbols and the operator norms used by the null-form diagnostics.
namespace spinorlab {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Spinor = Eigen::Vector4cd;

enum class Sign : int { plus = +1, minus = -1 };

inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct DiracMatrices {
  Mat4 alpha[3];
  Mat4 beta;
  Mat2 pauli[3];
};

// The fixed representation: beta = diag(I2,-I2), alpha^j = offdiag(sigma^j).
const DiracMatrices& dirac_matrices();

struct FrequencyPoint {
  Vec3 xi;
  double m = 0.0;  // mass, >= 0
};

// <xi>_m = sqrt(m^2+|xi|^2) for m>0, |xi| for m=0.
double bracket(const FrequencyPoint& p);

// Half-wave projector Pi_theta^m(xi) = (I + theta <xi>_m^{-1}(xi.alpha + m beta))/2.
// Throws std::domain_error for the degenerate point m=0, xi=0.
Mat4 projector(const FrequencyPoint& p, Sign theta);

// alpha.xi + m*beta.
Mat4 dirac_symbol(const FrequencyPoint& p);

// U_m(t,xi) = e^{-it<xi>} Pi_+ + e^{+it<xi>} Pi_- = exp(-it(alpha.xi + m beta)).
// The degenerate point m=0, xi=0 evolves trivially (identity).
Mat4 propagator_symbol(double t, const FrequencyPoint& p);

// Largest singular value.
double operator_norm(const Mat4& a);

// || beta Pi_theta - (Pi_{-theta} + theta m <xi>^{-1} beta) beta ||_op.
double beta_commutation_residual(const FrequencyPoint& p, Sign theta);

// Angle between nonzero vectors, in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

// ||Pi_{t1}(2^{k1} d1) beta Pi_{t2}(2^{k2} d2)||_op for unit directions d1, d2.
// Preconditions: |t1*d1 - t2*d2| <= 2^{-l}; for m>0 additionally k1,k2 >= 0
// and 1 <= l <= min(k1,k2)+10. Violations throw std::invalid_argument.
double null_pair_norm(int k1, int k2, const Vec3& d1, const Vec3& d2,
                      Sign theta1, Sign theta2, double m, int l);

// ||Pi_{t1}(xi) Pi_{t2}(eta)||_op.
double pipi_norm(const Vec3& xi, const Vec3& eta, Sign theta1, Sign theta2,
                 double m);

}  // namespace spinorlab
