#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinorlab/algebra.hpp"
#include "spinorlab/potential.hpp"

// Supercritical witness: annulus data on W_lam = {lam <= |x| <= 2 lam},
// closed-form propagator kernel entries, the triple-convolution volume bound
// and the lam-exponent fit for the third Picard iterate.
namespace spinorlab {

struct AnnulusSpec {
  double lam = 8.0;   // frequency scale (not the nonlinear coupling)
  double eps = 0.05;  // time parameter, t = eps / lam
  Vec3 xi = Vec3::Zero();  // target frequency, must lie in W_lam
};

struct KernelEntries {
  Complex direct;      // [U_m(tau, xi) beta U_m(t, eta)]_{11}
  Complex transposed;  // [U_m(tau, xi)^T beta U_m(t, eta)]_{11}
};

// Closed-form trig evaluation of both (1,1) kernel entries.
KernelEntries kernel_entry_check(double tau, const Vec3& xi, double t,
                                 const Vec3& eta, double m);

// Throws std::invalid_argument unless |xi|, |eta| are in [lam, 2 lam] and
// |tau|, |t| <= eps / lam.
void validate_annulus(const AnnulusSpec& spec, double tau, const Vec3& xi,
                      double t, const Vec3& eta);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// int int V^(eta) chi_W(eta - sigma) chi_W(sigma) chi_W(xi - eta) dsigma deta
// by importance sampling sigma in W_lam and xi - eta in W_lam. Returns 0 when
// the support is empty.
MonteCarloEstimate triple_convolution(double lam, const Vec3& xi,
                                      const PotentialSpec& spec, int samples,
                                      std::uint64_t seed);

// |[N(t, xi)]_1| at t = eps / lam, xi = 1.5 lam e1: outer (sigma, eta)
// sampling as in triple_convolution, inner tau-quadrature of
// Re([U(tau, eta-sigma)^T beta U(-tau, sigma)]_11 [U(t-tau, xi) beta U(tau, xi-eta)]_11).
MonteCarloEstimate third_iterate_lower(double lam, double eps,
                                       const PotentialSpec& spec, double m,
                                       int samples, std::uint64_t seed,
                                       int tau_points = 32);

struct WitnessReport {
  std::vector<double> lams;
  double eps = 0.05;
  double m = 0.0;
  std::vector<double> n_abs;          // |N| estimate per lam
  std::vector<double> n_se;           // its standard error
  std::vector<double> kernel_min_re;  // min sampled Re kernel entry per lam
  double fitted_exponent = 0.0;       // slope of |N| vs lam (log2-log2)
};

WitnessReport run_witness(const std::vector<double>& lams, double eps,
                          const PotentialSpec& spec, double m, int samples,
                          std::uint64_t seed);

// Fits the H^s proxy lam^s |N| lam^{3/2} against lam and compares the implied
// eps-constraint exponent with 2s. Returns "trilinear bound fails as
// lambda -> infinity", "no failure detected", or "inconclusive" (s >= 0).
std::string supercritical_verdict(const WitnessReport& rep, double s);

}  // namespace spinorlab
