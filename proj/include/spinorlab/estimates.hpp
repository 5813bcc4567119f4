#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "spinorlab/algebra.hpp"
#include "spinorlab/grid.hpp"

// Monte Carlo measurement of the linear and bilinear space-time estimates as
// scaling laws in the dyadic parameters, with least-squares exponent fits.
namespace spinorlab {

struct SweepPoint {
  int k = 0, k1 = 0, k2 = 0, l = 0;
  int theta1 = 0, theta2 = 0;  // +1/-1, or 0 when not applicable
  double m = 0.0, p = 0.0, q = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // measured / bound
};

struct ExponentFit {
  std::vector<std::pair<double, double>> points;  // (log2 x, log2 y)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms in log2 space
};

// Least-squares line through (log2 x, log2 y); inputs are linear values,
// all positive, at least 3 points.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& pts);

// Extra frequency localization for trial data: multiply by the cube bump
// gamma_{kprime,q}.
struct CubeWindow {
  int kprime = 0;
  std::array<int, 3> q{0, 0, 0};
};

// L^2-normalized random data: i.i.d. complex Gaussian Fourier coefficients on
// supp phi_k, weighted by phi_k, optionally projected onto range Pi_theta and
// localized to a cube window, optionally hard-capped at |xi| <= radial_cap.
// Deterministic in seed. Returns the zero field when the support is empty.
SpinorField random_annulus_spinor(const BoxGrid& grid, int k,
                                  std::optional<Sign> theta, double m,
                                  std::uint64_t seed,
                                  const std::optional<CubeWindow>& cube = {},
                                  double radial_cap = 0.0);

// max over trials of ||e^{-it<D>_m} f||_{L^p_t L^q_x} on [0,1] against
// <2^k>_m^{5/4(1/2-1/q)}. Requires 2/p + 3/q = 3/2, (p,q) != (2,inf).
SweepPoint strichartz_ratio(const BoxGrid& grid, int k, double p, double q,
                            double m, int trials, std::uint64_t seed,
                            int slices = 64);

// (sum_n ||Gamma_{kprime,n} e^{-it<D>_m} f||^2_{L^p_t L^q_x})^{1/2} on [0,1]
// for the given data (cubes restricted to those meeting supp phi_k).
double localized_strichartz_norm(const SpinorField& f, int k, int kprime,
                                 double p, double m, int slices = 64);

// max over trials of (sum_n ||Gamma_{kprime,n} e^{-it<D>_m} f||^2)^{1/2}
// in L^p_t L^q_x with 1/p + 1/q = 1/2, 2 < p < inf, against 2^{k/p} 2^{kprime/p}.
SweepPoint localized_strichartz_ratio(const BoxGrid& grid, int k, int kprime,
                                      double p, double m, int trials,
                                      std::uint64_t seed, int slices = 64);

// max over trials of ||P_k <psi1, beta psi2>||_{L^2_{t,x}} on [0,1], where
// psi_i are free evolutions of random annulus data at scales k1, k2 with signs
// theta1, theta2. Trials alternate between full-shell data and aligned
// cube-pair data (the near-extremal family for the product localization).
// Bound per regime: opposite sign 2^k; same sign 2^{3k/2 - k1/2}; massive
// low-frequency endpoint (m>0, min(k1,k2)=0) 2^{k/2}.
// Requires k <= k1 - 3 and |k1 - k2| <= 1.
SweepPoint bilinear_ratio(const BoxGrid& grid, int k, int k1, int k2,
                          Sign theta1, Sign theta2, double m, int trials,
                          std::uint64_t seed, int slices = 64,
                          double radial_cap = 0.0);

}  // namespace spinorlab
