#pragma once

#include <array>
#include <vector>

#include "spinorlab/grid.hpp"

// The three frequency decompositions as Fourier multipliers: dyadic annuli
// P_k, angular sectors K_l^nu and lattice cubes Gamma_{k',n}.
namespace spinorlab {

// Smooth even cutoff, exactly 1 on [-1,1], 0 outside (-2,2), built from the
// exp(-1/x) transition.
double mollifier_rho(double s);

// Smooth bump supported in [-2/3, 2/3] with sum_n eta(u - n) = 1.
double eta_bump(double u);

// phi_k(xi) = rho(2^-k |xi|) - rho(2^{-k+1} |xi|), supported in the annulus
// 2^{k-1} <= |xi| <= 2^{k+1}.
double dyadic_phi(int k, double r);
// phi_{<=k}; equals 1 at xi = 0.
double dyadic_phi_le(int k, double r);
// tilde(phi)_k = phi_{k-1} + phi_k + phi_{k+1}.
double dyadic_phi_tilde(int k, double r);
// Mass-dependent low-frequency convention: for m>0, k<0 -> 0, k=0 -> phi_{<=0},
// k>0 -> phi_k; for m=0 plain phi_k.
double mass_dyadic_phi(int k, double m, double r);

// Deterministic cap centers on S^2 with pairwise separation ~2^-l and
// covering radius < 2^-l (subdivided icosahedron, l rounds).
struct CapSet {
  int l = 0;
  std::vector<Vec3> dirs;
};
const CapSet& cap_set(int l);

// kappa_l^nu(xi): smooth degree-0 partition of unity subordinate to the cones
// of aperture ~2^-l; normalized over the cap set so sum_nu kappa = 1.
double angular_kappa(int l, int nu, const Vec3& xi);
double angular_kappa_tilde(int l, int nu, const Vec3& xi);

// gamma_{k',q}(xi) for the cube of side 2^{k'} at lattice point 2^{k'} q.
double cube_gamma(int kprime, const std::array<int, 3>& q, const Vec3& xi);
double cube_gamma_tilde(int kprime, const std::array<int, 3>& q, const Vec3& xi);
// Lattice cubes whose bump can be nonzero somewhere in the grid band.
std::vector<std::array<int, 3>> cubes_in_band(int kprime, const BoxGrid& grid);

struct MultiplierSpec {
  enum class Kind { dyadic, cumulative, tilde_dyadic, mass_dyadic, angular, cube };
  Kind kind = Kind::dyadic;
  int k = 0;                       // dyadic exponent (cube: k')
  double m = 0.0;                  // mass, mass_dyadic only
  int l = 0;                       // angular resolution
  int nu = 0;                      // cap index into cap_set(l)
  std::array<int, 3> cube_q{0, 0, 0};
};

// Symbol value at a frequency; validates spec parameters.
double multiplier_symbol(const MultiplierSpec& spec, const Vec3& xi);

// Pointwise Fourier multiplication; output keeps the input representation.
// Throws when a radial spec's support sticks out of the grid band.
SpinorField apply_multiplier(const MultiplierSpec& spec, const SpinorField& f);

}  // namespace spinorlab
