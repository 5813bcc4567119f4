#pragma once

#include <array>
#include <vector>

#include "spinorlab/grid.hpp"

// Convolution potentials with Fourier symbol V^(xi): Yukawa (gamma = 0),
// Coulomb (gamma = 2), an interpolating family for 0 < gamma < 2, and a
// constant debug kind.
namespace spinorlab {

enum class PotentialKind { yukawa, coulomb, interp, constant };
enum class ZeroModePolicy { zero, error };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::yukawa;
  double gamma = 0.0;  // yukawa: 0, coulomb: 2, interp: (0,2)
  double mu0 = 1.0;    // yukawa screening mass
  ZeroModePolicy zero_mode = ZeroModePolicy::zero;
};

// Validates the (kind, gamma, mu0) combination.
PotentialSpec make_potential(PotentialKind kind, double gamma = 0.0,
                             double mu0 = 1.0,
                             ZeroModePolicy policy = ZeroModePolicy::zero);

// V^ at radius r = |xi|. Throws for r = 0 with coulomb/interp under the
// error policy; returns the policy value 0 otherwise.
double vhat(const PotentialSpec& spec, double r);
double vhat(const PotentialSpec& spec, const Vec3& xi);

struct GrowthReport {
  // max over the radial sample of |d^j V^| * r^{gamma+j} (|xi| <= 1) and
  // |d^j V^| * r^{2+j} (|xi| > 1), j = 0..kmax.
  std::vector<double> low_ratio;
  std::vector<double> high_ratio;
};

// Central finite differences with step 1e-4 * r over a log-spaced radial
// sample 2^-10 .. 2^10.
GrowthReport growth_check(const PotentialSpec& spec, int kmax = 4);

// <psi, beta psi>_{C^4} = |psi1|^2 + |psi2|^2 - |psi3|^2 - |psi4|^2,
// pointwise; physical representation required.
std::vector<double> hartree_density(const SpinorField& psi);

// V * density via the Fourier symbol; zero mode handled per policy.
std::vector<double> hartree_potential_of_density(const std::vector<double>& density,
                                                 const BoxGrid& grid,
                                                 const PotentialSpec& spec);
std::vector<double> hartree_potential(const SpinorField& psi,
                                      const PotentialSpec& spec);

}  // namespace spinorlab
