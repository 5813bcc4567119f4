#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "spinorlab/algebra.hpp"

// Periodic-box discretization of R^3 with a unitary Fourier transform:
// the physical L^2 norm (Riemann sum) equals the Fourier l^2 norm of the
// coefficient array.
namespace spinorlab {

enum class Representation { physical, fourier };

struct BoxGrid {
  int n = 0;          // points per axis, power of two >= 8
  double length = 0;  // box side L

  std::size_t size() const { return std::size_t(n) * n * n; }
  double spacing() const { return 2.0 * M_PI / length; }     // dual lattice step
  double band_limit() const { return M_PI * n / length; }    // max axis frequency
  double cell_volume() const {
    const double h = length / n;
    return h * h * h;
  }
  // Signed integer mode for array index i along one axis.
  int mode(int i) const { return i < n / 2 ? i : i - n; }
  Vec3 frequency(int ix, int iy, int iz) const {
    return spacing() * Vec3(mode(ix), mode(iy), mode(iz));
  }
  std::size_t flat(int ix, int iy, int iz) const {
    return (std::size_t(ix) * n + iy) * n + iz;  // z fastest
  }
  // True if the dyadic shell supp(phi_k) = (2^{k-1}, 2^{k+1}) fits in band.
  bool shell_in_band(int k) const;
};

// Validates n (power of two, >= 8) and length > 0.
BoxGrid make_grid(int n, double length);

struct SpinorField {
  BoxGrid grid;
  Representation repr = Representation::physical;
  // 4 component blocks of n^3 values each, z-fastest within a block.
  std::vector<Complex> data;

  Complex& at(int c, std::size_t idx) { return data[c * grid.size() + idx]; }
  const Complex& at(int c, std::size_t idx) const {
    return data[c * grid.size() + idx];
  }
  Complex* component(int c) { return data.data() + c * grid.size(); }
  const Complex* component(int c) const { return data.data() + c * grid.size(); }
};

SpinorField make_field(const BoxGrid& grid, Representation repr);

// Unitary transform. Round trip is the identity to ~1e-12 relative.
void transform_in_place(SpinorField& f, Representation target);
SpinorField transform(const SpinorField& f, Representation target);

// Low-level unitary scalar transforms on an n^3 complex array (z fastest).
void scalar_to_fourier(std::vector<Complex>& a, const BoxGrid& grid);
void scalar_to_physical(std::vector<Complex>& a, const BoxGrid& grid);

// L^2 norm; representation-independent (Plancherel).
double l2_norm(const SpinorField& f);

// Spatial L^q norm of the pointwise C^4 magnitude; q = inf accepted as
// std::numeric_limits<double>::infinity(). Requires physical representation.
double lq_norm(const SpinorField& f, double q);

// Weighted Fourier norm: weights <xi>_m^s (m>0) or |xi|^s with zero-mode
// weight 0 (m=0). Throws if m=0, s<0 and the zero mode does not vanish.
double sobolev_norm(const SpinorField& f, double s, double m);

struct Trajectory {
  std::vector<double> times;        // increasing, uniform step
  std::vector<SpinorField> fields;  // one per time, shared grid
};

// ( sum_t dt_w * ||f(t)||_{L^q}^p )^{1/p} with trapezoidal weights;
// p = inf gives the max over samples.
double mixed_norm(const Trajectory& traj, double p, double q);

// Flat binary snapshot format (see README): header n, L, representation,
// component count; body little-endian float32 re/im pairs per component
// block, z-fastest.
void save_field(const SpinorField& f, const std::string& path);
SpinorField load_field(const std::string& path);

}  // namespace spinorlab
