#include "spinorlab/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace spinorlab {

PotentialSpec make_potential(PotentialKind kind, double gamma, double mu0,
                             ZeroModePolicy policy) {
  PotentialSpec s;
  s.kind = kind;
  s.zero_mode = policy;
  switch (kind) {
    case PotentialKind::yukawa:
      if (!(mu0 > 0.0))
        throw std::invalid_argument("make_potential: yukawa needs mu0 > 0");
      s.gamma = 0.0;
      s.mu0 = mu0;
      break;
    case PotentialKind::coulomb:
      s.gamma = 2.0;
      break;
    case PotentialKind::interp:
      if (!(gamma > 0.0 && gamma < 2.0))
        throw std::invalid_argument("make_potential: interp needs 0 < gamma < 2");
      s.gamma = gamma;
      break;
    case PotentialKind::constant:
      s.gamma = 0.0;
      break;
  }
  return s;
}

double vhat(const PotentialSpec& spec, double r) {
  switch (spec.kind) {
    case PotentialKind::yukawa:
      return 4.0 * M_PI / (spec.mu0 * spec.mu0 + r * r);
    case PotentialKind::coulomb:
      if (r == 0.0) {
        if (spec.zero_mode == ZeroModePolicy::error)
          throw std::domain_error("vhat: coulomb symbol at xi = 0");
        return 0.0;
      }
      return 4.0 * M_PI / (r * r);
    case PotentialKind::interp: {
      if (r == 0.0) {
        if (spec.zero_mode == ZeroModePolicy::error)
          throw std::domain_error("vhat: interp symbol at xi = 0");
        return 0.0;
      }
      // |xi|^-gamma <xi>^{gamma-2}: both growth regimes of the envelope.
      return std::pow(r, -spec.gamma) *
             std::pow(1.0 + r * r, 0.5 * (spec.gamma - 2.0));
    }
    case PotentialKind::constant:
      return 1.0;
  }
  throw std::logic_error("vhat: bad kind");
}

double vhat(const PotentialSpec& spec, const Vec3& xi) {
  return vhat(spec, xi.norm());
}

namespace {

// d^j/dr^j by central differences on a 5-point stencil.
double radial_derivative(const PotentialSpec& spec, double r, int j, double h) {
  auto f = [&](double x) { return vhat(spec, x); };
  switch (j) {
    case 0:
      return f(r);
    case 1:
      return (f(r + h) - f(r - h)) / (2 * h);
    case 2:
      return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
    case 3:
      return (-0.5 * f(r - 2 * h) + f(r - h) - f(r + h) + 0.5 * f(r + 2 * h)) /
             (h * h * h);
    case 4:
      return (f(r - 2 * h) - 4 * f(r - h) + 6 * f(r) - 4 * f(r + h) +
              f(r + 2 * h)) /
             (h * h * h * h);
    default:
      throw std::invalid_argument("radial_derivative: order must be <= 4");
  }
}

}  // namespace

GrowthReport growth_check(const PotentialSpec& spec, int kmax) {
  if (kmax < 0 || kmax > 4)
    throw std::invalid_argument("growth_check: kmax must be in [0, 4]");
  GrowthReport rep;
  rep.low_ratio.assign(kmax + 1, 0.0);
  rep.high_ratio.assign(kmax + 1, 0.0);
  const int samples_per_octave = 4;
  for (int i = -10 * samples_per_octave; i <= 10 * samples_per_octave; ++i) {
    const double r = std::pow(2.0, double(i) / samples_per_octave);
    const double h = 1e-4 * r;
    for (int j = 0; j <= kmax; ++j) {
      const double d = std::abs(radial_derivative(spec, r, j, h));
      if (r <= 1.0)
        rep.low_ratio[j] = std::max(rep.low_ratio[j], d * std::pow(r, spec.gamma + j));
      else
        rep.high_ratio[j] = std::max(rep.high_ratio[j], d * std::pow(r, 2.0 + j));
    }
  }
  return rep;
}

std::vector<double> hartree_density(const SpinorField& psi) {
  if (psi.repr != Representation::physical)
    throw std::invalid_argument("hartree_density: physical representation required");
  const std::size_t N = psi.grid.size();
  std::vector<double> rho(N);
  for (std::size_t i = 0; i < N; ++i)
    rho[i] = std::norm(psi.at(0, i)) + std::norm(psi.at(1, i)) -
             std::norm(psi.at(2, i)) - std::norm(psi.at(3, i));
  return rho;
}

std::vector<double> hartree_potential_of_density(const std::vector<double>& density,
                                                 const BoxGrid& grid,
                                                 const PotentialSpec& spec) {
  const std::size_t N = grid.size();
  if (density.size() != N)
    throw std::invalid_argument("hartree_potential: density/grid size mismatch");
  std::vector<Complex> work(N);
  for (std::size_t i = 0; i < N; ++i) work[i] = density[i];
  scalar_to_fourier(work, grid);

  const bool singular_zero = spec.kind == PotentialKind::coulomb ||
                             spec.kind == PotentialKind::interp;
  if (singular_zero && spec.zero_mode == ZeroModePolicy::error) {
    const double mean = std::abs(work[0]);
    double total = 0.0;
    for (const Complex& c : work) total += std::norm(c);
    if (mean > 1e-12 * std::sqrt(std::max(total, 1e-300)))
      throw std::domain_error(
          "hartree_potential: nonzero mean density with singular potential");
  }

  for (int ix = 0; ix < grid.n; ++ix)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int iz = 0; iz < grid.n; ++iz) {
        const double r = grid.frequency(ix, iy, iz).norm();
        Complex& c = work[grid.flat(ix, iy, iz)];
        c *= (r == 0.0 && singular_zero) ? 0.0 : vhat(spec, r);
      }
  scalar_to_physical(work, grid);
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = work[i].real();
  return out;
}

std::vector<double> hartree_potential(const SpinorField& psi,
                                      const PotentialSpec& spec) {
  return hartree_potential_of_density(hartree_density(psi), psi.grid, spec);
}

}  // namespace spinorlab
