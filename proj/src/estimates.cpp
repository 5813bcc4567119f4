#include "spinorlab/estimates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinorlab/multiplier.hpp"
#include "spinorlab/rng.hpp"

namespace spinorlab {

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3)
    throw std::invalid_argument("fit_exponent: need at least 3 points");
  ExponentFit fit;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("fit_exponent: values must be positive");
    fit.points.emplace_back(std::log2(x), std::log2(y));
  }
  const double n = double(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0)
    throw std::invalid_argument("fit_exponent: degenerate abscissas");
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

namespace {

template <typename Body>
void for_each_mode(const BoxGrid& grid, Body body) {
  for (int ix = 0; ix < grid.n; ++ix)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int iz = 0; iz < grid.n; ++iz)
        body(grid.frequency(ix, iy, iz), grid.flat(ix, iy, iz));
}

// e^{-i theta t <xi>_m} applied to a Fourier-representation field, in place.
void phase_in_place(SpinorField& g, Sign theta, double t, double m) {
  const double th = sign_value(theta);
  for_each_mode(g.grid, [&](const Vec3& xi, std::size_t idx) {
    const double b = std::sqrt(m * m + xi.squaredNorm());
    const Complex ph = std::polar(1.0, -th * t * b);
    for (int c = 0; c < 4; ++c) g.at(c, idx) *= ph;
  });
}

double trapezoid_weight(int j, int last) {
  return (j == 0 || j == last) ? 0.5 : 1.0;
}

}  // namespace

SpinorField random_annulus_spinor(const BoxGrid& grid, int k,
                                  std::optional<Sign> theta, double m,
                                  std::uint64_t seed,
                                  const std::optional<CubeWindow>& cube,
                                  double radial_cap) {
  if (!(std::ldexp(1.0, k - 1) < grid.band_limit()))
    throw std::invalid_argument("random_annulus_spinor: annulus outside band");
  GaussianRng rng(seed);
  SpinorField f = make_field(grid, Representation::fourier);
  for_each_mode(grid, [&](const Vec3& xi, std::size_t idx) {
    const double r = xi.norm();
    double w = dyadic_phi(k, r);
    if (w == 0.0) return;
    if (radial_cap > 0.0 && r > radial_cap) return;
    if (cube) w *= cube_gamma(cube->kprime, cube->q, xi);
    if (w == 0.0) return;
    Spinor v;
    for (int c = 0; c < 4; ++c) v[c] = w * rng.complex_gaussian();
    if (theta) v = projector(FrequencyPoint{xi, m}, *theta) * v;
    for (int c = 0; c < 4; ++c) f.at(c, idx) = v[c];
  });
  const double nrm = l2_norm(f);
  if (nrm > 0.0)
    for (Complex& z : f.data) z /= nrm;
  return f;
}

SweepPoint strichartz_ratio(const BoxGrid& grid, int k, double p, double q,
                            double m, int trials, std::uint64_t seed,
                            int slices) {
  if (std::abs(2.0 / p + 3.0 / q - 1.5) > 1e-9 || (p == 2.0 && std::isinf(q)))
    throw std::invalid_argument("strichartz_ratio: inadmissible (p, q)");
  if (trials < 1) throw std::invalid_argument("strichartz_ratio: trials >= 1");
  const double dt = 1.0 / slices;
  double measured = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    SpinorField f = random_annulus_spinor(grid, k, std::nullopt, m,
                                          GaussianRng::derive(seed, trial));
    double acc = 0.0;
    for (int j = 0; j <= slices; ++j) {
      SpinorField g = f;
      phase_in_place(g, Sign::plus, j * dt, m);
      transform_in_place(g, Representation::physical);
      acc += trapezoid_weight(j, slices) * dt * std::pow(lq_norm(g, q), p);
    }
    measured = std::max(measured, std::pow(acc, 1.0 / p));
  }
  SweepPoint pt;
  pt.k = k;
  pt.m = m;
  pt.p = p;
  pt.q = q;
  pt.trials = trials;
  pt.seed = seed;
  pt.measured = measured;
  const double br = m > 0.0 ? std::sqrt(m * m + std::ldexp(1.0, 2 * k))
                            : std::ldexp(1.0, k);
  pt.bound = std::pow(br, 1.25 * (0.5 - 1.0 / q));
  pt.ratio = pt.measured / pt.bound;
  return pt;
}

double localized_strichartz_norm(const SpinorField& f, int k, int kprime,
                                 double p, double m, int slices) {
  if (!(p > 2.0) || std::isinf(p))
    throw std::invalid_argument("localized_strichartz_norm: need 2 < p < inf");
  if (kprime > k)
    throw std::invalid_argument("localized_strichartz_norm: kprime must be <= k");
  const BoxGrid& grid = f.grid;
  const double q = 1.0 / (0.5 - 1.0 / p);
  const double dt = 1.0 / slices;

  // Cubes whose bump can meet the annulus supp phi_k.
  struct Cube {
    std::vector<std::pair<std::size_t, double>> entries;  // (index, symbol)
  };
  std::vector<Cube> cubes;
  {
    const double h = std::ldexp(1.0, kprime);
    const double rad = (2.0 / 3.0) * h * std::sqrt(3.0);
    const double lo = std::ldexp(1.0, k - 1) - rad;
    const double hi = std::ldexp(1.0, k + 1) + rad;
    for (const auto& qv : cubes_in_band(kprime, grid)) {
      const double cr = h * Vec3(qv[0], qv[1], qv[2]).norm();
      if (cr < lo || cr > hi) continue;
      Cube c;
      for_each_mode(grid, [&](const Vec3& xi, std::size_t idx) {
        const double r = xi.norm();
        if (dyadic_phi(k, r) == 0.0) return;
        const double s = cube_gamma(kprime, qv, xi);
        if (s > 1e-14) c.entries.emplace_back(idx, s);
      });
      if (!c.entries.empty()) cubes.push_back(std::move(c));
    }
  }

  SpinorField ff = transform(f, Representation::fourier);
  std::vector<double> acc(cubes.size(), 0.0);
  SpinorField tmp = make_field(grid, Representation::fourier);
  for (int j = 0; j <= slices; ++j) {
    SpinorField g = ff;
    phase_in_place(g, Sign::plus, j * dt, m);
    const double w = trapezoid_weight(j, slices) * dt;
    for (std::size_t ci = 0; ci < cubes.size(); ++ci) {
      std::fill(tmp.data.begin(), tmp.data.end(), Complex(0, 0));
      tmp.repr = Representation::fourier;
      for (const auto& [idx, s] : cubes[ci].entries)
        for (int c = 0; c < 4; ++c) tmp.at(c, idx) = s * g.at(c, idx);
      transform_in_place(tmp, Representation::physical);
      acc[ci] += w * std::pow(lq_norm(tmp, q), p);
    }
  }
  double sq = 0.0;
  for (double a : acc) sq += std::pow(a, 2.0 / p);
  return std::sqrt(sq);
}

SweepPoint localized_strichartz_ratio(const BoxGrid& grid, int k, int kprime,
                                      double p, double m, int trials,
                                      std::uint64_t seed, int slices) {
  if (!(p > 2.0) || std::isinf(p))
    throw std::invalid_argument("localized_strichartz_ratio: need 2 < p < inf");
  if (kprime > k)
    throw std::invalid_argument("localized_strichartz_ratio: kprime must be <= k");
  const double q = 1.0 / (0.5 - 1.0 / p);
  double measured = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    SpinorField f = random_annulus_spinor(grid, k, std::nullopt, m,
                                          GaussianRng::derive(seed, trial));
    measured = std::max(
        measured, localized_strichartz_norm(f, k, kprime, p, m, slices));
  }
  SweepPoint pt;
  pt.k = k;
  pt.k1 = kprime;  // reported in the k1 column
  pt.m = m;
  pt.p = p;
  pt.q = q;
  pt.trials = trials;
  pt.seed = seed;
  pt.measured = measured;
  pt.bound = std::pow(2.0, double(k) / p) * std::pow(2.0, double(kprime) / p);
  pt.ratio = pt.measured / pt.bound;
  return pt;
}

SweepPoint bilinear_ratio(const BoxGrid& grid, int k, int k1, int k2,
                          Sign theta1, Sign theta2, double m, int trials,
                          std::uint64_t seed, int slices, double radial_cap) {
  if (k > k1 - 3)
    throw std::invalid_argument("bilinear_ratio: need k <= k1 - 3");
  if (std::abs(k1 - k2) > 1)
    throw std::invalid_argument("bilinear_ratio: need |k1 - k2| <= 1");
  if (m > 0.0 && std::min(k1, k2) < 0)
    throw std::invalid_argument("bilinear_ratio: massive case needs k1, k2 >= 0");
  if (!(std::ldexp(1.0, k - 1) < grid.band_limit()))
    throw std::invalid_argument("bilinear_ratio: output shell outside band");
  const double dt = 1.0 / slices;
  const std::size_t N = grid.size();

  // Squared-L^2 weight of the P_k output localization per mode.
  std::vector<double> phik2(N, 0.0);
  for_each_mode(grid, [&](const Vec3& xi, std::size_t idx) {
    const double v = dyadic_phi(k, xi.norm());
    phik2[idx] = v * v;
  });

  auto run_pair = [&](const SpinorField& a, const SpinorField& b) {
    double acc = 0.0;
    std::vector<Complex> dens(N);
    for (int j = 0; j <= slices; ++j) {
      SpinorField pa = a, pb = b;
      phase_in_place(pa, theta1, j * dt, m);
      phase_in_place(pb, theta2, j * dt, m);
      transform_in_place(pa, Representation::physical);
      transform_in_place(pb, Representation::physical);
      for (std::size_t i = 0; i < N; ++i)
        dens[i] = std::conj(pa.at(0, i)) * pb.at(0, i) +
                  std::conj(pa.at(1, i)) * pb.at(1, i) -
                  std::conj(pa.at(2, i)) * pb.at(2, i) -
                  std::conj(pa.at(3, i)) * pb.at(3, i);
      scalar_to_fourier(dens, grid);
      double l2sq = 0.0;
      for (std::size_t i = 0; i < N; ++i) l2sq += phik2[i] * std::norm(dens[i]);
      acc += trapezoid_weight(j, slices) * dt * l2sq;
    }
    return std::sqrt(acc);
  };

  double measured = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    // Full-shell family.
    {
      SpinorField a = random_annulus_spinor(
          grid, k1, theta1, m, GaussianRng::derive(seed, 4 * trial), {},
          radial_cap);
      SpinorField b = random_annulus_spinor(
          grid, k2, theta2, m, GaussianRng::derive(seed, 4 * trial + 1), {},
          radial_cap);
      measured = std::max(measured, run_pair(a, b));
    }
    // Aligned cube-pair family: two side-2^k cubes on the scale-2^k1 sphere,
    // one lattice step apart, so the product spectrum sits in the k shell.
    {
      GaussianRng dir_rng(GaussianRng::derive(seed, 4 * trial + 2));
      Vec3 e;
      do {
        e = Vec3(dir_rng.gaussian(), dir_rng.gaussian(), dir_rng.gaussian());
      } while (e.norm() < 1e-6);
      e.normalize();
      const double scale = std::ldexp(1.0, k1 - k);
      std::array<int, 3> q1, q2;
      int axis = 0;
      for (int i = 1; i < 3; ++i)
        if (std::abs(e[i]) < std::abs(e[axis])) axis = i;
      for (int i = 0; i < 3; ++i) q1[i] = int(std::lround(scale * e[i]));
      q2 = q1;
      q2[axis] += 1;
      SpinorField a = random_annulus_spinor(
          grid, k1, theta1, m, GaussianRng::derive(seed, 4 * trial),
          CubeWindow{k, q1}, radial_cap);
      SpinorField b = random_annulus_spinor(
          grid, k2, theta2, m, GaussianRng::derive(seed, 4 * trial + 1),
          CubeWindow{k, q2}, radial_cap);
      if (l2_norm(a) > 0.0 && l2_norm(b) > 0.0)
        measured = std::max(measured, run_pair(a, b));
    }
  }

  SweepPoint pt;
  pt.k = k;
  pt.k1 = k1;
  pt.k2 = k2;
  pt.theta1 = int(sign_value(theta1));
  pt.theta2 = int(sign_value(theta2));
  pt.m = m;
  pt.p = 2.0;
  pt.q = 2.0;
  pt.trials = trials;
  pt.seed = seed;
  pt.measured = measured;
  if (m > 0.0 && std::min(k1, k2) == 0)
    pt.bound = std::pow(2.0, 0.5 * k);
  else if (sign_value(theta1) * sign_value(theta2) < 0.0)
    pt.bound = std::pow(2.0, double(k));
  else
    pt.bound = std::pow(2.0, 1.5 * k - 0.5 * k1);
  pt.ratio = pt.measured / pt.bound;
  return pt;
}

}  // namespace spinorlab
