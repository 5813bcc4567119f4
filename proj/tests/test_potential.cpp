#include <doctest.h>

#include <cmath>
#include <vector>

#include "spinorlab/potential.hpp"
#include "spinorlab/rng.hpp"

using namespace spinorlab;

namespace {

// Oracle for the Yukawa symbol: radial Fourier transform of e^{-mu r}/r,
// V^(k) = (4 pi / k) int_0^inf e^{-mu r} sin(k r) dr, by Simpson quadrature.
double yukawa_hat_quadrature(double mu, double k) {
  const double R = 60.0 / mu;
  const int n = 200000;  // even
  const double h = R / n;
  auto f = [&](double r) { return std::exp(-mu * r) * std::sin(k * r); };
  double s = f(0.0) + f(R);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 4.0 * M_PI / k * (s * h / 3.0);
}

}  // namespace

TEST_CASE("potential spec validation") {
  CHECK_THROWS_AS(make_potential(PotentialKind::yukawa, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_potential(PotentialKind::yukawa, 0.0, -2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_potential(PotentialKind::interp, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_potential(PotentialKind::interp, 2.0),
                  std::invalid_argument);
  CHECK(make_potential(PotentialKind::yukawa, 0.0, 3.0).gamma == 0.0);
  CHECK(make_potential(PotentialKind::coulomb).gamma == 2.0);
  CHECK(make_potential(PotentialKind::interp, 0.5).gamma == 0.5);
}

TEST_CASE("yukawa symbol against the radial quadrature oracle") {
  const PotentialSpec y = make_potential(PotentialKind::yukawa, 0.0, 1.0);
  CHECK(vhat(y, 2.0) == doctest::Approx(4.0 * M_PI / 5.0).epsilon(1e-12));
  for (double k : {0.3, 1.0, 2.0, 7.5}) {
    CHECK(vhat(y, k) ==
          doctest::Approx(yukawa_hat_quadrature(1.0, k)).epsilon(1e-7));
  }
  const PotentialSpec y3 = make_potential(PotentialKind::yukawa, 0.0, 3.0);
  CHECK(vhat(y3, 2.0) ==
        doctest::Approx(yukawa_hat_quadrature(3.0, 2.0)).epsilon(1e-7));
}

TEST_CASE("coulomb and interp symbols") {
  const PotentialSpec c = make_potential(PotentialKind::coulomb);
  CHECK(vhat(c, 2.0) == doctest::Approx(M_PI).epsilon(1e-13));
  CHECK(vhat(c, 0.0) == 0.0);  // zero policy
  const PotentialSpec ce = make_potential(PotentialKind::coulomb, 0.0, 1.0,
                                          ZeroModePolicy::error);
  CHECK_THROWS_AS(vhat(ce, 0.0), std::domain_error);

  const PotentialSpec i1 = make_potential(PotentialKind::interp, 1.0);
  CHECK(vhat(i1, 2.0) == doctest::Approx(0.5 / std::sqrt(5.0)).epsilon(1e-13));
  // Envelope behavior: ~ r^-gamma at small r, ~ r^-2 at large r.
  CHECK(vhat(i1, 1e-4) == doctest::Approx(1e4).epsilon(1e-6));
  CHECK(vhat(i1, 1e4) * 1e8 == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(vhat(make_potential(PotentialKind::constant), 5.0) == 1.0);
}

TEST_CASE("growth ratios stay bounded in both regimes") {
  for (auto [kind, gamma] :
       {std::pair{PotentialKind::yukawa, 0.0},
        std::pair{PotentialKind::coulomb, 2.0},
        std::pair{PotentialKind::interp, 1.0},
        std::pair{PotentialKind::interp, 0.5}}) {
    const PotentialSpec spec = make_potential(kind, gamma);
    const GrowthReport rep = growth_check(spec);
    REQUIRE(rep.low_ratio.size() == 5);
    for (int j = 0; j <= 4; ++j) {
      CHECK(rep.low_ratio[j] > 0.0);
      CHECK(rep.low_ratio[j] <= 4.0 * M_PI * 200.0);
      CHECK(rep.high_ratio[j] <= 4.0 * M_PI * 200.0);
    }
  }
  // Yukawa mu0=1 at high frequency: V^ * r^2 -> 4 pi exactly.
  const GrowthReport y = growth_check(make_potential(PotentialKind::yukawa));
  CHECK(y.high_ratio[0] == doctest::Approx(4.0 * M_PI).epsilon(1e-3));
  // Coulomb: |V^| r^2 = 4 pi on the nose at every radius.
  const GrowthReport c = growth_check(make_potential(PotentialKind::coulomb));
  CHECK(c.low_ratio[0] == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  CHECK(c.high_ratio[0] == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(growth_check(make_potential(PotentialKind::yukawa), 5),
                  std::invalid_argument);
}

TEST_CASE("hartree density is the indefinite beta form") {
  const BoxGrid g = make_grid(8, 5.0);
  SpinorField psi = make_field(g, Representation::physical);
  GaussianRng rng(14);
  for (Complex& z : psi.data) z = rng.complex_gaussian();
  const std::vector<double> rho = hartree_density(psi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double expect = std::norm(psi.at(0, i)) + std::norm(psi.at(1, i)) -
                          std::norm(psi.at(2, i)) - std::norm(psi.at(3, i));
    CHECK(rho[i] == doctest::Approx(expect).epsilon(1e-14));
  }
  SpinorField psif = transform(psi, Representation::fourier);
  CHECK_THROWS_AS(hartree_density(psif), std::invalid_argument);
}

TEST_CASE("constant potential kind is the identity convolution") {
  // V^ == 1 so V * rho recovers rho; independent check of the FFT plumbing.
  const BoxGrid g = make_grid(8, 5.0);
  GaussianRng rng(15);
  std::vector<double> rho(g.size());
  for (double& v : rho) v = rng.gaussian();
  const auto w = hartree_potential_of_density(
      rho, g, make_potential(PotentialKind::constant));
  double worst = 0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    worst = std::max(worst, std::abs(w[i] - rho[i]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("hartree potential of a single cosine mode") {
  // rho(x) = cos(xi.x) is an eigenvector of the convolution:
  // V * rho = V^(|xi|) rho. Hand oracle without any FFT.
  const double L = 5.0;
  const BoxGrid g = make_grid(8, L);
  const Vec3 xi = g.spacing() * Vec3(1, 2, 0);
  std::vector<double> rho(g.size());
  const double h = L / g.n;
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz)
        rho[g.flat(ix, iy, iz)] = std::cos(xi.dot(h * Vec3(ix, iy, iz)));
  const PotentialSpec y = make_potential(PotentialKind::yukawa, 0.0, 2.0);
  const auto w = hartree_potential_of_density(rho, g, y);
  const double lam = 4.0 * M_PI / (4.0 + xi.squaredNorm());
  double worst = 0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    worst = std::max(worst, std::abs(w[i] - lam * rho[i]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("singular potentials and the zero mode policy") {
  const BoxGrid g = make_grid(8, 5.0);
  std::vector<double> rho(g.size(), 1.0);  // pure mean
  rho[3] += 0.5;
  const PotentialSpec cz = make_potential(PotentialKind::coulomb);
  const auto w = hartree_potential_of_density(rho, g, cz);  // mean dropped
  CHECK(std::isfinite(w[0]));
  const PotentialSpec ce = make_potential(PotentialKind::coulomb, 0.0, 1.0,
                                          ZeroModePolicy::error);
  CHECK_THROWS_AS(hartree_potential_of_density(rho, g, ce), std::domain_error);
  // Mean-free density is fine under the error policy.
  std::vector<double> mf(g.size(), 0.0);
  mf[0] = 1.0;
  mf[1] = -1.0;
  CHECK(hartree_potential_of_density(mf, g, ce).size() == g.size());
}
