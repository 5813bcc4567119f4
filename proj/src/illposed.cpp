#include "spinorlab/illposed.hpp"

#include <cmath>
#include <stdexcept>

#include "spinorlab/estimates.hpp"
#include "spinorlab/rng.hpp"

namespace spinorlab {

namespace {

inline double sinc_over(double t, double b) {
  return b == 0.0 ? t : std::sin(t * b) / b;
}

// Uniform sample from the solid annulus lam <= |x| <= 2 lam.
Vec3 sample_annulus(GaussianRng& rng, double lam) {
  const double u = rng.uniform();
  const double r = lam * std::cbrt(1.0 + 7.0 * u);
  const double z = 2.0 * rng.uniform() - 1.0;
  const double ph = 2.0 * M_PI * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return r * Vec3(s * std::cos(ph), s * std::sin(ph), z);
}

inline bool in_annulus(const Vec3& x, double lam) {
  const double r = x.norm();
  return r >= lam && r <= 2.0 * lam;
}

inline double annulus_volume(double lam) {
  return (4.0 * M_PI / 3.0) * 7.0 * lam * lam * lam;
}

}  // namespace

KernelEntries kernel_entry_check(double tau, const Vec3& xi, double t,
                                 const Vec3& eta, double m) {
  const double bx = std::sqrt(m * m + xi.squaredNorm());
  const double be = std::sqrt(m * m + eta.squaredNorm());
  const double c = std::cos(tau * bx);
  const double cp = std::cos(t * be);
  const double sb = sinc_over(tau, bx);
  const double sbp = sinc_over(t, be);
  const double mixed = m * (c * sbp + sb * cp);
  KernelEntries out;
  {
    const double dot = xi.dot(eta);
    const double crs = xi[0] * eta[1] - xi[1] * eta[0];
    out.direct = Complex(c * cp + sb * sbp * (dot - m * m),
                         -mixed + sb * sbp * crs);
  }
  {
    // transpose flips the sign of the second Pauli component.
    const double dot = xi[0] * eta[0] - xi[1] * eta[1] + xi[2] * eta[2];
    const double crs = xi[0] * eta[1] + xi[1] * eta[0];
    out.transposed = Complex(c * cp + sb * sbp * (dot - m * m),
                             -mixed + sb * sbp * crs);
  }
  return out;
}

void validate_annulus(const AnnulusSpec& spec, double tau, const Vec3& xi,
                      double t, const Vec3& eta) {
  const double tmax = spec.eps / spec.lam;
  if (!in_annulus(xi, spec.lam) || !in_annulus(eta, spec.lam))
    throw std::invalid_argument("validate_annulus: frequency outside W_lam");
  if (std::abs(tau) > tmax * (1 + 1e-12) || std::abs(t) > tmax * (1 + 1e-12))
    throw std::invalid_argument("validate_annulus: time outside [-eps/lam, eps/lam]");
}

MonteCarloEstimate triple_convolution(double lam, const Vec3& xi,
                                      const PotentialSpec& spec, int samples,
                                      std::uint64_t seed) {
  if (samples < 1)
    throw std::invalid_argument("triple_convolution: samples must be >= 1");
  GaussianRng rng(seed);
  const double vol = annulus_volume(lam);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec3 sigma = sample_annulus(rng, lam);
    const Vec3 w = sample_annulus(rng, lam);  // w = xi - eta
    const Vec3 eta = xi - w;
    const double v =
        in_annulus(eta - sigma, lam) ? vhat(spec, eta.norm()) : 0.0;
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sumsq / samples - mean * mean);
  MonteCarloEstimate est;
  est.value = vol * vol * mean;
  est.std_error = vol * vol * std::sqrt(var / samples);
  return est;
}

MonteCarloEstimate third_iterate_lower(double lam, double eps,
                                       const PotentialSpec& spec, double m,
                                       int samples, std::uint64_t seed,
                                       int tau_points) {
  if (samples < 1 || tau_points < 2 || tau_points > 32)
    throw std::invalid_argument("third_iterate_lower: bad sample budget");
  GaussianRng rng(seed);
  const double t = eps / lam;
  const Vec3 xi(1.5 * lam, 0.0, 0.0);
  const double vol = annulus_volume(lam);
  const double dtau = t / tau_points;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec3 sigma = sample_annulus(rng, lam);
    const Vec3 w = sample_annulus(rng, lam);  // w = xi - eta
    const Vec3 eta = xi - w;
    double v = 0.0;
    if (in_annulus(eta - sigma, lam)) {
      double inner = 0.0;
      for (int j = 0; j <= tau_points; ++j) {
        const double tau = j * dtau;
        const double wt = (j == 0 || j == tau_points) ? 0.5 : 1.0;
        const KernelEntries k1 =
            kernel_entry_check(tau, eta - sigma, -tau, sigma, m);
        const KernelEntries k2 = kernel_entry_check(t - tau, xi, tau, w, m);
        inner += wt * dtau * (k1.transposed * k2.direct).real();
      }
      v = vhat(spec, eta.norm()) * inner;
    }
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sumsq / samples - mean * mean);
  MonteCarloEstimate est;
  est.value = std::abs(vol * vol * mean);
  est.std_error = vol * vol * std::sqrt(var / samples);
  return est;
}

WitnessReport run_witness(const std::vector<double>& lams, double eps,
                          const PotentialSpec& spec, double m, int samples,
                          std::uint64_t seed) {
  if (lams.size() < 3)
    throw std::invalid_argument("run_witness: need at least 3 scales");
  WitnessReport rep;
  rep.lams = lams;
  rep.eps = eps;
  rep.m = m;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    const double lam = lams[i];
    const MonteCarloEstimate est = third_iterate_lower(
        lam, eps, spec, m, samples, GaussianRng::derive(seed, i));
    rep.n_abs.push_back(est.value);
    rep.n_se.push_back(est.std_error);
    // Sample the kernel-entry lemma over the constraint box.
    GaussianRng rng(GaussianRng::derive(seed, 1000 + i));
    const double tmax = eps / lam;
    double mn = 1e300;
    for (int j = 0; j < 2000; ++j) {
      const double tau = tmax * (2.0 * rng.uniform() - 1.0);
      const double tt = tmax * (2.0 * rng.uniform() - 1.0);
      const Vec3 a = sample_annulus(rng, lam);
      const Vec3 b = sample_annulus(rng, lam);
      const KernelEntries ke = kernel_entry_check(tau, a, tt, b, m);
      mn = std::min({mn, ke.direct.real(), ke.transposed.real()});
    }
    rep.kernel_min_re.push_back(mn);
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < lams.size(); ++i)
    pts.emplace_back(lams[i], rep.n_abs[i]);
  rep.fitted_exponent = fit_exponent(pts).slope;
  return rep;
}

std::string supercritical_verdict(const WitnessReport& rep, double s) {
  if (rep.lams.size() < 3)
    throw std::invalid_argument("supercritical_verdict: need >= 3 scales");
  if (s >= 0.0) return "inconclusive";
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < rep.lams.size(); ++i) {
    // H^s proxy: weight lam^s, pointwise |N| on W_lam, vol(W_lam)^{1/2}.
    const double proxy =
        std::pow(rep.lams[i], s) * rep.n_abs[i] * std::pow(rep.lams[i], 1.5);
    pts.emplace_back(rep.lams[i], proxy);
  }
  const double p = fit_exponent(pts).slope;
  // If the trilinear bound held, proxy <~ lam^{3s + 9/2} would force
  // eps <~ lam^{implied} with:
  const double implied = (3.0 * s + 4.5) - p;
  if (implied <= 2.0 * s + 0.2)
    return "trilinear bound fails as lambda -> infinity";
  return "no failure detected";
}

}  // namespace spinorlab
