#include "spinorlab/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace spinorlab {

namespace {

// (alpha.xi + m beta) v without building the 4x4 matrix.
inline void dirac_apply(const Vec3& xi, double m, const Complex v[4],
                        Complex out[4]) {
  const Complex xm(xi[0], -xi[1]);
  const Complex xp(xi[0], xi[1]);
  // sigma.xi acting on the lower and upper 2-spinors.
  const Complex sl0 = xi[2] * v[2] + xm * v[3];
  const Complex sl1 = xp * v[2] - xi[2] * v[3];
  const Complex su0 = xi[2] * v[0] + xm * v[1];
  const Complex su1 = xp * v[0] - xi[2] * v[1];
  out[0] = sl0 + m * v[0];
  out[1] = sl1 + m * v[1];
  out[2] = su0 - m * v[2];
  out[3] = su1 - m * v[3];
}

// exp(-it(alpha.xi + m beta)) v = cos(tb) v - i sin(tb)/b (alpha.xi+m beta) v.
inline void propagate_mode(const Vec3& xi, double m, double t, Complex v[4]) {
  const double b = std::sqrt(m * m + xi.squaredNorm());
  if (b == 0.0) return;
  const double c = std::cos(t * b);
  const double sb = std::sin(t * b) / b;
  Complex dv[4];
  dirac_apply(xi, m, v, dv);
  const Complex is(0.0, sb);
  for (int i = 0; i < 4; ++i) v[i] = c * v[i] - is * dv[i];
}

template <typename Body>
void for_each_mode(const BoxGrid& grid, Body body) {
  for (int ix = 0; ix < grid.n; ++ix)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int iz = 0; iz < grid.n; ++iz)
        body(grid.frequency(ix, iy, iz), grid.flat(ix, iy, iz));
}

}  // namespace

void validate(const EvolutionConfig& cfg) {
  if (!(cfg.m >= 0.0)) throw std::invalid_argument("config: mass must be >= 0");
  if (!std::isfinite(cfg.coupling))
    throw std::invalid_argument("config: coupling must be finite");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
  if (!(cfg.T >= cfg.dt)) throw std::invalid_argument("config: T must be >= dt");
  if (cfg.record_stride < 1)
    throw std::invalid_argument("config: record_stride must be >= 1");
}

SpinorField linear_evolve(const SpinorField& psi0, double t, double m) {
  SpinorField g = transform(psi0, Representation::fourier);
  for_each_mode(g.grid, [&](const Vec3& xi, std::size_t idx) {
    Complex v[4] = {g.at(0, idx), g.at(1, idx), g.at(2, idx), g.at(3, idx)};
    propagate_mode(xi, m, t, v);
    for (int c = 0; c < 4; ++c) g.at(c, idx) = v[c];
  });
  transform_in_place(g, psi0.repr);
  return g;
}

SpinorField halfwave_phase(const SpinorField& psi, Sign theta, double t,
                           double m) {
  SpinorField g = transform(psi, Representation::fourier);
  const double th = sign_value(theta);
  for_each_mode(g.grid, [&](const Vec3& xi, std::size_t idx) {
    const double b = std::sqrt(m * m + xi.squaredNorm());
    const Complex ph = std::polar(1.0, -th * t * b);
    for (int c = 0; c < 4; ++c) g.at(c, idx) *= ph;
  });
  transform_in_place(g, psi.repr);
  return g;
}

SpinorField nonlinearity(const SpinorField& psi, const EvolutionConfig& cfg) {
  if (psi.repr != Representation::physical)
    throw std::invalid_argument("nonlinearity: physical representation required");
  const std::vector<double> w = hartree_potential(psi, cfg.potential);
  SpinorField out = psi;
  const std::size_t N = psi.grid.size();
  for (std::size_t i = 0; i < N; ++i) {
    const double lw = cfg.coupling * w[i];
    out.at(0, i) = lw * psi.at(0, i);
    out.at(1, i) = lw * psi.at(1, i);
    out.at(2, i) = -lw * psi.at(2, i);
    out.at(3, i) = -lw * psi.at(3, i);
  }
  return out;
}

SpinorField step(const SpinorField& psi, const EvolutionConfig& cfg) {
  validate(cfg);
  SpinorField g = linear_evolve(psi, 0.5 * cfg.dt, cfg.m);
  transform_in_place(g, Representation::physical);
  // The nonlinear flow d/dt psi = +i coupling (V*rho) beta psi has constant
  // rho (the density is invariant under a beta-diagonal phase), so one exact
  // phase update covers the whole substep.
  const std::vector<double> w = hartree_potential(g, cfg.potential);
  const std::size_t N = g.grid.size();
  for (std::size_t i = 0; i < N; ++i) {
    const Complex up = std::polar(1.0, cfg.coupling * cfg.dt * w[i]);
    const Complex dn = std::conj(up);
    g.at(0, i) *= up;
    g.at(1, i) *= up;
    g.at(2, i) *= dn;
    g.at(3, i) *= dn;
  }
  SpinorField out = linear_evolve(g, 0.5 * cfg.dt, cfg.m);
  transform_in_place(out, psi.repr);
  return out;
}

double charge(const SpinorField& psi) { return l2_norm(psi); }

SolveResult solve(const SpinorField& psi0, const EvolutionConfig& cfg) {
  validate(cfg);
  const int steps = int(std::lround(cfg.T / cfg.dt));
  SolveResult res;
  SpinorField cur = transform(psi0, Representation::physical);
  auto record = [&](int j) {
    const double t = j * cfg.dt;
    res.step_times.push_back(t);
    const double q = charge(cur);
    if (!std::isfinite(q))
      throw std::runtime_error("solve: non-finite field at t = " +
                               std::to_string(t));
    res.charge_series.push_back(q);
    res.sobolev_series.push_back(sobolev_norm(cur, cfg.s, cfg.m));
    if (j % cfg.record_stride == 0) {
      res.traj.times.push_back(t);
      res.traj.fields.push_back(cur);
    }
  };
  record(0);
  for (int j = 1; j <= steps; ++j) {
    cur = step(cur, cfg);
    record(j);
  }
  return res;
}

namespace {

// Duhamel increment i int_0^{t_n} U(t_n - tau) D(tau) dtau on the slice grid,
// via the prefix sums of U(-tau_j) D_j (trapezoid weights). D arrives in
// physical representation and is consumed; the result is physical.
std::vector<SpinorField> duhamel(std::vector<SpinorField>& D, double m,
                                 double dt) {
  const std::size_t M = D.size();
  const BoxGrid grid = D[0].grid;
  SpinorField S = make_field(grid, Representation::fourier);
  std::vector<SpinorField> out;
  out.reserve(M);
  SpinorField prevG = make_field(grid, Representation::fourier);
  for (std::size_t j = 0; j < M; ++j) {
    transform_in_place(D[j], Representation::fourier);
    SpinorField G = D[j];
    const double tj = double(j) * dt;
    for_each_mode(grid, [&](const Vec3& xi, std::size_t idx) {
      Complex v[4] = {G.at(0, idx), G.at(1, idx), G.at(2, idx), G.at(3, idx)};
      propagate_mode(xi, m, -tj, v);
      for (int c = 0; c < 4; ++c) G.at(c, idx) = v[c];
    });
    if (j > 0)
      for (std::size_t i = 0; i < S.data.size(); ++i)
        S.data[i] += 0.5 * dt * (prevG.data[i] + G.data[i]);
    SpinorField inc = S;
    for_each_mode(grid, [&](const Vec3& xi, std::size_t idx) {
      Complex v[4] = {inc.at(0, idx), inc.at(1, idx), inc.at(2, idx),
                      inc.at(3, idx)};
      propagate_mode(xi, m, tj, v);
      for (int c = 0; c < 4; ++c)
        inc.at(c, idx) = Complex(0.0, 1.0) * v[c];
    });
    transform_in_place(inc, Representation::physical);
    out.push_back(std::move(inc));
    prevG = std::move(G);
  }
  return out;
}

// Re <a, beta b>_{C^4} at grid point i.
inline double beta_pair_re(const SpinorField& a, const SpinorField& b,
                           std::size_t i) {
  const Complex z = std::conj(a.at(0, i)) * b.at(0, i) +
                    std::conj(a.at(1, i)) * b.at(1, i) -
                    std::conj(a.at(2, i)) * b.at(2, i) -
                    std::conj(a.at(3, i)) * b.at(3, i);
  return z.real();
}

}  // namespace

PicardResult picard_orbit(const SpinorField& psi0, const EvolutionConfig& cfg,
                          bool keep_iterates) {
  validate(cfg);
  if (cfg.picard_iters < 2)
    throw std::invalid_argument("picard_orbit: picard_iters must be >= 2");
  const int M = int(std::lround(cfg.T / cfg.dt));
  const BoxGrid grid = psi0.grid;

  // Free orbit psi^{(0)}.
  std::vector<SpinorField> A;
  A.reserve(M + 1);
  {
    SpinorField f0 = transform(psi0, Representation::fourier);
    for (int j = 0; j <= M; ++j) {
      SpinorField g = f0;
      const double tj = j * cfg.dt;
      for_each_mode(grid, [&](const Vec3& xi, std::size_t idx) {
        Complex v[4] = {g.at(0, idx), g.at(1, idx), g.at(2, idx), g.at(3, idx)};
        propagate_mode(xi, cfg.m, tj, v);
        for (int c = 0; c < 4; ++c) g.at(c, idx) = v[c];
      });
      transform_in_place(g, Representation::physical);
      A.push_back(std::move(g));
    }
  }

  PicardResult res;
  auto snapshot = [&](const std::vector<SpinorField>& slices) {
    Trajectory t;
    for (int j = 0; j <= M; ++j) t.times.push_back(j * cfg.dt);
    t.fields = slices;
    return t;
  };
  if (keep_iterates) res.iterates.push_back(snapshot(A));

  std::vector<SpinorField> Delta;  // psi^{(j)} - psi^{(j-1)} slices
  int bad_streak = 0;
  const std::size_t N = grid.size();
  for (int iter = 0; iter < cfg.picard_iters; ++iter) {
    std::vector<SpinorField> D;
    D.reserve(M + 1);
    if (iter == 0) {
      for (int j = 0; j <= M; ++j) D.push_back(nonlinearity(A[j], cfg));
    } else {
      // N(A) - N(A - Delta), expanded so every term carries a Delta factor:
      //   coupling * [ W(A) beta Delta + (V * drho) beta (A - Delta) ],
      //   drho = 2 Re<Delta, beta A> - <Delta, beta Delta>.
      for (int j = 0; j <= M; ++j) {
        const SpinorField& a = A[j];
        const SpinorField& d = Delta[j];
        const std::vector<double> wa = hartree_potential(a, cfg.potential);
        std::vector<double> drho(N);
        for (std::size_t i = 0; i < N; ++i)
          drho[i] = 2.0 * beta_pair_re(d, a, i) - beta_pair_re(d, d, i);
        const std::vector<double> dw =
            hartree_potential_of_density(drho, grid, cfg.potential);
        SpinorField out = make_field(grid, Representation::physical);
        for (std::size_t i = 0; i < N; ++i)
          for (int c = 0; c < 4; ++c) {
            const double bsign = c < 2 ? 1.0 : -1.0;
            out.at(c, i) = cfg.coupling * bsign *
                           (wa[i] * d.at(c, i) +
                            dw[i] * (a.at(c, i) - d.at(c, i)));
          }
        D.push_back(std::move(out));
      }
    }
    Delta = duhamel(D, cfg.m, cfg.dt);
    double sup = 0.0;
    for (int j = 0; j <= M; ++j) {
      for (std::size_t i = 0; i < A[j].data.size(); ++i)
        A[j].data[i] += Delta[j].data[i];
      sup = std::max(sup, sobolev_norm(Delta[j], cfg.s, cfg.m));
    }
    res.increment_norms.push_back(sup);
    if (keep_iterates) res.iterates.push_back(snapshot(A));
    if (iter > 0) {
      const double prev = res.increment_norms[iter - 1];
      const double r = prev == 0.0 ? 0.0 : sup / prev;
      res.contraction.push_back(r);
      bad_streak = r > 1.0 ? bad_streak + 1 : 0;
      if (bad_streak >= 2) res.diverged = true;
    }
  }
  res.final_traj = snapshot(A);
  return res;
}

HalfWavePair split_halfwaves(const SpinorField& psi, double m) {
  SpinorField g = transform(psi, Representation::fourier);
  HalfWavePair pair{make_field(g.grid, Representation::fourier),
                    make_field(g.grid, Representation::fourier)};
  for_each_mode(g.grid, [&](const Vec3& xi, std::size_t idx) {
    const double b = std::sqrt(m * m + xi.squaredNorm());
    Complex v[4] = {g.at(0, idx), g.at(1, idx), g.at(2, idx), g.at(3, idx)};
    if (b == 0.0) {
      // Degenerate zero mode (m = 0): whole mode to the plus part.
      for (int c = 0; c < 4; ++c) pair.plus.at(c, idx) = v[c];
      return;
    }
    Complex dv[4];
    dirac_apply(xi, m, v, dv);
    for (int c = 0; c < 4; ++c) {
      pair.plus.at(c, idx) = 0.5 * (v[c] + dv[c] / b);
      pair.minus.at(c, idx) = 0.5 * (v[c] - dv[c] / b);
    }
  });
  transform_in_place(pair.plus, psi.repr);
  transform_in_place(pair.minus, psi.repr);
  return pair;
}

ScatteringReport scattering_profile(const Trajectory& traj,
                                    const EvolutionConfig& cfg) {
  ScatteringReport rep;
  if (traj.times.empty())
    throw std::invalid_argument("scattering_profile: empty trajectory");
  rep.times = traj.times;
  SpinorField prev_p, prev_m;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    HalfWavePair hw = split_halfwaves(traj.fields[j], cfg.m);
    // Undo the free phases: phi_± = e^{±i t <D>} psi_±.
    SpinorField pp = halfwave_phase(hw.plus, Sign::plus, -t, cfg.m);
    SpinorField pm = halfwave_phase(hw.minus, Sign::minus, -t, cfg.m);
    if (j > 0) {
      SpinorField dp = pp, dm = pm;
      for (std::size_t i = 0; i < dp.data.size(); ++i) {
        dp.data[i] -= prev_p.data[i];
        dm.data[i] -= prev_m.data[i];
      }
      rep.gap_plus.push_back(sobolev_norm(dp, cfg.s, cfg.m));
      rep.gap_minus.push_back(sobolev_norm(dm, cfg.s, cfg.m));
    }
    prev_p = std::move(pp);
    prev_m = std::move(pm);
  }
  rep.profile_plus = prev_p;
  rep.profile_minus = prev_m;
  bool dec = rep.gap_plus.size() >= 2;
  for (std::size_t j = 0; j + 1 < rep.gap_plus.size(); ++j)
    if (rep.gap_plus[j + 1] >= rep.gap_plus[j] ||
        rep.gap_minus[j + 1] >= rep.gap_minus[j])
      dec = false;
  rep.verdict = dec ? "decaying" : "inconclusive";
  return rep;
}

}  // namespace spinorlab
