#include "spinorlab/multiplier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spinorlab {

namespace {

double smooth_step_raw(double u) {  // exp(-1/u) for u>0
  return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

// C^inf monotone step: 0 for u<=0, 1 for u>=1.
double smooth_step(double u) {
  const double a = smooth_step_raw(u);
  const double b = smooth_step_raw(1.0 - u);
  return a / (a + b);
}

}  // namespace

double mollifier_rho(double s) {
  const double x = std::abs(s);
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  return smooth_step(2.0 - x);
}

double eta_bump(double u) {
  const double x = std::abs(u);
  if (x <= 1.0 / 3.0) return 1.0;
  if (x >= 2.0 / 3.0) return 0.0;
  return smooth_step(2.0 - 3.0 * x);
}

double dyadic_phi(int k, double r) {
  const double t = std::ldexp(r, -k);
  return mollifier_rho(t) - mollifier_rho(2.0 * t);
}

double dyadic_phi_le(int k, double r) { return mollifier_rho(std::ldexp(r, -k)); }

double dyadic_phi_tilde(int k, double r) {
  return dyadic_phi(k - 1, r) + dyadic_phi(k, r) + dyadic_phi(k + 1, r);
}

double mass_dyadic_phi(int k, double m, double r) {
  if (m <= 0.0) return dyadic_phi(k, r);
  if (k < 0) return 0.0;
  if (k == 0) return dyadic_phi_le(0, r);
  return dyadic_phi(k, r);
}

namespace {

struct IcoMesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh base_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh m;
  const double v[12][3] = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) m.verts.push_back(Vec3(p[0], p[1], p[2]).normalized());
  m.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

IcoMesh subdivide(const IcoMesh& in) {
  IcoMesh out;
  out.verts = in.verts;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = int(out.verts.size());
    out.verts.push_back((in.verts[a] + in.verts[b]).normalized());
    midpoint[key] = idx;
    return idx;
  };
  for (const auto& f : in.faces) {
    const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
    out.faces.push_back({f[0], a, c});
    out.faces.push_back({f[1], b, a});
    out.faces.push_back({f[2], c, b});
    out.faces.push_back({a, b, c});
  }
  return out;
}

}  // namespace

const CapSet& cap_set(int l) {
  if (l < 1 || l > 9)
    throw std::invalid_argument("cap_set: l must be in [1, 9]");
  static std::mutex mu;
  static std::map<int, CapSet> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(l);
  if (it != cache.end()) return it->second;
  IcoMesh mesh = base_icosahedron();
  for (int i = 0; i < l; ++i) mesh = subdivide(mesh);
  CapSet cs;
  cs.l = l;
  cs.dirs = std::move(mesh.verts);
  return cache.emplace(l, std::move(cs)).first->second;
}

namespace {

double cap_rho(int l, const Vec3& dir, const Vec3& center) {
  return mollifier_rho(std::ldexp((dir - center).norm(), l));
}

}  // namespace

double angular_kappa(int l, int nu, const Vec3& xi) {
  const CapSet& cs = cap_set(l);
  if (nu < 0 || nu >= int(cs.dirs.size()))
    throw std::invalid_argument("angular_kappa: cap index out of range");
  const double r = xi.norm();
  if (r == 0.0) return 0.0;
  const Vec3 d = xi / r;
  const double num = cap_rho(l, d, cs.dirs[nu]);
  if (num == 0.0) return 0.0;
  const double reach = 2.0 * std::ldexp(1.0, -l);
  double den = 0.0;
  for (const Vec3& c : cs.dirs) {
    if ((d - c).squaredNorm() >= reach * reach) continue;
    den += cap_rho(l, d, c);
  }
  return num / den;
}

double angular_kappa_tilde(int l, int nu, const Vec3& xi) {
  const CapSet& cs = cap_set(l);
  if (nu < 0 || nu >= int(cs.dirs.size()))
    throw std::invalid_argument("angular_kappa_tilde: cap index out of range");
  const double r = xi.norm();
  if (r == 0.0) return 0.0;
  // 1 on the doubled cone supporting kappa_l^nu.
  return mollifier_rho(std::ldexp((xi / r - cs.dirs[nu]).norm(), l - 1));
}

double cube_gamma(int kprime, const std::array<int, 3>& q, const Vec3& xi) {
  const double h = std::ldexp(1.0, kprime);
  double v = 1.0;
  for (int i = 0; i < 3; ++i) v *= eta_bump(xi[i] / h - q[i]);
  return v;
}

double cube_gamma_tilde(int kprime, const std::array<int, 3>& q, const Vec3& xi) {
  const double h = std::ldexp(1.0, kprime);
  double v = 1.0;
  for (int i = 0; i < 3; ++i) v *= mollifier_rho(1.5 * (xi[i] / h - q[i]));
  return v;
}

std::vector<std::array<int, 3>> cubes_in_band(int kprime, const BoxGrid& grid) {
  const double h = std::ldexp(1.0, kprime);
  const int qmax = int(std::floor(grid.band_limit() / h + 1.0));
  std::vector<std::array<int, 3>> out;
  for (int a = -qmax; a <= qmax; ++a)
    for (int b = -qmax; b <= qmax; ++b)
      for (int c = -qmax; c <= qmax; ++c) out.push_back({a, b, c});
  return out;
}

double multiplier_symbol(const MultiplierSpec& spec, const Vec3& xi) {
  using Kind = MultiplierSpec::Kind;
  switch (spec.kind) {
    case Kind::dyadic:
      return dyadic_phi(spec.k, xi.norm());
    case Kind::cumulative:
      return dyadic_phi_le(spec.k, xi.norm());
    case Kind::tilde_dyadic:
      return dyadic_phi_tilde(spec.k, xi.norm());
    case Kind::mass_dyadic:
      if (spec.m > 0.0 && spec.k < 0)
        throw std::invalid_argument("multiplier_symbol: P_k^m needs k >= 0 for m > 0");
      return mass_dyadic_phi(spec.k, spec.m, xi.norm());
    case Kind::angular:
      return angular_kappa(spec.l, spec.nu, xi);
    case Kind::cube:
      return cube_gamma(spec.k, spec.cube_q, xi);
  }
  throw std::logic_error("multiplier_symbol: bad kind");
}

SpinorField apply_multiplier(const MultiplierSpec& spec, const SpinorField& f) {
  using Kind = MultiplierSpec::Kind;
  const BoxGrid& grid = f.grid;
  // Aliasing guard for the radial specs: the annulus must fit the band.
  int guard_k = -1;
  if (spec.kind == Kind::dyadic || spec.kind == Kind::mass_dyadic)
    guard_k = spec.k;
  else if (spec.kind == Kind::tilde_dyadic)
    guard_k = spec.k + 1;
  else if (spec.kind == Kind::cumulative)
    guard_k = spec.k;
  if (guard_k >= 0 && !grid.shell_in_band(guard_k))
    throw std::invalid_argument("apply_multiplier: spec support exceeds grid band");

  const Representation orig = f.repr;
  SpinorField g = transform(f, Representation::fourier);
  for (int ix = 0; ix < grid.n; ++ix)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int iz = 0; iz < grid.n; ++iz) {
        const double s = multiplier_symbol(spec, grid.frequency(ix, iy, iz));
        const std::size_t idx = grid.flat(ix, iy, iz);
        for (int c = 0; c < 4; ++c) g.at(c, idx) *= s;
      }
  transform_in_place(g, orig);
  return g;
}

}  // namespace spinorlab
