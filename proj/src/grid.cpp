#include "spinorlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spinorlab {

namespace {

// Cached in-place c2c plans, one pair per grid size. FFTW_ESTIMATE keeps the
// chosen algorithm independent of runtime timings, so results are
// reproducible bit for bit.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(std::size_t(n) * n * n);
    fftw_plan p = fftw_plan_dft_3d(n, n, n, buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans_[key] = p;
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void raw_dft(Complex* a, int n, int sign) {
  fftw_plan p = PlanCache::instance().get(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(a),
                   reinterpret_cast<fftw_complex*>(a));
}

void scale(Complex* a, std::size_t count, double s) {
  for (std::size_t i = 0; i < count; ++i) a[i] *= s;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

bool BoxGrid::shell_in_band(int k) const {
  return std::ldexp(1.0, k + 1) < band_limit();
}

BoxGrid make_grid(int n, double length) {
  if (!is_power_of_two(n) || n < 8)
    throw std::invalid_argument("make_grid: n must be a power of two >= 8");
  if (!(length > 0.0))
    throw std::invalid_argument("make_grid: length must be positive");
  return BoxGrid{n, length};
}

SpinorField make_field(const BoxGrid& grid, Representation repr) {
  SpinorField f;
  f.grid = grid;
  f.repr = repr;
  f.data.assign(4 * grid.size(), Complex(0, 0));
  return f;
}

void scalar_to_fourier(std::vector<Complex>& a, const BoxGrid& grid) {
  raw_dft(a.data(), grid.n, FFTW_FORWARD);
  // c(xi) = L^{3/2}/n^3 * sum_x psi(x) e^{-i xi.x}; makes the map unitary
  // from the Riemann-sum L^2 to plain l^2.
  scale(a.data(), grid.size(), std::pow(grid.length, 1.5) / double(grid.size()));
}

void scalar_to_physical(std::vector<Complex>& a, const BoxGrid& grid) {
  raw_dft(a.data(), grid.n, FFTW_BACKWARD);
  scale(a.data(), grid.size(), std::pow(grid.length, -1.5));
}

void transform_in_place(SpinorField& f, Representation target) {
  if (f.repr == target) return;
  const int n = f.grid.n;
  const std::size_t N = f.grid.size();
  if (target == Representation::fourier) {
    const double s = std::pow(f.grid.length, 1.5) / double(N);
    for (int c = 0; c < 4; ++c) {
      raw_dft(f.component(c), n, FFTW_FORWARD);
      scale(f.component(c), N, s);
    }
  } else {
    const double s = std::pow(f.grid.length, -1.5);
    for (int c = 0; c < 4; ++c) {
      raw_dft(f.component(c), n, FFTW_BACKWARD);
      scale(f.component(c), N, s);
    }
  }
  f.repr = target;
}

SpinorField transform(const SpinorField& f, Representation target) {
  SpinorField out = f;
  transform_in_place(out, target);
  return out;
}

double l2_norm(const SpinorField& f) {
  double s = 0.0;
  for (const Complex& v : f.data) s += std::norm(v);
  if (f.repr == Representation::physical) s *= f.grid.cell_volume();
  return std::sqrt(s);
}

double lq_norm(const SpinorField& f, double q) {
  if (f.repr != Representation::physical)
    throw std::invalid_argument("lq_norm: physical representation required");
  const std::size_t N = f.grid.size();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double p = 0.0;
      for (int c = 0; c < 4; ++c) p += std::norm(f.at(c, i));
      m = std::max(m, p);
    }
    return std::sqrt(m);
  }
  if (q < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double p = 0.0;
    for (int c = 0; c < 4; ++c) p += std::norm(f.at(c, i));
    s += std::pow(p, 0.5 * q);
  }
  return std::pow(s * f.grid.cell_volume(), 1.0 / q);
}

double sobolev_norm(const SpinorField& f, double s, double m) {
  SpinorField g = transform(f, Representation::fourier);
  const BoxGrid& grid = g.grid;
  double total = 0.0;
  double zero_mode = 0.0;
  for (int ix = 0; ix < grid.n; ++ix)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int iz = 0; iz < grid.n; ++iz) {
        const std::size_t idx = grid.flat(ix, iy, iz);
        double a2 = 0.0;
        for (int c = 0; c < 4; ++c) a2 += std::norm(g.at(c, idx));
        const double r = grid.frequency(ix, iy, iz).norm();
        if (r == 0.0 && m == 0.0) {
          zero_mode += a2;
          continue;  // weight 0 in the homogeneous norm
        }
        const double w = (m > 0.0) ? std::sqrt(m * m + r * r) : r;
        total += std::pow(w, 2.0 * s) * a2;
      }
  if (m == 0.0 && s < 0.0) {
    const double l2 = l2_norm(g);
    if (std::sqrt(zero_mode) > 1e-13 * std::max(l2, 1e-300) && zero_mode > 0.0)
      throw std::domain_error(
          "sobolev_norm: homogeneous norm with s<0 needs vanishing zero mode");
  }
  return std::sqrt(total);
}

double mixed_norm(const Trajectory& traj, double p, double q) {
  const std::size_t nt = traj.times.size();
  if (nt == 0 || traj.fields.size() != nt)
    throw std::invalid_argument("mixed_norm: empty or inconsistent trajectory");
  if (std::isinf(p) || nt == 1) {
    double m = 0.0;
    for (const auto& f : traj.fields) m = std::max(m, lq_norm(f, q));
    return m;
  }
  if (p < 1.0) throw std::invalid_argument("mixed_norm: p must be >= 1");
  const double dt = traj.times[1] - traj.times[0];
  double s = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    const double w = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
    s += w * dt * std::pow(lq_norm(traj.fields[j], q), p);
  }
  return std::pow(s, 1.0 / p);
}

namespace {
constexpr std::uint32_t kMagic = 0x53504e46;  // "SPNF"
}

void save_field(const SpinorField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  const std::uint32_t n = f.grid.n;
  const double L = f.grid.length;
  const std::uint32_t repr = f.repr == Representation::fourier ? 1 : 0;
  const std::uint32_t ncomp = 4;
  out.write(reinterpret_cast<const char*>(&kMagic), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&L), 8);
  out.write(reinterpret_cast<const char*>(&repr), 4);
  out.write(reinterpret_cast<const char*>(&ncomp), 4);
  std::vector<float> buf(2 * f.data.size());
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    buf[2 * i] = float(f.data[i].real());
    buf[2 * i + 1] = float(f.data[i].imag());
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size() * sizeof(float)));
}

SpinorField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  std::uint32_t magic = 0, n = 0, repr = 0, ncomp = 0;
  double L = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&L), 8);
  in.read(reinterpret_cast<char*>(&repr), 4);
  in.read(reinterpret_cast<char*>(&ncomp), 4);
  if (!in || magic != kMagic || ncomp != 4)
    throw std::runtime_error("load_field: bad header in " + path);
  SpinorField f = make_field(make_grid(int(n), L),
                             repr ? Representation::fourier
                                  : Representation::physical);
  std::vector<float> buf(2 * f.data.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          std::streamsize(buf.size() * sizeof(float)));
  if (!in) throw std::runtime_error("load_field: truncated body in " + path);
  for (std::size_t i = 0; i < f.data.size(); ++i)
    f.data[i] = Complex(buf[2 * i], buf[2 * i + 1]);
  return f;
}

}  // namespace spinorlab
