#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wgnls/error.hpp"
#include "wgnls/experiments.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"

namespace wgnls {

double virial_cutoff(double r) {
  if (r <= 1.0) return r * r;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  return 1.0 + t * (2.0 + t * (1.0 + t * (-25.0 + t * (34.0 - 13.0 * t))));
}

double virial_cutoff_derivative(double r) {
  if (r <= 1.0) return 2.0 * r;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  return 2.0 + t * (2.0 + t * (-75.0 + t * (136.0 - 65.0 * t)));
}

LocalVirial local_virial(const Field3& u, double R) {
  const Grid3& g = u.grid;
  u.check_shape();
  if (!(R > 0.0) || !(2.0 * R < 0.5 * g.box_length)) {
    throw Error(ErrorKind::Domain, "virial radius R must satisfy 0 < 2R < box_length/2");
  }
  Field3 d1 = u, d2 = u;
  {
    Field3 hat = u;
    fft_inplace(hat.values, g, Direction::Forward);
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j)
        for (int l = 0; l < g.n_y; ++l) {
          const cplx v = hat(i, j, l);
          d1(i, j, l) = cplx(0.0, g.xi(i)) * v;
          d2(i, j, l) = cplx(0.0, g.xi(j)) * v;
        }
    fft_inplace(d1.values, g, Direction::Backward);
    fft_inplace(d2.values, g, Direction::Backward);
  }
  LocalVirial out;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double x1 = g.x(i), x2 = g.x(j);
      const double r = std::hypot(x1, x2) / R;
      const double w = R * R * virial_cutoff(r);
      // R (grad chi)(x/R) = R chi'(r) x / |x|
      const double gr = r > 0.0 ? virial_cutoff_derivative(r) / r : 0.0;
      for (int l = 0; l < g.n_y; ++l) {
        const cplx v = u(i, j, l);
        out.z += w * std::norm(v);
        out.dz += gr * (x1 * (d1(i, j, l) * std::conj(v)).imag() + x2 * (d2(i, j, l) * std::conj(v)).imag());
      }
    }
  out.z *= g.cell_volume();
  out.dz *= 2.0 * g.cell_volume();
  return out;
}

double exterior_mass_fraction(const Field3& u, double R) {
  const Grid3& g = u.grid;
  double outside = 0.0, total = 0.0;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const bool ext = std::hypot(g.x(i), g.x(j)) >= R;
      for (int l = 0; l < g.n_y; ++l) {
        const double m = std::norm(u(i, j, l));
        total += m;
        if (ext) outside += m;
      }
    }
  if (total == 0.0) return 0.0;
  return outside / total;
}

double radius_for_exterior_mass(const Field3& u, double target) {
  double lo = 0.0, hi = 0.5 * std::sqrt(2.0) * u.grid.box_length;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (exterior_mass_fraction(u, mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

double VirialTrace::max_abs_residual() const {
  double m = 0.0;
  for (double r : residual)
    if (std::isfinite(r)) m = std::max(m, std::abs(r));
  return m;
}

double VirialTrace::max_relative_residual() const {
  double scale = 0.0;
  for (std::size_t n = 1; n + 1 < h_star.size(); ++n) scale = std::max(scale, 16.0 * std::abs(h_star[n]));
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  return max_abs_residual() / scale;
}

std::string VirialTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,R,z_R,dz_R,h_star,residual\n";
  for (std::size_t n = 0; n < times.size(); ++n) {
    os << times[n] << ',' << R << ',' << z[n] << ',' << dz[n] << ',' << h_star[n] << ',';
    if (std::isfinite(residual[n])) os << residual[n];
    os << '\n';
  }
  return os.str();
}

VirialTrace virial_trace(const Field3& u0, double R, const EvolveControls& controls) {
  VirialTrace tr;
  tr.R = R;
  local_virial(u0, R);  // rejects R before any stepping
  EvolveControls c = controls;
  c.snapshot_every = 1;
  auto sink = [&](const Field3& u, double t, std::size_t) {
    const LocalVirial lv = local_virial(u, R);
    const QuadraticMoments q = quadratic_moments(u);
    tr.times.push_back(t);
    tr.z.push_back(lv.z);
    tr.dz.push_back(lv.dz);
    tr.h_star.push_back(0.5 * q.grad_x_sq - 0.25 * lp_power(u, 4));
    tr.exterior_mass = std::max(tr.exterior_mass, exterior_mass_fraction(u, R));
  };
  evolve(u0, c, sink);
  const std::size_t n = tr.times.size();
  tr.residual.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = tr.times[k] - tr.times[k - 1], h1 = tr.times[k + 1] - tr.times[k];
    const double d2 = 2.0 * ((tr.z[k + 1] - tr.z[k]) / h1 - (tr.z[k] - tr.z[k - 1]) / h0) / (h0 + h1);
    tr.residual[k] = d2 - 16.0 * tr.h_star[k];
  }
  return tr;
}

}  // namespace wgnls
