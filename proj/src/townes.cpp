#include "wgnls/townes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"

namespace wgnls {

double RadialProfile::at(double r) const {
  if (r < 0.0) r = -r;
  if (r >= r_max || values.empty()) return 0.0;
  const double s = r / dr;
  const auto i = static_cast<std::size_t>(s);
  if (i + 1 >= values.size()) return values.back();
  const double f = s - static_cast<double>(i);
  return (1.0 - f) * values[i] + f * values[i + 1];
}

double RadialProfile::mass() const {
  const std::size_t intervals = values.size() - 1;
  auto integrand = [&](std::size_t i) {
    const double r = static_cast<double>(i) * dr;
    return values[i] * values[i] * r;
  };
  const std::size_t even = intervals - intervals % 2;
  double acc = 0.0;
  for (std::size_t i = 0; i < even; i += 2) {
    acc += integrand(i) + 4.0 * integrand(i + 1) + integrand(i + 2);
  }
  acc *= dr / 3.0;
  if (even < intervals) acc += 0.5 * dr * (integrand(even) + integrand(even + 1));
  return kTwoPi * acc;
}

namespace {

std::vector<double> laplace_symbol_plus_one(const Grid2& g) {
  std::vector<double> sym(g.size());
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j)
      sym[static_cast<std::size_t>(i) * g.n_x + j] = g.xi(i) * g.xi(i) + g.xi(j) * g.xi(j) + 1.0;
  return sym;
}

}  // namespace

double townes_residual(const Field2& q) {
  q.check_shape();
  const auto sym = laplace_symbol_plus_one(q.grid);
  CVector lin = q.values;
  fft_inplace(lin, q.grid, Direction::Forward);
  for (std::size_t n = 0; n < lin.size(); ++n) lin[n] *= sym[n];
  fft_inplace(lin, q.grid, Direction::Backward);
  double res = 0.0;
  double ref = 0.0;
  for (std::size_t n = 0; n < lin.size(); ++n) {
    const cplx v = q.values[n];
    res += std::norm(lin[n] - v * std::norm(v));
    ref += std::norm(v);
  }
  return ref > 0.0 ? std::sqrt(res / ref) : 0.0;
}

TownesResult solve_townes_spectral(const Grid2& grid, double tol, const TownesOptions& opts) {
  grid.validate();
  if (!(tol >= 1e-12 && tol <= 1e-4)) {
    throw Error(ErrorKind::Domain, "Townes tolerance must lie in [1e-12, 1e-4]");
  }
  const auto sym = laplace_symbol_plus_one(grid);

  TownesResult out;
  out.q = Field2(grid);
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = 0; j < grid.n_x; ++j) {
      const double r2 = grid.x(i) * grid.x(i) + grid.x(j) * grid.x(j);
      out.q(i, j) = opts.initial_amplitude * std::exp(-0.5 * r2);
    }

  CVector qhat(grid.size());
  CVector nhat(grid.size());
  double residual = townes_residual(out.q);
  for (int it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t n = 0; n < qhat.size(); ++n) {
      const double v = out.q.values[n].real();
      qhat[n] = v;
      nhat[n] = v * v * v;
    }
    fft_inplace(qhat, grid, Direction::Forward);
    fft_inplace(nhat, grid, Direction::Forward);

    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < qhat.size(); ++n) {
      num += sym[n] * std::norm(qhat[n]);
      den += (std::conj(qhat[n]) * nhat[n]).real();
    }
    if (!(den > 0.0) || !std::isfinite(num)) {
      throw ConvergenceError("Townes iteration diverged (non-positive nonlinear pairing)", residual);
    }
    // Petviashvili stabilizing factor for a cubic nonlinearity: (num/den)^(3/2)
    const double factor = std::pow(num / den, 1.5);
    for (std::size_t n = 0; n < nhat.size(); ++n) nhat[n] *= factor / sym[n];
    fft_inplace(nhat, grid, Direction::Backward);

    double peak = 0.0;
    double lowest = 0.0;
    for (std::size_t n = 0; n < nhat.size(); ++n) {
      const double v = nhat[n].real();
      out.q.values[n] = v;
      peak = std::max(peak, v);
      lowest = std::min(lowest, v);
    }
    residual = townes_residual(out.q);
    out.residual_history.push_back(residual);
    if (lowest < -1e-8 * peak) {
      throw ConvergenceError("Townes iterate developed negative values", residual);
    }
    if (residual <= tol) {
      out.iterations = it;
      out.residual = residual;
      return out;
    }
  }
  throw ConvergenceError("Townes iteration did not reach tolerance after " +
                             std::to_string(opts.max_iter) + " iterations",
                         residual);
}

namespace {

struct Shot {
  double q;
  double p;
};

Shot rhs(double r, const Shot& s) { return {s.p, s.q - s.q * s.q * s.q - s.p / r}; }

Shot rk4(double r, const Shot& s, double h) {
  const Shot k1 = rhs(r, s);
  const Shot k2 = rhs(r + 0.5 * h, {s.q + 0.5 * h * k1.q, s.p + 0.5 * h * k1.p});
  const Shot k3 = rhs(r + 0.5 * h, {s.q + 0.5 * h * k2.q, s.p + 0.5 * h * k2.p});
  const Shot k4 = rhs(r + h, {s.q + h * k3.q, s.p + h * k3.p});
  return {s.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
          s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

// Series launch past the removable singularity at r = 0.
Shot launch(double q0, double r) {
  const double a = q0 - q0 * q0 * q0;
  return {q0 + 0.25 * a * r * r, 0.5 * a * r};
}

// Integrates until an event or r_max; optionally records Q at every node.
ShotOutcome integrate(double q0, const ShootingOptions& opts, std::vector<double>* trace) {
  const auto steps = static_cast<std::size_t>(std::llround(opts.r_max / opts.dr));
  if (trace) {
    trace->assign(1, q0);
    trace->reserve(steps + 1);
  }
  Shot s = launch(q0, opts.dr);
  if (trace) trace->push_back(s.q);
  for (std::size_t i = 1; i < steps; ++i) {
    const double r = static_cast<double>(i) * opts.dr;
    s = rk4(r, s, opts.dr);
    if (s.q < 0.0) return ShotOutcome::Overshoot;
    if (s.p > 0.0) return ShotOutcome::Undershoot;
    if (trace) trace->push_back(s.q);
  }
  return ShotOutcome::Undershoot;
}

}  // namespace

ShotOutcome classify_shot(double q0, const ShootingOptions& opts) {
  return integrate(q0, opts, nullptr);
}

RadialProfile solve_townes_shooting(double tol, const ShootingOptions& opts) {
  if (!(opts.dr > 0.0) || !(opts.r_max > opts.match_radius) || !(opts.match_radius > 1.0)) {
    throw Error(ErrorKind::Domain, "invalid shooting options");
  }
  double lo = opts.q0_lo;
  double hi = opts.q0_hi;
  if (classify_shot(lo, opts) != ShotOutcome::Undershoot ||
      classify_shot(hi, opts) != ShotOutcome::Overshoot) {
    throw Error(ErrorKind::Convergence, "no undershoot/overshoot bracket for Q(0) in [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (classify_shot(mid, opts) == ShotOutcome::Undershoot) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  std::vector<double> below;
  std::vector<double> above;
  integrate(lo, opts, &below);
  integrate(hi, opts, &above);

  // The two bracket trajectories agree on the separatrix until round-off
  // growth (~e^r) pulls them apart; keep one unit of radius of margin.
  const std::size_t common = std::min(below.size(), above.size());
  std::size_t split = common;
  for (std::size_t i = 0; i < common; ++i) {
    if (std::abs(below[i] - above[i]) > 1e-6 * std::abs(below[i])) {
      split = i;
      break;
    }
  }
  const double r_split = static_cast<double>(split) * opts.dr - 1.0;
  const double r_match = std::min(opts.match_radius, r_split);
  if (r_match < 4.0) {
    throw Error(ErrorKind::Convergence, "shooting separatrix lost before r = 4");
  }
  const auto i_match = static_cast<std::size_t>(std::llround(r_match / opts.dr));
  const auto n_nodes = static_cast<std::size_t>(std::llround(opts.r_max / opts.dr)) + 1;

  RadialProfile out;
  out.dr = opts.dr;
  out.r_max = opts.r_max;
  out.values.assign(below.begin(), below.begin() + static_cast<std::ptrdiff_t>(i_match) + 1);
  const double anchor = out.values.back() / std::cyl_bessel_k(0.0, r_match);
  for (std::size_t i = i_match + 1; i < n_nodes; ++i) {
    out.values.push_back(anchor * std::cyl_bessel_k(0.0, static_cast<double>(i) * opts.dr));
  }
  return out;
}

Field2 sample_on_grid(const RadialProfile& profile, const Grid2& grid) {
  grid.validate();
  Field2 f(grid);
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = 0; j < grid.n_x; ++j) f(i, j) = profile.at(std::hypot(grid.x(i), grid.x(j)));
  return f;
}

PohozaevRatios pohozaev_check(const Field2& q) {
  const auto m = quadratic_moments(q);
  if (!(m.mass > 0.0)) throw Error(ErrorKind::Domain, "Pohozaev check of a zero field");
  return {m.grad_x_sq / m.mass, lp_power(q, 4) / (2.0 * m.mass)};
}

double gn_quotient_cubic(const Field2& u) {
  const double l4 = lp_power(u, 4);
  if (!(l4 > 0.0)) throw Error(ErrorKind::Domain, "GN quotient undefined for zero L^4 norm");
  const auto m = quadratic_moments(u);
  return m.mass * m.grad_x_sq / l4;
}

}  // namespace wgnls
