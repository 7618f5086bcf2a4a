#include "wgnls/norms.hpp"

#include <cmath>

#include "wgnls/fft.hpp"

namespace wgnls {

std::string_view to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::L2: return "L2";
    case NormKind::L4: return "L4";
    case NormKind::L6: return "L6";
    case NormKind::H1x: return "H1x";
    case NormKind::H1y: return "H1y";
    case NormKind::H1xy: return "H1xy";
    case NormKind::Lx2Hy1: return "Lx2Hy1";
    case NormKind::GradX_L2: return "GradX_L2";
    case NormKind::GradY_L2: return "GradY_L2";
  }
  return "?";
}

namespace {

double sum_abs_pow(const CVector& v, int p) {
  double acc = 0.0;
  for (const auto& z : v) {
    const double a2 = std::norm(z);
    switch (p) {
      case 2: acc += a2; break;
      case 4: acc += a2 * a2; break;
      case 6: acc += a2 * a2 * a2; break;
      default: acc += std::pow(std::sqrt(a2), p);
    }
  }
  return acc;
}

template <class Field>
double norm_from_moments(const Field& f, NormKind kind) {
  switch (kind) {
    case NormKind::L4: return std::pow(lp_power(f, 4), 0.25);
    case NormKind::L6: return std::pow(lp_power(f, 6), 1.0 / 6.0);
    default: break;
  }
  const auto m = quadratic_moments(f);
  switch (kind) {
    case NormKind::L2: return std::sqrt(m.mass);
    case NormKind::H1x: return std::sqrt(m.mass + m.grad_x_sq);
    case NormKind::H1y:
    case NormKind::Lx2Hy1: return std::sqrt(m.mass + m.grad_y_sq);
    case NormKind::H1xy: return std::sqrt(m.mass + m.grad_x_sq + m.grad_y_sq);
    case NormKind::GradX_L2: return std::sqrt(m.grad_x_sq);
    case NormKind::GradY_L2: return std::sqrt(m.grad_y_sq);
    default: return 0.0;
  }
}

}  // namespace

double lp_power(const Field3& f, int p) {
  f.check_shape();
  return sum_abs_pow(f.values, p) * f.grid.cell_volume();
}

double lp_power(const Field2& f, int p) {
  f.check_shape();
  return sum_abs_pow(f.values, p) * f.grid.cell_area();
}

QuadraticMoments quadratic_moments(const Field3& f) {
  const auto s = to_spectral(f);
  const auto& g = s.grid;
  QuadraticMoments m;
  for (int i = 0; i < g.n_x; ++i) {
    const double xi1 = g.xi(i);
    for (int j = 0; j < g.n_x; ++j) {
      const double xi_sq = xi1 * xi1 + g.xi(j) * g.xi(j);
      const std::size_t base = (static_cast<std::size_t>(i) * g.n_x + j) * g.n_y;
      for (int l = 0; l < g.n_y; ++l) {
        const double a = std::norm(s.coeffs[base + l]);
        const double k = g.k(l);
        m.mass += a;
        m.grad_x_sq += xi_sq * a;
        m.grad_y_sq += k * k * a;
      }
    }
  }
  const double w = g.cell_volume();
  m.mass *= w;
  m.grad_x_sq *= w;
  m.grad_y_sq *= w;
  return m;
}

QuadraticMoments quadratic_moments(const Field2& f) {
  const auto s = to_spectral(f);
  const auto& g = s.grid;
  QuadraticMoments m;
  for (int i = 0; i < g.n_x; ++i) {
    for (int j = 0; j < g.n_x; ++j) {
      const double a = std::norm(s.coeffs[static_cast<std::size_t>(i) * g.n_x + j]);
      m.mass += a;
      m.grad_x_sq += (g.xi(i) * g.xi(i) + g.xi(j) * g.xi(j)) * a;
    }
  }
  m.mass *= g.cell_area();
  m.grad_x_sq *= g.cell_area();
  return m;
}

double norm(const Field3& f, NormKind kind) { return norm_from_moments(f, kind); }

double norm(const Field2& f, NormKind kind) { return norm_from_moments(f, kind); }

}  // namespace wgnls
