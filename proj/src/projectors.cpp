#include "wgnls/projectors.hpp"

#include <cmath>

#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"

namespace wgnls {

double lp_bump(double r) noexcept {
  constexpr double kOuter = 1.1;
  if (r <= 1.0) return 1.0;
  if (r >= kOuter) return 0.0;
  const double s = (r - 1.0) / (kOuter - 1.0);
  // smoothstep 10s^3 - 15s^4 + 6s^5 has vanishing first and second derivatives at both ends
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace {

double multiplier(double xi_abs, double N, LpMode mode) {
  const double low = lp_bump(xi_abs / N);
  switch (mode) {
    case LpMode::Leq: return low;
    case LpMode::Band: return low - lp_bump(2.0 * xi_abs / N);
    case LpMode::Gt: return 1.0 - low;
  }
  return 0.0;
}

void require_positive(double N) {
  if (!(N > 0.0)) throw Error(ErrorKind::Domain, "Littlewood-Paley scale N must be positive");
}

}  // namespace

Field3 lp_project(const Field3& f, double N, LpMode mode) {
  require_positive(N);
  auto s = to_spectral(f);
  const auto& g = s.grid;
  for (int i = 0; i < g.n_x; ++i) {
    for (int j = 0; j < g.n_x; ++j) {
      const double m = multiplier(std::hypot(g.xi(i), g.xi(j)), N, mode);
      const std::size_t base = (static_cast<std::size_t>(i) * g.n_x + j) * g.n_y;
      for (int l = 0; l < g.n_y; ++l) s.coeffs[base + l] *= m;
    }
  }
  return from_spectral(s);
}

Field2 lp_project(const Field2& f, double N, LpMode mode) {
  require_positive(N);
  auto s = to_spectral(f);
  const auto& g = s.grid;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j)
      s.coeffs[static_cast<std::size_t>(i) * g.n_x + j] *=
          multiplier(std::hypot(g.xi(i), g.xi(j)), N, mode);
  return from_spectral(s);
}

MeanSplit y_mean_split(const Field3& f) {
  f.check_shape();
  const auto& g = f.grid;
  MeanSplit out{Field3(g), Field3(g)};
  const std::size_t planes = g.plane_size();
  for (std::size_t p = 0; p < planes; ++p) {
    const std::size_t base = p * g.n_y;
    cplx mean{0.0, 0.0};
    for (int l = 0; l < g.n_y; ++l) mean += f.values[base + l];
    mean /= static_cast<double>(g.n_y);
    for (int l = 0; l < g.n_y; ++l) {
      out.mean.values[base + l] = mean;
      out.fluct.values[base + l] = f.values[base + l] - mean;
    }
  }
  return out;
}

}  // namespace wgnls
