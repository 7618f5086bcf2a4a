#include "wgnls/datum.hpp"

#include <cmath>
#include <numbers>

#include "wgnls/error.hpp"
#include "wgnls/io.hpp"
#include "wgnls/thresholds.hpp"
#include "wgnls/townes.hpp"

namespace wgnls {

using std::numbers::pi;

const RadialProfile& townes_profile() {
  static const RadialProfile profile = solve_townes_shooting(1e-15);
  return profile;
}

Field3 make_gaussian(const Grid3& g, double amplitude, double width, double y_modulation, int y_mode) {
  g.validate();
  if (!(width > 0.0)) throw Error(ErrorKind::Domain, "Gaussian width must be > 0");
  Field3 u(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j);
      const double base = amplitude * std::exp(-0.5 * r2 / (width * width));
      for (int l = 0; l < g.n_y; ++l) u(i, j, l) = base * (1.0 + y_modulation * std::cos(y_mode * g.y(l)));
    }
  return u;
}

Field3 make_townes(const Grid3& g, double amplitude, double width) {
  g.validate();
  if (!(width > 0.0)) throw Error(ErrorKind::Domain, "Townes width must be > 0");
  const auto& q = townes_profile();
  Field3 u(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double v = amplitude * q.at(std::hypot(g.x(i), g.x(j)) / width) / width;
      for (int l = 0; l < g.n_y; ++l) u(i, j, l) = v;
    }
  return u;
}

Field3 make_two_mode(const Grid3& g, double a0, double a1, double width, int y_mode) {
  g.validate();
  Field3 u(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j);
      const double base = std::exp(-0.5 * r2 / (width * width));
      for (int l = 0; l < g.n_y; ++l) u(i, j, l) = base * (a0 + a1 * std::polar(1.0, y_mode * g.y(l)));
    }
  return u;
}

Field3 make_wide_gwp(int n_x, int n_y, double mass, double energy) {
  // For U = A exp(-r^2/(2s^2)) constant in y:
  //   M = 2 pi^2 A^2 s^2,  H = 2 pi^2 A^2 (1/2 - M / (16 pi^2)).
  const double bracket = 0.5 - mass / (16.0 * pi * pi);
  if (!(mass > 0.0) || !(energy > 0.0) || !(bracket > 0.0)) {
    throw Error(ErrorKind::Domain, "wide Gaussian needs 0 < mass < 8 pi^2 and energy > 0");
  }
  const double a2 = energy / (2.0 * pi * pi * bracket);
  const double s = std::sqrt(mass / (2.0 * pi * pi * a2));
  return make_gaussian(Grid3{n_x, 20.0 * s, n_y}, std::sqrt(a2), s);
}

Field3 build_datum(const DatumSpec& datum, const Grid3& grid, const GNConstants& consts, CChoice choice) {
  if (datum.kind == "gaussian") return make_gaussian(grid, datum.amplitude, datum.width, datum.y_modulation, datum.y_mode);
  if (datum.kind == "townes") return make_townes(grid, datum.amplitude, datum.width);
  if (datum.kind == "two_mode") return make_two_mode(grid, datum.a0, datum.a1, datum.width, datum.y_mode);
  if (datum.kind == "wide_gwp") {
    const double mass = datum.mass_fraction * consts.scattering_mass();
    if (!(mass < consts.gwp_mass())) {
      throw Error(ErrorKind::Domain, "wide_gwp needs mass_fraction < 2 (its energy is set from Gamma)");
    }
    const double energy = datum.energy_fraction * 0.5 * gamma(mass, consts, choice);
    return make_wide_gwp(grid.n_x, grid.n_y, mass, energy);
  }
  if (datum.kind == "snapshot") {
    if (datum.path.empty()) throw Error(ErrorKind::Config, "datum kind 'snapshot' needs a path");
    return read_snapshot(datum.path).field;
  }
  throw Error(ErrorKind::Config, "unknown datum kind '" + datum.kind + "' (gaussian, townes, two_mode, wide_gwp, snapshot)");
}

}  // namespace wgnls
