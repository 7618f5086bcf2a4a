#pragma once

#include <string>

#include "wgnls/constants.hpp"
#include "wgnls/field.hpp"

namespace wgnls {

/// Recipe for an initial datum.
///   gaussian:  A exp(-|x|^2 / (2 w^2)) (1 + eps cos(m y))
///   townes:    A Q(|x| / w) / w (y-independent; A = 1, w = 1 is the ground state)
///   two_mode:  exp(-|x|^2 / (2 w^2)) (a0 + a1 e^{i m y})
///   wide_gwp:  y-independent Gaussian with mass mass_fraction * pi M(Q) and
///              energy energy_fraction * Gamma(mass) / 2; the grid box is
///              replaced by 20 widths, which is what makes the tiny energy reachable
///   snapshot:  field read from a snapshot file (grid taken from the file)
struct DatumSpec {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  double y_modulation = 0.0;
  int y_mode = 1;
  double a0 = 1.0;
  double a1 = 0.5;
  double mass_fraction = 1.5;
  double energy_fraction = 0.5;
  std::string path;
};

Field3 make_gaussian(const Grid3& grid, double amplitude, double width, double y_modulation = 0.0, int y_mode = 1);
Field3 make_townes(const Grid3& grid, double amplitude = 1.0, double width = 1.0);
Field3 make_two_mode(const Grid3& grid, double a0, double a1, double width, int y_mode = 1);
/// The width s is solved in closed form from the Gaussian integrals.
Field3 make_wide_gwp(int n_x, int n_y, double mass, double energy);

/// Throws Error(Config) for an unknown kind.
Field3 build_datum(const DatumSpec& datum, const Grid3& grid, const GNConstants& consts, CChoice choice);

/// Radial Townes profile from the shooting solver, computed once per process.
const struct RadialProfile& townes_profile();

}  // namespace wgnls
