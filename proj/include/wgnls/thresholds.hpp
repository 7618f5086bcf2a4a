#pragma once

#include <array>
#include <string>

#include "wgnls/constants.hpp"
#include "wgnls/field.hpp"

namespace wgnls {

/// Conserved and derived scalars of one field.
struct Diagnostics {
  double mass = 0.0;
  double energy = 0.0;
  std::array<double, 3> momentum{};  ///< (x1, x2, y)
  double grad_x_sq = 0.0;
  double grad_y_sq = 0.0;
  double l4_pow = 0.0;               ///< ||U||_4^4
  double h_star = 0.0;               ///< 1/2 ||grad_x U||^2 - 1/4 ||U||_4^4
  double kappa = 0.0;                ///< Gamma(mass) - grad_y_sq; +inf at zero mass, NaN above 2 pi M(Q)
};

Diagnostics diagnostics(const Field3& u, const GNConstants& consts, CChoice choice = CChoice::Upper);

/// c^{-8} m^{-1} (2^{1/4} - (pi M(Q))^{-1/4} m^{1/4})^8 on (0, 2 pi M(Q)].
/// Throws Error(Domain) outside that interval.
double gamma(double m, const GNConstants& consts, CChoice choice = CChoice::Upper);

/// 2 - ((pi M(Q))^{-1/4} m^{1/4} + c m^{1/8} g^{1/8})^4; Gamma(m) is its root in g.
double xi_function(double g, double m, const GNConstants& consts, CChoice choice = CChoice::Upper);

/// Mass-energy functional: h + c/(pi M(Q) - c) + h/(Gamma(c)/2 - h) on
/// {0 < c < pi M(Q), h < Gamma(c)/2}, equal to h at c = 0, +inf elsewhere.
/// The c < 0 half-plane of the defining domain carries no field data and
/// throws Error(Domain).
double mei(double c, double h, const GNConstants& consts, CChoice choice = CChoice::Upper);

enum class Regime { Scattering, Gwp, Outside };

std::string to_string(Regime r);

struct ThresholdReport {
  Diagnostics diagnostics;
  CChoice c_choice = CChoice::Upper;
  double c_star = 0.0;
  double gamma = 0.0;            ///< Gamma(mass), +inf at zero mass, NaN above the domain
  bool mass_below_scattering = false;  ///< 0 < M < pi M(Q)
  bool energy_below = false;           ///< H < Gamma/2
  bool grad_y_below = false;           ///< ||grad_y U||^2 < Gamma
  bool mass_below_gwp = false;         ///< 0 < M < 2 pi M(Q)
  Regime classification = Regime::Outside;
  double mei = 0.0;
};

ThresholdReport classify(const Field3& u0, const GNConstants& consts, CChoice choice = CChoice::Upper);

std::string to_json(const ThresholdReport& report);

struct TrapReport {
  double xi = 0.0;                 ///< Xi(||grad_y U||^2)
  bool mass_condition = false;     ///< M <= (1 - beta) 2 pi M(Q)
  bool energy_condition = false;   ///< H <= (1 - beta) Gamma / 2
  bool applicable = false;         ///< xi > 0 and H, H* > 0
  double grad_ratio = 0.0;         ///< ||grad U||^2 / H
  double grad_x_ratio = 0.0;       ///< ||grad_x U||^2 / H*
  double grad_ratio_bound = 0.0;   ///< max(2, 4/xi), implied by the trapping inequality
  double grad_x_ratio_bound = 0.0; ///< 4/xi
};

TrapReport energy_trap(const Field3& u, const GNConstants& consts, CChoice choice, double beta);

/// Right side minus left side of the mixed GN inequality with c = c*(choice).
double check_gn_r2t1(const Field3& u, const GNConstants& consts, CChoice choice = CChoice::Upper);

}  // namespace wgnls
