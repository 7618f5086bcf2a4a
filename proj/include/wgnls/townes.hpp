#pragma once

#include <vector>

#include "wgnls/field.hpp"

namespace wgnls {

/// Uniformly sampled radial profile on [0, r_max].
struct RadialProfile {
  double dr = 0.0;
  double r_max = 0.0;
  std::vector<double> values;

  double q0() const { return values.front(); }
  /// Linear interpolation; zero beyond r_max.
  double at(double r) const;
  /// 2pi int_0^rmax Q(r)^2 r dr (composite Simpson).
  double mass() const;
};

struct TownesOptions {
  int max_iter = 4000;
  double initial_amplitude = 2.2;  ///< guess is A exp(-r^2/2)
};

struct TownesResult {
  Field2 q;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

/// ||-Delta Q + Q - Q^3||_2 / ||Q||_2 with a spectral Laplacian.
double townes_residual(const Field2& q);

/// Petviashvili/spectral-renormalization iteration for -Delta Q + Q = Q^3.
/// tol must lie in [1e-12, 1e-4]. Throws ConvergenceError on stall and
/// Error(Convergence) if the iterate loses positivity.
TownesResult solve_townes_spectral(const Grid2& grid, double tol, const TownesOptions& opts = {});

struct ShootingOptions {
  double dr = 1e-4;
  double r_max = 20.0;
  double q0_lo = 0.1;
  double q0_hi = 10.0;
  /// Largest radius taken from the integrated separatrix; beyond it the
  /// profile continues as the decaying linear solution K0(r).
  double match_radius = 12.0;
};

enum class ShotOutcome {
  Undershoot,  ///< Q turns back before reaching zero
  Overshoot,   ///< Q crosses zero
};

/// Integrates Q'' + Q'/r - Q + Q^3 = 0 from Q(0)=q0, Q'(0)=0 with RK4.
ShotOutcome classify_shot(double q0, const ShootingOptions& opts = {});

/// Bisection on Q(0) between an undershoot and an overshoot until the
/// bracket width drops below tol (or the bracket collapses to adjacent doubles).
RadialProfile solve_townes_shooting(double tol, const ShootingOptions& opts = {});

/// Evaluates a radial profile at the grid points of a 2D box.
Field2 sample_on_grid(const RadialProfile& profile, const Grid2& grid);

struct PohozaevRatios {
  double grad_to_mass = 0.0;  ///< ||grad Q||^2 / ||Q||^2
  double l4_to_mass = 0.0;    ///< ||Q||_4^4 / (2 ||Q||^2)
};

PohozaevRatios pohozaev_check(const Field2& q);

/// ||u||_2^2 ||grad u||_2^2 / ||u||_4^4. Throws Error(Domain) if ||u||_4 = 0.
double gn_quotient_cubic(const Field2& u);

}  // namespace wgnls
