#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "wgnls/field.hpp"

namespace wgnls {

/// Which value of the (unknown) optimal constant c* feeds the thresholds.
enum class CChoice {
  Upper,      ///< the provable bound; conservative thresholds
  Empirical,  ///< largest constant demanded by sampled fields; aggressive
};

std::string to_string(CChoice choice);
CChoice parse_c_choice(const std::string& text);

/// Variational constants behind every threshold. Immutable once built.
struct GNConstants {
  double mass_Q = 0.0;        ///< M(Q_2d)
  double c_gn_2d = 0.0;       ///< sharp 2D cubic GN constant (quotient at Q)
  double c_gn_rs = 0.0;       ///< c_gn_2d / 2
  double g_hat = 0.0;         ///< sextic GN constant estimate
  double c_torus = 0.0;       ///< torus constant estimate (lower bound)
  double c_star_upper = 0.0;  ///< C_T^{1/4} G^{-1/8} (1 + (2pi)^{-1/2})^{3/4}
  double c_star_emp = 0.0;    ///< sampled lower estimate of c*
  std::map<std::string, std::string> solver_metadata;

  double c_star(CChoice choice) const {
    return choice == CChoice::Upper ? c_star_upper : c_star_emp;
  }
  /// pi * M(Q): the scattering mass threshold on R^2 x T.
  double scattering_mass() const;
  /// 2 pi * M(Q): the global well-posedness mass threshold.
  double gwp_mass() const;
};

std::string to_json(const GNConstants& c);
/// Throws Error(Config) on malformed or incomplete documents.
GNConstants constants_from_json(const std::string& text);
GNConstants load_constants(const std::string& path);
void save_constants(const GNConstants& c, const std::string& path);

// ---- sextic GN constant -------------------------------------------------

/// ||u||_2^2 ||grad u||_2^4 / ||u||_6^6.
double gn_quotient_sextic(const Field2& u);

struct SexticOptions {
  Grid2 grid{256, 20.0};
  int max_iter = 2000;
  double step = 1.0;        ///< relaxation of the preconditioned descent
  double initial_width = 1.0;
};

struct SexticResult {
  double value = 0.0;
  Field2 minimizer;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Preconditioned descent on the sextic quotient started from a Gaussian.
/// The mass is re-fixed every step and the dilation scale is pinned by the
/// preconditioner, so the iterate converges to the scale-one critical point.
/// Stops when the step orthogonal to the current iterate is below tol.
SexticResult gn_constant_sextic_estimate(double tol, const SexticOptions& opts = {});

// ---- torus constant -----------------------------------------------------

/// ||u||_4^4 / (||u||_2^3 ||u'||_2) for a real mean-zero trigonometric
/// polynomial u = sum_{k>=1} a_k cos ky + b_k sin ky on [0, 2pi).
double torus_quotient(const std::vector<double>& cos_coeffs, const std::vector<double>& sin_coeffs);

struct TorusOptions {
  int restarts = 2;        ///< random starts per mode count, on top of the warm start
  int max_iter = 1500;
  std::uint64_t seed = 7;
};

/// Best quotient found over polynomials with at most n_modes modes. Modes are
/// added one at a time from n = 1, each level warm-started from the previous
/// optimum, so the result is nondecreasing in n_modes for a fixed seed.
double torus_constant_estimate(int n_modes, double tol, const TorusOptions& opts = {});

/// 1/sqrt(3), the sharp constant of ||u||_4^4 <= C ||u||_2^3 ||u'||_2 on the
/// line (attained by sech). Rescaled bumps minus their mean approach it on
/// the torus, so it bounds the torus constant from below; the polynomial
/// ascent creeps up to it only as the bumps get resolved.
double torus_concentration_bound();

// ---- mixed GN inequality on R^2 x T --------------------------------------

/// Pieces of ||u||_4 <= ||grad_x u||^{1/2} (a ||u||^{1/2} + c ||u||^{1/4} ||grad_y u||^{1/4})
/// with a = (pi M(Q))^{-1/4}: second = c * second_per_c.
struct MixedGnParts {
  double lhs = 0.0;
  double first = 0.0;
  double second_per_c = 0.0;

  double residual(double c) const { return first + c * second_per_c - lhs; }
  /// Smallest c >= 0 for which the inequality holds; +inf if no c works.
  double required_c() const;
};

MixedGnParts mixed_gn_parts(const Field3& u, double mass_Q);

/// C_T^{1/4} G^{-1/8} (1 + (2pi)^{-1/2})^{3/4}.
double c_star_upper_bound(double c_torus, double g_hat);

struct CStarSampling {
  Grid3 grid{64, 24.0, 16};
  std::uint64_t seed = 11;
  const Field2* townes = nullptr;  ///< optional Q on grid.xgrid() for Q(x)phi(y) samples
};

/// (c_star_upper, c_star_emp). Needs mass_Q, g_hat and c_torus filled in.
std::pair<double, double> c_star_bounds(const GNConstants& partial, int n_samples,
                                        const CStarSampling& sampling = {});

/// Random smooth test field used by the c* sampler and the gn-test command.
Field3 random_test_field(const Grid3& grid, std::uint64_t seed, const Field2* townes = nullptr);

// ---- full pipeline -------------------------------------------------------

struct ConstantsOptions {
  Grid2 townes_grid{128, 32.0};
  double townes_tol = 1e-11;
  double shooting_tol = 1e-15;
  SexticOptions sextic{};
  double sextic_tol = 1e-10;
  int torus_modes = 32;
  double torus_tol = 1e-12;
  int c_star_samples = 200;
  std::uint64_t seed = 11;
};

GNConstants compute_constants(const ConstantsOptions& opts = {});

}  // namespace wgnls
