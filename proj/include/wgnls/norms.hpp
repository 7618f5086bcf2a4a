#pragma once

#include <string_view>

#include "wgnls/field.hpp"

namespace wgnls {

enum class NormKind { L2, L4, L6, H1x, H1y, H1xy, Lx2Hy1, GradX_L2, GradY_L2 };

std::string_view to_string(NormKind kind) noexcept;

/// Discrete quadrature value of the named norm. Derivatives are spectral.
/// H1y and Lx2Hy1 coincide: both are (||f||^2 + ||d_y f||^2)^(1/2).
/// On Field2 the y-derivative vanishes, so H1y/Lx2Hy1 reduce to L2 and
/// H1xy to H1x.
double norm(const Field3& f, NormKind kind);
double norm(const Field2& f, NormKind kind);

/// Squared L^2, grad_x and grad_y norms from a single forward transform.
struct QuadraticMoments {
  double mass = 0.0;
  double grad_x_sq = 0.0;
  double grad_y_sq = 0.0;
};

QuadraticMoments quadratic_moments(const Field3& f);
QuadraticMoments quadratic_moments(const Field2& f);

/// sum |f|^p * cell measure.
double lp_power(const Field3& f, int p);
double lp_power(const Field2& f, int p);

}  // namespace wgnls
