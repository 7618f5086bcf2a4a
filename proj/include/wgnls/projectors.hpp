#pragma once

#include "wgnls/field.hpp"

namespace wgnls {

/// Radial bump: 1 on [0, 1], C^2 quintic blend on [1, 11/10], 0 beyond.
double lp_bump(double r) noexcept;

enum class LpMode { Leq, Band, Gt };

/// Littlewood-Paley projection in x with the multipliers
///   leq:  phi(|xi|/N)
///   band: phi(|xi|/N) - phi(2|xi|/N)
///   gt:   1 - phi(|xi|/N)
/// Throws Error(Domain) for N <= 0.
Field3 lp_project(const Field3& f, double N, LpMode mode);
Field2 lp_project(const Field2& f, double N, LpMode mode);

struct MeanSplit {
  Field3 mean;   ///< (2pi)^-1 int f dy, constant in y
  Field3 fluct;  ///< f - mean
};

MeanSplit y_mean_split(const Field3& f);

}  // namespace wgnls
