#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wgnls/field.hpp"
#include "wgnls/propagator.hpp"

namespace wgnls {

/// Components u_j, j = -J..J, on one shared 2D grid.
struct VecField2 {
  int j_max = 0;
  Grid2 grid;
  std::vector<Field2> components;

  VecField2() = default;
  VecField2(int J, const Grid2& g);

  Field2& at(int j) { return components[static_cast<std::size_t>(j + j_max)]; }
  const Field2& at(int j) const { return components[static_cast<std::size_t>(j + j_max)]; }
  /// <j>^2 = 1 + j^2, the weight of the h^1 mass.
  static double weight_sq(int j) { return 1.0 + static_cast<double>(j) * j; }

  /// Throws Error(Shape) on inconsistent components or non-finite entries.
  void validate() const;
};

struct ResonantTriple {
  int k1 = 0, k2 = 0, k3 = 0;
  bool operator==(const ResonantTriple&) const = default;
  auto operator<=>(const ResonantTriple&) const = default;
};

/// All (k1, k2, k3) with |k_i| <= J, k1 - k2 + k3 = k and
/// k1^2 - k2^2 + k3^2 = k^2, by enumeration, sorted. Throws Error(Domain)
/// unless |k| <= J.
std::vector<ResonantTriple> resonant_triples(int k, int J);

/// (2 S - |u_j|^2) u_j with S = sum_i |u_i|^2; the equation is
/// i d_t u_j + Delta u_j = -(this).
Field2 nonlinearity_closed(const VecField2& u, int j);
/// sum over resonant_triples(j, J) of u_{k1} conj(u_{k2}) u_{k3}.
Field2 nonlinearity_bruteforce(const VecField2& u, int j);

struct RsConserved {
  double m0 = 0.0;  ///< sum ||u_j||^2
  double m1 = 0.0;  ///< sum <j>^2 ||u_j||^2
  double energy = 0.0;  ///< 1/2 sum ||grad u_j||^2 - 1/4 int (2 S^2 - sum |u_j|^4)
};

RsConserved conserved_rs(const VecField2& u);

/// sum ||u_j||^2 sum ||grad u_j||^2 / int (2 S^2 - sum |u_j|^4).
/// Throws Error(Domain) on a zero denominator.
double weinstein_quotient(const VecField2& u);

/// Q placed in every component |j| <= n of a J-vector (J >= n).
VecField2 weinstein_test_vector(const Field2& q, int n, int J);

struct GlasseyVirial {
  double v = 0.0;             ///< int_{|x| <= 0.45 L} |x|^2 sum |u_j|^2
  double dv = 0.0;            ///< 4 Im int_{|x| <= 0.45 L} conj(u) x . grad u
  double ddv_predicted = 0.0; ///< 16 E
  double tail_fraction = 0.0; ///< mass share outside the cutoff disc
};

GlasseyVirial glassey_virial(const VecField2& u);

struct RsSample {
  double t = 0.0;
  RsConserved conserved;
  double v = 0.0;
  double dv = 0.0;
  double grad_sq = 0.0;
  std::vector<double> masses;  ///< ||u_j||^2, j = -J..J
};

struct RsOutcome {
  RunStatus status = RunStatus::Completed;
  std::vector<RsSample> samples;
  VecField2 final;
  double t_final = 0.0;
  std::size_t steps = 0;
  double initial_grad = 0.0;
  double max_grad = 0.0;
  bool nan_detected = false;

  std::string to_csv() const;
};

/// Strang splitting for the resonant system. The nonlinear substep multiplies
/// u_j by exp(i h (2S - |u_j|^2)); it keeps every |u_j| fixed, so S is
/// constant over the substep and the rotation is exact. Uses dt, t_end,
/// sample_every, blowup_factor, dealias and nonlinear from the controls;
/// sponges are rejected.
RsOutcome evolve_rs(const VecField2& u0, const EvolveControls& controls);

/// u_k(x) = c_k(x) = n_y^{-1} sum_l U(x, y_l) e^{-i k y_l} for |k| <= n_y/2 - 1,
/// i.e. (2pi)^{-1/2} times the unitary y-transform of the continuum
/// convention. The e^{iky} factor is not stored and the Nyquist mode is
/// dropped, so sum ||u_k||^2 = (2pi)^{-1} M(U) for data without a Nyquist
/// component.
VecField2 embed_from_torus(const Field3& u);

/// Mass of the Nyquist y-mode that embed_from_torus discards, as a fraction of M(U).
double nyquist_mass_fraction(const Field3& u);

/// sum_k u_k(x) e^{iky} e^{-i k^2 t_phys} on a 3D grid sharing u's x-grid
/// (the phase is skipped when apply_free_phase is false).
Field3 reconstruct(const VecField2& u, int n_y, double t_phys, bool apply_free_phase);

}  // namespace wgnls
