#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgnls/constants.hpp"
#include "wgnls/datum.hpp"
#include "wgnls/propagator.hpp"
#include "wgnls/thresholds.hpp"

namespace wgnls {

// ---- local virial ----

/// r^2 on [0,1], quintic blend on (1,2) matching r^2 to second order at 1
/// and vanishing to second order at 2, zero beyond.
double virial_cutoff(double r);
double virial_cutoff_derivative(double r);

struct LocalVirial {
  double z = 0.0;   ///< int R^2 chi(x/R) |U|^2
  double dz = 0.0;  ///< 2 Im int R (grad chi)(x/R) . grad_x U conj(U)
};

/// Throws Error(Domain) unless 2R < box_length/2.
LocalVirial local_virial(const Field3& u, double R);

/// Share of the mass sitting in |x| >= R.
double exterior_mass_fraction(const Field3& u, double R);

/// Smallest R (to 1e-6) whose exterior mass share is at most the target.
double radius_for_exterior_mass(const Field3& u, double target);

struct VirialTrace {
  double R = 0.0;
  double exterior_mass = 0.0;  ///< largest exterior share seen over the run
  std::vector<double> times;
  std::vector<double> z;
  std::vector<double> dz;
  std::vector<double> h_star;
  /// Second central difference of z minus 16 h_star; NaN at the two end points.
  std::vector<double> residual;

  /// Largest |residual| relative to max |16 h_star| over the interior points.
  double max_relative_residual() const;
  double max_abs_residual() const;
  std::string to_csv() const;  ///< t,R,z_R,dz_R,h_star,residual
};

/// Records z_R, dz_R and h_star after every step of a full run.
VirialTrace virial_trace(const Field3& u0, double R, const EvolveControls& controls);

// ---- large-scale limit ----

enum class PhaseConvention { FreeYPhase, None };
std::string to_string(PhaseConvention p);
/// "free_y_phase" or "none"; Error(Config) otherwise.
PhaseConvention parse_phase_convention(const std::string& text);

struct LargeScaleOptions {
  double dt = 1e-3;        ///< resonant step in slow time tau
  /// The full run steps by lambda^2 dt in physical time, capped here; at
  /// lambda = 1 both runs then share one step size.
  double full_dt_max = 5e-3;
  int samples = 8;
  PhaseConvention phase = PhaseConvention::FreeYPhase;
  bool dealias = false;
};

struct LargeScaleResult {
  std::vector<double> lambdas;
  std::vector<double> deltas;
  PhaseConvention phase = PhaseConvention::FreeYPhase;
  std::vector<double> times;              ///< slow times tau of the samples
  std::vector<std::vector<double>> gaps;  ///< gaps[i][s] for lambdas[i] at times[s]
  double nyquist_fraction = 0.0;

  std::string to_csv() const;          ///< lambda,delta
  std::string gaps_to_csv() const;     ///< lambda,tau,t_phys,gap
};

/// For each lambda: full run of lambda^{-1} U0(x/lambda, y) to lambda^2 t_end,
/// resonant run of embed_from_torus(U0) to t_end, and the sup over the
/// geometric sample times t_end 2^{s-samples+1} of the relative L^2 gap to
/// the reconstructed proxy. lambdas must be strictly increasing and >= 1.
LargeScaleResult large_scale_compare(const Field3& u0, const std::vector<double>& lambdas, double t_end,
                                     const LargeScaleOptions& opts = {});

// ---- threshold campaigns ----

enum class System { Full, Resonant };
std::string to_string(System s);
System parse_system(const std::string& text);

struct CampaignRow {
  std::string name;
  System system = System::Full;
  DatumSpec datum;
  Grid3 grid;
  EvolveControls controls;
};

struct CampaignRecord {
  std::string name;
  System system = System::Full;
  bool ok = false;
  std::string error;
  ThresholdReport report;
  RunStatus status = RunStatus::Inconclusive;
  double t_final = 0.0;
  std::size_t steps = 0;
  double grad_growth = 0.0;  ///< max ||grad U|| / ||grad U0||
  std::string series_csv;
};

struct CampaignResult {
  std::string config_hash;
  std::string constants_hash;
  std::vector<CampaignRecord> rows;

  /// One line per row, in input order; the hashes are repeated on every line.
  std::string to_csv() const;
};

/// Runs rows on up to `workers` threads (0 means hardware concurrency).
/// A failing row is recorded with its error and the others continue.
CampaignResult threshold_campaign(const std::vector<CampaignRow>& rows, const GNConstants& consts, CChoice choice,
                                  int workers, const std::string& config_hash = "");

}  // namespace wgnls
