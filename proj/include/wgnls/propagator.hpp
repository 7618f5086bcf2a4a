#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wgnls/field.hpp"

namespace wgnls {

/// Complex absorbing layer: the nonlinear substep multiplies by
/// exp(-strength * sigma(|x|) * dt), sigma ramping smoothly from 0 at
/// inner_radius to 1 at box_length/2 and staying 1 in the corners.
struct Sponge {
  double inner_radius = 0.0;
  double strength = 0.0;
};

struct EvolveControls {
  double dt = 1e-3;
  double t_end = 1.0;
  /// Largest nonlinear phase max|U|^2 dt (radians) a single step may rotate;
  /// larger steps are split into equal substeps.
  double cfl_safety = 0.5;
  int max_substeps = 64;
  bool dealias = false;
  std::optional<Sponge> sponge;
  int sample_every = 10;
  int snapshot_every = 0;  ///< 0 disables snapshots
  double blowup_factor = 10.0;
  double scatter_s = 2.0 / 3.0;
  double scatter_ratio = 0.5;  ///< last/first window increment must fall below this
  bool nonlinear = true;       ///< false gives the free Schroedinger flow

  /// Throws Error(Config) listing every violated constraint.
  void validate(const Grid3& grid) const;
};

/// One row of the time-series CSV.
struct TimeSample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double momentum_x = 0.0;
  double momentum_y = 0.0;
  double momentum_k = 0.0;
  double grad_y_sq = 0.0;
  double grad_xy_sq = 0.0;
  double l4_norm = 0.0;
  double scatter_accum = 0.0;
};

struct TimeSeries {
  std::vector<TimeSample> rows;

  static const char* header();
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

enum class RunStatus { Completed, BlowupDetected, ScatterLike, Inconclusive };

std::string to_string(RunStatus s);

struct ScatterWindows {
  std::array<double, 3> increments{};  ///< accumulation over [T/8,T/4], [T/4,T/2], [T/2,T]
  bool evaluated = false;
  bool decaying = false;
};

struct RunOutcome {
  RunStatus status = RunStatus::Inconclusive;
  TimeSeries time_series;
  Field3 final;
  double t_final = 0.0;
  std::size_t steps = 0;
  double scatter_accum = 0.0;
  double initial_grad = 0.0;  ///< ||grad U0||_2
  double max_grad = 0.0;      ///< largest ||grad U||_2 seen (inf after NaN)
  bool nan_detected = false;
  int max_substeps_used = 1;
  ScatterWindows windows;
};

/// Called with (field, t, step) every snapshot_every steps and at t = 0.
using SnapshotSink = std::function<void(const Field3&, double, std::size_t)>;

/// One Strang step: half linear, exact nonlinear phase exp(i|U|^2 dt), half
/// linear. With dealias the top third of every axis is zeroed after the
/// nonlinear substep. Throws IntegrationError on non-finite output.
struct StepOptions {
  bool nonlinear = true;
  bool dealias = false;
};
Field3 step_strang(const Field3& u, double dt, const StepOptions& opts = {});

/// Integrates to t_end (rounded to a whole number of steps) or until a
/// detector fires. Blow-up (gradient growth past blowup_factor or NaN) is
/// a status, not an error.
RunOutcome evolve(const Field3& u0, const EvolveControls& controls, const SnapshotSink& sink = {});

/// ||U||_{L^4_x H^s_y}^4 with ||f||_{H^s(T)}^2 = 2pi sum <k>^{2s} |c_k|^2.
double l4x_hsy_pow4(const Field3& u, double s);

/// Dyadic-window test on an accumulated series (t, A(t)). Needs samples
/// reaching back to T/8.
ScatterWindows scatter_windows(const TimeSeries& ts, double ratio);

/// e^{i xi.x} e^{-i t |xi|^2} U(x - 2 xi t, y). xi must lie on the lattice
/// (2pi/L) Z^2; otherwise Error(Domain) names the nearest lattice vector.
Field3 galilean_boost(const Field3& u, const std::array<double, 2>& xi, double t);

struct RescaleResult {
  Field3 field;
  /// More than 1e-6 of the spectral energy sits in the outer quarter of
  /// x-frequencies, i.e. features are under about four points.
  bool resolution_warning = false;
};

/// lambda^{-1} U(x / lambda, y) on the grid whose box is lambda times larger.
/// The samples are the original values divided by lambda, so the 2D mass of
/// every y-slice is preserved. Requires lambda >= 1.
RescaleResult rescale(const Field3& u, double lambda);

Field3 conjugate(const Field3& u);

}  // namespace wgnls
