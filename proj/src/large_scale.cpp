#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgnls/error.hpp"
#include "wgnls/experiments.hpp"
#include "wgnls/resonant.hpp"

namespace wgnls {

std::string to_string(PhaseConvention p) { return p == PhaseConvention::FreeYPhase ? "free_y_phase" : "none"; }

PhaseConvention parse_phase_convention(const std::string& text) {
  if (text == "free_y_phase") return PhaseConvention::FreeYPhase;
  if (text == "none") return PhaseConvention::None;
  throw Error(ErrorKind::Config, "phase_convention must be 'free_y_phase' or 'none', got '" + text + "'");
}

namespace {

// Splits [t0, t1] into equal steps no longer than dt_max.
EvolveControls segment_controls(const EvolveControls& base, double length, double dt_max) {
  EvolveControls c = base;
  const double n = std::max(1.0, std::ceil(length / dt_max - 1e-9));
  c.dt = length / n;
  c.t_end = length;
  c.sample_every = static_cast<int>(n);
  c.snapshot_every = 0;
  c.blowup_factor = 1e300;
  return c;
}

double relative_gap(const Field3& u, const Field3& proxy, double scale) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    num += std::norm(u.values[i] - scale * proxy.values[i]);
    den += std::norm(u.values[i]);
  }
  if (den == 0.0) throw Error(ErrorKind::Domain, "large-scale comparison on a zero field");
  return std::sqrt(num / den);
}

}  // namespace

LargeScaleResult large_scale_compare(const Field3& u0, const std::vector<double>& lambdas, double t_end,
                                     const LargeScaleOptions& opts) {
  u0.grid.validate();
  if (lambdas.empty()) throw Error(ErrorKind::Domain, "no lambdas given");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 1.0)) throw Error(ErrorKind::Domain, "lambdas must be >= 1");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw Error(ErrorKind::Domain, "lambdas must be strictly increasing");
  }
  if (!(t_end > 0.0) || !(opts.dt > 0.0) || !(opts.full_dt_max > 0.0) || opts.samples < 1) {
    throw Error(ErrorKind::Domain, "large-scale comparison needs t_end, dt, full_dt_max > 0 and samples >= 1");
  }

  LargeScaleResult res;
  res.lambdas = lambdas;
  res.phase = opts.phase;
  res.nyquist_fraction = nyquist_mass_fraction(u0);
  for (int s = 0; s < opts.samples; ++s) res.times.push_back(t_end * std::ldexp(1.0, s - opts.samples + 1));

  EvolveControls base;
  base.dealias = opts.dealias;
  base.cfl_safety = 0.5;

  // The resonant proxy does not depend on lambda.
  std::vector<VecField2> proxy;
  {
    VecField2 v = embed_from_torus(u0);
    double t = 0.0;
    for (double ts : res.times) {
      const RsOutcome o = evolve_rs(v, segment_controls(base, ts - t, opts.dt));
      if (o.nan_detected) throw Error(ErrorKind::Integration, "resonant proxy run produced non-finite values");
      v = o.final;
      t = ts;
      proxy.push_back(v);
    }
  }

  for (double lam : lambdas) {
    RescaleResult rs = rescale(u0, lam);
    if (rs.resolution_warning) {
      throw Error(ErrorKind::Domain, "datum is under-resolved for the large-scale comparison");
    }
    Field3 u = std::move(rs.field);
    const double l2 = lam * lam;
    double t = 0.0;
    std::vector<double> gaps;
    for (std::size_t s = 0; s < res.times.size(); ++s) {
      const double ts = res.times[s];
      const RunOutcome o = evolve(u, segment_controls(base, l2 * (ts - t), std::min(l2 * opts.dt, opts.full_dt_max)));
      if (o.nan_detected) throw Error(ErrorKind::Integration, "full run produced non-finite values");
      u = o.final;
      t = ts;
      const Field3 psi = reconstruct(proxy[s], u0.grid.n_y, l2 * ts, opts.phase == PhaseConvention::FreeYPhase);
      gaps.push_back(relative_gap(u, psi, 1.0 / lam));
    }
    res.deltas.push_back(*std::max_element(gaps.begin(), gaps.end()));
    res.gaps.push_back(std::move(gaps));
  }
  return res;
}

std::string LargeScaleResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,delta\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i) os << lambdas[i] << ',' << deltas[i] << '\n';
  return os.str();
}

std::string LargeScaleResult::gaps_to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,tau,t_phys,gap\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t s = 0; s < times.size(); ++s)
      os << lambdas[i] << ',' << times[s] << ',' << lambdas[i] * lambdas[i] * times[s] << ',' << gaps[i][s] << '\n';
  return os.str();
}

}  // namespace wgnls
