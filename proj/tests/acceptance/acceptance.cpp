// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wgnls/constants.hpp"
#include "wgnls/datum.hpp"
#include "wgnls/experiments.hpp"
#include "wgnls/norms.hpp"
#include "wgnls/projectors.hpp"
#include "wgnls/propagator.hpp"
#include "wgnls/resonant.hpp"
#include "wgnls/thresholds.hpp"
#include "wgnls/townes.hpp"

using namespace wgnls;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.str().empty()) detail << "; ";
    detail << what << (ok ? "" : " [x]");
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const GNConstants& constants() {
  static const GNConstants c = compute_constants();
  return c;
}

Field2 gaussian2(const Grid2& g, double a) {
  Field2 f(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) f(i, j) = a * std::exp(-0.5 * (g.x(i) * g.x(i) + g.x(j) * g.x(j)));
  return f;
}

// 1. two ground-state solvers and the Pohozaev identities
void ground_state(Verdict& v) {
  const TownesResult s = solve_townes_spectral(Grid2{128, 32.0}, 1e-10);
  const RadialProfile p = solve_townes_shooting(1e-15);
  const double ms = std::pow(norm(s.q, NormKind::L2), 2);
  const double gap = std::abs(ms - p.mass()) / p.mass();
  v.require(gap <= 1e-3, "mass gap " + fmt(gap) + " <= 1e-3");
  const PohozaevRatios r = pohozaev_check(s.q);
  v.require(std::abs(r.grad_to_mass - 1.0) <= 1e-3, "grad/mass " + fmt(r.grad_to_mass));
  v.require(std::abs(r.l4_to_mass - 1.0) <= 1e-3, "l4/(2 mass) " + fmt(r.l4_to_mass));
}

// 2. Weinstein sequence
void weinstein(Verdict& v) {
  const TownesResult s = solve_townes_spectral(Grid2{128, 32.0}, 1e-11);
  const double c2d = gn_quotient_cubic(s.q);
  double worst = 0.0, last = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const double w = weinstein_quotient(weinstein_test_vector(s.q, n, n));
    const double want = (4.0 * n * n + 4.0 * n + 1.0) / (8.0 * n * n + 6.0 * n + 1.0) * c2d;
    worst = std::max(worst, std::abs(w / want - 1.0));
    last = w;
  }
  v.require(worst <= 1e-6, "formula rel err " + fmt(worst) + " <= 1e-6");
  const double off = std::abs(last / (0.5 * c2d) - 1.0);
  v.require(off <= 0.02, "n=5 vs C/2 off by " + fmt(off) + " <= 0.02");
}

// 3. resonant combinatorics
void combinatorics(Verdict& v) {
  const Grid2 g{8, 6.0};
  double worst = 0.0;
  bool counts = true;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int J = 1; J <= 8; ++J) {
    for (int k = -J; k <= J; ++k) counts = counts && resonant_triples(k, J).size() == static_cast<std::size_t>(4 * J + 1);
    for (int s = 0; s < 20; ++s) {
      VecField2 u(J, g);
      for (auto& c : u.components)
        for (auto& x : c.values) x = {nd(rng), nd(rng)};
      for (int j = -J; j <= J; ++j) {
        const Field2 a = nonlinearity_closed(u, j), b = nonlinearity_bruteforce(u, j);
        for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
      }
    }
  }
  v.require(worst <= 1e-12, "closed vs brute " + fmt(worst) + " <= 1e-12");
  v.require(counts, "triple counts 4J+1");
}

double max_energy_drift(const Field3& u0, double dt) {
  const double e0 = diagnostics(u0, constants()).energy;
  EvolveControls c;
  c.dt = dt;
  c.t_end = 1.0;
  c.sample_every = 1;
  const RunOutcome o = evolve(u0, c);
  double worst = 0.0;
  for (const auto& r : o.time_series.rows) worst = std::max(worst, std::abs(r.energy - e0));
  return worst;
}

Field3 free_gaussian(const Grid3& g, double t) {
  Field3 f(g);
  const cplx a = 1.0 + cplx(0.0, 2.0 * t);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const cplx val = std::exp(-(g.x(i) * g.x(i) + g.x(j) * g.x(j)) / (2.0 * a)) / a;
      for (int l = 0; l < g.n_y; ++l) f(i, j, l) = val;
    }
  return f;
}

// 4. conservation and order
void conservation(Verdict& v) {
  const Grid3 g{64, 16.0, 16};
  const Field3 u0 = make_gaussian(g, 1.0, 1.0, 0.3, 1);
  EvolveControls c;
  c.dt = 1e-3;
  c.t_end = 10.0;
  c.sample_every = 1000;
  const RunOutcome o = evolve(u0, c);
  const double m0 = std::pow(norm(u0, NormKind::L2), 2);
  const double dm = std::abs(std::pow(norm(o.final, NormKind::L2), 2) / m0 - 1.0);
  v.require(o.steps == 10000 && dm <= 1e-10, "full mass drift " + fmt(dm) + " over " + std::to_string(o.steps) + " steps");

  const Grid2 g2{64, 20.0};
  VecField2 w(2, g2);
  for (int j = -2; j <= 2; ++j) w.at(j) = gaussian2(g2, 0.6 / (1 + std::abs(j)));
  const RsOutcome r = evolve_rs(w, c);
  const RsConserved a = conserved_rs(w), b = conserved_rs(r.final);
  const double d0 = std::abs(b.m0 / a.m0 - 1.0), d1 = std::abs(b.m1 / a.m1 - 1.0);
  v.require(r.steps == 10000 && std::max(d0, d1) <= 1e-10, "M0/M1 drift " + fmt(d0) + "/" + fmt(d1));

  const Field3 e0 = make_gaussian(Grid3{64, 24.0, 8}, 1.5, 1.0, 0.3, 1);
  const double ratio = max_energy_drift(e0, 0.01) / max_energy_drift(e0, 0.005);
  v.require(ratio >= 3.0 && ratio <= 5.0, "energy drift ratio " + fmt(ratio) + " in [3,5]");

  const Grid3 fg{64, 32.0, 8};
  EvolveControls lin;
  lin.dt = 0.01;
  lin.t_end = 0.5;
  lin.nonlinear = false;
  const double gap = relative_l2_gap(evolve(free_gaussian(fg, 0.0), lin).final, free_gaussian(fg, 0.5));
  v.require(gap <= 1e-6, "free Gaussian gap " + fmt(gap) + " <= 1e-6");
}

// 5. Galilean and scaling covariance
void covariance(Verdict& v) {
  const Grid3 g{128, 24.0, 16};
  const Field3 u0 = make_gaussian(g, 1.0, 1.0, 0.3, 1);
  const std::array<double, 2> xi{2 * pi / g.box_length, -2 * pi / g.box_length};
  EvolveControls c;
  c.dt = 1e-3;
  c.t_end = 0.5;
  const RunOutcome a = evolve(galilean_boost(u0, xi, 0.0), c);
  const RunOutcome b = evolve(u0, c);
  const double gap = relative_l2_gap(a.final, galilean_boost(b.final, xi, 0.5));
  v.require(gap <= 1e-8, "boost gap " + fmt(gap) + " <= 1e-8");

  const Grid3 sg{64, 16.0, 8};
  const Field3 s0 = make_gaussian(sg, 1.2, 1.0, 0.4, 2);
  double worst = 0.0;
  for (double lambda : {1.0, 2.0, 3.5}) {
    const Field3 s = rescale(s0, lambda).field;
    const double h0 = sg.hx() * sg.hx(), h1 = s.grid.hx() * s.grid.hx();
    for (int l = 0; l < sg.n_y; ++l) {
      double m0 = 0.0, m1 = 0.0;
      for (int i = 0; i < sg.n_x; ++i)
        for (int j = 0; j < sg.n_x; ++j) {
          m0 += std::norm(s0(i, j, l));
          m1 += std::norm(s(i, j, l));
        }
      worst = std::max(worst, std::abs(m1 * h1 / (m0 * h0) - 1.0));
    }
  }
  v.require(worst <= 1e-12, "slice mass drift " + fmt(worst) + " <= 1e-12");
}

// 6. Glassey blow-up and the positive-energy control
void glassey(Verdict& v) {
  const Grid2 g{128, 16.0};
  VecField2 u(0, g);
  u.at(0) = gaussian2(g, 2.1);
  const double closed = pi * (0.5 * 2.1 * 2.1 - 0.125 * std::pow(2.1, 4));
  const double e = conserved_rs(u).energy;
  v.require(std::abs(e - closed) <= 1e-6 && std::abs(e + 0.710) <= 5e-4, "E " + fmt(e) + " vs " + fmt(closed));
  EvolveControls c;
  c.dt = 1e-3;
  c.t_end = 2.0;
  c.sample_every = 50;
  const RsOutcome o = evolve_rs(u, c);
  v.require(o.status == RunStatus::BlowupDetected && o.t_final < 2.0,
            to_string(o.status) + " at t=" + fmt(o.t_final));

  const Grid2 wide{256, 64.0};
  VecField2 w(0, wide);
  w.at(0) = gaussian2(wide, 1.0);
  EvolveControls d;
  d.dt = 1e-2;
  d.t_end = 10.0;
  d.sample_every = 10;
  const RsOutcome p = evolve_rs(w, d);
  bool decreasing = true;
  for (std::size_t k = 1; k < p.samples.size(); ++k) {
    const auto l4 = [&](const RsSample& s) { return 2.0 * s.grad_sq - 4.0 * s.conserved.energy; };
    decreasing = decreasing && l4(p.samples[k]) < l4(p.samples[k - 1]);
  }
  const double e1 = conserved_rs(w).energy;
  v.require(std::abs(e1 - 0.375 * pi) <= 1e-6, "A=1 E " + fmt(e1) + " = 3pi/8");
  v.require(p.status == RunStatus::Completed && std::abs(p.t_final - 10.0) <= 1e-9 && p.max_grad <= 1.5 * p.initial_grad,
            "A=1 " + to_string(p.status) + " grad growth " + fmt(p.max_grad / p.initial_grad));
  v.require(decreasing, "L4 decreasing over " + std::to_string(p.samples.size()) + " samples");
}

// 7. thresholds and classification
void thresholds(Verdict& v) {
  const GNConstants& c = constants();
  v.require(gamma(c.gwp_mass(), c) == 0.0, "Gamma(2pi M(Q)) = 0");
  bool dec = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 100; ++i) {
    const double g = gamma(c.gwp_mass() * i / 100.0, c);
    dec = dec && g < prev;
    prev = g;
  }
  v.require(dec, "Gamma strictly decreasing");
  const int n = 50;
  const double cmax = 0.999 * c.scattering_mass();
  const double hmax = 0.5 * gamma(1e-3 * cmax, c);
  std::vector<double> d(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) d[i * n + k] = mei(cmax * i / (n - 1), hmax * k / (n - 1), c);
  int bad = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i + 1 < n && d[(i + 1) * n + k] < d[i * n + k]) ++bad;
      if (k + 1 < n && d[i * n + k + 1] < d[i * n + k]) ++bad;
    }
  v.require(bad == 0, "MEI monotone (" + std::to_string(bad) + " violations)");

  const Grid3 g{64, 32.0, 8};
  const Regime a = classify(make_gaussian(g, 0.1, 1.0), c).classification;
  const double m = 1.5 * c.scattering_mass();
  const Regime b = classify(make_wide_gwp(64, 8, m, 0.25 * gamma(m, c)), c).classification;
  const Regime o = classify(make_gaussian(g, std::sqrt(2.5 * c.mass_Q / (2.0 * pi)), 1.0), c).classification;
  v.require(a == Regime::Scattering && b == Regime::Gwp && o == Regime::Outside,
            "examples " + to_string(a) + "/" + to_string(b) + "/" + to_string(o));
}

// 8. mixed GN inequality
void mixed_gn(Verdict& v) {
  const GNConstants& c = constants();
  const Grid3 g{64, 24.0, 16};
  const Field2 q = sample_on_grid(townes_profile(), g.xgrid());
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 10000; ++s)
    worst = std::min(worst, check_gn_r2t1(random_test_field(g, 1000 + s, (s % 2) ? &q : nullptr), c));
  v.require(worst >= -1e-10, "min residual " + fmt(worst) + " over 1e4 fields");

  const Grid3 pg{128, 32.0, 8};
  const Field2 pq = sample_on_grid(townes_profile(), pg.xgrid());
  Field3 probe(pg);
  for (int i = 0; i < pg.n_x; ++i)
    for (int j = 0; j < pg.n_x; ++j) {
      const double r2 = pg.x(i) * pg.x(i) + pg.x(j) * pg.x(j);
      for (int l = 0; l < pg.n_y; ++l) probe(i, j, l) = pq(i, j) * (1.0 + 0.05 * std::exp(-r2));
    }
  const MixedGnParts p = mixed_gn_parts(probe, c.mass_Q);
  v.require(p.lhs / p.first >= 0.9, "sharpness ratio " + fmt(p.lhs / p.first) + " >= 0.9");

  bool zero = mixed_gn_parts(extend_in_y(pq, pg), c.mass_Q).required_c() == 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Field3 r = random_test_field(Grid3{32, 16.0, 8}, s);
    const MeanSplit split = y_mean_split(r);
    zero = zero && mixed_gn_parts(split.mean, c.mass_Q).required_c() == 0.0;
  }
  v.require(zero, "y-independent fields need c = 0");
}

// 9. large-scale limit
void large_scale(Verdict& v) {
  const Grid3 g{256, 24.0, 16};
  LargeScaleOptions o;
  o.dt = 2e-3;
  o.full_dt_max = 1e-2;
  const Field3 two = make_two_mode(g, 1.0, 0.7, 1.0);
  const double m = std::pow(norm(two, NormKind::L2), 2) / (2 * pi);
  v.require(m < 0.5 * constants().mass_Q, "mass/(2pi) " + fmt(m) + " < M(Q)/2");
  const LargeScaleResult r = large_scale_compare(two, {1.0, 2.0, 4.0}, 1.0, o);
  v.require(r.deltas[1] < r.deltas[0] && r.deltas[2] < r.deltas[1],
            "delta " + fmt(r.deltas[0]) + " > " + fmt(r.deltas[1]) + " > " + fmt(r.deltas[2]));
  const LargeScaleResult flat = large_scale_compare(make_gaussian(g, 1.0, 1.0), {1.0, 2.0, 4.0}, 1.0, o);
  const double worst = *std::max_element(flat.deltas.begin(), flat.deltas.end());
  v.require(worst <= 1e-6, "y-independent delta " + fmt(worst) + " <= 1e-6");
}

// 10. localized virial identity
void virial(Verdict& v) {
  const Grid3 g{128, 24.0, 8};
  const Field3 u0 = make_gaussian(g, 1.0, 1.0);
  EvolveControls c;
  c.dt = 1e-3;
  c.t_end = 0.02;
  const VirialTrace t = virial_trace(u0, radius_for_exterior_mass(u0, 1e-8), c);
  v.require(t.exterior_mass <= 1e-8 && t.max_relative_residual() <= 0.05,
            "R=" + fmt(t.R) + " exterior " + fmt(t.exterior_mass) + " rel residual " + fmt(t.max_relative_residual()));
  const VirialTrace a = virial_trace(u0, radius_for_exterior_mass(u0, 1e-4), c);
  const VirialTrace b = virial_trace(u0, radius_for_exterior_mass(u0, 1e-5), c);
  const double shrink = a.max_abs_residual() / b.max_abs_residual();
  v.require(shrink >= 5.0, "residual shrink " + fmt(shrink) + " >= 5 for 10x less exterior mass");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Verdict&)> run;
  double budget_s;  ///< 0: no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wgnls acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "ground state cross-validation", ground_state, 60},
      {2, "Weinstein sequence", weinstein, 30},
      {3, "resonant combinatorics", combinatorics, 10},
      {4, "conservation and order", conservation, 300},
      {5, "symmetry covariance", covariance, 0},
      {6, "Glassey blow-up", glassey, 300},
      {7, "thresholds", thresholds, 0},
      {8, "mixed GN inequality", mixed_gn, 0},
      {9, "large-scale harness", large_scale, 900},
      {10, "virial identity", virial, 0},
  };

  bool ok = true;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0) v.require(secs < c.budget_s, "runtime " + fmt(secs) + " s < " + fmt(c.budget_s) + " s");
    std::printf("criterion %d (%s): %s (%s) [%.1f s]\n", c.id, c.name, v.pass ? "PASS" : "FAIL", v.detail.str().c_str(),
                secs);
    std::fflush(stdout);
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
