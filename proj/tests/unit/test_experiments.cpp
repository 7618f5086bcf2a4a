#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "wgnls/datum.hpp"
#include "wgnls/error.hpp"
#include "wgnls/experiments.hpp"

using namespace wgnls;
using std::numbers::pi;

namespace {

CampaignRow small_row(const std::string& name, System system, double amplitude) {
  CampaignRow r;
  r.name = name;
  r.system = system;
  r.grid = Grid3{32, 16.0, 8};
  r.datum.amplitude = amplitude;
  r.controls.dt = 1e-2;
  r.controls.t_end = 0.2;
  r.controls.sample_every = 5;
  return r;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("virial cutoff shape") {
  for (double r : {0.0, 0.3, 0.7, 1.0}) CHECK(virial_cutoff(r) == doctest::Approx(r * r).epsilon(1e-15));
  CHECK(virial_cutoff(2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(virial_cutoff(3.5) == 0.0);
  CHECK(virial_cutoff_derivative(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(virial_cutoff_derivative(2.0)) <= 1e-12);
  const double h = 1e-6;
  for (double r : {0.5, 1.2, 1.5, 1.9}) {
    const double fd = (virial_cutoff(r + h) - virial_cutoff(r - h)) / (2 * h);
    CHECK(virial_cutoff_derivative(r) == doctest::Approx(fd).epsilon(1e-7));
  }
  // second derivative of the blend, 2 at r = 1 and 0 at r = 2
  auto dd = [&](double r) { return (virial_cutoff_derivative(r + h) - virial_cutoff_derivative(r - h)) / (2 * h); };
  auto blend_dd = [](double t) { return 2.0 - 150.0 * t + 408.0 * t * t - 260.0 * t * t * t; };
  CHECK(blend_dd(0.0) == 2.0);
  CHECK(blend_dd(1.0) == 0.0);
  for (double r : {1.001, 1.3, 1.7, 1.999}) CHECK(dd(r) == doctest::Approx(blend_dd(r - 1.0)).epsilon(1e-6));
  for (int i = 0; i < 200; ++i) CHECK(virial_cutoff(i * 0.01) >= 0.0);
}

TEST_CASE("local virial of real data") {
  const Grid3 g{64, 24.0, 8};
  const LocalVirial v = local_virial(make_gaussian(g, 1.0, 1.0, 0.3, 1), 3.0);
  CHECK(v.z > 0.0);
  CHECK(std::abs(v.dz) <= 1e-12 * v.z);
  CHECK_THROWS_AS(local_virial(make_gaussian(g, 1.0, 1.0), 6.0), Error);
}

TEST_CASE("exterior mass of a Gaussian") {
  const Grid3 g{128, 24.0, 8};
  const Field3 u = make_gaussian(g, 1.0, 1.0);
  CHECK(exterior_mass_fraction(u, 2.0) == doctest::Approx(std::exp(-4.0)).epsilon(0.05));
  CHECK(exterior_mass_fraction(u, 0.0) == doctest::Approx(1.0));
  const double R = radius_for_exterior_mass(u, 1e-4);
  CHECK(R == doctest::Approx(std::sqrt(std::log(1e4))).epsilon(0.03));
  CHECK(exterior_mass_fraction(u, R) <= 1e-4);
}

TEST_CASE("virial identity on a Gaussian") {
  const Grid3 g{128, 24.0, 8};
  const Field3 u0 = make_gaussian(g, 1.0, 1.0);
  EvolveControls c;
  c.dt = 1e-3;
  c.t_end = 0.02;
  const VirialTrace t = virial_trace(u0, radius_for_exterior_mass(u0, 1e-8), c);
  CHECK(t.times.size() == 21);
  CHECK(std::isnan(t.residual.front()));
  CHECK(std::isnan(t.residual.back()));
  CHECK(t.exterior_mass <= 1e-8);
  CHECK(t.max_relative_residual() <= 1e-5);
  CHECK(t.to_csv().rfind("t,R,z_R,dz_R,h_star,residual\n", 0) == 0);
}

TEST_CASE("large-scale harness validation and y-independent control") {
  const Grid3 g{64, 24.0, 8};
  const Field3 u = make_gaussian(g, 1.0, 1.0);
  CHECK_THROWS_AS(large_scale_compare(u, {2.0, 1.0}, 0.1), Error);
  CHECK_THROWS_AS(large_scale_compare(u, {0.5, 1.0}, 0.1), Error);
  LargeScaleOptions o;
  o.dt = 2e-3;
  o.full_dt_max = 1e-2;
  o.samples = 4;
  const LargeScaleResult r = large_scale_compare(u, {1.0, 2.0}, 0.2, o);
  CHECK(r.times.size() == 4);
  CHECK(r.times.back() == doctest::Approx(0.2));
  CHECK(r.times.front() == doctest::Approx(0.025));
  for (double d : r.deltas) CHECK(d <= 1e-12);
  CHECK(r.to_csv().rfind("lambda,delta\n", 0) == 0);
  CHECK(r.gaps_to_csv().rfind("lambda,tau,t_phys,gap\n", 0) == 0);
  CHECK(parse_phase_convention(to_string(PhaseConvention::None)) == PhaseConvention::None);
  CHECK_THROWS_AS(parse_phase_convention("sideways"), Error);
}

TEST_CASE("campaign records failures per row and is deterministic") {
  std::vector<CampaignRow> rows = {small_row("low", System::Full, 0.1), small_row("rs", System::Resonant, 0.5),
                                   small_row("broken", System::Full, 0.3), small_row("high", System::Full, 1.0)};
  rows[1].datum.y_modulation = 0.2;
  rows[2].datum.kind = "snapshot";
  rows[2].datum.path = "/nonexistent/field.wgs";
  const GNConstants& c = test::shared_constants();
  const CampaignResult a = threshold_campaign(rows, c, CChoice::Upper, 2, "cfg");
  REQUIRE(a.rows.size() == 4);
  CHECK(a.rows[0].name == "low");
  CHECK(a.rows[0].ok);
  CHECK(a.rows[1].ok);
  CHECK(a.rows[1].system == System::Resonant);
  CHECK_FALSE(a.rows[2].ok);
  CHECK_FALSE(a.rows[2].error.empty());
  CHECK(a.rows[3].ok);
  CHECK(a.rows[0].report.classification == Regime::Scattering);
  const CampaignResult b = threshold_campaign(rows, c, CChoice::Upper, 1, "cfg");
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_csv().rfind("name,system,classification,status,", 0) == 0);
  CHECK(parse_system("resonant") == System::Resonant);
  CHECK_THROWS_AS(parse_system("other"), Error);
}

TEST_CASE("campaign reference rows") {
  const GNConstants& c = test::shared_constants();
  CampaignRow sub = small_row("subthreshold", System::Full, 0.1);
  sub.grid = Grid3{128, 64.0, 8};
  sub.controls.t_end = 10.0;
  sub.controls.sample_every = 10;
  CampaignRow neg = small_row("negative", System::Resonant, 2.1);
  neg.grid = Grid3{128, 16.0, 8};
  neg.controls.dt = 1e-3;
  neg.controls.t_end = 2.0;
  neg.controls.sample_every = 50;
  CampaignRow out = small_row("outside", System::Full, std::sqrt(2.5 * c.mass_Q / (2.0 * pi)));
  out.grid = Grid3{64, 32.0, 8};
  const CampaignResult r = threshold_campaign({sub, neg, out}, c, CChoice::Upper, 1);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].report.classification == Regime::Scattering);
  CHECK(r.rows[0].status == RunStatus::ScatterLike);
  CHECK(r.rows[1].report.diagnostics.energy < 0.0);
  CHECK(r.rows[1].status == RunStatus::BlowupDetected);
  CHECK(r.rows[2].ok);
  CHECK(r.rows[2].report.classification == Regime::Outside);
  CHECK(r.rows[2].steps > 0);
}

}
