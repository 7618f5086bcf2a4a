#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "wgnls/datum.hpp"
#include "wgnls/error.hpp"
#include "wgnls/thresholds.hpp"
#include "wgnls/townes.hpp"

using namespace wgnls;
using std::numbers::pi;

TEST_SUITE("thresholds") {

TEST_CASE("diagnostics of simple data") {
  const GNConstants& c = test::shared_constants();
  const Grid3 g{128, 32.0, 8};

  const Diagnostics z = diagnostics(Field3(g), c);
  CHECK(z.mass == 0.0);
  CHECK(z.energy == 0.0);
  CHECK(z.grad_y_sq == 0.0);
  CHECK(std::isinf(z.kappa));

  const double A = 0.7;
  const Diagnostics d = diagnostics(make_gaussian(g, A, 1.0), c);
  CHECK(d.mass == doctest::Approx(2 * pi * A * A * pi).epsilon(1e-12));
  CHECK(d.energy == doctest::Approx(2 * pi * (0.5 * A * A * pi - 0.125 * std::pow(A, 4) * pi)).epsilon(1e-10));
  CHECK(d.grad_y_sq == doctest::Approx(0.0).epsilon(1e-14));

  Field3 w(g);
  double gl2 = 0.0;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double v = std::exp(-0.5 * (g.x(i) * g.x(i) + g.x(j) * g.x(j)));
      gl2 += v * v;
      for (int l = 0; l < g.n_y; ++l) w(i, j, l) = v * std::polar(1.0, g.y(l));
    }
  gl2 *= g.hx() * g.hx();
  const Diagnostics e = diagnostics(w, c);
  CHECK(e.grad_y_sq == doctest::Approx(2 * pi * gl2).epsilon(1e-12));
  CHECK(e.momentum[2] == doctest::Approx(2 * pi * gl2).epsilon(1e-12));
  CHECK(std::abs(e.momentum[0]) <= 1e-12);
}

TEST_CASE("energy splits into h_star and the y-gradient") {
  const GNConstants& c = test::shared_constants();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Field3 u = random_test_field(Grid3{32, 16.0, 8}, s);
    const Diagnostics d = diagnostics(u, c);
    CHECK(std::abs(d.energy - d.h_star - 0.5 * d.grad_y_sq) <= 1e-12 * (std::abs(d.energy) + d.grad_y_sq));
    CHECK(d.h_star <= d.energy);
  }
}

TEST_CASE("Gamma endpoints, value and monotonicity") {
  const GNConstants& c = test::shared_constants();
  CHECK(gamma(c.gwp_mass(), c) == 0.0);
  const double mq = c.scattering_mass();
  const double expected = std::pow(c.c_star_upper, -8.0) / mq * std::pow(std::pow(2.0, 0.25) - 1.0, 8.0);
  CHECK(gamma(mq, c) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::pow(std::pow(2.0, 0.25) - 1.0, 8.0) == doctest::Approx(1.642e-6).epsilon(1e-3));
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 100; ++i) {
    const double g = gamma(c.gwp_mass() * i / 100.0, c);
    CHECK(g < prev);
    prev = g;
  }
  CHECK_THROWS_AS(gamma(0.0, c), Error);
  CHECK_THROWS_AS(gamma(-1.0, c), Error);
  CHECK_THROWS_AS(gamma(c.gwp_mass() * 1.0001, c), Error);
  CHECK(gamma(mq, c, CChoice::Empirical) > gamma(mq, c, CChoice::Upper));
}

TEST_CASE("MEI functional values and monotonicity") {
  const GNConstants& c = test::shared_constants();
  CHECK(mei(0.0, 0.0, c) == 0.0);
  const double m = 0.5 * c.scattering_mass();
  CHECK(std::isinf(mei(m, 0.5 * gamma(m, c), c)));
  CHECK(std::isinf(mei(c.scattering_mass(), 0.0, c)));
  CHECK(std::isfinite(mei(m, 0.25 * gamma(m, c), c)));
  CHECK_THROWS_AS(mei(-1.0, 0.0, c), Error);

  // 50 x 50 sample of Omega with c >= 0, h >= 0
  const int n = 50;
  const double cmax = 0.999 * c.scattering_mass();
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  const double hmax = 0.5 * gamma(1e-3 * cmax, c);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) d[i][k] = mei(cmax * i / (n - 1), hmax * k / (n - 1), c);
  int violations = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i + 1 < n && d[i + 1][k] < d[i][k]) ++violations;
      if (k + 1 < n && d[i][k + 1] < d[i][k]) ++violations;
    }
  CHECK(violations == 0);
}

TEST_CASE("classify the three reference data") {
  const GNConstants& c = test::shared_constants();
  const Grid3 g{64, 32.0, 8};

  const ThresholdReport s = classify(make_gaussian(g, 0.1, 1.0), c);
  CHECK(s.classification == Regime::Scattering);
  CHECK(s.mass_below_scattering);
  CHECK(s.energy_below);
  CHECK(s.grad_y_below);
  CHECK(s.mass_below_gwp);
  CHECK(std::isfinite(s.mei));

  const Field3 wide = make_wide_gwp(64, 8, 1.5 * c.scattering_mass(), 0.25 * gamma(1.5 * c.scattering_mass(), c));
  const ThresholdReport w = classify(wide, c);
  CHECK(w.diagnostics.mass == doctest::Approx(1.5 * c.scattering_mass()).epsilon(1e-9));
  CHECK(w.classification == Regime::Gwp);
  CHECK_FALSE(w.mass_below_scattering);
  CHECK(w.energy_below);
  CHECK(w.grad_y_below);

  // amplitude giving mass 2.5 pi M(Q) for a unit Gaussian: 2 pi^2 A^2 = 2.5 pi M(Q)
  const double a = std::sqrt(2.5 * c.mass_Q / (2.0 * pi));
  const ThresholdReport o = classify(make_gaussian(g, a, 1.0), c);
  CHECK(o.diagnostics.mass == doctest::Approx(2.5 * c.scattering_mass()).epsilon(1e-10));
  CHECK(o.classification == Regime::Outside);
  CHECK(std::isnan(o.gamma));
}

TEST_CASE("classify ignores x-translation and y-shift") {
  const GNConstants& c = test::shared_constants();
  const Grid3 g{64, 32.0, 8};
  const Field3 u = make_gaussian(g, 0.3, 1.0, 0.4, 1);
  Field3 moved(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j)
      for (int l = 0; l < g.n_y; ++l) moved((i + 5) % g.n_x, (j + 3) % g.n_x, (l + 2) % g.n_y) = u(i, j, l);
  const ThresholdReport a = classify(u, c), b = classify(moved, c);
  CHECK(a.classification == b.classification);
  CHECK(a.diagnostics.energy == doctest::Approx(b.diagnostics.energy).epsilon(1e-12));
  CHECK(a.diagnostics.grad_y_sq == doctest::Approx(b.diagnostics.grad_y_sq).epsilon(1e-12));
}

TEST_CASE("report JSON encodes non-finite values") {
  const GNConstants& c = test::shared_constants();
  const auto j = nlohmann::json::parse(to_json(classify(Field3(Grid3{16, 8.0, 8}), c)));
  CHECK(j["diagnostics"]["kappa"] == "inf");
  CHECK(j["classification"] == "outside");
  const double a = std::sqrt(2.5 * c.mass_Q / (2.0 * pi));
  const auto k = nlohmann::json::parse(to_json(classify(make_gaussian(Grid3{64, 32.0, 8}, a, 1.0), c)));
  CHECK(k["gamma"].is_null());
}

TEST_CASE("energy trapping") {
  const GNConstants& c = test::shared_constants();
  const Grid3 g{64, 32.0, 8};
  // deep subthreshold: mass 0.1 pi M(Q)
  const double a = std::sqrt(0.1 * c.mass_Q / (2.0 * pi));
  const TrapReport t = energy_trap(make_gaussian(g, a, 1.0, 0.0), c, CChoice::Upper, 0.5);
  CHECK(t.xi > 0.0);
  CHECK(t.applicable);
  CHECK(t.mass_condition);
  CHECK(t.grad_ratio > 0.0);
  CHECK(std::isfinite(t.grad_ratio));
  CHECK(t.grad_x_ratio > 0.0);
  CHECK(t.grad_ratio <= t.grad_ratio_bound);
  CHECK(t.grad_x_ratio <= t.grad_x_ratio_bound);
  for (double s : {1.0, 0.5, 0.25}) {
    const TrapReport r = energy_trap(make_gaussian(g, s * a, 1.0, 0.0), c, CChoice::Upper, 0.5);
    CHECK(r.applicable);
    CHECK(r.grad_ratio <= r.grad_ratio_bound);
  }
  const double m = c.scattering_mass();
  CHECK(std::abs(xi_function(gamma(m, c), m, c)) <= 1e-12);
  CHECK_THROWS_AS(energy_trap(make_gaussian(g, a, 1.0), c, CChoice::Upper, 1.0), Error);
  CHECK_THROWS_AS(energy_trap(make_gaussian(g, a, 1.0), c, CChoice::Upper, 0.0), Error);
}

TEST_CASE("mixed GN residual on reference data") {
  const GNConstants& c = test::shared_constants();
  const Grid3 g{128, 32.0, 8};
  const Field2 q = sample_on_grid(townes_profile(), g.xgrid());
  Field3 probe(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j);
      for (int l = 0; l < g.n_y; ++l) probe(i, j, l) = q(i, j) * (1.0 + 0.05 * std::exp(-r2));
    }
  CHECK(check_gn_r2t1(probe, c) >= 0.0);
  const MixedGnParts p = mixed_gn_parts(probe, c.mass_Q);
  CHECK(p.lhs / p.first >= 0.9);
  CHECK(p.lhs / p.first <= 1.0);
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(check_gn_r2t1(random_test_field(Grid3{32, 16.0, 8}, s), c) >= -1e-10);
}

}
