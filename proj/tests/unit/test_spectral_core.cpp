#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"
#include "wgnls/projectors.hpp"

using namespace wgnls;
using std::numbers::pi;

TEST_SUITE("spectral_core") {

TEST_CASE("grid validation rejects non powers of two") {
  CHECK_NOTHROW(Grid3{64, 32.0, 8}.validate());
  CHECK_THROWS_AS(Grid3({100, 32.0, 8}).validate(), Error);
  CHECK_THROWS_AS(Grid3({64, 32.0, 4}).validate(), Error);
  CHECK_THROWS_AS(Grid3({64, -1.0, 8}).validate(), Error);
  CHECK_THROWS_AS(Grid2({6, 32.0}).validate(), Error);
}

TEST_CASE("transform round trip and Parseval on random fields") {
  const Grid3 g{16, 10.0, 8};
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Field3 f = test::random_field(g, s);
    const Spectrum3 c = to_spectral(f);
    double coeff = 0.0;
    for (const auto& v : c.coeffs) coeff += std::norm(v);
    const double phys = std::pow(norm(f, NormKind::L2), 2);
    CHECK(std::abs(coeff * g.cell_volume() - phys) <= 1e-12 * phys);
    const Field3 back = from_spectral(c);
    CHECK(relative_l2_gap(back, f) <= 1e-12);
  }
}

TEST_CASE("shape mismatch is reported") {
  Field3 f(Grid3{16, 10.0, 8});
  f.values.resize(10);
  CHECK_THROWS_AS(to_spectral(f), Error);
}

TEST_CASE("constant field has one zero-frequency coefficient") {
  const Grid3 g{16, 10.0, 8};
  Field3 f(g);
  for (auto& v : f.values) v = 1.0;
  const Spectrum3 c = to_spectral(f);
  CHECK(std::abs(c.coeffs[0]) > 1.0);
  for (std::size_t i = 1; i < c.coeffs.size(); ++i) CHECK(std::abs(c.coeffs[i]) <= 1e-14 * std::abs(c.coeffs[0]));
}

TEST_CASE("pure x mode lands in one coefficient") {
  const Grid3 g{16, 10.0, 8};
  Field3 f(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j)
      for (int l = 0; l < g.n_y; ++l) f(i, j, l) = std::polar(1.0, 2.0 * pi / g.box_length * g.x(i));
  const Spectrum3 c = to_spectral(f);
  const std::size_t hit = f.index(1, 0, 0);
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    if (i == hit) CHECK(std::abs(c.coeffs[i]) > 1.0);
    else CHECK(std::abs(c.coeffs[i]) <= 1e-12);
  }
}

TEST_CASE("norms of constant, Gaussian and cos y") {
  {
    const Grid3 g{16, 16.0, 8};
    Field3 f(g);
    for (auto& v : f.values) v = 1.0;
    CHECK(test::rel(norm(f, NormKind::L2), std::sqrt(16.0 * 16.0 * 2.0 * pi)) <= 1e-13);
  }
  {
    const Grid3 g{128, 32.0, 8};
    Field3 f(g);
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j)
        for (int l = 0; l < g.n_y; ++l) f(i, j, l) = std::exp(-0.5 * (g.x(i) * g.x(i) + g.x(j) * g.x(j)));
    CHECK(test::rel(std::pow(norm(f, NormKind::L2), 2), 2 * pi * pi) <= 1e-12);
    CHECK(test::rel(std::pow(norm(f, NormKind::GradX_L2), 2), 2 * pi * pi) <= 1e-10);
    CHECK(test::rel(std::pow(norm(f, NormKind::L4), 4), 2 * pi * pi / 2) <= 1e-12);
    CHECK(norm(f, NormKind::GradY_L2) <= 1e-12);
  }
  {
    const Grid3 g{8, 1.0, 32};
    Field3 f(g);
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j)
        for (int l = 0; l < g.n_y; ++l) f(i, j, l) = std::cos(g.y(l));
    // divide out the unit x-area
    CHECK(test::rel(lp_power(f, 4), 3 * pi / 4) <= 1e-12);
    CHECK(test::rel(std::pow(norm(f, NormKind::GradY_L2), 2), pi) <= 1e-12);
    CHECK(test::rel(std::pow(norm(f, NormKind::H1y), 2), 2 * pi) <= 1e-12);
    CHECK(norm(f, NormKind::H1y) == doctest::Approx(norm(f, NormKind::Lx2Hy1)).epsilon(1e-15));
  }
}

TEST_CASE("L4 norm is the plain quadrature of |f|^4") {
  const Field3 f = test::random_field(Grid3{8, 3.0, 8}, 3);
  double direct = 0.0;
  for (const auto& v : f.values) direct += std::norm(v) * std::norm(v);
  direct *= f.grid.cell_volume();
  CHECK(std::pow(norm(f, NormKind::L4), 4) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("projector pieces sum to the identity") {
  const Field3 f = test::random_field(Grid3{32, 10.0, 8}, 5);
  const Field3 lo = lp_project(f, 3.0, LpMode::Leq), hi = lp_project(f, 3.0, LpMode::Gt);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(lo.values[i] + hi.values[i] - f.values[i]) <= 1e-13);
  CHECK_THROWS_AS(lp_project(f, 0.0, LpMode::Leq), Error);
  CHECK_THROWS_AS(lp_project(f, -1.0, LpMode::Band), Error);
}

TEST_CASE("projector fixes band-limited data and is idempotent off the annulus") {
  const Grid3 g{32, 10.0, 8};
  const double N = 3.0;
  const Field3 band = lp_project(test::random_field(g, 9), N, LpMode::Leq);
  CHECK(relative_l2_gap(lp_project(band, 2 * N, LpMode::Leq), band) <= 1e-12);
  // only frequencies |xi| <= N / 2 survive, well inside the flat part
  const Field3 inner_band = lp_project(lp_project(test::random_field(g, 10), N / 2, LpMode::Leq), N / 2, LpMode::Leq);
  const Field3 once = lp_project(inner_band, N, LpMode::Leq);
  CHECK(relative_l2_gap(lp_project(once, N, LpMode::Leq), once) <= 1e-12);
}

TEST_CASE("Bernstein constant stays below 1.2") {
  const Grid3 g{32, 10.0, 8};
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Field3 f = test::random_field(g, 100 + s);
    const double N = 1.0 + static_cast<double>(s % 5);
    const Field3 p = lp_project(f, N, LpMode::Leq);
    worst = std::max(worst, norm(p, NormKind::GradX_L2) / (N * norm(f, NormKind::L2)));
  }
  CHECK(worst <= 1.2);
}

TEST_CASE("bump profile") {
  CHECK(lp_bump(0.0) == 1.0);
  CHECK(lp_bump(1.0) == 1.0);
  CHECK(lp_bump(1.1) == 0.0);
  CHECK(lp_bump(2.0) == 0.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 1.1; r += 0.001) {
    CHECK(lp_bump(r) <= prev + 1e-15);
    prev = lp_bump(r);
  }
}

TEST_CASE("mean split is orthogonal") {
  const Field3 f = test::random_field(Grid3{16, 10.0, 8}, 11);
  const MeanSplit s = y_mean_split(f);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(s.mean.values[i] + s.fluct.values[i] - f.values[i]) <= 1e-14);
  const double m2 = std::pow(norm(f, NormKind::L2), 2);
  CHECK(std::abs(inner(s.mean, s.fluct)) <= 1e-12 * m2);
  CHECK(std::pow(norm(s.mean, NormKind::L2), 2) + std::pow(norm(s.fluct, NormKind::L2), 2) ==
        doctest::Approx(m2).epsilon(1e-12));
  const Grid3& g = f.grid;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      cplx avg = 0.0;
      for (int l = 0; l < g.n_y; ++l) avg += s.fluct(i, j, l);
      CHECK(std::abs(avg) <= 1e-12);
    }
}

TEST_CASE("mean split of separable data") {
  const Grid3 g{16, 10.0, 8};
  Field3 f(g), c(g);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j)
      for (int l = 0; l < g.n_y; ++l) {
        const double gx = std::exp(-(g.x(i) * g.x(i) + g.x(j) * g.x(j)));
        f(i, j, l) = gx * (1.0 + std::cos(g.y(l)));
        c(i, j, l) = gx * std::cos(g.y(l));
      }
  const MeanSplit s = y_mean_split(f);
  CHECK(relative_l2_gap(s.fluct, c) <= 1e-13);
  const MeanSplit z = y_mean_split(c);
  CHECK(norm(z.mean, NormKind::L2) <= 1e-13);
  const MeanSplit yi = y_mean_split(s.mean);
  CHECK(norm(yi.fluct, NormKind::L2) <= 1e-13);
}

}
