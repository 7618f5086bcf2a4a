#include "wgnls/thresholds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"

namespace wgnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Gamma extended to the closed half-line: +inf at 0, NaN past 2 pi M(Q).
double gamma_total(double m, const GNConstants& consts, CChoice choice) {
  if (m <= 0.0) return kInf;
  if (m > consts.gwp_mass()) return kNaN;
  return gamma(m, consts, choice);
}

}  // namespace

Diagnostics diagnostics(const Field3& u, const GNConstants& consts, CChoice choice) {
  u.check_shape();
  const Grid3& g = u.grid;
  CVector s = u.values;
  fft_inplace(s, g, Direction::Forward);
  const double w = g.cell_volume();
  double mass = 0.0, gx = 0.0, gy = 0.0, p1 = 0.0, p2 = 0.0, pk = 0.0;
  for (int i = 0; i < g.n_x; ++i) {
    const double a = g.xi(i);
    for (int j = 0; j < g.n_x; ++j) {
      const double b = g.xi(j);
      for (int l = 0; l < g.n_y; ++l) {
        const double k = g.k(l);
        const double e = std::norm(s[u.index(i, j, l)]);
        mass += e;
        gx += (a * a + b * b) * e;
        gy += k * k * e;
        p1 += a * e;
        p2 += b * e;
        pk += k * e;
      }
    }
  }
  Diagnostics d;
  d.mass = mass * w;
  d.grad_x_sq = gx * w;
  d.grad_y_sq = gy * w;
  d.momentum = {p1 * w, p2 * w, pk * w};
  d.l4_pow = lp_power(u, 4);
  d.h_star = 0.5 * d.grad_x_sq - 0.25 * d.l4_pow;
  d.energy = d.h_star + 0.5 * d.grad_y_sq;
  d.kappa = gamma_total(d.mass, consts, choice) - d.grad_y_sq;
  return d;
}

double gamma(double m, const GNConstants& consts, CChoice choice) {
  if (!(m > 0.0) || m > consts.gwp_mass()) {
    throw Error(ErrorKind::Domain, "Gamma(m) is defined for 0 < m <= 2 pi M(Q)");
  }
  if (m == consts.gwp_mass()) return 0.0;
  const double c = consts.c_star(choice);
  const double bracket = std::pow(2.0, 0.25) - std::pow(m / consts.scattering_mass(), 0.25);
  return std::pow(c, -8.0) / m * std::pow(bracket, 8.0);
}

double xi_function(double g, double m, const GNConstants& consts, CChoice choice) {
  const double c = consts.c_star(choice);
  const double s = std::pow(m / consts.scattering_mass(), 0.25) + c * std::pow(m, 0.125) * std::pow(g, 0.125);
  return 2.0 - s * s * s * s;
}

double mei(double c, double h, const GNConstants& consts, CChoice choice) {
  if (c < 0.0) throw Error(ErrorKind::Domain, "the mass-energy functional is implemented for c >= 0 only");
  if (c == 0.0) return h;
  if (c >= consts.scattering_mass()) return kInf;
  const double half_gamma = 0.5 * gamma(c, consts, choice);
  if (!(h < half_gamma)) return kInf;
  return h + c / (consts.scattering_mass() - c) + h / (half_gamma - h);
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Scattering: return "scattering_regime";
    case Regime::Gwp: return "gwp_regime";
    case Regime::Outside: return "outside";
  }
  return "outside";
}

ThresholdReport classify(const Field3& u0, const GNConstants& consts, CChoice choice) {
  ThresholdReport r;
  r.diagnostics = diagnostics(u0, consts, choice);
  r.c_choice = choice;
  r.c_star = consts.c_star(choice);
  const auto& d = r.diagnostics;
  r.gamma = gamma_total(d.mass, consts, choice);
  r.mass_below_scattering = d.mass > 0.0 && d.mass < consts.scattering_mass();
  r.mass_below_gwp = d.mass > 0.0 && d.mass < consts.gwp_mass();
  r.energy_below = d.energy < 0.5 * r.gamma;  // false when gamma is NaN
  r.grad_y_below = d.grad_y_sq < r.gamma;
  const bool common = r.energy_below && r.grad_y_below;
  if (common && r.mass_below_scattering) {
    r.classification = Regime::Scattering;
  } else if (common && r.mass_below_gwp) {
    r.classification = Regime::Gwp;
  } else {
    r.classification = Regime::Outside;
  }
  r.mei = mei(d.mass, d.energy, consts, choice);
  return r;
}

std::string to_json(const ThresholdReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  const auto& d = r.diagnostics;
  nlohmann::json j;
  j["diagnostics"] = {{"mass", num(d.mass)},
                      {"energy", num(d.energy)},
                      {"momentum", {num(d.momentum[0]), num(d.momentum[1]), num(d.momentum[2])}},
                      {"grad_x_sq", num(d.grad_x_sq)},
                      {"grad_y_sq", num(d.grad_y_sq)},
                      {"l4_pow", num(d.l4_pow)},
                      {"h_star", num(d.h_star)},
                      {"kappa", num(d.kappa)}};
  j["c_choice"] = to_string(r.c_choice);
  j["c_star"] = num(r.c_star);
  j["gamma"] = num(r.gamma);
  j["conditions"] = {{"mass_below_scattering", r.mass_below_scattering},
                     {"energy_below_half_gamma", r.energy_below},
                     {"grad_y_below_gamma", r.grad_y_below},
                     {"mass_below_gwp", r.mass_below_gwp}};
  j["classification"] = to_string(r.classification);
  j["mei"] = num(r.mei);
  return j.dump(2);
}

TrapReport energy_trap(const Field3& u, const GNConstants& consts, CChoice choice, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::Domain, "beta must lie in (0, 1)");
  const auto d = diagnostics(u, consts, choice);
  const double gam = gamma_total(d.mass, consts, choice);
  TrapReport t;
  t.xi = xi_function(d.grad_y_sq, d.mass, consts, choice);
  t.mass_condition = d.mass <= (1.0 - beta) * consts.gwp_mass();
  t.energy_condition = d.energy <= (1.0 - beta) * 0.5 * gam;
  t.applicable = t.xi > 0.0 && d.energy > 0.0 && d.h_star > 0.0;
  if (t.applicable) {
    t.grad_ratio = (d.grad_x_sq + d.grad_y_sq) / d.energy;
    t.grad_x_ratio = d.grad_x_sq / d.h_star;
    t.grad_ratio_bound = std::max(2.0, 4.0 / t.xi);
    t.grad_x_ratio_bound = 4.0 / t.xi;
  }
  return t;
}

double check_gn_r2t1(const Field3& u, const GNConstants& consts, CChoice choice) {
  return mixed_gn_parts(u, consts.mass_Q).residual(consts.c_star(choice));
}

}  // namespace wgnls
