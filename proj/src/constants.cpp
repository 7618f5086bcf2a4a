#include "wgnls/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"
#include "wgnls/projectors.hpp"
#include "wgnls/townes.hpp"

namespace wgnls {

using std::numbers::pi;

std::string to_string(CChoice choice) { return choice == CChoice::Upper ? "upper" : "empirical"; }

CChoice parse_c_choice(const std::string& text) {
  if (text == "upper") return CChoice::Upper;
  if (text == "empirical") return CChoice::Empirical;
  throw Error(ErrorKind::Config, "c_choice must be 'upper' or 'empirical', got '" + text + "'");
}

double GNConstants::scattering_mass() const { return pi * mass_Q; }
double GNConstants::gwp_mass() const { return 2.0 * pi * mass_Q; }

// ---- JSON ---------------------------------------------------------------

namespace {

const char* const kScalarKeys[] = {"mass_Q",  "c_gn_2d",      "c_gn_rs",   "g_hat",
                                   "c_torus", "c_star_upper", "c_star_emp"};

double* scalar_slot(GNConstants& c, std::string_view key) {
  if (key == "mass_Q") return &c.mass_Q;
  if (key == "c_gn_2d") return &c.c_gn_2d;
  if (key == "c_gn_rs") return &c.c_gn_rs;
  if (key == "g_hat") return &c.g_hat;
  if (key == "c_torus") return &c.c_torus;
  if (key == "c_star_upper") return &c.c_star_upper;
  if (key == "c_star_emp") return &c.c_star_emp;
  return nullptr;
}

}  // namespace

std::string to_json(const GNConstants& c) {
  nlohmann::json j;
  GNConstants copy = c;
  for (const char* key : kScalarKeys) j[key] = *scalar_slot(copy, key);
  j["solver_metadata"] = c.solver_metadata;
  return j.dump(2);
}

GNConstants constants_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("constants JSON does not parse: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Config, "constants JSON must be an object");
  GNConstants c;
  std::string missing;
  for (const char* key : kScalarKeys) {
    if (!j.contains(key) || !j[key].is_number()) {
      missing += missing.empty() ? key : std::string(", ") + key;
      continue;
    }
    *scalar_slot(c, key) = j[key].get<double>();
  }
  if (!missing.empty()) throw Error(ErrorKind::Config, "constants JSON lacks numeric keys: " + missing);
  if (j.contains("solver_metadata") && j["solver_metadata"].is_object()) {
    for (auto& [k, v] : j["solver_metadata"].items()) {
      c.solver_metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return c;
}

GNConstants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open constants file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return constants_from_json(ss.str());
}

void save_constants(const GNConstants& c, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::Io, "cannot write constants file " + path);
    out << to_json(c) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error(ErrorKind::Io, "cannot move constants file into place at " + path);
  }
}

// ---- sextic GN constant -------------------------------------------------

double gn_quotient_sextic(const Field2& u) {
  const auto m = quadratic_moments(u);
  const double l6 = lp_power(u, 6);
  if (!(l6 > 0.0)) throw Error(ErrorKind::Domain, "sextic quotient needs a nonzero field");
  return m.mass * m.grad_x_sq * m.grad_x_sq / l6;
}

SexticResult gn_constant_sextic_estimate(double tol, const SexticOptions& opts) {
  const Grid2& g = opts.grid;
  g.validate();
  std::vector<double> xi2(g.size());
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) xi2[static_cast<std::size_t>(i) * g.n_x + j] = g.xi(i) * g.xi(i) + g.xi(j) * g.xi(j);

  Field2 u(g);
  const double w = opts.initial_width;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j);
      u(i, j) = std::exp(-0.5 * r2 / (w * w));
    }
  const double target_mass = quadratic_moments(u).mass;

  SexticResult out;
  CVector t(g.size());
  for (int it = 1; it <= opts.max_iter; ++it) {
    const auto m = quadratic_moments(u);
    const double c6 = lp_power(u, 6);
    // Descent direction u - (B/4)(1 - Delta)^{-1}(6 u^5 / C). The unit shift pins
    // the dilation scale (at a critical point B = 2A, so the shift B/(2A) of the
    // exact Sobolev preconditioner equals 1); without it the iterate drifts
    // along the neutral dilation orbit until the grid under-resolves it.
    for (std::size_t n = 0; n < t.size(); ++n) {
      const double a2 = std::norm(u.values[n]);
      t[n] = 6.0 * a2 * a2 * u.values[n] / c6;
    }
    fft_inplace(t, g, Direction::Forward);
    for (std::size_t n = 0; n < t.size(); ++n) t[n] *= m.grad_x_sq / (4.0 * (xi2[n] + 1.0));
    fft_inplace(t, g, Direction::Backward);

    // The amplitude direction is removed by the renormalization below, so
    // convergence is judged on the part of the step orthogonal to u.
    cplx ut = 0.0;
    double unorm = 0.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
      ut += std::conj(u.values[n]) * t[n];
      unorm += std::norm(u.values[n]);
    }
    const cplx mu = ut / unorm;
    double dnorm = 0.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
      dnorm += std::norm(t[n] - mu * u.values[n]);
      u.values[n] -= opts.step * (u.values[n] - t[n]);
    }
    const double rel = std::sqrt(dnorm / unorm);
    const double scale = std::sqrt(target_mass / quadratic_moments(u).mass);
    for (auto& v : u.values) v *= scale;
    if (!std::isfinite(rel)) throw ConvergenceError("sextic descent produced non-finite values", rel);
    out.iterations = it;
    out.gradient_norm = rel;
    if (rel <= tol) {
      for (auto& v : u.values) v = cplx(v.real(), 0.0);
      out.value = gn_quotient_sextic(u);
      out.minimizer = std::move(u);
      return out;
    }
  }
  throw ConvergenceError("sextic descent did not reach tolerance", out.gradient_norm);
}

// ---- torus constant -----------------------------------------------------

namespace {

struct TorusEval {
  double value = 0.0;
  std::vector<double> grad_a, grad_b;  // gradient of log quotient
};

class TorusProblem {
 public:
  explicit TorusProblem(int n) : n_(n), nq_(std::max(64, 8 * n + 8)) {
    cos_.resize(static_cast<std::size_t>(n) * nq_);
    sin_.resize(cos_.size());
    for (int k = 1; k <= n; ++k)
      for (int l = 0; l < nq_; ++l) {
        const double y = kTwoPi * l / nq_;
        cos_[idx(k, l)] = std::cos(k * y);
        sin_[idx(k, l)] = std::sin(k * y);
      }
  }

  TorusEval eval(const std::vector<double>& a, const std::vector<double>& b, bool want_grad) const {
    std::vector<double> u(nq_, 0.0);
    for (int k = 1; k <= n_; ++k)
      for (int l = 0; l < nq_; ++l) u[l] += a[k - 1] * cos_[idx(k, l)] + b[k - 1] * sin_[idx(k, l)];
    double A = 0.0, B = 0.0;
    for (int k = 1; k <= n_; ++k) {
      const double s = a[k - 1] * a[k - 1] + b[k - 1] * b[k - 1];
      A += pi * s;
      B += pi * k * k * s;
    }
    const double wq = kTwoPi / nq_;
    double P = 0.0;
    for (double v : u) P += v * v * v * v;
    P *= wq;
    TorusEval e;
    e.value = P / (std::pow(A, 1.5) * std::sqrt(B));
    if (!want_grad) return e;
    e.grad_a.assign(n_, 0.0);
    e.grad_b.assign(n_, 0.0);
    for (int k = 1; k <= n_; ++k) {
      double pa = 0.0, pb = 0.0;
      for (int l = 0; l < nq_; ++l) {
        const double c3 = 4.0 * u[l] * u[l] * u[l];
        pa += c3 * cos_[idx(k, l)];
        pb += c3 * sin_[idx(k, l)];
      }
      pa *= wq;
      pb *= wq;
      const double ka = a[k - 1], kb = b[k - 1];
      e.grad_a[k - 1] = pa / P - 1.5 * 2.0 * pi * ka / A - 0.5 * 2.0 * pi * k * k * ka / B;
      e.grad_b[k - 1] = pb / P - 1.5 * 2.0 * pi * kb / A - 0.5 * 2.0 * pi * k * k * kb / B;
    }
    return e;
  }

  int modes() const { return n_; }

 private:
  std::size_t idx(int k, int l) const { return static_cast<std::size_t>(k - 1) * nq_ + l; }
  int n_;
  int nq_;
  std::vector<double> cos_, sin_;
};

void normalize(std::vector<double>& a, std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i] + b[i] * b[i];
  s = 1.0 / std::sqrt(s);
  for (auto& v : a) v *= s;
  for (auto& v : b) v *= s;
}

/// Gradient ascent with an adaptive step; the quotient never decreases.
double ascend(const TorusProblem& prob, std::vector<double>& a, std::vector<double>& b, double tol, int max_iter) {
  normalize(a, b);
  auto cur = prob.eval(a, b, true);
  double step = 0.1;
  int quiet = 0;
  for (int it = 0; it < max_iter && step > 1e-14; ++it) {
    std::vector<double> na = a, nb = b;
    for (int k = 0; k < prob.modes(); ++k) {
      const double damp = 1.0 / (k + 1.0);
      na[k] += step * damp * cur.grad_a[k];
      nb[k] += step * damp * cur.grad_b[k];
    }
    normalize(na, nb);
    auto next = prob.eval(na, nb, true);
    if (next.value > cur.value) {
      const double gain = (next.value - cur.value) / cur.value;
      a = std::move(na);
      b = std::move(nb);
      cur = std::move(next);
      step *= 1.3;
      quiet = gain < tol ? quiet + 1 : 0;
      if (quiet >= 20) break;
    } else {
      step *= 0.5;
    }
  }
  return cur.value;
}

}  // namespace

double torus_quotient(const std::vector<double>& cos_coeffs, const std::vector<double>& sin_coeffs) {
  if (cos_coeffs.size() != sin_coeffs.size() || cos_coeffs.empty()) {
    throw Error(ErrorKind::Shape, "torus coefficients must be nonempty and of equal length");
  }
  TorusProblem prob(static_cast<int>(cos_coeffs.size()));
  return prob.eval(cos_coeffs, sin_coeffs, false).value;
}

double torus_concentration_bound() { return 1.0 / std::sqrt(3.0); }

double torus_constant_estimate(int n_modes, double tol, const TorusOptions& opts) {
  if (n_modes < 2) throw Error(ErrorKind::Domain, "torus_constant_estimate needs n_modes >= 2");
  std::vector<double> best_a{1.0}, best_b{0.0};
  double best = torus_quotient(best_a, best_b);
  for (int n = 2; n <= n_modes; ++n) {
    TorusProblem prob(n);
    best_a.push_back(0.0);
    best_b.push_back(0.0);
    std::vector<double> a = best_a, b = best_b;
    // Kick the new mode so the warm start can use it.
    a[n - 1] = 1e-3;
    double v = ascend(prob, a, b, tol, opts.max_iter);
    if (v > best) {
      best = v;
      best_a = a;
      best_b = b;
    }
    std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(n));
    std::normal_distribution<double> normal;
    for (int r = 0; r < opts.restarts; ++r) {
      for (int k = 0; k < n; ++k) {
        a[k] = normal(rng) / (k + 1.0);
        b[k] = normal(rng) / (k + 1.0);
      }
      v = ascend(prob, a, b, tol, opts.max_iter);
      if (v > best) {
        best = v;
        best_a = a;
        best_b = b;
      }
    }
  }
  return best;
}

// ---- mixed GN inequality ------------------------------------------------

double MixedGnParts::required_c() const {
  if (lhs <= first) return 0.0;
  if (!(second_per_c > 0.0)) return std::numeric_limits<double>::infinity();
  return (lhs - first) / second_per_c;
}

MixedGnParts mixed_gn_parts(const Field3& u, double mass_Q) {
  const auto m = quadratic_moments(u);
  MixedGnParts p;
  p.lhs = std::pow(lp_power(u, 4), 0.25);
  const double gx = std::pow(m.grad_x_sq, 0.25);
  p.first = gx * std::pow(pi * mass_Q, -0.25) * std::pow(m.mass, 0.25);
  p.second_per_c = gx * std::pow(m.mass, 0.125) * std::pow(m.grad_y_sq, 0.125);
  return p;
}

double c_star_upper_bound(double c_torus, double g_hat) {
  return std::pow(c_torus, 0.25) * std::pow(g_hat, -0.125) * std::pow(1.0 + 1.0 / std::sqrt(kTwoPi), 0.75);
}

Field3 random_test_field(const Grid3& grid, std::uint64_t seed, const Field2* townes) {
  grid.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> normal;
  auto cnormal = [&] { return cplx(normal(rng), normal(rng)); };

  Field3 u(grid);
  const int terms = 1 + static_cast<int>(uni(rng) * 3.0);
  const bool use_townes = townes != nullptr && uni(rng) < 0.3;
  const int kmax = std::min(3, grid.n_y / 2 - 1);
  for (int t = 0; t < terms; ++t) {
    const double cx = (uni(rng) - 0.5) * 0.2 * grid.box_length;
    const double cy = (uni(rng) - 0.5) * 0.2 * grid.box_length;
    const double s = 0.7 + 1.3 * uni(rng);
    const cplx amp = cnormal();
    std::vector<cplx> phi(static_cast<std::size_t>(2 * kmax + 1));
    const bool drop_mean = uni(rng) < 0.25;
    for (int k = -kmax; k <= kmax; ++k) {
      phi[static_cast<std::size_t>(k + kmax)] = (k == 0 && drop_mean) ? cplx(0.0) : cnormal() / (1.0 + k * k);
    }
    for (int i = 0; i < grid.n_x; ++i)
      for (int j = 0; j < grid.n_x; ++j) {
        cplx gx;
        if (use_townes && t == 0) {
          gx = (*townes)(i, j);
        } else {
          const double dx = grid.x(i) - cx, dy = grid.x(j) - cy;
          gx = amp * std::exp(-0.5 * (dx * dx + dy * dy) / (s * s));
        }
        for (int l = 0; l < grid.n_y; ++l) {
          cplx py = 0.0;
          for (int k = -kmax; k <= kmax; ++k) py += phi[static_cast<std::size_t>(k + kmax)] * std::polar(1.0, k * grid.y(l));
          u(i, j, l) += gx * py;
        }
      }
  }
  // Band-limit in x well inside the grid's resolvable range.
  const double xi_max = pi / grid.hx();
  return lp_project(u, 0.5 * xi_max, LpMode::Leq);
}

std::pair<double, double> c_star_bounds(const GNConstants& partial, int n_samples, const CStarSampling& sampling) {
  const double upper = c_star_upper_bound(partial.c_torus, partial.g_hat);
  double emp = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const Field3 u = random_test_field(sampling.grid, sampling.seed * 7919ULL + static_cast<std::uint64_t>(s), sampling.townes);
    const double c = mixed_gn_parts(u, partial.mass_Q).required_c();
    if (std::isfinite(c)) emp = std::max(emp, c);
  }
  if (sampling.townes != nullptr) {
    // Q(x)(1 + cos y): the probe showing that c = 0 fails.
    Field3 u(sampling.grid);
    for (int i = 0; i < sampling.grid.n_x; ++i)
      for (int j = 0; j < sampling.grid.n_x; ++j)
        for (int l = 0; l < sampling.grid.n_y; ++l) u(i, j, l) = (*sampling.townes)(i, j) * (1.0 + std::cos(sampling.grid.y(l)));
    emp = std::max(emp, mixed_gn_parts(u, partial.mass_Q).required_c());
  }
  return {upper, emp};
}

// ---- full pipeline ------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

GNConstants compute_constants(const ConstantsOptions& opts) {
  GNConstants c;
  const auto spectral = solve_townes_spectral(opts.townes_grid, opts.townes_tol);
  c.mass_Q = lp_power(spectral.q, 2);
  c.c_gn_2d = gn_quotient_cubic(spectral.q);
  c.c_gn_rs = 0.5 * c.c_gn_2d;

  const auto shot = solve_townes_shooting(opts.shooting_tol);
  const auto sextic = gn_constant_sextic_estimate(opts.sextic_tol, opts.sextic);
  c.g_hat = sextic.value;
  TorusOptions topts;
  topts.seed = opts.seed;
  const double torus_ascent = torus_constant_estimate(opts.torus_modes, opts.torus_tol, topts);
  c.c_torus = std::max(torus_ascent, torus_concentration_bound());

  CStarSampling sampling;
  sampling.seed = opts.seed;
  const Field2 q_small = sample_on_grid(shot, sampling.grid.xgrid());
  sampling.townes = &q_small;
  const auto [upper, emp] = c_star_bounds(c, opts.c_star_samples, sampling);
  c.c_star_upper = upper;
  c.c_star_emp = emp;

  auto& md = c.solver_metadata;
  md["townes_grid"] = std::to_string(opts.townes_grid.n_x) + "^2, box " + fmt_double(opts.townes_grid.box_length);
  md["townes_iterations"] = std::to_string(spectral.iterations);
  md["townes_residual"] = fmt_double(spectral.residual);
  md["townes_q0_spectral"] = fmt_double(std::abs(spectral.q(opts.townes_grid.n_x / 2, opts.townes_grid.n_x / 2)));
  md["townes_q0_shooting"] = fmt_double(shot.q0());
  md["mass_Q_shooting"] = fmt_double(shot.mass());
  md["sextic_iterations"] = std::to_string(sextic.iterations);
  md["torus_modes"] = std::to_string(opts.torus_modes);
  md["torus_ascent"] = fmt_double(torus_ascent);
  md["torus_concentration_bound"] = fmt_double(torus_concentration_bound());
  md["c_star_samples"] = std::to_string(opts.c_star_samples);
  md["seed"] = std::to_string(opts.seed);
  return c;
}

}  // namespace wgnls
