#include "wgnls/resonant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"

namespace wgnls {

VecField2::VecField2(int J, const Grid2& g) : j_max(J), grid(g) {
  if (J < 0) throw Error(ErrorKind::Domain, "j_max must be >= 0");
  components.reserve(static_cast<std::size_t>(2 * J + 1));
  for (int j = -J; j <= J; ++j) components.emplace_back(g);
}

void VecField2::validate() const {
  if (components.size() != static_cast<std::size_t>(2 * j_max + 1)) {
    throw Error(ErrorKind::Shape, "VecField2 needs 2J+1 components");
  }
  for (const auto& c : components) {
    if (!(c.grid == grid)) throw Error(ErrorKind::Shape, "VecField2 components must share one grid");
    c.check_shape();
    if (!all_finite(c.values)) throw Error(ErrorKind::Shape, "VecField2 has non-finite entries");
  }
}

std::vector<ResonantTriple> resonant_triples(int k, int J) {
  if (J < 0 || std::abs(k) > J) throw Error(ErrorKind::Domain, "resonant_triples needs |k| <= J");
  std::vector<ResonantTriple> out;
  for (int k1 = -J; k1 <= J; ++k1)
    for (int k3 = -J; k3 <= J; ++k3) {
      const int k2 = k1 + k3 - k;
      if (std::abs(k2) > J) continue;
      if (k1 * k1 - k2 * k2 + k3 * k3 == k * k) out.push_back({k1, k2, k3});
    }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<double> density(const VecField2& u) {
  std::vector<double> s(u.grid.size(), 0.0);
  for (const auto& c : u.components)
    for (std::size_t n = 0; n < s.size(); ++n) s[n] += std::norm(c.values[n]);
  return s;
}

void check_index(const VecField2& u, int j) {
  if (std::abs(j) > u.j_max) throw Error(ErrorKind::Domain, "component index outside -J..J");
}

}  // namespace

Field2 nonlinearity_closed(const VecField2& u, int j) {
  check_index(u, j);
  const auto s = density(u);
  const Field2& uj = u.at(j);
  Field2 out(u.grid);
  for (std::size_t n = 0; n < s.size(); ++n) out.values[n] = (2.0 * s[n] - std::norm(uj.values[n])) * uj.values[n];
  return out;
}

Field2 nonlinearity_bruteforce(const VecField2& u, int j) {
  check_index(u, j);
  Field2 out(u.grid);
  for (const auto& t : resonant_triples(j, u.j_max)) {
    const auto& a = u.at(t.k1).values;
    const auto& b = u.at(t.k2).values;
    const auto& c = u.at(t.k3).values;
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += a[n] * std::conj(b[n]) * c[n];
  }
  return out;
}

namespace {

double quartic_integral(const VecField2& u) {
  const auto s = density(u);
  double acc = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    double self = 0.0;
    for (const auto& c : u.components) {
      const double a = std::norm(c.values[n]);
      self += a * a;
    }
    acc += 2.0 * s[n] * s[n] - self;
  }
  return acc * u.grid.cell_area();
}

}  // namespace

RsConserved conserved_rs(const VecField2& u) {
  RsConserved r;
  double grad = 0.0;
  for (int j = -u.j_max; j <= u.j_max; ++j) {
    const auto m = quadratic_moments(u.at(j));
    r.m0 += m.mass;
    r.m1 += VecField2::weight_sq(j) * m.mass;
    grad += m.grad_x_sq;
  }
  r.energy = 0.5 * grad - 0.25 * quartic_integral(u);
  return r;
}

double weinstein_quotient(const VecField2& u) {
  double mass = 0.0, grad = 0.0;
  for (const auto& c : u.components) {
    const auto m = quadratic_moments(c);
    mass += m.mass;
    grad += m.grad_x_sq;
  }
  const double den = quartic_integral(u);
  if (!(den > 0.0)) throw Error(ErrorKind::Domain, "Weinstein quotient needs a nonzero quartic term");
  return mass * grad / den;
}

VecField2 weinstein_test_vector(const Field2& q, int n, int J) {
  if (n < 0 || n > J) throw Error(ErrorKind::Domain, "test vector needs 0 <= n <= J");
  VecField2 u(J, q.grid);
  for (int j = -n; j <= n; ++j) u.at(j) = q;
  return u;
}

GlasseyVirial glassey_virial(const VecField2& u) {
  const Grid2& g = u.grid;
  const double rc = 0.45 * g.box_length;
  GlasseyVirial out;
  double total = 0.0, outside = 0.0, dv = 0.0, v = 0.0;
  std::vector<double> xi(static_cast<std::size_t>(g.n_x));
  for (int i = 0; i < g.n_x; ++i) xi[i] = g.xi(i);
  for (const auto& c : u.components) {
    CVector d1 = c.values, d2 = c.values;
    fft_inplace(d1, g, Direction::Forward);
    fft_inplace(d2, g, Direction::Forward);
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j) {
        const std::size_t n = c.index(i, j);
        d1[n] *= cplx(0.0, xi[i]);
        d2[n] *= cplx(0.0, xi[j]);
      }
    fft_inplace(d1, g, Direction::Backward);
    fft_inplace(d2, g, Direction::Backward);
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j) {
        const std::size_t n = c.index(i, j);
        const double x1 = g.x(i), x2 = g.x(j);
        const double r2 = x1 * x1 + x2 * x2;
        const double a = std::norm(c.values[n]);
        total += a;
        if (r2 > rc * rc) {
          outside += a;
          continue;
        }
        v += r2 * a;
        dv += std::imag(std::conj(c.values[n]) * (x1 * d1[n] + x2 * d2[n]));
      }
  }
  const double w = g.cell_area();
  out.v = v * w;
  out.dv = 4.0 * dv * w;
  out.ddv_predicted = 16.0 * conserved_rs(u).energy;
  out.tail_fraction = total > 0.0 ? outside / total : 0.0;
  return out;
}

std::string RsOutcome::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,M0,M1,E,V,dV";
  const int J = final.j_max;
  for (int j = -J; j <= J; ++j) os << ",mass_" << j;
  os << '\n';
  for (const auto& s : samples) {
    os << s.t << ',' << s.conserved.m0 << ',' << s.conserved.m1 << ',' << s.conserved.energy << ',' << s.v << ','
       << s.dv;
    for (double m : s.masses) os << ',' << m;
    os << '\n';
  }
  return os.str();
}

namespace {

RsSample sample_rs(const VecField2& u, double t) {
  RsSample s;
  s.t = t;
  s.conserved = conserved_rs(u);
  const auto gv = glassey_virial(u);
  s.v = gv.v;
  s.dv = gv.dv;
  for (const auto& c : u.components) {
    const auto m = quadratic_moments(c);
    s.masses.push_back(m.mass);
    s.grad_sq += m.grad_x_sq;
  }
  return s;
}

class RsStepper {
 public:
  RsStepper(const Grid2& g, bool dealias) : grid_(g), symbol_(g.size()), keep_(g.size(), 1) {
    for (int i = 0; i < g.n_x; ++i)
      for (int j = 0; j < g.n_x; ++j) {
        const std::size_t n = static_cast<std::size_t>(i) * g.n_x + j;
        symbol_[n] = g.xi(i) * g.xi(i) + g.xi(j) * g.xi(j);
        if (dealias && (3 * std::abs(signed_index(i, g.n_x)) > g.n_x || 3 * std::abs(signed_index(j, g.n_x)) > g.n_x)) {
          keep_[n] = 0;
        }
      }
  }

  /// Returns the summed squared gradient after propagation.
  double linear(VecField2& u, double tau) {
    if (tau != tau_) {
      mult_.resize(symbol_.size());
      for (std::size_t n = 0; n < mult_.size(); ++n) mult_[n] = keep_[n] ? std::polar(1.0, -symbol_[n] * tau) : cplx(0.0);
      tau_ = tau;
    }
    double g2 = 0.0;
    for (auto& c : u.components) {
      fft_inplace(c.values, grid_, Direction::Forward);
      for (std::size_t n = 0; n < mult_.size(); ++n) {
        c.values[n] *= mult_[n];
        g2 += symbol_[n] * std::norm(c.values[n]);
      }
      fft_inplace(c.values, grid_, Direction::Backward);
    }
    return g2 * grid_.cell_area();
  }

  /// Returns false if a non-finite value appeared.
  bool nonlinear(VecField2& u, double h) {
    const auto s = density(u);
    bool finite = true;
    for (double v : s)
      if (!std::isfinite(v)) finite = false;
    for (auto& c : u.components)
      for (std::size_t n = 0; n < s.size(); ++n) c.values[n] *= std::polar(1.0, h * (2.0 * s[n] - std::norm(c.values[n])));
    return finite;
  }

 private:
  Grid2 grid_;
  std::vector<double> symbol_;
  std::vector<unsigned char> keep_;
  CVector mult_;
  double tau_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace

RsOutcome evolve_rs(const VecField2& u0, const EvolveControls& c) {
  u0.validate();
  u0.grid.validate();
  if (c.sponge) throw Error(ErrorKind::Config, "the resonant integrator has no sponge layer");
  c.validate(Grid3{u0.grid.n_x, u0.grid.box_length, 8});

  const std::size_t n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.t_end / c.dt)));
  RsStepper st(u0.grid, c.dealias);
  RsOutcome out;
  VecField2 u = u0;
  VecField2 last_good = u0;
  out.samples.push_back(sample_rs(u, 0.0));
  out.initial_grad = std::sqrt(out.samples.back().grad_sq);
  out.max_grad = out.initial_grad;

  bool blowup = false;
  std::size_t step = 0;
  // The second half step of one step and the first half of the next are fused.
  double pending = 0.5 * c.dt;
  while (step < n_steps && !blowup) {
    ++step;
    const double gn = std::sqrt(st.linear(u, pending));
    if (!std::isfinite(gn)) {
      out.nan_detected = true;
      break;
    }
    out.max_grad = std::max(out.max_grad, gn);
    if (out.initial_grad > 0.0 && gn >= c.blowup_factor * out.initial_grad) blowup = true;
    if (c.nonlinear && !st.nonlinear(u, c.dt)) {
      out.nan_detected = true;
      break;
    }
    const bool sample = blowup || step % static_cast<std::size_t>(c.sample_every) == 0 || step == n_steps;
    if (sample) {
      st.linear(u, 0.5 * c.dt);
      pending = 0.5 * c.dt;
      out.samples.push_back(sample_rs(u, static_cast<double>(step) * c.dt));
      last_good = u;
    } else {
      pending = c.dt;
    }
  }
  out.steps = step;
  if (out.nan_detected) {
    blowup = true;
    out.max_grad = std::numeric_limits<double>::infinity();
    out.final = std::move(last_good);
    out.t_final = out.samples.back().t;
  } else {
    out.final = std::move(u);
    out.t_final = static_cast<double>(step) * c.dt;
  }
  out.status = blowup ? RunStatus::BlowupDetected : RunStatus::Completed;
  return out;
}

VecField2 embed_from_torus(const Field3& u) {
  u.check_shape();
  const Grid3& g = u.grid;
  const int J = g.n_y / 2 - 1;
  CVector c = u.values;
  fft_y_inplace(c, g, Direction::Forward);
  const double norm = 1.0 / std::sqrt(static_cast<double>(g.n_y));
  VecField2 v(J, g.xgrid());
  const std::size_t ny = static_cast<std::size_t>(g.n_y);
  for (int k = -J; k <= J; ++k) {
    const std::size_t l = static_cast<std::size_t>(k < 0 ? k + g.n_y : k);
    auto& comp = v.at(k).values;
    for (std::size_t p = 0; p < g.plane_size(); ++p) comp[p] = c[p * ny + l] * norm;
  }
  return v;
}

double nyquist_mass_fraction(const Field3& u) {
  u.check_shape();
  const Grid3& g = u.grid;
  CVector c = u.values;
  fft_y_inplace(c, g, Direction::Forward);
  const std::size_t ny = static_cast<std::size_t>(g.n_y);
  double total = 0.0, nyq = 0.0;
  for (std::size_t p = 0; p < g.plane_size(); ++p)
    for (std::size_t l = 0; l < ny; ++l) {
      const double e = std::norm(c[p * ny + l]);
      total += e;
      if (l == ny / 2) nyq += e;
    }
  return total > 0.0 ? nyq / total : 0.0;
}

Field3 reconstruct(const VecField2& u, int n_y, double t_phys, bool apply_free_phase) {
  u.validate();
  Grid3 g{u.grid.n_x, u.grid.box_length, n_y};
  g.validate();
  if (u.j_max > n_y / 2 - 1) throw Error(ErrorKind::Shape, "too many components for the requested n_y");
  Field3 out(g);
  const std::size_t ny = static_cast<std::size_t>(n_y);
  const double scale = std::sqrt(static_cast<double>(n_y));
  for (int k = -u.j_max; k <= u.j_max; ++k) {
    const cplx phase = apply_free_phase ? std::polar(1.0, -static_cast<double>(k) * k * t_phys) : cplx(1.0);
    const std::size_t l = static_cast<std::size_t>(k < 0 ? k + n_y : k);
    const auto& comp = u.at(k).values;
    for (std::size_t p = 0; p < g.plane_size(); ++p) out.values[p * ny + l] = comp[p] * phase * scale;
  }
  fft_y_inplace(out.values, g, Direction::Backward);
  return out;
}

}  // namespace wgnls
