#include "wgnls/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wgnls/error.hpp"
#include "wgnls/fft.hpp"
#include "wgnls/norms.hpp"

namespace wgnls {

void EvolveControls::validate(const Grid3& grid) const {
  std::vector<std::string> bad;
  if (!(dt > 0.0)) bad.push_back("dt must be > 0");
  if (!(t_end > 0.0)) bad.push_back("t_end must be > 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) bad.push_back("cfl_safety must lie in (0, 1]");
  if (max_substeps < 1) bad.push_back("max_substeps must be >= 1");
  if (sample_every < 1) bad.push_back("sample_every must be >= 1");
  if (snapshot_every < 0) bad.push_back("snapshot_every must be >= 0");
  if (!(blowup_factor > 1.0)) bad.push_back("blowup_factor must be > 1");
  if (!(scatter_s >= 0.0)) bad.push_back("scatter_s must be >= 0");
  if (!(scatter_ratio > 0.0 && scatter_ratio < 1.0)) bad.push_back("scatter_ratio must lie in (0, 1)");
  if (sponge) {
    if (!(sponge->inner_radius > 0.0 && sponge->inner_radius < 0.5 * grid.box_length)) {
      bad.push_back("sponge inner_radius must lie in (0, box_length/2)");
    }
    if (!(sponge->strength >= 0.0)) bad.push_back("sponge strength must be >= 0");
  }
  if (bad.empty()) return;
  std::string msg = "invalid evolve controls: ";
  for (std::size_t i = 0; i < bad.size(); ++i) msg += (i ? "; " : "") + bad[i];
  throw Error(ErrorKind::Config, msg);
}

const char* TimeSeries::header() {
  return "t,mass,energy,momentum_x,momentum_y,momentum_k,grad_y_sq,grad_xy_sq,l4_norm,scatter_accum";
}

std::string TimeSeries::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << header() << '\n';
  for (const auto& r : rows) {
    os << r.t << ',' << r.mass << ',' << r.energy << ',' << r.momentum_x << ',' << r.momentum_y << ','
       << r.momentum_k << ',' << r.grad_y_sq << ',' << r.grad_xy_sq << ',' << r.l4_norm << ','
       << r.scatter_accum << '\n';
  }
  return os.str();
}

void TimeSeries::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << to_csv();
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowupDetected: return "blowup_detected";
    case RunStatus::ScatterLike: return "scatter_like";
    case RunStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double smoothstep3(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

/// Split-step machinery shared by step_strang and evolve.
class Stepper {
 public:
  Stepper(const Grid3& grid, bool dealias, const std::optional<Sponge>& sponge)
      : grid_(grid), symbol_(grid.size()), keep_(grid.size(), 1) {
    for (int i = 0; i < grid.n_x; ++i)
      for (int j = 0; j < grid.n_x; ++j)
        for (int l = 0; l < grid.n_y; ++l) {
          const std::size_t n = (static_cast<std::size_t>(i) * grid.n_x + j) * grid.n_y + l;
          const double k = grid.k(l);
          symbol_[n] = grid.xi(i) * grid.xi(i) + grid.xi(j) * grid.xi(j) + k * k;
          if (dealias) {
            const bool out = 3 * std::abs(signed_index(i, grid.n_x)) > grid.n_x ||
                             3 * std::abs(signed_index(j, grid.n_x)) > grid.n_x ||
                             3 * std::abs(grid.k(l)) > grid.n_y;
            keep_[n] = out ? 0 : 1;
          }
        }
    if (sponge && sponge->strength > 0.0) {
      sigma_.resize(grid.plane_size());
      const double outer = 0.5 * grid.box_length;
      for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_x; ++j) {
          const double r = std::hypot(grid.x(i), grid.x(j));
          sigma_[static_cast<std::size_t>(i) * grid.n_x + j] =
              sponge->strength * smoothstep3((r - sponge->inner_radius) / (outer - sponge->inner_radius));
        }
    }
  }

  /// Applies exp(-i tau (|xi|^2 + k^2)) and the dealias mask; returns the
  /// squared gradient norm of the propagated state.
  double linear(CVector& u, double tau) {
    fft_inplace(u, grid_, Direction::Forward);
    const CVector& mult = multiplier(tau);
    double g2 = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
      u[n] *= mult[n];
      g2 += symbol_[n] * std::norm(u[n]);
    }
    fft_inplace(u, grid_, Direction::Backward);
    return g2 * grid_.cell_volume();
  }

  /// Exact phase rotation exp(i |U|^2 h) (plus sponge damping); returns
  /// max |U|^2 before the substep, NaN if any entry was not finite.
  double nonlinear(CVector& u, double h, bool phase = true) {
    double mx = 0.0;
    bool finite = true;
    const std::size_t ny = static_cast<std::size_t>(grid_.n_y);
    for (std::size_t n = 0; n < u.size(); ++n) {
      const double a2 = std::norm(u[n]);
      if (!std::isfinite(a2)) finite = false;
      mx = std::max(mx, a2);
      if (phase) u[n] *= std::polar(1.0, a2 * h);
    }
    if (!sigma_.empty()) {
      for (std::size_t p = 0; p < sigma_.size(); ++p) {
        if (sigma_[p] == 0.0) continue;
        const double damp = std::exp(-sigma_[p] * h);
        for (std::size_t l = 0; l < ny; ++l) u[p * ny + l] *= damp;
      }
    }
    return finite ? mx : std::numeric_limits<double>::quiet_NaN();
  }

 private:
  const CVector& multiplier(double tau) {
    for (auto& [t, m] : cache_)
      if (t == tau) return m;
    if (cache_.size() >= 4) cache_.erase(cache_.begin());
    CVector m(symbol_.size());
    for (std::size_t n = 0; n < m.size(); ++n) m[n] = keep_[n] ? std::polar(1.0, -symbol_[n] * tau) : cplx(0.0);
    cache_.emplace_back(tau, std::move(m));
    return cache_.back().second;
  }

  Grid3 grid_;
  std::vector<double> symbol_;
  std::vector<unsigned char> keep_;
  std::vector<double> sigma_;
  std::vector<std::pair<double, CVector>> cache_;
};

TimeSample measure(const Field3& u, double t, double accum) {
  const Grid3& g = u.grid;
  CVector s = u.values;
  fft_inplace(s, g, Direction::Forward);
  double mass = 0.0, gx = 0.0, gy = 0.0, p1 = 0.0, p2 = 0.0, pk = 0.0;
  std::size_t n = 0;
  for (int i = 0; i < g.n_x; ++i) {
    const double a = g.xi(i);
    for (int j = 0; j < g.n_x; ++j) {
      const double b = g.xi(j);
      for (int l = 0; l < g.n_y; ++l, ++n) {
        const double k = g.k(l);
        const double e = std::norm(s[n]);
        mass += e;
        gx += (a * a + b * b) * e;
        gy += k * k * e;
        p1 += a * e;
        p2 += b * e;
        pk += k * e;
      }
    }
  }
  const double w = g.cell_volume();
  const double l4 = lp_power(u, 4);
  TimeSample r;
  r.t = t;
  r.mass = mass * w;
  r.grad_y_sq = gy * w;
  r.grad_xy_sq = (gx + gy) * w;
  r.energy = 0.5 * r.grad_xy_sq - 0.25 * l4;
  r.momentum_x = p1 * w;
  r.momentum_y = p2 * w;
  r.momentum_k = pk * w;
  r.l4_norm = std::pow(l4, 0.25);
  r.scatter_accum = accum;
  return r;
}

double grad_norm(const Field3& u) {
  const auto m = quadratic_moments(u);
  return std::sqrt(m.grad_x_sq + m.grad_y_sq);
}

double interp_accum(const std::vector<TimeSample>& rows, double t) {
  auto it = std::lower_bound(rows.begin(), rows.end(), t, [](const TimeSample& r, double v) { return r.t < v; });
  if (it == rows.begin()) return it->scatter_accum;
  if (it == rows.end()) return rows.back().scatter_accum;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double f = (t - lo.t) / (hi.t - lo.t);
  return lo.scatter_accum + f * (hi.scatter_accum - lo.scatter_accum);
}

}  // namespace

Field3 step_strang(const Field3& u, double dt, const StepOptions& opts) {
  u.check_shape();
  if (!(dt > 0.0)) throw Error(ErrorKind::Domain, "step_strang needs dt > 0");
  Stepper st(u.grid, opts.dealias, std::nullopt);
  Field3 out = u;
  st.linear(out.values, 0.5 * dt);
  if (opts.nonlinear && std::isnan(st.nonlinear(out.values, dt))) {
    throw IntegrationError("non-finite values in Strang step", 0);
  }
  st.linear(out.values, 0.5 * dt);
  if (!all_finite(out.values)) throw IntegrationError("non-finite values in Strang step", 0);
  return out;
}

double l4x_hsy_pow4(const Field3& u, double s) {
  const Grid3& g = u.grid;
  CVector c = u.values;
  fft_y_inplace(c, g, Direction::Forward);
  // Unitary y-transform: plain coefficient c_k = coeff / sqrt(n_y).
  std::vector<double> weight(static_cast<std::size_t>(g.n_y));
  for (int l = 0; l < g.n_y; ++l) weight[l] = kTwoPi / g.n_y * std::pow(1.0 + double(g.k(l)) * g.k(l), s);
  double acc = 0.0;
  const std::size_t ny = static_cast<std::size_t>(g.n_y);
  for (std::size_t p = 0; p < g.plane_size(); ++p) {
    double h2 = 0.0;
    for (std::size_t l = 0; l < ny; ++l) h2 += weight[l] * std::norm(c[p * ny + l]);
    acc += h2 * h2;
  }
  return acc * g.hx() * g.hx();
}

ScatterWindows scatter_windows(const TimeSeries& ts, double ratio) {
  ScatterWindows w;
  const auto& rows = ts.rows;
  if (rows.size() < 2) return w;
  const double T = rows.back().t;
  const double edges[4] = {T / 8.0, T / 4.0, T / 2.0, T};
  if (rows.front().t > edges[0]) return w;
  for (int k = 0; k < 3; ++k) {
    const auto inside = std::count_if(rows.begin(), rows.end(),
                                      [&](const TimeSample& r) { return r.t >= edges[k] && r.t <= edges[k + 1]; });
    if (inside < 2) return w;
  }
  for (int k = 0; k < 3; ++k) w.increments[k] = interp_accum(rows, edges[k + 1]) - interp_accum(rows, edges[k]);
  w.evaluated = true;
  const auto& I = w.increments;
  w.decaying = I[0] > 0.0 && I[0] > I[1] && I[1] > I[2] && I[2] < ratio * I[0];
  return w;
}

RunOutcome evolve(const Field3& u0, const EvolveControls& c, const SnapshotSink& sink) {
  u0.check_shape();
  u0.grid.validate();
  c.validate(u0.grid);
  if (!all_finite(u0.values)) throw Error(ErrorKind::Domain, "initial datum has non-finite entries");

  const std::size_t n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.t_end / c.dt)));
  Stepper st(u0.grid, c.dealias, c.sponge);
  RunOutcome out;
  Field3 u = u0;
  Field3 last_good = u0;
  double accum = 0.0;
  double prev_t = 0.0;
  out.initial_grad = grad_norm(u0);
  out.max_grad = out.initial_grad;
  out.time_series.rows.push_back(measure(u, 0.0, accum));
  if (sink && c.snapshot_every > 0) sink(u, 0.0, 0);

  double max_abs2 = 0.0;
  for (const auto& v : u.values) max_abs2 = std::max(max_abs2, std::norm(v));
  double pending = 0.0;
  bool blowup = false;
  std::size_t step = 0;
  while (step < n_steps && !blowup) {
    ++step;
    int m = 1;
    if (c.nonlinear && max_abs2 * c.dt > c.cfl_safety) {
      m = static_cast<int>(std::min<double>(c.max_substeps, std::ceil(max_abs2 * c.dt / c.cfl_safety)));
    }
    out.max_substeps_used = std::max(out.max_substeps_used, m);
    const double h = c.dt / m;
    for (int s = 0; s < m; ++s) {
      const double g2 = st.linear(u.values, pending + 0.5 * h);
      pending = 0.5 * h;
      const double gn = std::sqrt(g2);
      if (!std::isfinite(gn)) {
        out.nan_detected = true;
        blowup = true;
        break;
      }
      out.max_grad = std::max(out.max_grad, gn);
      if (out.initial_grad > 0.0 && gn >= c.blowup_factor * out.initial_grad) blowup = true;
      if (c.nonlinear || c.sponge) {
        max_abs2 = st.nonlinear(u.values, h, c.nonlinear);
        if (std::isnan(max_abs2)) {
          out.nan_detected = true;
          blowup = true;
          break;
        }
      }
    }
    if (out.nan_detected) break;
    const double t = static_cast<double>(step) * c.dt;
    const bool sample = blowup || step % static_cast<std::size_t>(c.sample_every) == 0 || step == n_steps;
    const bool snap = sink && c.snapshot_every > 0 && step % static_cast<std::size_t>(c.snapshot_every) == 0;
    if (sample || snap) {
      st.linear(u.values, pending);
      pending = 0.0;
      if (sample) {
        accum += l4x_hsy_pow4(u, c.scatter_s) * (t - prev_t);
        prev_t = t;
        out.time_series.rows.push_back(measure(u, t, accum));
        last_good = u;
      }
      if (snap) sink(u, t, step);
    }
  }
  if (out.nan_detected) {
    out.max_grad = std::numeric_limits<double>::infinity();
    out.final = std::move(last_good);
    out.t_final = out.time_series.rows.back().t;
  } else {
    if (pending != 0.0) st.linear(u.values, pending);
    out.final = std::move(u);
    out.t_final = static_cast<double>(step) * c.dt;
  }
  out.steps = step;
  out.scatter_accum = accum;
  if (blowup) {
    out.status = RunStatus::BlowupDetected;
  } else {
    out.windows = scatter_windows(out.time_series, c.scatter_ratio);
    if (!out.windows.evaluated) {
      out.status = RunStatus::Inconclusive;
    } else {
      out.status = out.windows.decaying ? RunStatus::ScatterLike : RunStatus::Completed;
    }
  }
  return out;
}

Field3 galilean_boost(const Field3& u, const std::array<double, 2>& xi, double t) {
  u.check_shape();
  const Grid3& g = u.grid;
  const double unit = kTwoPi / g.box_length;
  std::array<double, 2> idx{};
  for (int a = 0; a < 2; ++a) {
    idx[a] = std::round(xi[a] / unit);
    if (std::abs(xi[a] / unit - idx[a]) > 1e-9) {
      std::ostringstream os;
      os.precision(12);
      os << "boost velocity (" << xi[0] << ", " << xi[1] << ") is not on the lattice (2pi/L)Z^2; nearest is ("
         << std::round(xi[0] / unit) * unit << ", " << std::round(xi[1] / unit) * unit << ")";
      throw Error(ErrorKind::Domain, os.str());
    }
  }
  const double b1 = idx[0] * unit, b2 = idx[1] * unit;
  Field3 out = u;
  fft_inplace(out.values, g, Direction::Forward);
  std::size_t n = 0;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const cplx shift = std::polar(1.0, -2.0 * t * (g.xi(i) * b1 + g.xi(j) * b2));
      for (int l = 0; l < g.n_y; ++l, ++n) out.values[n] *= shift;
    }
  fft_inplace(out.values, g, Direction::Backward);
  n = 0;
  const double phase_t = -t * (b1 * b1 + b2 * b2);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const cplx ph = std::polar(1.0, b1 * g.x(i) + b2 * g.x(j) + phase_t);
      for (int l = 0; l < g.n_y; ++l, ++n) out.values[n] *= ph;
    }
  return out;
}

RescaleResult rescale(const Field3& u, double lambda) {
  u.check_shape();
  if (!(lambda >= 1.0)) throw Error(ErrorKind::Domain, "rescale needs lambda >= 1");
  RescaleResult r;
  Grid3 g = u.grid;
  g.box_length *= lambda;
  r.field = Field3(g);
  for (std::size_t n = 0; n < u.values.size(); ++n) r.field.values[n] = u.values[n] / lambda;

  CVector s = u.values;
  fft_inplace(s, u.grid, Direction::Forward);
  double total = 0.0, outer = 0.0;
  std::size_t n = 0;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      const bool hi = 8 * std::abs(signed_index(i, g.n_x)) > 3 * g.n_x || 8 * std::abs(signed_index(j, g.n_x)) > 3 * g.n_x;
      for (int l = 0; l < g.n_y; ++l, ++n) {
        const double e = std::norm(s[n]);
        total += e;
        if (hi) outer += e;
      }
    }
  r.resolution_warning = total > 0.0 && outer > 1e-6 * total;
  return r;
}

Field3 conjugate(const Field3& u) {
  Field3 out = u;
  for (auto& v : out.values) v = std::conj(v);
  return out;
}

}  // namespace wgnls
