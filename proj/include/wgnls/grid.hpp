#pragma once

#include <cstddef>
#include <numbers>

namespace wgnls {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Signed frequency index of FFT slot i on an n-point axis: {-n/2, ..., n/2-1}.
constexpr int signed_index(int i, int n) noexcept { return i < n / 2 ? i : i - n; }

bool is_power_of_two(int n) noexcept;

/// Periodic square box [-L/2, L/2)^2 standing in for R^2.
struct Grid2 {
  int n_x = 64;
  double box_length = 32.0;

  double hx() const noexcept { return box_length / n_x; }
  double cell_area() const noexcept { return hx() * hx(); }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_x);
  }
  double x(int i) const noexcept { return -0.5 * box_length + i * hx(); }
  /// Angular frequency of FFT slot i.
  double xi(int i) const noexcept { return kTwoPi / box_length * signed_index(i, n_x); }

  /// Throws Error(Shape) unless n_x is a power of two >= 8 and box_length > 0.
  void validate() const;

  bool operator==(const Grid2&) const = default;
};

/// Box in x times the exact torus [0, 2pi) in y. Storage order is x1-major,
/// then x2, then y (y fastest).
struct Grid3 {
  int n_x = 64;
  double box_length = 32.0;
  int n_y = 8;

  double hx() const noexcept { return box_length / n_x; }
  double hy() const noexcept { return kTwoPi / n_y; }
  /// Quadrature weight of the discrete L^2 pairing.
  double cell_volume() const noexcept { return hx() * hx() * hy(); }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_x);
  }
  std::size_t size() const noexcept { return plane_size() * static_cast<std::size_t>(n_y); }
  double x(int i) const noexcept { return -0.5 * box_length + i * hx(); }
  double y(int l) const noexcept { return l * hy(); }
  double xi(int i) const noexcept { return kTwoPi / box_length * signed_index(i, n_x); }
  int k(int l) const noexcept { return signed_index(l, n_y); }

  Grid2 xgrid() const noexcept { return Grid2{n_x, box_length}; }

  void validate() const;

  bool operator==(const Grid3&) const = default;
};

}  // namespace wgnls
