#include "wgnls/field.hpp"

#include <cmath>
#include <string>

#include "wgnls/error.hpp"

namespace wgnls {

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

void Grid2::validate() const {
  if (!is_power_of_two(n_x) || n_x < 8) {
    throw Error(ErrorKind::Shape, "n_x must be a power of two >= 8, got " + std::to_string(n_x));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw Error(ErrorKind::Shape, "box_length must be positive and finite");
  }
}

void Grid3::validate() const {
  xgrid().validate();
  if (!is_power_of_two(n_y) || n_y < 8) {
    throw Error(ErrorKind::Shape, "n_y must be a power of two >= 8, got " + std::to_string(n_y));
  }
}

void Field2::check_shape() const {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::Shape, "Field2 holds " + std::to_string(values.size()) +
                                      " values but its grid needs " + std::to_string(grid.size()));
  }
}

void Field3::check_shape() const {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::Shape, "Field3 holds " + std::to_string(values.size()) +
                                      " values but its grid needs " + std::to_string(grid.size()));
  }
}

bool all_finite(std::span<const cplx> values) noexcept {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

namespace {

cplx raw_inner(const CVector& a, const CVector& b) {
  cplx acc{0.0, 0.0};
  for (std::size_t n = 0; n < a.size(); ++n) acc += std::conj(a[n]) * b[n];
  return acc;
}

double raw_gap(const CVector& a, const CVector& b) {
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    diff += std::norm(a[n] - b[n]);
    ref += std::norm(b[n]);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

}  // namespace

cplx inner(const Field3& f, const Field3& g) {
  if (!(f.grid == g.grid)) throw Error(ErrorKind::Shape, "inner product of fields on different grids");
  return raw_inner(f.values, g.values) * f.grid.cell_volume();
}

cplx inner(const Field2& f, const Field2& g) {
  if (!(f.grid == g.grid)) throw Error(ErrorKind::Shape, "inner product of fields on different grids");
  return raw_inner(f.values, g.values) * f.grid.cell_area();
}

double relative_l2_gap(const Field3& f, const Field3& g) {
  if (!(f.grid == g.grid)) throw Error(ErrorKind::Shape, "comparing fields on different grids");
  return raw_gap(f.values, g.values);
}

double relative_l2_gap(const Field2& f, const Field2& g) {
  if (!(f.grid == g.grid)) throw Error(ErrorKind::Shape, "comparing fields on different grids");
  return raw_gap(f.values, g.values);
}

Field3 extend_in_y(const Field2& f, const Grid3& grid) {
  if (!(f.grid == grid.xgrid())) throw Error(ErrorKind::Shape, "x-grids differ");
  Field3 out(grid);
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = 0; j < grid.n_x; ++j)
      for (int l = 0; l < grid.n_y; ++l) out(i, j, l) = f(i, j);
  return out;
}

}  // namespace wgnls
