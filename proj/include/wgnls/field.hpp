#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <new>
#include <span>
#include <vector>

#include "wgnls/grid.hpp"

namespace wgnls {

using cplx = std::complex<double>;

namespace detail {
void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;
}  // namespace detail

/// Allocator handing out FFTW-aligned storage so planned transforms can be
/// executed on any field buffer.
template <class T>
struct FftwAllocator {
  using value_type = T;

  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_alloc();
    return static_cast<T*>(detail::fftw_aligned_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::fftw_aligned_free(p); }

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using CVector = std::vector<cplx, FftwAllocator<cplx>>;

/// Complex scalar field on the 2D box.
struct Field2 {
  Grid2 grid;
  CVector values;

  Field2() = default;
  explicit Field2(const Grid2& g) : grid(g), values(g.size()) {}

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * grid.n_x + static_cast<std::size_t>(j);
  }
  cplx& operator()(int i, int j) noexcept { return values[index(i, j)]; }
  const cplx& operator()(int i, int j) const noexcept { return values[index(i, j)]; }

  /// Throws Error(Shape) if the buffer does not match the grid.
  void check_shape() const;
};

/// Complex scalar field on box x torus.
struct Field3 {
  Grid3 grid;
  CVector values;

  Field3() = default;
  explicit Field3(const Grid3& g) : grid(g), values(g.size()) {}

  std::size_t index(int i, int j, int l) const noexcept {
    return (static_cast<std::size_t>(i) * grid.n_x + static_cast<std::size_t>(j)) * grid.n_y +
           static_cast<std::size_t>(l);
  }
  cplx& operator()(int i, int j, int l) noexcept { return values[index(i, j, l)]; }
  const cplx& operator()(int i, int j, int l) const noexcept { return values[index(i, j, l)]; }

  void check_shape() const;
};

bool all_finite(std::span<const cplx> values) noexcept;

/// Weighted L^2 inner product <f, g> = sum conj(f) g * cell volume.
cplx inner(const Field3& f, const Field3& g);
cplx inner(const Field2& f, const Field2& g);

/// ||f - g||_2 / ||g||_2 (absolute gap when g vanishes).
double relative_l2_gap(const Field3& f, const Field3& g);
double relative_l2_gap(const Field2& f, const Field2& g);

/// y-independent extension of a 2D field onto a 3D grid sharing its x-grid.
Field3 extend_in_y(const Field2& f, const Grid3& grid);

}  // namespace wgnls
