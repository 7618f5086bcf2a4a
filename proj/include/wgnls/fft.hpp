#pragma once

#include "wgnls/field.hpp"

namespace wgnls {

/// Unitary DFT coefficients of a Field3 (same storage order, FFT slot order).
/// With the 1/sqrt(n) convention the coefficient l^2 norm times the cell
/// volume equals the physical L^2 norm squared.
struct Spectrum3 {
  Grid3 grid;
  CVector coeffs;
};

struct Spectrum2 {
  Grid2 grid;
  CVector coeffs;
};

Spectrum3 to_spectral(const Field3& f);
Field3 from_spectral(const Spectrum3& s);
Spectrum2 to_spectral(const Field2& f);
Field2 from_spectral(const Spectrum2& s);

enum class Direction { Forward, Backward };

/// In-place unitary transforms on raw buffers. Buffers must come from
/// FftwAllocator (alignment) and match the grid size.
void fft_inplace(CVector& data, const Grid3& grid, Direction dir);
void fft_inplace(CVector& data, const Grid2& grid, Direction dir);
/// Transform along y only, batched over every x point.
void fft_y_inplace(CVector& data, const Grid3& grid, Direction dir);

}  // namespace wgnls
