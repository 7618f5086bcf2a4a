#include "wgnls/fft.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "wgnls/error.hpp"

namespace wgnls {

namespace detail {

void* fftw_aligned_alloc(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

// rank 2 / 3 full transforms, or rank 1 batched along the last axis.
enum class PlanKind { Full2, Full3, BatchY };

struct PlanKey {
  PlanKind kind;
  std::array<int, 3> dims;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (dims != o.dims) return dims < o.dims;
    return sign < o.sign;
  }
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const auto& d = key.dims;
    const std::size_t n = static_cast<std::size_t>(d[0]) * d[1] * d[2];
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan = nullptr;
    switch (key.kind) {
      case PlanKind::Full2:
        plan = fftw_plan_dft_2d(d[0], d[1], buf, buf, key.sign, FFTW_ESTIMATE);
        break;
      case PlanKind::Full3:
        plan = fftw_plan_dft_3d(d[0], d[1], d[2], buf, buf, key.sign, FFTW_ESTIMATE);
        break;
      case PlanKind::BatchY: {
        int len = d[2];
        int howmany = d[0] * d[1];
        plan = fftw_plan_many_dft(1, &len, howmany, buf, nullptr, 1, len, buf, nullptr, 1, len,
                                  key.sign, FFTW_ESTIMATE);
        break;
      }
    }
    fftw_free(buf);
    if (plan == nullptr) throw Error(ErrorKind::Shape, "FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(const PlanKey& key, CVector& data, double scale) {
  fftw_plan plan = cache().get(key);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
  for (auto& v : data) v *= scale;
}

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

void require_size(const CVector& data, std::size_t expected) {
  if (data.size() != expected) {
    throw Error(ErrorKind::Shape, "buffer has " + std::to_string(data.size()) +
                                      " entries, grid expects " + std::to_string(expected));
  }
}

}  // namespace

void fft_inplace(CVector& data, const Grid3& grid, Direction dir) {
  require_size(data, grid.size());
  execute({PlanKind::Full3, {grid.n_x, grid.n_x, grid.n_y}, sign_of(dir)}, data,
          1.0 / std::sqrt(static_cast<double>(grid.size())));
}

void fft_inplace(CVector& data, const Grid2& grid, Direction dir) {
  require_size(data, grid.size());
  execute({PlanKind::Full2, {grid.n_x, grid.n_x, 1}, sign_of(dir)}, data,
          1.0 / std::sqrt(static_cast<double>(grid.size())));
}

void fft_y_inplace(CVector& data, const Grid3& grid, Direction dir) {
  require_size(data, grid.size());
  execute({PlanKind::BatchY, {grid.n_x, grid.n_x, grid.n_y}, sign_of(dir)}, data,
          1.0 / std::sqrt(static_cast<double>(grid.n_y)));
}

Spectrum3 to_spectral(const Field3& f) {
  f.check_shape();
  Spectrum3 s{f.grid, f.values};
  fft_inplace(s.coeffs, s.grid, Direction::Forward);
  return s;
}

Field3 from_spectral(const Spectrum3& s) {
  if (s.coeffs.size() != s.grid.size()) {
    throw Error(ErrorKind::Shape, "spectrum size does not match its grid");
  }
  Field3 f;
  f.grid = s.grid;
  f.values = s.coeffs;
  fft_inplace(f.values, f.grid, Direction::Backward);
  return f;
}

Spectrum2 to_spectral(const Field2& f) {
  f.check_shape();
  Spectrum2 s{f.grid, f.values};
  fft_inplace(s.coeffs, s.grid, Direction::Forward);
  return s;
}

Field2 from_spectral(const Spectrum2& s) {
  if (s.coeffs.size() != s.grid.size()) {
    throw Error(ErrorKind::Shape, "spectrum size does not match its grid");
  }
  Field2 f;
  f.grid = s.grid;
  f.values = s.coeffs;
  fft_inplace(f.values, f.grid, Direction::Backward);
  return f;
}

}  // namespace wgnls
