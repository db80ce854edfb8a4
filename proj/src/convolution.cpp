#include "pairprobe/convolution.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <new>

namespace pairprobe {

namespace {

// The FFTW planner is not thread-safe; execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer make_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer(p);
}

}  // namespace

struct ToeplitzConvolver::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  FftwBuffer spectrum;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

ToeplitzConvolver::ToeplitzConvolver(const std::array<int, 3>& dims, const KernelFn& kernel)
    : dims_(dims), plans_(std::make_unique<Plans>()) {
  for (int d = 0; d < 3; ++d) padded_[d] = 2 * dims_[d];
  padded_size_ = static_cast<std::size_t>(padded_[0]) * padded_[1] * padded_[2];

  plans_->spectrum = make_buffer(padded_size_);
  auto scratch = make_buffer(padded_size_);
  {
    std::lock_guard lock(planner_mutex());
    // FFTW's row-major order is (z, y, x) for our x-fastest layout.
    plans_->forward = fftw_plan_dft_3d(padded_[2], padded_[1], padded_[0], scratch.get(),
                                       scratch.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_3d(padded_[2], padded_[1], padded_[0], scratch.get(),
                                        scratch.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  fftw_complex* spec = plans_->spectrum.get();
  std::memset(spec, 0, sizeof(fftw_complex) * padded_size_);
  const double scale = 1.0 / static_cast<double>(padded_size_);
  for (int dk = -(dims_[2] - 1); dk <= dims_[2] - 1; ++dk)
    for (int dj = -(dims_[1] - 1); dj <= dims_[1] - 1; ++dj)
      for (int di = -(dims_[0] - 1); di <= dims_[0] - 1; ++di) {
        const int i = di < 0 ? di + padded_[0] : di;
        const int j = dj < 0 ? dj + padded_[1] : dj;
        const int k = dk < 0 ? dk + padded_[2] : dk;
        const std::size_t slot = (static_cast<std::size_t>(k) * padded_[1] + j) * padded_[0] + i;
        const cplx v = kernel(di, dj, dk) * scale;
        spec[slot][0] = v.real();
        spec[slot][1] = v.imag();
      }
  fftw_execute_dft(plans_->forward, spec, spec);
}

ToeplitzConvolver::~ToeplitzConvolver() = default;

void ToeplitzConvolver::apply(std::span<const cplx> in, std::span<cplx> out) const {
  auto buf = make_buffer(padded_size_);
  fftw_complex* b = buf.get();
  std::memset(b, 0, sizeof(fftw_complex) * padded_size_);
  for (int k = 0; k < dims_[2]; ++k)
    for (int j = 0; j < dims_[1]; ++j)
      for (int i = 0; i < dims_[0]; ++i) {
        const cplx v = in[(static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i];
        const std::size_t slot = (static_cast<std::size_t>(k) * padded_[1] + j) * padded_[0] + i;
        b[slot][0] = v.real();
        b[slot][1] = v.imag();
      }
  fftw_execute_dft(plans_->forward, b, b);
  const fftw_complex* s = plans_->spectrum.get();
  for (std::size_t n = 0; n < padded_size_; ++n) {
    const double re = b[n][0] * s[n][0] - b[n][1] * s[n][1];
    const double im = b[n][0] * s[n][1] + b[n][1] * s[n][0];
    b[n][0] = re;
    b[n][1] = im;
  }
  fftw_execute_dft(plans_->backward, b, b);
  for (int k = 0; k < dims_[2]; ++k)
    for (int j = 0; j < dims_[1]; ++j)
      for (int i = 0; i < dims_[0]; ++i) {
        const std::size_t slot = (static_cast<std::size_t>(k) * padded_[1] + j) * padded_[0] + i;
        out[(static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i] = cplx(b[slot][0], b[slot][1]);
      }
}

}  // namespace pairprobe
