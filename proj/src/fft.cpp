#include "wavekin/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace wavekin {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("Fft: dim must be 1 or 2");
  size_ = dim == 1 ? n : static_cast<long>(n) * n;
  std::lock_guard<std::mutex> lock(planner_mutex());
  std::vector<std::complex<double>> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  if (dim == 1) {
    plan_fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  } else {
    plan_fwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("Fft: plan creation failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft::forward(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

void Fft::inverse(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  double inv = 1.0 / static_cast<double>(size_);
  for (long i = 0; i < size_; ++i) data[i] *= inv;
}

void multi_fft(std::complex<double>* data, const std::vector<int>& shape, bool forward) {
  if (shape.empty()) return;
  long total = 1;
  for (int n : shape) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("multi_fft: axis sizes must be powers of two");
    total *= n;
  }
  const int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
  // One strided many-transform plan per axis (row-major strides).
  long stride_after = 1;
  for (int axis = static_cast<int>(shape.size()) - 1; axis >= 0; --axis) {
    const int n = shape[axis];
    const long stride = stride_after;  // distance between consecutive entries along this axis
    stride_after *= n;
    fftw_iodim dim{n, static_cast<int>(stride), static_cast<int>(stride)};
    // Remaining axes form the loop: split into the block before and after this axis.
    fftw_iodim loop[2];
    int n_loop = 0;
    long outer = total / stride_after;  // product of axis sizes before `axis`
    if (outer > 1) loop[n_loop++] = {static_cast<int>(outer), static_cast<int>(stride_after), static_cast<int>(stride_after)};
    if (stride > 1) loop[n_loop++] = {static_cast<int>(stride), 1, 1};
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      plan = fftw_plan_guru_dft(1, &dim, n_loop, loop, reinterpret_cast<fftw_complex*>(data),
                                reinterpret_cast<fftw_complex*>(data), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plan) throw std::runtime_error("multi_fft: plan creation failed");
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
  if (!forward) {
    double inv = 1.0 / static_cast<double>(total);
    for (long i = 0; i < total; ++i) data[i] *= inv;
  }
}

}  // namespace wavekin
