#pragma once

#include <complex>
#include <vector>

namespace wavekin {

// Thin wrapper around FFTW complex transforms. Plans are created with
// FFTW_ESTIMATE so the chosen algorithm is deterministic run to run.
// Plan creation is serialized internally; execution is thread-safe as long
// as each thread uses its own Fft instance.
class Fft {
 public:
  Fft(int dim, int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int dim() const { return dim_; }
  int n() const { return n_; }
  long size() const { return size_; }

  // In-place unnormalized transforms: forward applies sum_j e^{-2pi i jk/n},
  // inverse applies sum_k e^{+2pi i jk/n} / n^d.
  void forward(std::complex<double>* data) const;
  void inverse(std::complex<double>* data) const;

 private:
  int dim_;
  int n_;
  long size_;
  void* plan_fwd_;
  void* plan_bwd_;
};

// In-place DFT of a row-major multi-axis array along every axis (each a power
// of two). Forward is unnormalized; inverse carries the full 1/prod(n) factor.
void multi_fft(std::complex<double>* data, const std::vector<int>& shape, bool forward);

}  // namespace wavekin
