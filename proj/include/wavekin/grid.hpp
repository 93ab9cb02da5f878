#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace wavekin {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// Periodic spatial grid on [-L/2, L/2)^d with n points per dimension.
struct ScreenGrid {
  int dim = 1;
  int n = 0;
  double extent = 0.0;

  ScreenGrid() = default;
  ScreenGrid(int d, int n_, double extent_) : dim(d), n(n_), extent(extent_) {
    if (d < 1 || d > 2) throw std::invalid_argument("ScreenGrid: dim must be 1 or 2");
    if (n_ < 2 || (n_ & (n_ - 1)) != 0) throw std::invalid_argument("ScreenGrid: n must be a power of two");
    if (extent_ <= 0) throw std::invalid_argument("ScreenGrid: extent must be positive");
  }

  double spacing() const { return extent / n; }
  long size() const {
    long s = 1;
    for (int i = 0; i < dim; ++i) s *= n;
    return s;
  }
  double cell_volume() const { return std::pow(spacing(), dim); }

  double coord(int i) const { return -0.5 * extent + i * spacing(); }

  // FFT-index frequency 2*pi*m/L with m mapped to the signed range [-n/2, n/2).
  double freq(int idx) const {
    int m = idx < n / 2 ? idx : idx - n;
    return kTwoPi * m / extent;
  }

  int wrap(int i) const { return ((i % n) + n) % n; }

  // Row-major flattening for dim == 2; identity for dim == 1.
  long flat(int i, int j = 0) const { return dim == 1 ? i : static_cast<long>(i) * n + j; }

  Eigen::VectorXd point(long flat_idx) const {
    Eigen::VectorXd x(dim);
    if (dim == 1) {
      x[0] = coord(static_cast<int>(flat_idx));
    } else {
      x[0] = coord(static_cast<int>(flat_idx / n));
      x[1] = coord(static_cast<int>(flat_idx % n));
    }
    return x;
  }

  double freq_sq(long flat_idx) const {
    if (dim == 1) {
      double f = freq(static_cast<int>(flat_idx));
      return f * f;
    }
    double f0 = freq(static_cast<int>(flat_idx / n));
    double f1 = freq(static_cast<int>(flat_idx % n));
    return f0 * f0 + f1 * f1;
  }
};

}  // namespace wavekin
