#include "maxharm/fft.hpp"

#include <vector>

namespace maxharm::detail {

void fft_line(cplx* data, int n, bool forward) {
  // bit reversal
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = kTwoPi / len * (forward ? -1.0 : 1.0);
    cplx wlen = std::polar(1.0, ang);
    for (int i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        cplx u = data[i + k];
        cplx t = data[i + k + len / 2] * w;
        data[i + k] = u + t;
        data[i + k + len / 2] = u - t;
        w *= wlen;
      }
    }
  }
}

void fft_all_axes(Eigen::ArrayXcd& v, int n, int axes, bool forward) {
  const std::int64_t total = v.size();
  std::vector<cplx> line(n);
  for (int axis = 0; axis < axes; ++axis) {
    std::int64_t stride = 1;
    for (int a = axis + 1; a < axes; ++a) stride *= n;
    const std::int64_t lines = total / n;
    for (std::int64_t li = 0; li < lines; ++li) {
      // decompose line index into (outer, inner) around the transformed axis
      std::int64_t outer = li / stride;
      std::int64_t inner = li % stride;
      std::int64_t base = outer * stride * n + inner;
      for (int j = 0; j < n; ++j) line[size_t(j)] = v[base + j * stride];
      fft_line(line.data(), n, forward);
      for (int j = 0; j < n; ++j) v[base + j * stride] = line[size_t(j)];
    }
  }
}

namespace {

// Centered index i in [0,n) corresponds to frequency m = i - n/2; the DFT
// bucket is m mod n and the box offset -L/2 contributes a (-1)^m twist.
inline int centered_to_bucket(int i, int n) {
  int m = i - n / 2;
  return m >= 0 ? m : m + n;
}

inline double twist_sign(int i, int n) {
  int m = i - n / 2;
  return (m % 2 != 0) ? -1.0 : 1.0;
}

}  // namespace

Eigen::ArrayXcd forward_grid_transform(const Eigen::ArrayXcd& v, int n, int axes, double L) {
  Eigen::ArrayXcd work = v;
  fft_all_axes(work, n, axes, true);
  Eigen::ArrayXcd out(v.size());
  const double scale = std::pow(L / n, axes);
  const std::int64_t total = v.size();
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx, src = 0;
    double sign = 1.0;
    std::int64_t mult = 1;
    // walk axes from fastest to slowest
    for (int a = 0; a < axes; ++a) {
      int i = int(rem % n);
      rem /= n;
      src += std::int64_t(centered_to_bucket(i, n)) * mult;
      sign *= twist_sign(i, n);
      mult *= n;
    }
    out[idx] = work[src] * (sign * scale);
  }
  return out;
}

Eigen::ArrayXcd inverse_grid_transform(const Eigen::ArrayXcd& v, int n, int axes, double L) {
  Eigen::ArrayXcd work(v.size());
  const std::int64_t total = v.size();
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx, dst = 0;
    double sign = 1.0;
    std::int64_t mult = 1;
    for (int a = 0; a < axes; ++a) {
      int i = int(rem % n);
      rem /= n;
      dst += std::int64_t(centered_to_bucket(i, n)) * mult;
      sign *= twist_sign(i, n);
      mult *= n;
    }
    work[dst] = v[idx] * sign;
  }
  fft_all_axes(work, n, axes, false);
  work *= std::pow(1.0 / L, axes);
  return work;
}

}  // namespace maxharm::detail
