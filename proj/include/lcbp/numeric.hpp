#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace lcbp {

/// acc *= factor, element-wise.
inline void fuse(std::span<double> acc, std::span<const double> factor) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] *= factor[k];
}

/// out[r] = sum_c m[r*q + c] * in[c] for a q x q matrix m.
inline void propagate(std::span<const double> m, std::span<const double> in,
                      std::span<double> out) {
  const std::size_t q = in.size();
  for (std::size_t r = 0; r < q; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < q; ++c) acc += m[r * q + c] * in[c];
    out[r] = acc;
  }
}

inline double max_entry(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) {
    if (v > m) m = v;
  }
  return m;
}

/// Divides by the max entry so the largest value becomes 1 and returns the
/// log of the factor taken out. The factor is one scalar for the whole span.
inline double rescale_max(std::span<double> values) {
  const double m = max_entry(values);
  if (!(m > 0.0)) return 0.0;
  for (double& v : values) v /= m;
  return std::log(m);
}

}  // namespace lcbp
