#include "grid_ops.hpp"

#include <algorithm>

#include "haar/simd.hpp"

namespace haar::detail {

AxisView axis_view(const std::vector<std::int64_t>& shape, std::size_t axis) {
  AxisView v;
  for (std::size_t i = 0; i < axis; ++i) v.outer *= static_cast<std::size_t>(shape[i]);
  v.n = static_cast<std::size_t>(shape[axis]);
  for (std::size_t i = axis + 1; i < shape.size(); ++i) v.inner *= static_cast<std::size_t>(shape[i]);
  return v;
}

namespace {

// Rows [c0, c1) of out receive rows [c0 + offset, c1 + offset) of in.
void accumulate_rows(const double* in, double* out, const AxisView& v, std::ptrdiff_t offset,
                     double weight, std::ptrdiff_t c0, std::ptrdiff_t c1) {
  if (c1 <= c0) return;
  const auto& k = simd::active();
  const std::size_t len = static_cast<std::size_t>(c1 - c0) * v.inner;
  const std::size_t block = v.n * v.inner;
  for (std::size_t o = 0; o < v.outer; ++o) {
    const double* src = in + o * block + static_cast<std::size_t>(c0 + offset) * v.inner;
    double* dst = out + o * block + static_cast<std::size_t>(c0) * v.inner;
    k.axpy(weight, src, dst, len);
  }
}

}  // namespace

void shift_accumulate(const double* in, double* out, const AxisView& v, std::ptrdiff_t offset,
                      double weight, Extension ext) {
  const auto n = static_cast<std::ptrdiff_t>(v.n);
  if (ext == Extension::Periodic) {
    std::ptrdiff_t off = offset % n;
    if (off < 0) off += n;
    // c + off < n for c < n - off; the rest wraps to c + off - n.
    accumulate_rows(in, out, v, off, weight, 0, n - off);
    accumulate_rows(in, out, v, off - n, weight, n - off, n);
    return;
  }
  const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(0, -offset);
  const std::ptrdiff_t c1 = std::min<std::ptrdiff_t>(n, n - offset);
  accumulate_rows(in, out, v, offset, weight, c0, c1);
}

void zero_outside(double* out, const AxisView& v, std::ptrdiff_t lo_offset, std::ptrdiff_t hi_offset) {
  const auto n = static_cast<std::ptrdiff_t>(v.n);
  const std::size_t block = v.n * v.inner;
  // Valid rows satisfy 0 <= c + lo_offset and c + hi_offset < n.
  const std::ptrdiff_t first_valid = std::clamp<std::ptrdiff_t>(-lo_offset, 0, n);
  const std::ptrdiff_t end_valid = std::clamp<std::ptrdiff_t>(n - hi_offset, 0, n);
  for (std::size_t o = 0; o < v.outer; ++o) {
    double* base = out + o * block;
    if (end_valid <= first_valid) {
      std::fill(base, base + block, 0.0);
      continue;
    }
    std::fill(base, base + static_cast<std::size_t>(first_valid) * v.inner, 0.0);
    std::fill(base + static_cast<std::size_t>(end_valid) * v.inner, base + block, 0.0);
  }
}

void convolve_axis(const double* in, double* out, const AxisView& v, const std::vector<double>& taps,
                   std::ptrdiff_t center, Extension ext) {
  std::fill(out, out + v.outer * v.n * v.inner, 0.0);
  for (std::size_t t = 0; t < taps.size(); ++t) {
    if (taps[t] == 0.0) continue;
    const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(t) - center;
    // out[c] += taps[t] * in[c - shift]
    shift_accumulate(in, out, v, -shift, taps[t], ext == Extension::Periodic ? ext : Extension::Zero);
  }
}

}  // namespace haar::detail
