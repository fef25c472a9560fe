#pragma once

// Strided helpers shared by the difference, averaging and convolution code.
// A grid of shape (n_0, ..., n_{d-1}) is viewed along one axis as
// [outer][n][inner]; for a fixed outer index the rows are contiguous, so every
// shift along the axis becomes a handful of contiguous axpy calls.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "haar/dyadic.hpp"

namespace haar::detail {

struct AxisView {
  std::size_t outer = 1;
  std::size_t n = 1;
  std::size_t inner = 1;
};

AxisView axis_view(const std::vector<std::int64_t>& shape, std::size_t axis);

/// out[c] += weight * in[c + offset] along the axis. Zero and Restrict treat
/// samples outside the box as zero; Periodic wraps.
void shift_accumulate(const double* in, double* out, const AxisView& v, std::ptrdiff_t offset,
                      double weight, Extension ext);

/// Zeroes rows c of `out` for which c + offset leaves [0, n).
void zero_outside(double* out, const AxisView& v, std::ptrdiff_t lo_offset, std::ptrdiff_t hi_offset);

/// Convolution along one axis: out[c] = sum_t taps[t] * in[c - (t - center)].
void convolve_axis(const double* in, double* out, const AxisView& v, const std::vector<double>& taps,
                   std::ptrdiff_t center, Extension ext);

/// Same result as convolve_axis, computed per line with FFTs; used for long
/// tap vectors where the direct sum costs O(n taps).
void convolve_axis_fft(const double* in, double* out, const AxisView& v, const std::vector<double>& taps,
                       std::ptrdiff_t center, Extension ext);

}  // namespace haar::detail
