// AArch64 variant. NEON is part of the base ISA there, so no runtime check.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "haar/simd.hpp"

namespace haar::simd {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void add(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += x[i];
}

void scale(double a, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_n_f64(vld1q_f64(y + i), a));
  for (; i < n; ++i) y[i] *= a;
}

void fill(double a, double* y, std::size_t n) { std::fill(y, y + n, a); }

double sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double sum_abs(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += std::fabs(x[i]);
  return r;
}

double sum_sq(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

double max_abs(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void max_abs_into(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmaxq_f64(vld1q_f64(y + i), vabsq_f64(vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = std::max(y[i], std::fabs(x[i]));
}

}  // namespace

const KernelTable& neon_table_unchecked() {
  static const KernelTable table{Isa::Neon, axpy,   add, scale, fill,        sum,
                                 sum_abs,   sum_sq, max_abs,    dot,         max_abs_into};
  return table;
}

}  // namespace haar::simd
