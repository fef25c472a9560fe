#pragma once

// Data-parallel inner loops used by every grid operator. Each kernel has a
// scalar reference implementation and, where the target supports it, a
// vectorized variant. The variant is chosen once at startup from the CPU's
// feature flags; HAAR_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace haar::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y += x
  void (*add)(const double* x, double* y, std::size_t n);
  // y *= a
  void (*scale)(double a, double* y, std::size_t n);
  // y = a
  void (*fill)(double a, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_abs)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y = max(y, |x|)
  void (*max_abs_into)(const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Table selected for this process.
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}
inline void add(std::span<const double> x, std::span<double> y) {
  active().add(x.data(), y.data(), y.size());
}
inline void scale(double a, std::span<double> y) { active().scale(a, y.data(), y.size()); }
inline void fill(double a, std::span<double> y) { active().fill(a, y.data(), y.size()); }
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double sum_abs(std::span<const double> x) { return active().sum_abs(x.data(), x.size()); }
inline double sum_sq(std::span<const double> x) { return active().sum_sq(x.data(), x.size()); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void max_abs_into(std::span<const double> x, std::span<double> y) {
  active().max_abs_into(x.data(), y.data(), y.size());
}

}  // namespace haar::simd
