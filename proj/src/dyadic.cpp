#include "haar/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "grid_ops.hpp"
#include "haar/error.hpp"
#include "haar/simd.hpp"

namespace haar {

namespace {

std::int64_t pow2(int e) { return std::int64_t{1} << e; }

// units * 2^-from expressed in units of 2^-to; nullopt-like flag when inexact.
bool rescale(std::int64_t units, int from, int to, std::int64_t& out) {
  if (to >= from) {
    out = units * pow2(to - from);
    return true;
  }
  const std::int64_t div = pow2(from - to);
  if (units % div != 0) return false;
  out = units / div;
  return true;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

// ---------------------------------------------------------------- Box

Box::Box(int base_level, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi)
    : base_(base_level), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size()) {
    throw StructuralError("box: corner vectors must be non-empty and of equal length");
  }
  if (base_ < 0 || base_ > 40) throw StructuralError("box: base level out of range");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (lo_[i] >= hi_[i]) {
      throw StructuralError("box: empty extent along axis " + std::to_string(i));
    }
  }
}

Box Box::cube(std::size_t d, std::int64_t lo, std::int64_t hi) {
  return Box(0, std::vector<std::int64_t>(d, lo), std::vector<std::int64_t>(d, hi));
}

double Box::lo(std::size_t axis) const { return std::ldexp(static_cast<double>(lo_[axis]), -base_); }
double Box::hi(std::size_t axis) const { return std::ldexp(static_cast<double>(hi_[axis]), -base_); }

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

bool Box::aligned_to(int level) const {
  std::int64_t tmp = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!rescale(lo_[i], base_, level, tmp) || !rescale(hi_[i], base_, level, tmp)) return false;
  }
  return true;
}

std::int64_t Box::first_index(std::size_t axis, int level) const {
  std::int64_t out = 0;
  if (!rescale(lo_[axis], base_, level, out)) {
    throw AlignmentError("box corner is not a multiple of 2^-" + std::to_string(level));
  }
  return out;
}

std::int64_t Box::cell_count(std::size_t axis, int level) const {
  std::int64_t a = 0, b = 0;
  if (!rescale(lo_[axis], base_, level, a) || !rescale(hi_[axis], base_, level, b)) {
    throw AlignmentError("box corner is not a multiple of 2^-" + std::to_string(level));
  }
  return b - a;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  const int level = std::max(base_, other.base_);
  for (std::size_t i = 0; i < dim(); ++i) {
    std::int64_t a = 0, b = 0, c = 0, e = 0;
    rescale(lo_[i], base_, level, a);
    rescale(hi_[i], base_, level, b);
    rescale(other.lo_[i], other.base_, level, c);
    rescale(other.hi_[i], other.base_, level, e);
    if (c < a || e > b) return false;
  }
  return true;
}

bool operator==(const Box& a, const Box& b) { return a.contains(b) && b.contains(a); }

// ---------------------------------------------------------------- GridFunction

GridFunction::GridFunction(Box box, int level, std::vector<double> samples)
    : box_(std::move(box)), level_(level), values_(std::move(samples)) {
  init_layout();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("grid function: non-finite sample at cell " + std::to_string(i));
    }
  }
}

GridFunction GridFunction::zeros(Box box, int level) {
  GridFunction g;
  g.box_ = std::move(box);
  g.level_ = level;
  g.init_layout();
  return g;
}

void GridFunction::init_layout() {
  if (level_ < 0) throw ResolutionError("grid function: negative resolution");
  const std::size_t d = box_.dim();
  shape_.resize(d);
  origin_.resize(d);
  strides_.resize(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    shape_[i] = box_.cell_count(i, level_);
    origin_[i] = box_.first_index(i, level_);
    total *= static_cast<std::size_t>(shape_[i]);
  }
  std::size_t s = 1;
  for (std::size_t i = d; i-- > 0;) {
    strides_[i] = s;
    s *= static_cast<std::size_t>(shape_[i]);
  }
  if (values_.empty()) {
    values_.assign(total, 0.0);
  } else if (values_.size() != total) {
    throw StructuralError("grid function: expected " + std::to_string(total) + " samples, got " +
                          std::to_string(values_.size()));
  }
}

double GridFunction::cell_side() const { return std::ldexp(1.0, -level_); }

double GridFunction::cell_volume() const {
  return std::ldexp(1.0, -level_ * static_cast<int>(dim()));
}

void GridFunction::unravel(std::size_t flat, std::span<std::int64_t> index) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    index[i] = static_cast<std::int64_t>(flat / strides_[i]);
    flat %= strides_[i];
  }
}

std::vector<double> GridFunction::center(std::size_t flat) const {
  std::vector<double> x(dim());
  const double hcell = cell_side();
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto c = static_cast<std::int64_t>(flat / strides_[i]);
    flat %= strides_[i];
    x[i] = (static_cast<double>(origin_[i] + c) + 0.5) * hcell;
  }
  return x;
}

bool GridFunction::same_grid(const GridFunction& other) const {
  return level_ == other.level_ && box_ == other.box_;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!same_grid(other)) throw StructuralError("grid functions live on different grids");
  simd::add(other.values_, values_);
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!same_grid(other)) throw StructuralError("grid functions live on different grids");
  simd::axpy(-1.0, other.values_, values_);
  return *this;
}

GridFunction& GridFunction::operator*=(double c) {
  simd::scale(c, values_);
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double c, GridFunction a) { return a *= c; }

double NormParams::sigma_p(std::size_t d) const {
  return static_cast<double>(d) * std::max(0.0, 1.0 / p - 1.0);
}

// ---------------------------------------------------------------- operations

GridFunction make_grid(std::size_t d, int level, const Box& box, const Sampler& sampler) {
  if (box.dim() != d) throw StructuralError("make_grid: box dimension mismatch");
  GridFunction g = GridFunction::zeros(box, level);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.center(i);
    const double v = sampler(x);
    if (!std::isfinite(v)) {
      throw DomainError("make_grid: sampler returned a non-finite value at cell " + std::to_string(i));
    }
    g[i] = v;
  }
  return g;
}

namespace {

double power_sum(std::span<const double> v, double p) {
  if (p == 1.0) return simd::sum_abs(v);
  if (p == 2.0) return simd::sum_sq(v);
  double acc = 0.0;
  for (double x : v) {
    if (x != 0.0) acc += std::pow(std::fabs(x), p);
  }
  return acc;
}

}  // namespace

double lp_quasinorm(const GridFunction& f, double p) {
  if (!(p > 0.0)) throw DomainError("lp_quasinorm: p must be positive");
  if (std::isinf(p)) return simd::max_abs(f.values());
  const double s = power_sum(f.values(), p) * f.cell_volume();
  if (p == 2.0) return std::sqrt(s);
  if (p == 1.0) return s;
  return std::pow(s, 1.0 / p);
}

double lp_quasinorm(const GridFunction& f, double p, const Box& region) {
  return lp_quasinorm(restrict_to(f, region), p);
}

double integral(const GridFunction& f) { return simd::sum(f.values()) * f.cell_volume(); }

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (!f.same_grid(g)) throw StructuralError("inner_product: grid functions live on different grids");
  return simd::dot(f.values(), g.values()) * f.cell_volume();
}

GridFunction restrict_to(const GridFunction& f, const Box& region) {
  if (!f.box().contains(region)) throw DomainError("restrict_to: region is not inside the box");
  GridFunction out = GridFunction::zeros(region, f.level());
  const std::size_t d = f.dim();
  std::vector<std::int64_t> shift(d), idx(d);
  for (std::size_t i = 0; i < d; ++i) shift[i] = out.first_index(i) - f.first_index(i);
  const auto& shape = out.shape();
  const std::size_t row = static_cast<std::size_t>(shape[d - 1]);
  for (std::size_t flat = 0; flat < out.size(); flat += row) {
    out.unravel(flat, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < d; ++i) src += static_cast<std::size_t>(idx[i] + shift[i]) * f.stride(i);
    std::copy_n(f.values().begin() + static_cast<std::ptrdiff_t>(src), row,
                out.values().begin() + static_cast<std::ptrdiff_t>(flat));
  }
  return out;
}

GridFunction refine(const GridFunction& f, int level) {
  if (level < f.level()) throw ResolutionError("refine: target level is coarser than the data");
  if (level == f.level()) return f;
  GridFunction out = GridFunction::zeros(f.box(), level);
  const int factor_log = level - f.level();
  const std::size_t d = f.dim();
  std::vector<std::int64_t> idx(d);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out.unravel(flat, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < d; ++i) src += static_cast<std::size_t>(idx[i] >> factor_log) * f.stride(i);
    out[flat] = f[src];
  }
  return out;
}

GridFunction conditional_expectation(const GridFunction& f, int N) {
  if (N < 0) throw DomainError("conditional_expectation: negative level");
  if (N > f.level()) {
    throw ResolutionError("conditional_expectation: level " + std::to_string(N) +
                          " is finer than the grid resolution " + std::to_string(f.level()));
  }
  if (!f.box().aligned_to(N)) {
    throw AlignmentError("conditional_expectation: box is not aligned to 2^-" + std::to_string(N));
  }
  GridFunction out = f;
  const std::size_t block = std::size_t{1} << (f.level() - N);
  if (block == 1) return out;
  const auto& k = simd::active();
  std::vector<double> acc;
  for (std::size_t axis = 0; axis < f.dim(); ++axis) {
    const auto v = detail::axis_view(out.shape(), axis);
    acc.assign(v.inner, 0.0);
    double* data = out.values().data();
    const double inv = 1.0 / static_cast<double>(block);
    for (std::size_t o = 0; o < v.outer; ++o) {
      double* base = data + o * v.n * v.inner;
      for (std::size_t b = 0; b < v.n; b += block) {
        double* first = base + b * v.inner;
        if (v.inner == 1) {
          const double mean = k.sum(first, block) * inv;
          k.fill(mean, first, block);
          continue;
        }
        std::copy_n(first, v.inner, acc.begin());
        for (std::size_t c = 1; c < block; ++c) k.add(first + c * v.inner, acc.data(), v.inner);
        k.scale(inv, acc.data(), v.inner);
        for (std::size_t c = 0; c < block; ++c) std::copy_n(acc.begin(), v.inner, first + c * v.inner);
      }
    }
  }
  return out;
}

std::int64_t aligned_step(const GridFunction& f, double h) {
  const double m = std::ldexp(h, f.level());
  const double r = std::round(m);
  if (!(h > 0.0) || std::fabs(m - r) > 1e-9 * std::max(1.0, std::fabs(m)) || r < 1.0) {
    throw AlignmentError("step " + std::to_string(h) + " is not a positive multiple of 2^-" +
                         std::to_string(f.level()));
  }
  return static_cast<std::int64_t>(r);
}

GridFunction finite_difference(const GridFunction& f, double h, std::size_t axis, int order,
                               Extension ext) {
  if (axis >= f.dim()) throw DomainError("finite_difference: axis out of range");
  if (order < 1) throw DomainError("finite_difference: order must be at least 1");
  const std::int64_t m = aligned_step(f, h);
  GridFunction out = GridFunction::zeros(f.box(), f.level());
  const auto v = detail::axis_view(f.shape(), axis);
  const Extension shift_ext = ext == Extension::Periodic ? ext : Extension::Zero;
  for (int i = 0; i <= order; ++i) {
    const double w = ((order - i) % 2 == 0 ? 1.0 : -1.0) * binomial(order, i);
    detail::shift_accumulate(f.values().data(), out.values().data(), v,
                             static_cast<std::ptrdiff_t>(i * m), w, shift_ext);
  }
  if (ext == Extension::Restrict) {
    detail::zero_outside(out.values().data(), v, 0, static_cast<std::ptrdiff_t>(order * m));
  }
  return out;
}

CellMask boundary_neighborhood(int N, int j, const Box& box, int J) {
  if (j <= N) throw DomainError("boundary_neighborhood: requires j > N");
  if (J < j + 1) throw ResolutionError("boundary_neighborhood: requires J >= j + 1");
  const GridFunction layout = GridFunction::zeros(box, J);
  const std::size_t d = box.dim();
  // Work in units of 2^{-J-1} so cell centers are odd integers.
  const std::int64_t period = pow2(J + 1 - N);
  const std::int64_t threshold = pow2(J - j);
  CellMask mask(layout.size(), 0);
  std::vector<std::int64_t> idx(d);
  for (std::size_t flat = 0; flat < layout.size(); ++flat) {
    layout.unravel(flat, idx);
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t c = 2 * (layout.first_index(i) + idx[i]) + 1;
      std::int64_t r = c % period;
      if (r < 0) r += period;
      if (std::min(r, period - r) <= threshold) {
        mask[flat] = 1;
        break;
      }
    }
  }
  return mask;
}

DyadicCube cube_of(const GridFunction& f, std::size_t flat, int level) {
  if (level > f.level()) throw ResolutionError("cube_of: level finer than the grid");
  DyadicCube cube{level, std::vector<std::int64_t>(f.dim())};
  std::vector<std::int64_t> idx(f.dim());
  f.unravel(flat, idx);
  const int shift = f.level() - level;
  for (std::size_t i = 0; i < f.dim(); ++i) cube.offset[i] = (f.first_index(i) + idx[i]) >> shift;
  return cube;
}

}  // namespace haar
