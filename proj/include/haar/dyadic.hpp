#pragma once

// Dyadic grids over boxes and the exact operations on piecewise-constant data:
// L^p quasi-norms, dyadic conditional expectation, finite differences with
// grid-aligned steps, and boundary neighborhoods of dyadic cube families.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace haar {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Axis-aligned box with dyadic-rational corners lo_i*2^-base .. hi_i*2^-base.
class Box {
 public:
  Box() = default;
  Box(int base_level, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi);

  /// [lo, hi)^d with integer corners.
  static Box cube(std::size_t d, std::int64_t lo, std::int64_t hi);

  std::size_t dim() const { return lo_.size(); }
  int base_level() const { return base_; }
  std::span<const std::int64_t> lo_units() const { return lo_; }
  std::span<const std::int64_t> hi_units() const { return hi_; }
  double lo(std::size_t axis) const;
  double hi(std::size_t axis) const;
  double side(std::size_t axis) const { return hi(axis) - lo(axis); }
  double volume() const;

  /// True when every corner coordinate is a multiple of 2^-level.
  bool aligned_to(int level) const;
  /// Global index of the first cell of side 2^-level along an axis.
  /// Throws AlignmentError when the box is not aligned to that level.
  std::int64_t first_index(std::size_t axis, int level) const;
  std::int64_t cell_count(std::size_t axis, int level) const;

  bool contains(const Box& other) const;
  friend bool operator==(const Box& a, const Box& b);

 private:
  int base_ = 0;
  std::vector<std::int64_t> lo_, hi_;
};

/// Dyadic cube 2^-level (offset + [0,1)^d).
struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> offset;
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

/// Piecewise-constant function on the cells of side 2^-level covering a box.
/// Samples are stored row-major with the first axis slowest.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Box box, int level, std::vector<double> samples);

  static GridFunction zeros(Box box, int level);

  std::size_t dim() const { return box_.dim(); }
  int level() const { return level_; }
  const Box& box() const { return box_; }
  const std::vector<std::int64_t>& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  double cell_side() const;
  double cell_volume() const;
  /// Global dyadic index (at this level) of the first cell along an axis.
  std::int64_t first_index(std::size_t axis) const { return origin_[axis]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  void unravel(std::size_t flat, std::span<std::int64_t> index) const;
  std::vector<double> center(std::size_t flat) const;
  bool same_grid(const GridFunction& other) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double c);

 private:
  void init_layout();

  Box box_;
  int level_ = 0;
  std::vector<std::int64_t> shape_;
  std::vector<std::int64_t> origin_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double c, GridFunction a);

/// Smoothness/integrability parameters. Infinite p, q, r use kInf.
struct NormParams {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;

  /// d(1/p - 1)_+
  double sigma_p(std::size_t d) const;
};

using Sampler = std::function<double(std::span<const double>)>;

/// Samples `sampler` at every cell center. Non-finite output is rejected.
GridFunction make_grid(std::size_t d, int level, const Box& box, const Sampler& sampler);

/// (sum |v|^p 2^{-Jd})^{1/p}, or max |v| for p = inf. Quasi-norm for p < 1.
double lp_quasinorm(const GridFunction& f, double p);
/// Same, restricted to the cells inside `region` (which must be grid aligned).
double lp_quasinorm(const GridFunction& f, double p, const Box& region);

double integral(const GridFunction& f);
double inner_product(const GridFunction& f, const GridFunction& g);

/// Copy of f on a grid-aligned sub-box.
GridFunction restrict_to(const GridFunction& f, const Box& region);
/// Same function sampled on the finer grid of side 2^-level (exact).
GridFunction refine(const GridFunction& f, int level);

/// Mean of f over each dyadic cube of side 2^-N, replicated at f's resolution.
/// Requires N <= J and a box aligned to 2^-N.
GridFunction conditional_expectation(const GridFunction& f, int N);

/// How shifted samples that leave the box are treated.
enum class Extension {
  Zero,      ///< f is zero outside the box
  Restrict,  ///< output is zeroed wherever a shifted sample leaves the box
  Periodic,  ///< the box is a torus
};

/// Order-L forward difference sum_i (-1)^{L-i} C(L,i) f(x + i h e_axis).
/// h must be a positive multiple of the cell side.
GridFunction finite_difference(const GridFunction& f, double h, std::size_t axis, int order,
                               Extension ext = Extension::Zero);

inline GridFunction second_difference(const GridFunction& f, double h, std::size_t axis,
                                      Extension ext = Extension::Zero) {
  return finite_difference(f, h, axis, 2, ext);
}

/// Integer step (in cells) for a dyadic step h, or AlignmentError.
std::int64_t aligned_step(const GridFunction& f, double h);

using CellMask = std::vector<std::uint8_t>;

/// Cells whose center lies within 2^{-j-1} (in some coordinate) of the
/// boundary hyperplanes of the dyadic cubes of side 2^-N. Requires j > N and
/// J >= j + 1.
CellMask boundary_neighborhood(int N, int j, const Box& box, int J);

/// Dyadic cube of side 2^-level containing the given cell of f.
DyadicCube cube_of(const GridFunction& f, std::size_t flat, int level);

}  // namespace haar
