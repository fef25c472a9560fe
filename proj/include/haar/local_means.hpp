#pragma once

// Compactly supported kernels with vanishing moments, the local means
// L_k f = beta_k * f, the smooth Fourier cutoffs Pi_N and Lambda_j on the
// periodized box, and discrete Peetre-type maximal functions.
//
// Frequencies are in cycles per unit length: f^(xi) = int f(x) e^{-2 pi i x xi} dx.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "haar/dyadic.hpp"

namespace haar {

/// One-dimensional bump phi(u) = exp(1 - 1/(1 - (u/radius)^2)) on |u| < radius.
struct BumpProfile {
  double radius = 0.25;
  double operator()(double u) const;
};

/// Discrete 1D factors of beta_k at resolution J, indexed by cell offset
/// t = -half+1 .. half-1 (entry t + half - 1). Applied as a convolution.
struct KernelTaps {
  int level = 0;
  int resolution = 0;
  std::ptrdiff_t half = 0;
  /// Normalized bump factor (sums to 1).
  std::vector<double> smooth;
  /// Differenced factor with exact discrete vanishing moments (empty for level 0).
  std::vector<double> oscillating;
};

class MomentKernel {
 public:
  std::size_t dim() const { return d_; }
  /// Number of vanishing moments requested.
  int moments() const { return M_; }
  /// Order of the finite difference actually applied (M, or M + 1 for odd M in d >= 2).
  int difference_order() const { return order_; }
  const BumpProfile& profile() const { return profile_; }
  /// min |beta^| over the sampled annulus 1/8 <= |xi| <= 1.
  double annulus_floor() const { return annulus_floor_; }
  /// min |beta0^| over the sampled ball |xi| <= 1.
  double beta0_floor() const { return beta0_floor_; }
  /// max |int beta x^m| over |m| = 0, 1, ..., M - 1, at the working resolution.
  const std::vector<double>& moment_residuals() const { return residuals_; }
  /// Largest tap change made by the moment correction, relative to max |tap|.
  double max_correction() const { return max_correction_; }
  int working_level() const { return working_level_; }

  /// Taps of beta_k (beta0 for k = 0) on a grid of side 2^-J. Needs J - k >= 4.
  KernelTaps taps(int k, int J) const;

  /// Continuous profiles, for inspection.
  double smooth_factor(double u) const;
  double oscillating_factor(double u) const;

  /// beta0 or beta evaluated at the cell centers of a grid of side 2^-level
  /// over [-1/2, 1/2)^d.
  GridFunction beta0_samples(int level) const;
  GridFunction beta_samples(int level) const;

 private:
  friend MomentKernel build_kernel(std::size_t d, int M, BumpProfile profile, int working_level);

  std::size_t d_ = 1;
  int M_ = 1;
  int order_ = 1;
  BumpProfile profile_;
  double delta_ = 0.0;
  double smooth_mass_ = 1.0;
  double annulus_floor_ = 0.0;
  double beta0_floor_ = 0.0;
  double max_correction_ = 0.0;
  int working_level_ = 10;
  std::vector<double> residuals_;
};

/// beta = sum_i D(x_i) prod_{l != i} phi(x_l), D the centered order-M finite
/// difference of the bump phi, scaled so supp beta is inside (-1/2, 1/2)^d;
/// beta0 = prod phi(x_i) normalized to integral 1. The annulus and moment
/// conditions are checked numerically; failure raises ConstructionError.
MomentKernel build_kernel(std::size_t d, int M, BumpProfile profile = {}, int working_level = 10);

/// CSV columns t_1..t_d, beta0, beta at the given resolution.
void write_kernel_csv(std::ostream& os, const MomentKernel& kernel, int level);
/// JSON object with M, difference order, moment residuals and floors.
void write_kernel_json(std::ostream& os, const MomentKernel& kernel);

/// L_k f = beta_k * f as a Riemann sum at f's resolution. Zero extension treats
/// f as vanishing outside the box; Periodic wraps around it.
GridFunction local_mean(const GridFunction& f, const MomentKernel& kernel, int k,
                        Extension ext = Extension::Zero);

/// ||L_k L_j f||_p / ||f||_p for k = j + 1 .. k_max, entry k - j - 1. The
/// vanishing moments make this fall off like 2^{-(k-j)(M-A)} or faster.
std::vector<double> local_means_decay(const GridFunction& f, const MomentKernel& kernel, int j, int k_max, double p);

/// Radial profile with eta0 = 1 on |xi| <= 1/4 and eta0 = 0 on |xi| >= 3/8.
struct SpectralCutoff {
  double plateau = 0.25;
  double support = 0.375;
  double operator()(double r) const;
};

/// (Pi_N f)^(xi) = eta0(2^-N xi) f^(xi) on the periodized box. Needs N <= J - 2.
GridFunction spectral_projection(const GridFunction& f, int N, const SpectralCutoff& cutoff = {});

/// (Lambda_j f)^ = (eta0(2^-j xi) - eta0(2^{-j+1} xi)) / sigma_j(xi) f^ for j >= 1 and
/// eta0(xi) / sigma_0(xi) f^ for j = 0, where sigma_j is the exact symbol of the
/// periodic discrete L_j. Raises ConstructionError if |sigma_j| drops below half
/// the kernel's floor on the active band.
GridFunction lambda_band(const GridFunction& f, const MomentKernel& kernel, int j,
                         const SpectralCutoff& cutoff = {});

enum class MaximalVariant {
  Local,     ///< sup over |h|_inf <= 2^{-j+1}
  Wide,      ///< sup over |h|_inf <= 2^{-j+5}
  Weighted,  ///< sup over h of |f(x+h)| (1 + 2^j |h|)^{-A}
};

/// Window maximal functions over the box (samples outside the box are ignored).
/// The weighted variant is a direct O(cells^2) scan meant for small grids.
GridFunction window_maximal(const GridFunction& f, int j, MaximalVariant variant, double A = 1.0);

}  // namespace haar
