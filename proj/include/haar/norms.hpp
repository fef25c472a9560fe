#pragma once

// Discrete Besov and Triebel-Lizorkin quasi-norms of grid functions, through
// finite differences and through local means.

#include <vector>

#include "haar/dyadic.hpp"
#include "haar/local_means.hpp"

namespace haar {

struct NormResult {
  double value = 0.0;
  /// Difference norms: sum over axes of h^-s ||Delta_h f||_p at each sampled h,
  /// coarsest first. Local-means norms: 2^{ks} ||L_k f||_p for k = 0..K.
  std::vector<double> per_scale_terms;
  /// ||f||_p for difference norms, 0 otherwise.
  double base_term = 0.0;
  /// Sum over axes of the analytic integral over h below the finest sample.
  double tail = 0.0;
};

enum class HQuadrature {
  Dyadic,         ///< h = 2^-m, weight ln 2
  FourPerOctave,  ///< h = i 2^{-m-2}, i = 4..7, weight ln((i+1)/i)
};

struct DifferenceNormOptions {
  Extension ext = Extension::Zero;
  /// Add the exact integral over h below the grid: for step data and
  /// L h <= 2^-J, ||Delta^L_h f||_p^p is linear in h.
  bool subgrid_tail = true;
  HQuadrature quadrature = HQuadrature::Dyadic;
};

/// ||f||_p + sum_i ( int_0^1 [h^-s ||Delta^2_{h e_i} f||_p]^q dh/h )^{1/q}, the
/// integral sampled on dyadic h down to the cell side. Needs sigma_p < s < 2.
NormResult besov_norm_differences(const GridFunction& f, const NormParams& params,
                                  const DifferenceNormOptions& options = {});

/// Same with differences of order L. Needs sigma_p < s < L.
NormResult besov_norm_differences_orderL(const GridFunction& f, const NormParams& params, int L,
                                         const DifferenceNormOptions& options = {});

struct LocalMeansOptions {
  /// Finest scale; negative means J - 4, the finest the kernel resolves.
  int K = -1;
  Extension ext = Extension::Zero;
};

/// ( sum_{k<=K} [2^{ks} ||L_k f||_p]^r )^{1/r}, with r = params.r.
NormResult besov_norm_localmeans(const GridFunction& f, const MomentKernel& kernel, const NormParams& params,
                                 const LocalMeansOptions& options = {});

/// || ( sum_{k<=K} [2^{ks} |L_k f|]^q )^{1/q} ||_p, with q = params.q.
NormResult triebel_lizorkin_norm(const GridFunction& f, const MomentKernel& kernel, const NormParams& params,
                                 const LocalMeansOptions& options = {});

/// sum over faces normal to `axis` of |jump|^p times the face area; the
/// coefficient of h in ||Delta^L_h f||_p^p for small h (up to a constant).
double jump_power_sum(const GridFunction& f, std::size_t axis, double p, Extension ext = Extension::Zero);

/// Peetre exponent A = d/min(p,1) + 1 and moment count ceil(ceil(d/p + |s|) + A) + 2.
double default_peetre_exponent(std::size_t d, double p);
int default_moments(std::size_t d, const NormParams& params);

}  // namespace haar
