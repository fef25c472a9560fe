#pragma once

// Closed-form side of the boundedness argument: the bound table B(j,k,N) for
// ||L_k E_N L_j||, the summability functional built from it, the parameter
// regions where the Haar system is or is not a basis, and predicted blow-up
// exponents.

#include <cstddef>
#include <string>

#include "haar/rational.hpp"

namespace haar {

/// Which of the four index regions (j,k relative to N) applies:
/// 1: j,k >= N+1; 2: j <= N < k; 3: j,k <= N; 4: k <= N < j.
int bound_case(int j, int k, int N);

/// B(j,k,N) for 0 < p <= inf (p = kInf allowed).
double bound_B(int j, int k, int N, double p, std::size_t d);

struct SummabilityParams {
  double r = 1.0;
  double p = 2.0;
  double s = 0.0;
};

/// sum_{k<=K_max} 2^{ksr} sum_{j<=J_max} [2^{-js} B(j,k,N)]^r by direct
/// summation; r = inf takes the supremum.
double summability(int N, const SummabilityParams& params, std::size_t d, int J_max, int K_max);

inline constexpr int kUntruncated = -1;

struct SummabilityClosedForm {
  double value = 0.0;
  /// The four products of geometric sums, in case order 1..4.
  double parts[4] = {0.0, 0.0, 0.0, 0.0};
  /// Empty when finite; otherwise names the geometric sum that diverges.
  std::string divergent;
};

/// The same double sum as products of geometric sums. J_max or K_max equal to
/// kUntruncated sums to infinity, giving +inf when a ratio is >= 1.
SummabilityClosedForm summability_closed_form(int N, const SummabilityParams& params, std::size_t d,
                                              int J_max = kUntruncated, int K_max = kUntruncated);

enum class NotBasisCase { None, P4i, P4ii, P4iii };

std::string to_string(NotBasisCase c);

struct RegionVerdict {
  /// Haar system is a Schauder basis of B^s_{p,q}: d/(d+1) < p < inf,
  /// 0 < q < inf, max(d(1/p-1), 1/p-1) < s < min(1, 1/p).
  bool besov_schauder = false;
  /// Admissible enumerations are Schauder bases of F^s_{p,q} (same range).
  bool f_schauder = false;
  /// Additionally max(d(1/q-1), 1/q-1) < s < 1/q.
  bool f_unconditional = false;
  /// Span of the Haar system is not dense in B^s_{p,q}:
  /// (d-1)/d < p < 1 and max(1, d(1/p-1)) < s < 1/p.
  bool dense_failure = false;
  NotBasisCase not_basis_case = NotBasisCase::None;
  /// (1/p, s) lies on an edge of the Schauder range.
  bool boundary = false;
};

/// Exact classification; inv_p = 1/p and inv_q = 1/q (0 for infinity).
RegionVerdict classify_region(const Rational& inv_p, const Rational& inv_q, const Rational& s, std::size_t d);
/// Same, with doubles converted exactly (p, q may be kInf).
RegionVerdict classify_region(double p, double q, double s, std::size_t d);

enum class BlowupSpace { Besov, TriebelLizorkin };

/// Predicted exponent of ||E_N|| ~ 2^{eN}: s - 1 on the Besov non-density
/// region (s = 1 accepted, giving 0), s - 1 - eps for F^s_{p,q} with
/// d/(d+1) < p < 1 and 1 < s < 1/p. DomainError outside.
double blowup_exponent(double p, double s, double eps, std::size_t d = 1, BlowupSpace space = BlowupSpace::Besov);

}  // namespace haar
