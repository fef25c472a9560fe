#include "haar/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "haar/dyadic.hpp"
#include "haar/error.hpp"

namespace haar {

namespace {

double plus_part(double p) { return std::isinf(p) ? 0.0 : std::max(1.0 / p - 1.0, 0.0); }
double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }

void check_summability(int N, const SummabilityParams& sp, std::size_t d) {
  if (N < 0) throw DomainError("summability: N must be non-negative");
  if (d == 0) throw DomainError("summability: dimension must be positive");
  if (!(sp.p > 0.0) || !(sp.r > 0.0)) throw DomainError("summability: p and r must be positive");
}

struct Geometric {
  double value;
  bool diverges;
};

// sum_{i=lo}^{hi} 2^{e i}, hi = kUntruncated for infinity; r = inf takes the max.
Geometric geometric(double e, int lo, int hi, bool sup) {
  if (hi != kUntruncated && hi < lo) return {0.0, false};
  if (hi == kUntruncated) {
    if (sup) {
      if (e > 0.0) return {kInf, true};
      return {std::exp2(e * lo), false};
    }
    if (e >= 0.0) return {kInf, true};
    return {std::exp2(e * lo) / (1.0 - std::exp2(e)), false};
  }
  if (sup) return {std::max(std::exp2(e * lo), std::exp2(e * hi)), false};
  if (e == 0.0) return {static_cast<double>(hi - lo + 1), false};
  // 2^{e lo} (2^{e (hi-lo+1)} - 1) / (2^e - 1)
  return {std::exp2(e * lo) * std::expm1(e * (hi - lo + 1) * std::log(2.0)) / std::expm1(e * std::log(2.0)), false};
}

}  // namespace

int bound_case(int j, int k, int N) {
  if (j > N && k > N) return 1;
  if (j <= N && k > N) return 2;
  if (j <= N && k <= N) return 3;
  return 4;
}

double bound_B(int j, int k, int N, double p, std::size_t d) {
  if (j < 0 || k < 0 || N < 0) throw DomainError("bound_B: indices must be non-negative");
  if (!(p > 0.0)) throw DomainError("bound_B: p must be positive");
  const double a = plus_part(p), ip = inv(p), dm1 = static_cast<double>(d) - 1.0;
  switch (bound_case(j, k, N)) {
    case 1:
      return std::exp2((N - j) + (j - k) * ip + (j - N) * dm1 * a);
    case 2:
      return std::exp2((N - k) * ip + (j - N));
    case 3:
      return std::exp2((k - N) + (j - N) + (N - k) * static_cast<double>(d) * a);
    default:
      return std::exp2((k - j) + (j - N) * ip + ((N - k) + (j - k) * dm1) * a);
  }
}

double summability(int N, const SummabilityParams& sp, std::size_t d, int J_max, int K_max) {
  check_summability(N, sp, d);
  if (J_max < 0 || K_max < 0) throw DomainError("summability: truncations must be non-negative");
  const bool sup = std::isinf(sp.r);
  double total = 0.0;
  for (int k = 0; k <= K_max; ++k) {
    double inner = 0.0;
    for (int j = 0; j <= J_max; ++j) {
      const double t = std::exp2(-j * sp.s) * bound_B(j, k, N, sp.p, d);
      inner = sup ? std::max(inner, t) : inner + std::pow(t, sp.r);
    }
    total = sup ? std::max(total, std::exp2(k * sp.s) * inner) : total + std::exp2(k * sp.s * sp.r) * inner;
  }
  return total;
}

SummabilityClosedForm summability_closed_form(int N, const SummabilityParams& sp, std::size_t d, int J_max,
                                              int K_max) {
  check_summability(N, sp, d);
  const bool sup = std::isinf(sp.r);
  // Exponents are per unit of r; for r = inf the sup of a product of powers
  // uses the same exponents with r = 1.
  const double r = sup ? 1.0 : sp.r;
  const double s = sp.s, ip = inv(sp.p), a = plus_part(sp.p);
  const double dd = static_cast<double>(d), dm1 = dd - 1.0;

  const double k_hi_e = r * (s - ip);                   // k > N, cases 1 and 2
  const double k_lo_e = r * (s + 1.0 - dd * a);         // k <= N, cases 3 and 4
  const double j_hi_e = r * (-s - 1.0 + ip + dm1 * a);  // j > N, cases 1 and 4
  const double j_lo_e = r * (1.0 - s);                  // j <= N, cases 2 and 3
  const double n_e[4] = {r * (1.0 - dm1 * a), r * (ip - 1.0), r * (dd * a - 2.0), -r * (ip - a)};

  const int kN = K_max == kUntruncated ? N : std::min(N, K_max);
  const int jN = J_max == kUntruncated ? N : std::min(N, J_max);
  const Geometric k_hi = geometric(k_hi_e, N + 1, K_max, sup);
  const Geometric k_lo = geometric(k_lo_e, 0, kN, sup);
  const Geometric j_hi = geometric(j_hi_e, N + 1, J_max, sup);
  const Geometric j_lo = geometric(j_lo_e, 0, jN, sup);

  const Geometric* factors[4][2] = {{&k_hi, &j_hi}, {&k_hi, &j_lo}, {&k_lo, &j_lo}, {&k_lo, &j_hi}};
  const char* names[4][2] = {{"sum_{k>N} 2^{kr(s-1/p)}", "sum_{j>N} 2^{-jr(s+1-1/p-(d-1)(1/p-1)_+)}"},
                             {"sum_{k>N} 2^{kr(s-1/p)}", "sum_{j<=N} 2^{jr(1-s)}"},
                             {"sum_{k<=N} 2^{kr(s+1-d(1/p-1)_+)}", "sum_{j<=N} 2^{jr(1-s)}"},
                             {"sum_{k<=N} 2^{kr(s+1-d(1/p-1)_+)}", "sum_{j>N} 2^{-jr(s+1-1/p-(d-1)(1/p-1)_+)}"}};
  SummabilityClosedForm out;
  for (int c = 0; c < 4; ++c) {
    const Geometric& f0 = *factors[c][0];
    const Geometric& f1 = *factors[c][1];
    double v;
    if (f0.value == 0.0 || f1.value == 0.0) {
      v = 0.0;  // an empty index range
    } else {
      v = f0.value * f1.value * std::exp2(n_e[c] * N);
      if ((f0.diverges || f1.diverges) && out.divergent.empty()) {
        out.divergent = f0.diverges ? names[c][0] : names[c][1];
      }
    }
    out.parts[c] = v;
    out.value = sup ? std::max(out.value, v) : out.value + v;
  }
  return out;
}

std::string to_string(NotBasisCase c) {
  switch (c) {
    case NotBasisCase::P4i:
      return "P4i";
    case NotBasisCase::P4ii:
      return "P4ii";
    case NotBasisCase::P4iii:
      return "P4iii";
    default:
      return "none";
  }
}

RegionVerdict classify_region(const Rational& ip, const Rational& iq, const Rational& s, std::size_t d) {
  if (d == 0) throw DomainError("classify_region: dimension must be positive");
  if (ip < 0 || iq < 0) throw DomainError("classify_region: p and q must be positive");
  const Rational D(static_cast<long long>(d));
  const Rational one(1);
  const Rational top = (D + 1) / D;  // 1/p at p = d/(d+1)

  const Rational s_lo = rmax(D * (ip - 1), ip - 1);
  const Rational s_hi = rmin(one, ip);
  const bool p_ok = ip > 0 && ip < top;
  const bool q_ok = iq > 0;
  const bool large = p_ok && q_ok && s > s_lo && s < s_hi;

  RegionVerdict v;
  v.besov_schauder = large;
  v.f_schauder = large;
  const Rational sq_lo = rmax(D * (iq - 1), iq - 1);
  v.f_unconditional = large && s > sq_lo && s < iq;

  // (d-1)/d < p < 1, i.e. 1 < 1/p < d/(d-1), with no upper bound when d = 1.
  const bool dense_p = ip > 1 && (d == 1 || ip < D / (D - 1));
  v.dense_failure = dense_p && s > rmax(one, D * (ip - 1)) && s < ip;

  if (q_ok) {
    if (ip > 0 && ip < 1 && (s >= ip || s <= ip - 1)) {
      v.not_basis_case = NotBasisCase::P4i;
    } else if (ip >= 1 && ip <= top && (s > 1 || s < D * (ip - 1))) {
      v.not_basis_case = NotBasisCase::P4ii;
    } else if (ip > top) {
      v.not_basis_case = NotBasisCase::P4iii;
    }
  }

  const bool in_closure = ip >= 0 && ip <= top && s >= s_lo && s <= s_hi;
  v.boundary = in_closure && (ip == top || ip == 0 || s == s_lo || s == s_hi);
  return v;
}

RegionVerdict classify_region(double p, double q, double s, std::size_t d) {
  return classify_region(reciprocal(p), reciprocal(q), to_rational(s), d);
}

double blowup_exponent(double p, double s, double eps, std::size_t d, BlowupSpace space) {
  if (d == 0) throw DomainError("blowup_exponent: dimension must be positive");
  if (!(p > 0.0)) throw DomainError("blowup_exponent: p must be positive");
  const Rational ip = reciprocal(p), S = to_rational(s), D(static_cast<long long>(d));
  if (space == BlowupSpace::Besov) {
    const bool p_ok = ip > 1 && (d == 1 || ip < D / (D - 1));
    const Rational lo = rmax(Rational(1), D * (ip - 1));
    // s = 1 is the edge where the exponent vanishes.
    const bool s_ok = (S > lo && S < ip) || (S == 1 && lo == 1 && S < ip);
    if (!(p_ok && s_ok)) {
      throw DomainError("blowup_exponent: (p, s) = (" + std::to_string(p) + ", " + std::to_string(s) +
                        ") outside (d-1)/d < p < 1, max(1, d(1/p-1)) < s < 1/p");
    }
    return s - 1.0;
  }
  if (!(eps > 0.0)) throw DomainError("blowup_exponent: eps must be positive");
  const bool p_ok = ip > 1 && ip < (D + 1) / D;
  if (!(p_ok && S > 1 && S < ip)) {
    throw DomainError("blowup_exponent: (p, s) = (" + std::to_string(p) + ", " + std::to_string(s) +
                      ") outside d/(d+1) < p < 1, 1 < s < 1/p");
  }
  return s - 1.0 - eps;
}

}  // namespace haar
