#include "haar/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "grid_ops.hpp"
#include "haar/error.hpp"

namespace haar {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Sum over t of C(L-1, t)^p, or the largest C(L-1, t) for p = inf.
double jump_constant(int L, double p) {
  double c = 0.0;
  for (int t = 0; t < L; ++t) {
    const double b = binom(L - 1, t);
    c = std::isinf(p) ? std::max(c, b) : c + std::pow(b, p);
  }
  return c;
}

struct Node {
  double h;
  double weight;
  int level;  // grid level on which h is a whole number of cells
};

std::vector<Node> h_nodes(int J, int last_octave, HQuadrature quad) {
  std::vector<Node> nodes;
  for (int m = 1; m <= last_octave; ++m) {
    if (quad == HQuadrature::Dyadic) {
      nodes.push_back({std::ldexp(1.0, -m), std::log(2.0), std::max(J, m)});
    } else {
      for (int i = 4; i <= 7; ++i) {
        nodes.push_back({i * std::ldexp(1.0, -m - 2), std::log((i + 1.0) / i), std::max(J, m + 2)});
      }
    }
  }
  return nodes;
}

double power_sum(double acc, double term, double q) {
  return std::isinf(q) ? std::max(acc, term) : acc + std::pow(term, q);
}

double finish(double acc, double q) { return std::isinf(q) ? acc : std::pow(acc, 1.0 / q); }

void check_local_means(const MomentKernel& kernel, const GridFunction& f, const NormParams& params,
                       const char* who) {
  if (f.dim() != kernel.dim()) throw StructuralError(std::string(who) + ": kernel and grid dimensions differ");
  if (!(params.p > 0.0)) throw DomainError(std::string(who) + ": p must be positive");
  const double need = static_cast<double>(f.dim()) / params.p + std::fabs(params.s);
  if (!(kernel.moments() > need)) {
    throw DomainError(std::string(who) + ": kernel has M = " + std::to_string(kernel.moments()) +
                      " vanishing moments, needs M > d/p + |s| = " + std::to_string(need));
  }
}

int finest_scale(const GridFunction& f, const LocalMeansOptions& options) {
  const int K = options.K < 0 ? f.level() - 4 : options.K;
  if (K < 0) throw ResolutionError("local means need J >= 4");
  if (K > f.level() - 4) {
    throw ResolutionError("local means: K = " + std::to_string(K) + " needs J >= K + 4");
  }
  return K;
}

}  // namespace

double jump_power_sum(const GridFunction& f, std::size_t axis, double p, Extension ext) {
  if (axis >= f.dim()) throw DomainError("jump_power_sum: axis out of range");
  const auto v = detail::axis_view(f.shape(), axis);
  auto x = f.values();
  double acc = 0.0;
  auto take = [&](double jump) {
    const double a = std::fabs(jump);
    acc = std::isinf(p) ? std::max(acc, a) : acc + std::pow(a, p);
  };
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t i = 0; i < v.inner; ++i) {
      auto at = [&](std::size_t c) { return x[(o * v.n + c) * v.inner + i]; };
      for (std::size_t c = 0; c + 1 < v.n; ++c) take(at(c + 1) - at(c));
      // Forward differences never reach below the lower face.
      if (ext == Extension::Zero) take(at(v.n - 1));
      if (ext == Extension::Periodic) take(at(0) - at(v.n - 1));
    }
  }
  if (std::isinf(p)) return acc;
  const double face = std::pow(f.cell_side(), static_cast<double>(f.dim() - 1));
  return acc * face;
}

NormResult besov_norm_differences_orderL(const GridFunction& f, const NormParams& params, int L,
                                         const DifferenceNormOptions& options) {
  const std::size_t d = f.dim();
  const double s = params.s, p = params.p, q = params.q;
  if (L < 1) throw DomainError("besov_norm_differences: difference order must be at least 1");
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("besov_norm_differences: p and q must be positive");
  const double sigma = params.sigma_p(d);
  if (!(s > sigma && s < L)) {
    throw DomainError("besov_norm_differences: s = " + std::to_string(s) + " outside (" + std::to_string(sigma) +
                      ", " + std::to_string(L) + "); use a difference order above s");
  }
  const int J = f.level();
  const double cell = f.cell_side();

  // Octaves J+1 .. J+ceil(log2 L) bring h down to where L h <= 2^-J.
  int extra = 0;
  while ((1 << extra) < L) ++extra;
  const int last_octave = options.subgrid_tail ? J + extra : J;
  const auto nodes = h_nodes(J, last_octave, options.quadrature);

  std::map<int, GridFunction> grids;
  auto grid_at = [&](int level) -> const GridFunction& {
    if (level == J) return f;
    auto it = grids.find(level);
    if (it == grids.end()) it = grids.emplace(level, refine(f, level)).first;
    return it->second;
  };

  const double cL = jump_constant(L, p);
  NormResult res;
  res.base_term = lp_quasinorm(f, p);
  res.per_scale_terms.assign(nodes.size(), 0.0);
  double seminorm = 0.0;
  for (std::size_t axis = 0; axis < d; ++axis) {
    const double S = jump_power_sum(f, axis, p, options.ext);
    // ||Delta^L_h f||_p for h L <= 2^-J: (h cL S)^{1/p}; for p = inf, cL S.
    auto closed = [&](double h) { return std::isinf(p) ? cL * S : std::pow(h * cL * S, 1.0 / p); };
    double acc = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const Node& node = nodes[n];
      double norm;
      if (options.subgrid_tail && node.h * L <= cell) {
        norm = closed(node.h);
      } else {
        norm = lp_quasinorm(finite_difference(grid_at(node.level), node.h, axis, L, options.ext), p);
      }
      const double term = std::pow(node.h, -s) * norm;
      res.per_scale_terms[n] += term;
      acc = std::isinf(q) ? std::max(acc, term) : acc + node.weight * std::pow(term, q);
    }
    if (options.subgrid_tail && S > 0.0) {
      const double H = std::ldexp(1.0, -last_octave);
      double tail;
      if (std::isinf(p)) {
        tail = kInf;
      } else if (std::isinf(q)) {
        // sup over h < H of h^{1/p - s} (cL S)^{1/p}
        const double e = 1.0 / p - s;
        tail = e < 0.0 ? kInf : std::pow(cL * S, 1.0 / p) * (e > 0.0 ? std::pow(H, e) : 1.0);
      } else {
        const double e = q * (1.0 / p - s);
        tail = e <= 0.0 ? kInf : std::pow(cL * S, q / p) * std::pow(H, e) / e;
      }
      res.tail += tail;
      acc = std::isinf(q) ? std::max(acc, tail) : acc + tail;
    }
    seminorm += finish(acc, q);
  }
  res.value = res.base_term + seminorm;
  return res;
}

NormResult besov_norm_differences(const GridFunction& f, const NormParams& params,
                                  const DifferenceNormOptions& options) {
  return besov_norm_differences_orderL(f, params, 2, options);
}

NormResult besov_norm_localmeans(const GridFunction& f, const MomentKernel& kernel, const NormParams& params,
                                 const LocalMeansOptions& options) {
  check_local_means(kernel, f, params, "besov_norm_localmeans");
  if (!(params.r > 0.0)) throw DomainError("besov_norm_localmeans: r must be positive");
  const int K = finest_scale(f, options);
  NormResult res;
  double acc = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double term = std::pow(2.0, k * params.s) *
                        lp_quasinorm(local_mean(f, kernel, k, options.ext), params.p);
    res.per_scale_terms.push_back(term);
    acc = power_sum(acc, term, params.r);
  }
  res.value = finish(acc, params.r);
  return res;
}

NormResult triebel_lizorkin_norm(const GridFunction& f, const MomentKernel& kernel, const NormParams& params,
                                 const LocalMeansOptions& options) {
  check_local_means(kernel, f, params, "triebel_lizorkin_norm");
  const double q = params.q;
  if (!(q > 0.0)) throw DomainError("triebel_lizorkin_norm: q must be positive");
  const int K = finest_scale(f, options);
  NormResult res;
  GridFunction agg = GridFunction::zeros(f.box(), f.level());
  auto a = agg.values();
  for (int k = 0; k <= K; ++k) {
    const double scale = std::pow(2.0, k * params.s);
    const GridFunction lk = local_mean(f, kernel, k, options.ext);
    res.per_scale_terms.push_back(scale * lp_quasinorm(lk, params.p));
    auto v = lk.values();
    for (std::size_t c = 0; c < a.size(); ++c) a[c] = power_sum(a[c], scale * std::fabs(v[c]), q);
  }
  if (!std::isinf(q)) {
    for (double& x : a) x = std::pow(x, 1.0 / q);
  }
  res.value = lp_quasinorm(agg, params.p);
  return res;
}

double default_peetre_exponent(std::size_t d, double p) {
  return static_cast<double>(d) / std::min(p, 1.0) + 1.0;
}

int default_moments(std::size_t d, const NormParams& params) {
  const double A = default_peetre_exponent(d, params.p);
  const double base = std::ceil(static_cast<double>(d) / params.p + std::fabs(params.s));
  return static_cast<int>(std::ceil(base + A)) + 2;
}

}  // namespace haar
