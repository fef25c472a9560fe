#include <doctest.h>

#include <cmath>
#include <random>

#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "haar/haar_system.hpp"
#include "haar/norms.hpp"
#include "oracles.hpp"

using namespace haar;
using doctest::Approx;

namespace {

GridFunction smooth_bump(std::size_t d, int J, const Box& box, double center, double radius) {
  return make_grid(d, J, box, [=](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += (v - center) * (v - center);
    r2 /= radius * radius;
    return r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
  });
}

const Box kPadded1 = Box::cube(1, -1, 2);

}  // namespace

TEST_CASE("all norms vanish on zero") {
  const auto zero = GridFunction::zeros(kPadded1, 9);
  const auto kernel = build_kernel(1, 4);
  const NormParams np{0.5, 2.0, 2.0, 2.0};
  CHECK(besov_norm_differences(zero, np).value == 0.0);
  CHECK(besov_norm_localmeans(zero, kernel, np).value == 0.0);
  CHECK(triebel_lizorkin_norm(zero, kernel, np).value == 0.0);
}

TEST_CASE("absolute homogeneity") {
  const auto f = smooth_bump(1, 9, kPadded1, 0.5, 0.3) + 0.3 * oracle::random_grid(1, 9, kPadded1, 2);
  const auto kernel = build_kernel(1, 5);
  for (NormParams np : {NormParams{0.4, 2.0, 2.0, 2.0}, NormParams{0.2, 0.9, 1.0, 0.7}, NormParams{0.5, 1.5, kInf, kInf}}) {
    CHECK(besov_norm_differences(-3.0 * f, np).value ==
          Approx(3.0 * besov_norm_differences(f, np).value).epsilon(1e-10));
    CHECK(besov_norm_localmeans(-3.0 * f, kernel, np).value ==
          Approx(3.0 * besov_norm_localmeans(f, kernel, np).value).epsilon(1e-10));
    CHECK(triebel_lizorkin_norm(-3.0 * f, kernel, np).value ==
          Approx(3.0 * triebel_lizorkin_norm(f, kernel, np).value).epsilon(1e-10));
  }
}

TEST_CASE("triangle inequalities on random pairs") {
  const auto kernel = build_kernel(1, 5);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = oracle::random_grid(1, 8, kPadded1, rng());
    const auto g = smooth_bump(1, 8, kPadded1, 0.4, 0.2);
    const NormParams np{0.4, 1.5, 2.0, 1.0};
    CHECK(besov_norm_differences(f + g, np).value <=
          (besov_norm_differences(f, np).value + besov_norm_differences(g, np).value) * (1 + 1e-12));
    CHECK(triebel_lizorkin_norm(f + g, kernel, np).value <=
          (triebel_lizorkin_norm(f, kernel, np).value + triebel_lizorkin_norm(g, kernel, np).value) * (1 + 1e-12));
    // p = r = 0.7: the 0.7-th power is subadditive.
    const NormParams qp{0.2, 0.7, 0.7, 0.7};
    const double m = 0.7;
    CHECK(std::pow(besov_norm_localmeans(f + g, kernel, qp).value, m) <=
          (std::pow(besov_norm_localmeans(f, kernel, qp).value, m) +
           std::pow(besov_norm_localmeans(g, kernel, qp).value, m)) * (1 + 1e-12));
  }
}

TEST_CASE("order-2 differences are the default estimator") {
  const auto f = oracle::random_grid(1, 8, kPadded1, 9);
  const NormParams np{0.7, 1.3, 2.5, 2.0};
  CHECK(besov_norm_differences_orderL(f, np, 2).value == Approx(besov_norm_differences(f, np).value).epsilon(1e-12));
  CHECK_THROWS_AS(besov_norm_differences_orderL(f, NormParams{2.5, 2.0, 2.0, 2.0}, 2), DomainError);
  CHECK_THROWS_AS(besov_norm_differences(f, NormParams{0.05, 0.5, 2.0, 2.0}), DomainError);
  CHECK_NOTHROW(besov_norm_differences_orderL(f, NormParams{2.5, 2.0, 2.0, 2.0}, 3));
}

TEST_CASE("differences of a polynomial below the order leave only the L^p term") {
  // Restrict keeps every difference inside the box; sampled polynomials are
  // step functions, so the sub-grid tail is left out.
  auto p = make_grid(1, 8, kPadded1, [](std::span<const double> x) { return 1 + x[0] - 2 * x[0] * x[0]; });
  const DifferenceNormOptions opt{Extension::Restrict, false, HQuadrature::Dyadic};
  const NormParams np{1.5, 2.0, 2.0, 2.0};
  const auto r = besov_norm_differences_orderL(p, np, 3, opt);
  CHECK(r.value == Approx(lp_quasinorm(p, 2.0)).epsilon(1e-10));
}

TEST_CASE("sub-grid differences are linear in h with the jump sum") {
  for (double p : {0.8, 1.0, 2.0}) {
    const auto f = oracle::random_grid(1, 5, kPadded1, 21);
    const double S = jump_power_sum(f, 0, p);
    for (int extra = 1; extra <= 4; ++extra) {
      const auto fine = refine(f, 5 + extra);
      for (int m = 1; 2 * m <= (1 << extra); ++m) {
        const double h = m * fine.cell_side();
        const double got = std::pow(lp_quasinorm(second_difference(fine, h, 0), p), p);
        CHECK(got == Approx(2.0 * h * S).epsilon(1e-10));
      }
    }
  }
  // Two-dimensional faces carry the face area.
  const auto g = oracle::random_grid(2, 3, Box::cube(2, 0, 1), 5);
  const auto fine = refine(g, 6);
  for (std::size_t axis : {0u, 1u}) {
    const double h = fine.cell_side();
    const double got = lp_quasinorm(finite_difference(fine, h, axis, 1), 1.0);
    CHECK(got == Approx(h * jump_power_sum(g, axis, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("tail below the grid is finite only when s < 1/p") {
  const auto f = oracle::random_grid(1, 6, kPadded1, 2);
  CHECK(std::isfinite(besov_norm_differences(f, NormParams{0.4, 2.0, 2.0, 2.0}).value));
  CHECK(std::isinf(besov_norm_differences(f, NormParams{0.6, 2.0, 2.0, 2.0}).value));
  DifferenceNormOptions no_tail;
  no_tail.subgrid_tail = false;
  CHECK(std::isfinite(besov_norm_differences(f, NormParams{0.6, 2.0, 2.0, 2.0}, no_tail).value));
}

TEST_CASE("single Haar atom scales like 2^{k(s - 1/2)}") {
  const int J = 11;
  const NormParams np{0.3, 2.0, 2.0, 2.0};
  const auto kernel = build_kernel(1, 4);
  std::vector<double> ks, diff, lm;
  for (int k = 1; k <= 5; ++k) {
    const auto h = evaluate_atom(HaarAtom{{1}, k, {0}}, J, kPadded1);
    ks.push_back(k);
    diff.push_back(std::log2(besov_norm_differences(h, np).value));
    lm.push_back(std::log2(besov_norm_localmeans(h, kernel, np).value));
  }
  const double sd = fit_slope(ks, diff).slope;
  const double sl = fit_slope(ks, lm).slope;
  CHECK(std::fabs(sd - (0.3 - 0.5)) <= 0.1);
  CHECK(std::fabs(sl - sd) <= 0.15);
}

TEST_CASE("Triebel-Lizorkin with q = p is the local-means Besov norm with r = p") {
  const auto kernel = build_kernel(1, 5);
  const auto f = smooth_bump(1, 10, kPadded1, 0.5, 0.35) + 0.1 * oracle::random_grid(1, 10, kPadded1, 8);
  for (double p : {0.8, 1.0, 2.0, 3.0}) {
    const NormParams np{0.3, p, p, p};
    CHECK(triebel_lizorkin_norm(f, kernel, np).value ==
          Approx(besov_norm_localmeans(f, kernel, np).value).epsilon(1e-12));
  }
  const auto kernel2 = build_kernel(2, 6);
  const auto g = smooth_bump(2, 7, Box::cube(2, -1, 2), 0.5, 0.4);
  const NormParams np{0.5, 1.5, 1.5, 1.5};
  CHECK(triebel_lizorkin_norm(g, kernel2, np).value ==
        Approx(besov_norm_localmeans(g, kernel2, np).value).epsilon(1e-12));
}

TEST_CASE("B_{p,r} dominates F_{p,r} for r <= p") {
  const auto kernel = build_kernel(1, 5);
  for (int i = 0; i < 5; ++i) {
    const auto f = smooth_bump(1, 10, kPadded1, 0.3 + 0.1 * i, 0.1 + 0.05 * i);
    for (auto [p, r] : {std::pair{2.0, 1.0}, std::pair{1.5, 1.5}, std::pair{3.0, 2.0}}) {
      const NormParams np{0.4, p, r, r};
      CHECK(triebel_lizorkin_norm(f, kernel, np).value <= besov_norm_localmeans(f, kernel, np).value * (1 + 1e-12));
    }
  }
}

TEST_CASE("local-means norms grow with the truncation") {
  const auto kernel = build_kernel(1, 5);
  const auto f = oracle::random_grid(1, 10, kPadded1, 17);
  const NormParams np{0.5, 1.2, 2.0, 1.5};
  double prev_b = 0.0, prev_f = 0.0;
  for (int K = 0; K <= 6; ++K) {
    LocalMeansOptions opt;
    opt.K = K;
    const auto b = besov_norm_localmeans(f, kernel, np, opt);
    const auto t = triebel_lizorkin_norm(f, kernel, np, opt);
    CHECK(b.per_scale_terms.size() == static_cast<std::size_t>(K + 1));
    CHECK(b.value >= prev_b - 1e-12);
    CHECK(t.value >= prev_f - 1e-12);
    prev_b = b.value;
    prev_f = t.value;
  }
  LocalMeansOptions too_fine;
  too_fine.K = 7;
  CHECK_THROWS_AS(besov_norm_localmeans(f, kernel, np, too_fine), Error);
}

TEST_CASE("the two Besov characterizations are comparable on smooth bumps") {
  const auto kernel = build_kernel(1, 5);
  // s < 1/p keeps the sub-grid tail of the sampled bumps finite.
  const NormParams np{0.4, 2.0, 2.0, 2.0};
  for (int i = 0; i < 6; ++i) {
    const auto f = smooth_bump(1, 10, kPadded1, 0.25 + 0.1 * i, 0.08 + 0.06 * i);
    const double ratio = besov_norm_localmeans(f, kernel, np).value / besov_norm_differences(f, np).value;
    CHECK(ratio >= 1.0 / 50);
    CHECK(ratio <= 50.0);
  }
}

TEST_CASE("moment count is checked against d/p + |s|") {
  const auto f = oracle::random_grid(1, 9, kPadded1, 1);
  CHECK_THROWS_AS(besov_norm_localmeans(f, build_kernel(1, 1), NormParams{0.5, 0.5, 1.0, 1.0}), DomainError);
  CHECK(default_peetre_exponent(2, 0.5) == 5.0);
  CHECK(default_peetre_exponent(1, 2.0) == 2.0);
  CHECK(default_moments(1, NormParams{0.5, 2.0, 2.0, 2.0}) > 1.0 / 2.0 + 0.5 + default_peetre_exponent(1, 2.0));
}
