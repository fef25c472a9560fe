#include <algorithm>
#include <cmath>

#include "haar/bounds.hpp"
#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "haar/norms.hpp"

namespace haar {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b * 0xC2B2AE3D27D4EB4FULL);
  x ^= x >> 31;
  x *= 0xBF58476D1CE4E5B9ULL;
  return x ^ (x >> 29);
}

}  // namespace

UniformityResult run_uniformity(const ExperimentConfig& cfg, const CorpusSpec& corpus) {
  cfg.validate();
  const auto& P = cfg.params;
  const RegionVerdict v = classify_region(P.p, 2.0, P.s, cfg.d);
  if (!v.besov_schauder) throw DomainError("run_uniformity: (p, s) must lie in the Schauder range");
  const Box box = cfg.box.value_or(Box::cube(cfg.d, -1, 2));
  const int M = cfg.moments > 0 ? cfg.moments : default_moments(cfg.d, P);
  const MomentKernel kernel = build_kernel(cfg.d, M);

  CorpusSpec spec = corpus;
  spec.s = P.s;
  spec.p = P.p;
  const auto fs = bump_corpus(cfg.d, cfg.J, box, cfg.corpus_size, cfg.seed, spec);
  std::vector<double> base;
  for (const auto& f : fs) base.push_back(triebel_lizorkin_norm(f, kernel, P).value);

  UniformityResult out;
  out.table.columns = {"N", "ratio_E", "ratio_T_sign", "ratio_T_binary"};
  std::vector<double> xs, yE, yS, yB;
  for (int N = cfg.N_min; N <= cfg.N_max; ++N) {
    double rE = 0.0, rS = 0.0, rB = 0.0;
    for (std::size_t c = 0; c < fs.size(); ++c) {
      const auto& f = fs[c];
      rE = std::max(rE, triebel_lizorkin_norm(conditional_expectation(f, N), kernel, P).value / base[c]);
      const auto signs = CoefficientMask::random_signs(box, N, mix(cfg.seed, 2 * c, N));
      rS = std::max(rS, triebel_lizorkin_norm(haar_multiplier(f, N, signs), kernel, P).value / base[c]);
      const auto bits = CoefficientMask::random_binary(box, N, mix(cfg.seed, 2 * c + 1, N));
      rB = std::max(rB, triebel_lizorkin_norm(haar_multiplier(f, N, bits), kernel, P).value / base[c]);
    }
    out.table.add({static_cast<double>(N), rE, rS, rB});
    xs.push_back(N);
    yE.push_back(std::log2(rE));
    yS.push_back(std::log2(rS));
    yB.push_back(std::log2(rB));
  }
  out.fit_expectation = fit_slope(xs, yE);
  out.fit_sign = fit_slope(xs, yS);
  out.fit_binary = fit_slope(xs, yB);

  out.manifest = config_manifest("uniformity", cfg);
  out.manifest.set("norm", "triebel-lizorkin (local means)");
  describe_kernel(out.manifest, kernel);
  out.manifest.set("K", cfg.J - 4);
  out.manifest.set("corpus_bumps", spec.bumps);
  out.manifest.set("corpus_u_min", spec.u_min);
  out.manifest.set("corpus_u_max", spec.u_max);
  out.manifest.set("corpus_window", spec.window);
  out.manifest.set("corpus_amplitude", "(0.5 + 0.5 U) w^{s - d/p}, random sign");
  out.manifest.set("slope_E", out.fit_expectation.slope);
  out.manifest.set("slope_T_sign", out.fit_sign.slope);
  out.manifest.set("slope_T_binary", out.fit_binary.slope);
  return out;
}

}  // namespace haar
