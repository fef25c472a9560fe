#include <cmath>

#include "haar/bounds.hpp"
#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "haar/norms.hpp"

namespace haar {

namespace {

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 1 on |x| <= 2, 0 on |x| >= 2.5, smooth in between.
double plateau(double x) {
  const double t = (std::fabs(x) - 2.0) / 0.5;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = psi(1.0 - t);
  return a / (a + psi(t));
}

}  // namespace

GridFunction blowup_witness(std::size_t d, int J) {
  const Box box = Box::cube(d, -3, 3);
  return make_grid(d, J, box, [](std::span<const double> x) {
    double eta = 1.0;
    for (double xi : x) eta *= plateau(xi);
    return x[0] * eta;
  });
}

BlowupResult run_blowup(const ExperimentConfig& cfg, BlowupMode mode) {
  cfg.validate();
  const auto& P = cfg.params;
  BlowupResult out;
  if (mode == BlowupMode::Witness) {
    out.expected_slope = blowup_exponent(P.p, P.s, 0.0, cfg.d, BlowupSpace::Besov);
  } else {
    // Same (p, s) range as the Schauder region, with q left free.
    const RegionVerdict v = classify_region(P.p, 2.0, P.s, cfg.d);
    if (!v.besov_schauder) throw DomainError("run_blowup: control (p, s) must lie in the Schauder range");
    out.expected_slope = 0.0;
  }
  if (cfg.box && !(*cfg.box == Box::cube(cfg.d, -3, 3))) {
    throw DomainError("run_blowup: the witness lives on [-3,3)^d");
  }
  const GridFunction f = blowup_witness(cfg.d, cfg.J);
  out.table.columns = {"N", "norm", "log2_norm", "base_term", "tail"};
  std::vector<double> xs, ys;
  for (int N = cfg.N_min; N <= cfg.N_max; ++N) {
    const NormResult r = besov_norm_differences(conditional_expectation(f, N), P);
    out.table.add({static_cast<double>(N), r.value, std::log2(r.value), r.base_term, r.tail});
    xs.push_back(N);
    ys.push_back(std::log2(r.value));
  }
  out.fit = fit_slope(xs, ys);
  out.manifest = config_manifest("blowup", cfg);
  out.manifest.set("mode", mode == BlowupMode::Witness ? "witness" : "control");
  out.manifest.set("box", "[-3,3)^d");
  out.manifest.set("witness", "x_1 eta(x), eta = 1 on [-2,2]^d, supp eta in (-2.5,2.5)^d");
  out.manifest.set("cells", static_cast<double>(f.size()));
  out.manifest.set("expected_slope", out.expected_slope);
  out.manifest.set("slope", out.fit.slope);
  out.manifest.set("residual", out.fit.residual);
  return out;
}

}  // namespace haar
