#include <algorithm>
#include <cmath>

#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "haar/norms.hpp"

namespace haar {

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const Enumeration& enumeration) {
  if (cfg.d == 0 || cfg.J < 4) throw DomainError("run_convergence: needs d >= 1 and J >= 4");
  if (cfg.corpus_size < 1) throw DomainError("run_convergence: corpus size must be at least 1");
  const auto& P = cfg.params;
  const Box box = cfg.box.value_or(Box::cube(cfg.d, 0, 1));
  const Enumeration e = enumeration.atoms.empty() ? admissible_enumeration(box, cfg.J - 1) : enumeration;
  const int M = cfg.moments > 0 ? cfg.moments : default_moments(cfg.d, P);
  const MomentKernel kernel = build_kernel(cfg.d, M);

  std::vector<std::size_t> ladder = e.entry_ends;
  if (ladder.empty() || ladder.back() != e.atoms.size()) ladder.push_back(e.atoms.size());

  // Corpus elements are the sampled bumps, piecewise constant at level J.
  CorpusSpec spec;
  spec.u_max = std::min(spec.u_max, static_cast<double>(cfg.J) - 2.0);
  spec.u_min = std::min(spec.u_min, spec.u_max);
  spec.s = P.s;
  spec.p = P.p;
  std::vector<GridFunction> fs;
  for (const auto& g : bump_corpus(cfg.d, cfg.J, Box::cube(cfg.d, 0, 1), cfg.corpus_size, cfg.seed, spec)) {
    // Place each unit-cube sample on every unit cube of the box.
    GridFunction f = GridFunction::zeros(box, cfg.J);
    std::vector<std::int64_t> idx(cfg.d);
    const std::int64_t side = std::int64_t{1} << cfg.J;
    for (std::size_t c = 0; c < f.size(); ++c) {
      f.unravel(c, idx);
      std::size_t flat = 0;
      for (std::size_t i = 0; i < cfg.d; ++i) {
        std::int64_t local = (idx[i] + f.first_index(i)) % side;
        if (local < 0) local += side;
        flat = flat * static_cast<std::size_t>(side) + static_cast<std::size_t>(local);
      }
      f[c] = g[flat];
    }
    fs.push_back(std::move(f));
  }

  ConvergenceResult out;
  out.table.columns = {"element", "n", "level", "error"};
  for (std::size_t c = 0; c < fs.size(); ++c) {
    double prev = kInf;
    bool monotone = true;
    for (std::size_t n : ladder) {
      const GridFunction err = partial_sum(fs[c], e, n) - fs[c];
      const double v = triebel_lizorkin_norm(err, kernel, P).value;
      const int level = n == 0 ? -1 : e.atoms[n - 1].level;
      out.table.add({static_cast<double>(c), static_cast<double>(n), static_cast<double>(level), v});
      if (v > prev * (1.0 + 1e-12) + 1e-14) monotone = false;
      prev = v;
    }
    out.final_error = std::max(out.final_error, prev);
    if (!monotone) ++out.non_monotone;
  }
  out.manifest = config_manifest("convergence", cfg);
  out.manifest.set("atoms", static_cast<double>(e.atoms.size()));
  out.manifest.set("admissible", is_admissible(e) ? "true" : "false");
  describe_kernel(out.manifest, kernel);
  out.manifest.set("final_error", out.final_error);
  out.manifest.set("non_monotone_elements", out.non_monotone);
  return out;
}

}  // namespace haar
