#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "haar/error.hpp"
#include "haar/experiments.hpp"

namespace haar {

void ExperimentConfig::validate() const {
  if (d == 0) throw DomainError("experiment: d must be positive");
  if (J < 1) throw DomainError("experiment: J must be positive");
  if (N_min < 0 || N_min > N_max) throw DomainError("experiment: need 0 <= N_min <= N_max");
  if (N_max > J - 3) {
    throw ResolutionError("experiment: N_max = " + std::to_string(N_max) + " needs J >= N_max + 3");
  }
  if (corpus_size < 1) throw DomainError("experiment: corpus size must be at least 1");
  if (box && box->dim() != d) throw StructuralError("experiment: box dimension differs from d");
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw StructuralError("fit_slope: x and y differ in length");
  if (x.size() < 4) throw DomainError("fit_slope: need at least 4 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DomainError("fit_slope: non-finite point");
    mx += x[i];
    my += y[i];
  }
  const double n = static_cast<double>(x.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_slope: all x equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = x.size();
  return fit;
}

void ResultTable::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw StructuralError("ResultTable: row width differs from header");
  rows.push_back(std::move(row));
}

std::vector<double> ResultTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
  throw StructuralError("ResultTable: no column '" + name + "'");
}

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(key, std::string(buf));
}

void describe_kernel(Manifest& manifest, const MomentKernel& kernel) {
  double worst = 0.0;
  for (double r : kernel.moment_residuals()) worst = std::max(worst, r);
  manifest.set("kernel_M", kernel.moments());
  manifest.set("kernel_difference_order", kernel.difference_order());
  manifest.set("kernel_max_moment_residual", worst);
  manifest.set("kernel_annulus_floor", kernel.annulus_floor());
  manifest.set("kernel_beta0_floor", kernel.beta0_floor());
}

Manifest config_manifest(const std::string& experiment, const ExperimentConfig& cfg) {
  Manifest m;
  m.experiment = experiment;
  m.set("d", static_cast<double>(cfg.d));
  m.set("J", cfg.J);
  m.set("s", cfg.params.s);
  m.set("p", cfg.params.p);
  m.set("q", cfg.params.q);
  m.set("r", cfg.params.r);
  m.set("N_min", cfg.N_min);
  m.set("N_max", cfg.N_max);
  m.set("seed", std::to_string(cfg.seed));
  m.set("corpus_size", cfg.corpus_size);
  return m;
}

std::vector<GridFunction> bump_corpus(std::size_t d, int J, const Box& box, int count, std::uint64_t seed,
                                      const CorpusSpec& spec) {
  if (spec.bumps < 1) throw DomainError("bump_corpus: need at least one bump");
  if (!(spec.u_min >= 1.0 && spec.u_max >= spec.u_min)) throw DomainError("bump_corpus: need 1 <= u_min <= u_max");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double dp = static_cast<double>(d) / spec.p;
  std::vector<GridFunction> out;
  for (int c = 0; c < count; ++c) {
    struct Bump {
      std::vector<double> center;
      double width, amplitude;
    };
    std::vector<Bump> bumps(static_cast<std::size_t>(spec.bumps));
    const double uc = spec.u_min + (spec.u_max - spec.u_min) * (c + unit(rng)) / count;
    const double side = std::min(1.0, spec.window * std::exp2(-uc));
    std::vector<double> corner(d);
    for (auto& x : corner) x = (1.0 - side) * unit(rng);
    for (auto& b : bumps) {
      const double u = std::clamp(uc + unit(rng) - 0.5, spec.u_min, spec.u_max);
      b.width = std::exp2(-u);
      b.center.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double lo = std::max(b.width, corner[i]), hi = std::min(1.0 - b.width, corner[i] + side);
        b.center[i] = lo < hi ? lo + (hi - lo) * unit(rng) : 0.5 * (lo + hi);
      }
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      b.amplitude = sign * (0.5 + 0.5 * unit(rng)) * std::pow(b.width, spec.s - dp);
    }
    out.push_back(make_grid(d, J, box, [&](std::span<const double> x) {
      double v = 0.0;
      for (const auto& b : bumps) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double t = (x[i] - b.center[i]) / b.width;
          r2 += t * t;
        }
        if (r2 < 1.0) v += b.amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
      }
      return v;
    }));
  }
  return out;
}

}  // namespace haar
