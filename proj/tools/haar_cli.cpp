// haar: command-line front end for the Haar-system library.
//
// Exit codes: 0 success, 2 bad arguments or a rejected input, 3 a --check
// threshold was missed.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "haar/bounds.hpp"
#include "haar/check_thresholds.hpp"
#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "haar/grid_io.hpp"
#include "haar/haar_system.hpp"
#include "haar/local_means.hpp"
#include "haar/norms.hpp"
#include "haar/rational.hpp"
#include "json.hpp"

namespace {

using namespace haar;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCheck = 3;

const std::vector<std::string> kCommands = {"enumerate", "expectation", "project", "norm",   "blowup", "uniformity",
                                            "convergence", "lkenlj",    "region",  "bounds", "kernel"};

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string config;
  bool check = false;
};

// key=value lines become --key=value right after the subcommand name, so
// anything given on the command line later wins.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open config file " + path);
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw StructuralError("config line without '=': " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (key == "config") continue;
    injected.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  auto at = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (at == args.end()) throw StructuralError("--config needs a subcommand");
  args.insert(at + 1, injected.begin(), injected.end());
  return args;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  return to_double(parse_rational(text));
}

ExperimentConfig base_config(const Globals& g) {
  ExperimentConfig cfg;
  cfg.seed = g.seed;
  cfg.output_path = g.out;
  if (g.format == "json") {
    cfg.format = OutputFormat::Json;
  } else if (g.format != "csv") {
    throw DomainError("--format must be csv or json");
  }
  return cfg;
}

int report_check(const Globals& g, bool passed, const std::string& what) {
  if (!g.check) return kExitOk;
  std::cerr << (passed ? "check passed: " : "check FAILED: ") << what << " (thresholds v" << checks::kVersion << ")\n";
  return passed ? kExitOk : kExitCheck;
}

void emit_grid(const Globals& g, const GridFunction& f) {
  if (g.out.empty()) {
    write_grid(std::cout, f);
  } else {
    save_grid(g.out, f);
  }
}

// Subcommand options ---------------------------------------------------------

struct ExperimentArgs {
  std::size_t d = 1;
  int J = 10;
  std::string p = "2", q = "2", s = "0.3";
  int N_min = 0, N_max = 7;
  int corpus = 8;
  int moments = 0;
};

void add_experiment_options(CLI::App* sub, ExperimentArgs& a) {
  sub->add_option("--d", a.d, "dimension")->capture_default_str();
  sub->add_option("--J", a.J, "grid level")->capture_default_str();
  sub->add_option("--p", a.p, "integrability (decimal, a/b or inf)")->capture_default_str();
  sub->add_option("--q", a.q, "fine index")->capture_default_str();
  sub->add_option("--s", a.s, "smoothness")->capture_default_str();
  sub->add_option("--Nmin", a.N_min)->capture_default_str();
  sub->add_option("--Nmax", a.N_max)->capture_default_str();
  sub->add_option("--corpus", a.corpus, "corpus size")->capture_default_str();
  sub->add_option("--M", a.moments, "kernel moments (0: default)")->capture_default_str();
}

ExperimentConfig experiment_config(const Globals& g, const ExperimentArgs& a) {
  ExperimentConfig cfg = base_config(g);
  cfg.d = a.d;
  cfg.J = a.J;
  cfg.params.p = parse_exponent(a.p);
  cfg.params.q = parse_exponent(a.q);
  cfg.params.s = to_double(parse_rational(a.s));
  cfg.N_min = a.N_min;
  cfg.N_max = a.N_max;
  cfg.corpus_size = a.corpus;
  cfg.moments = a.moments;
  return cfg;
}

void print_fit(const char* name, const SlopeFit& f) {
  std::cerr << name << ": slope " << f.slope << ", intercept " << f.intercept << ", rms residual " << f.residual
            << " over " << f.points << " points\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Haar system, dyadic averages and smoothness norms on grids"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--config", g.config, "file of key=value lines; command-line flags override it");
  app.add_flag("--check", g.check, "compare against the stored thresholds; exit 3 on failure");

  std::function<int()> action;

  // enumerate
  auto* en = app.add_subcommand("enumerate", "admissible enumeration of the Haar atoms on an integer cube");
  std::size_t en_d = 1;
  int en_K = 3;
  std::int64_t en_lo = 0, en_hi = 1;
  en->add_option("--d", en_d)->capture_default_str();
  en->add_option("--K", en_K, "finest level")->capture_default_str();
  en->add_option("--lo", en_lo, "lower unit-cube corner")->capture_default_str();
  en->add_option("--hi", en_hi, "upper unit-cube corner")->capture_default_str();
  en->callback([&] {
    action = [&] {
      ExperimentConfig cfg = base_config(g);
      const Enumeration e = admissible_enumeration(Box::cube(en_d, en_lo, en_hi), en_K);
      ResultTable t;
      t.columns.push_back("n");
      for (std::size_t i = 0; i < en_d; ++i) t.columns.push_back("nu_" + std::to_string(i + 1));
      for (std::size_t i = 0; i < en_d; ++i) t.columns.push_back("eps_" + std::to_string(i + 1));
      t.columns.push_back("k");
      for (std::size_t i = 0; i < en_d; ++i) t.columns.push_back("ell_" + std::to_string(i + 1));
      for (std::size_t n = 0; n < e.atoms.size(); ++n) {
        const HaarAtom& a = e.atoms[n];
        std::vector<double> row{static_cast<double>(n + 1)};
        for (auto v : a.unit_cube()) row.push_back(static_cast<double>(v));
        for (auto v : a.eps) row.push_back(v);
        row.push_back(a.level);
        for (auto v : a.offset) row.push_back(static_cast<double>(v));
        t.add(std::move(row));
      }
      Manifest m;
      m.experiment = "enumerate";
      m.set("d", static_cast<double>(en_d));
      m.set("K", en_K);
      m.set("box", format_box(Box::cube(en_d, en_lo, en_hi)));
      m.set("atoms", static_cast<double>(e.atoms.size()));
      m.set("admissible", is_admissible(e) ? "true" : "false");
      write_result(cfg, t, m, std::cout);
      return report_check(g, is_admissible(e), "enumeration is admissible");
    };
  });

  // expectation
  auto* ex = app.add_subcommand("expectation", "dyadic conditional expectation E_N of a grid file");
  std::string ex_in;
  int ex_N = 0;
  ex->add_option("--input", ex_in, "grid file")->required();
  ex->add_option("--N", ex_N, "level")->required();
  ex->callback([&] {
    action = [&] {
      emit_grid(g, conditional_expectation(load_grid(ex_in), ex_N));
      return kExitOk;
    };
  });

  // project
  auto* pr = app.add_subcommand("project", "frequency-layer projection, multiplier or partial sum of a grid file");
  std::string pr_in, pr_mask = "ones";
  int pr_N = -1;
  long long pr_prefix = -1;
  pr->add_option("--input", pr_in, "grid file")->required();
  pr->add_option("--N", pr_N, "level of the layer projection or multiplier");
  pr->add_option("--mask", pr_mask, "ones, signs or binary (random masks use --seed)")
      ->check(CLI::IsMember({"ones", "signs", "binary"}))
      ->capture_default_str();
  pr->add_option("--prefix", pr_prefix, "partial sum over the first n atoms of the admissible enumeration");
  pr->callback([&] {
    action = [&] {
      const GridFunction f = load_grid(pr_in);
      if ((pr_N >= 0) == (pr_prefix >= 0)) throw DomainError("project: give exactly one of --N and --prefix");
      if (pr_prefix >= 0) {
        const Box& b = f.box();
        std::vector<std::int64_t> lo(f.dim()), hi(f.dim());
        for (std::size_t i = 0; i < f.dim(); ++i) {
          lo[i] = static_cast<std::int64_t>(std::floor(b.lo(i)));
          hi[i] = static_cast<std::int64_t>(std::ceil(b.hi(i)));
          if (lo[i] != b.lo(i) || hi[i] != b.hi(i)) throw AlignmentError("project: --prefix needs an integer box");
        }
        const Enumeration e = admissible_enumeration(Box(0, lo, hi), f.level() - 1);
        emit_grid(g, partial_sum(f, e, static_cast<std::size_t>(pr_prefix)));
      } else if (pr_mask == "ones") {
        emit_grid(g, level_projection(f, pr_N));
      } else {
        const CoefficientMask m = pr_mask == "signs" ? CoefficientMask::random_signs(f.box(), pr_N, g.seed)
                                                     : CoefficientMask::random_binary(f.box(), pr_N, g.seed);
        emit_grid(g, haar_multiplier(f, pr_N, m));
      }
      return kExitOk;
    };
  });

  // norm
  auto* no = app.add_subcommand("norm", "discrete Besov or Triebel-Lizorkin quasi-norm of a grid file");
  std::string no_in, no_kind = "besov-diff", no_p = "2", no_q = "2", no_s = "0.3", no_r = "2";
  int no_L = 2, no_K = -1, no_M = 0;
  no->add_option("--input", no_in, "grid file")->required();
  no->add_option("--norm", no_kind, "besov-diff, besov-lm or tl")
      ->check(CLI::IsMember({"besov-diff", "besov-lm", "tl"}))
      ->capture_default_str();
  no->add_option("--p", no_p)->capture_default_str();
  no->add_option("--q", no_q)->capture_default_str();
  no->add_option("--s", no_s)->capture_default_str();
  no->add_option("--r", no_r, "sum index for besov-lm")->capture_default_str();
  no->add_option("--L", no_L, "difference order for besov-diff")->capture_default_str();
  no->add_option("--K", no_K, "finest local-means scale (-1: J - 4)")->capture_default_str();
  no->add_option("--M", no_M, "kernel moments (0: default)")->capture_default_str();
  no->callback([&] {
    action = [&] {
      g.format = app.get_option("--format")->count() ? g.format : "json";
      ExperimentConfig cfg = base_config(g);
      const GridFunction f = load_grid(no_in);
      NormParams P;
      P.p = parse_exponent(no_p);
      P.q = parse_exponent(no_q);
      P.r = parse_exponent(no_r);
      P.s = to_double(parse_rational(no_s));
      NormResult r;
      Manifest m;
      m.experiment = "norm";
      m.set("input", no_in);
      m.set("norm", no_kind);
      m.set("J", f.level());
      m.set("box", format_box(f.box()));
      m.set("p", P.p);
      m.set("q", P.q);
      m.set("s", P.s);
      if (no_kind == "besov-diff") {
        r = besov_norm_differences_orderL(f, P, no_L);
        m.set("difference_order", no_L);
      } else {
        const MomentKernel kernel = build_kernel(f.dim(), no_M > 0 ? no_M : default_moments(f.dim(), P));
        describe_kernel(m, kernel);
        LocalMeansOptions o;
        o.K = no_K;
        if (no_kind == "tl") {
          r = triebel_lizorkin_norm(f, kernel, P, o);
        } else {
          P.q = P.r;
          m.set("r", P.r);
          r = besov_norm_localmeans(f, kernel, P, o);
        }
      }
      m.set("value", r.value);
      if (cfg.format == OutputFormat::Csv) {
        ResultTable t;
        t.columns = {"scale", "term"};
        for (std::size_t i = 0; i < r.per_scale_terms.size(); ++i) t.add({static_cast<double>(i), r.per_scale_terms[i]});
        write_result(cfg, t, m, std::cout);
        return kExitOk;
      }
      auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v)) return v;
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
      };
      nlohmann::ordered_json rec;
      rec["value"] = num(r.value);
      rec["per_scale_terms"] = nlohmann::ordered_json::array();
      for (double v : r.per_scale_terms) rec["per_scale_terms"].push_back(num(v));
      rec["base_term"] = num(r.base_term);
      rec["tail"] = num(r.tail);
      if (cfg.output_path.empty()) {
        std::cout << rec.dump(2) << '\n';
      } else {
        std::ofstream out(cfg.output_path);
        if (!out) throw Error("cannot open " + cfg.output_path + " for writing");
        out << rec.dump(2) << '\n';
        std::ofstream mf(cfg.output_path + ".manifest.json");
        write_manifest(mf, m);
      }
      return kExitOk;
    };
  });

  // blowup
  auto* bl = app.add_subcommand("blowup", "growth of ||E_N f|| for the x_1 eta witness");
  ExperimentArgs bl_a;
  bl_a.p = "0.9";
  bl_a.s = "1.05";
  bl_a.q = "1";
  bl_a.N_min = 2;
  bool bl_control = false;
  add_experiment_options(bl, bl_a);
  bl->add_flag("--control", bl_control, "admissible (p, s): expect slope 0");
  bl->callback([&] {
    action = [&] {
      const ExperimentConfig cfg = experiment_config(g, bl_a);
      const BlowupResult r = run_blowup(cfg, bl_control ? BlowupMode::Control : BlowupMode::Witness);
      write_result(cfg, r.table, r.manifest, std::cout);
      print_fit("log2 norm vs N", r.fit);
      const double tol = bl_control ? checks::kBlowupControlTol
                                    : (cfg.d == 1 ? checks::kBlowupSlopeTol1D : checks::kBlowupSlopeTol2D);
      return report_check(g, std::fabs(r.fit.slope - r.expected_slope) <= tol,
                          "slope " + std::to_string(r.fit.slope) + " vs " + std::to_string(r.expected_slope) +
                              " +- " + std::to_string(tol));
    };
  });

  // uniformity
  auto* un = app.add_subcommand("uniformity", "sup over a bump corpus of ||E_N f||/||f|| and ||T_N f||/||f||");
  ExperimentArgs un_a;
  un_a.J = 12;
  un_a.corpus = 48;
  CorpusSpec un_c;
  un_c.u_max = 9.0;
  add_experiment_options(un, un_a);
  un->add_option("--umin", un_c.u_min, "coarsest corpus scale")->capture_default_str();
  un->add_option("--umax", un_c.u_max, "finest corpus scale")->capture_default_str();
  un->add_option("--bumps", un_c.bumps, "bumps per element")->capture_default_str();
  un->callback([&] {
    action = [&] {
      const ExperimentConfig cfg = experiment_config(g, un_a);
      const UniformityResult r = run_uniformity(cfg, un_c);
      write_result(cfg, r.table, r.manifest, std::cout);
      print_fit("E_N", r.fit_expectation);
      print_fit("T_N signs", r.fit_sign);
      print_fit("T_N 0/1", r.fit_binary);
      const double tol = checks::kUniformSlopeTol;
      const bool ok = std::fabs(r.fit_expectation.slope) <= tol && std::fabs(r.fit_sign.slope) <= tol &&
                      std::fabs(r.fit_binary.slope) <= tol;
      return report_check(g, ok, "|slopes| <= " + std::to_string(tol));
    };
  });

  // convergence
  auto* cv = app.add_subcommand("convergence", "||P_n f - f|| along level-completing prefixes");
  ExperimentArgs cv_a;
  cv_a.J = 7;
  cv_a.N_max = 4;
  cv_a.corpus = 4;
  add_experiment_options(cv, cv_a);
  cv->callback([&] {
    action = [&] {
      const ExperimentConfig cfg = experiment_config(g, cv_a);
      const ConvergenceResult r = run_convergence(cfg);
      write_result(cfg, r.table, r.manifest, std::cout);
      std::cerr << "final error " << r.final_error << ", non-monotone elements " << r.non_monotone << "\n";
      return report_check(g, r.final_error <= checks::kReconstructionTol, "final prefix reproduces f");
    };
  });

  // lkenlj
  auto* lk = app.add_subcommand("lkenlj", "measured ||L_k E_N L_j|| against the B(j,k,N) envelope");
  ExperimentArgs lk_a;
  lk_a.J = 11;
  lk_a.p = "1.5";
  int lk_triples = 48;
  add_experiment_options(lk, lk_a);
  lk->add_option("--triples", lk_triples)->capture_default_str();
  lk->callback([&] {
    action = [&] {
      ExperimentConfig cfg = experiment_config(g, lk_a);
      cfg.N_max = std::min(cfg.N_max, cfg.J - 3);
      const EnvelopeResult r = run_lken_lj(cfg, lk_triples);
      write_result(cfg, r.table, r.manifest, std::cout);
      std::cerr << "max log2 gap " << r.max_gap << ", support leak " << r.support_leak << "\n";
      print_fit("gap vs j", r.fit_j);
      print_fit("gap vs k", r.fit_k);
      print_fit("gap vs N", r.fit_N);
      const double tol = checks::kEnvelopeSlopeTol;
      const bool ok = r.max_gap <= checks::kEnvelopeGapG && std::fabs(r.fit_j.slope) <= tol &&
                      std::fabs(r.fit_k.slope) <= tol && std::fabs(r.fit_N.slope) <= tol &&
                      r.support_leak <= checks::kSupportTol;
      return report_check(g, ok, "gap <= G and flat in j, k, N");
    };
  });

  // region
  auto* rg = app.add_subcommand("region", "basis-property verdicts over (1/p, s) in [0,2] x [-1,1]");
  std::size_t rg_d = 1;
  std::string rg_q = "2";
  int rg_grid = 64;
  rg->add_option("--d", rg_d)->capture_default_str();
  rg->add_option("--q", rg_q)->capture_default_str();
  rg->add_option("--grid", rg_grid, "points per axis (cell centers)")->capture_default_str();
  rg->callback([&] {
    action = [&] {
      if (rg_grid < 1) throw DomainError("region: --grid must be positive");
      ExperimentConfig cfg = base_config(g);
      const Rational iq = parse_reciprocal(rg_q);
      ResultTable t;
      t.columns = {"inv_p",          "s",           "besov_schauder", "f_schauder",
                   "f_unconditional", "dense_failure", "not_basis_case", "boundary"};
      for (int i = 0; i < rg_grid; ++i) {
        const Rational ip = Rational(2 * i + 1, rg_grid);
        for (int j = 0; j < rg_grid; ++j) {
          const Rational s = Rational(2 * j + 1, rg_grid) - 1;
          const RegionVerdict v = classify_region(ip, iq, s, rg_d);
          t.add({to_double(ip), to_double(s), double(v.besov_schauder), double(v.f_schauder),
                 double(v.f_unconditional), double(v.dense_failure), double(static_cast<int>(v.not_basis_case)),
                 double(v.boundary)});
        }
      }
      Manifest m;
      m.experiment = "region";
      m.set("d", static_cast<double>(rg_d));
      m.set("q", rg_q);
      m.set("grid", rg_grid);
      m.set("not_basis_case_codes", "0 none, 1 P4i, 2 P4ii, 3 P4iii");
      write_result(cfg, t, m, std::cout);
      return kExitOk;
    };
  });

  // bounds
  auto* bd = app.add_subcommand("bounds", "summability functional S(N), truncated and closed form");
  std::size_t bd_d = 1;
  std::string bd_p = "2", bd_s = "0.25", bd_r = "1";
  int bd_Nmax = 25, bd_Nfit = 5;
  bd->add_option("--d", bd_d)->capture_default_str();
  bd->add_option("--p", bd_p)->capture_default_str();
  bd->add_option("--s", bd_s)->capture_default_str();
  bd->add_option("--r", bd_r)->capture_default_str();
  bd->add_option("--Nmax", bd_Nmax)->capture_default_str();
  bd->add_option("--Nfit", bd_Nfit, "first N used for max/min and the slope fit")->capture_default_str();
  bd->callback([&] {
    action = [&] {
      ExperimentConfig cfg = base_config(g);
      const SummabilityParams sp{parse_exponent(bd_r), parse_exponent(bd_p), to_double(parse_rational(bd_s))};
      ResultTable t;
      t.columns = {"N", "truncation", "S_truncated", "S_closed_form", "S_untruncated"};
      std::vector<double> xs, ys;
      double hi = 0.0, lo = kInf, rel = 0.0;
      for (int N = 0; N <= bd_Nmax; ++N) {
        const int T = 2 * N + 20;
        const double v = summability(N, sp, bd_d, T, T);
        const double c = summability_closed_form(N, sp, bd_d, T, T).value;
        const double u = summability_closed_form(N, sp, bd_d).value;
        t.add({double(N), double(T), v, c, u});
        rel = std::max(rel, std::fabs(c - v) / v);
        if (N >= bd_Nfit) {
          hi = std::max(hi, v);
          lo = std::min(lo, v);
          xs.push_back(N);
          ys.push_back(std::log2(v));
        }
      }
      const SummabilityClosedForm inf = summability_closed_form(bd_Nmax, sp, bd_d);
      Manifest m;
      m.experiment = "bounds";
      m.set("d", static_cast<double>(bd_d));
      m.set("p", sp.p);
      m.set("s", sp.s);
      m.set("r", sp.r);
      m.set("truncation", "J_max = K_max = 2N + 20");
      m.set("divergent", inf.divergent.empty() ? "none" : inf.divergent);
      write_result(cfg, t, m, std::cout);
      std::cerr << "max/min over N >= " << bd_Nfit << ": " << hi / lo << ", closed form rel. diff " << rel << "\n";
      bool ok = rel <= checks::kClosedFormRelTol;
      if (inf.divergent.empty()) {
        ok = ok && hi / lo <= checks::kSummabilityMaxOverMin;
      } else if (xs.size() >= 4) {
        const SlopeFit f = fit_slope(xs, ys);
        print_fit("log2 S vs N", f);
        if (sp.s > 1.0 / sp.p && !std::isinf(sp.r)) {
          ok = ok && std::fabs(f.slope - sp.r * (sp.s - 1.0 / sp.p)) <= checks::kSummabilitySlopeTol;
        }
      }
      return report_check(g, ok, "summability");
    };
  });

  // kernel
  auto* ke = app.add_subcommand("kernel", "build and certify a local-means kernel");
  std::size_t ke_d = 1;
  int ke_M = 6, ke_level = 8;
  ke->add_option("--d", ke_d)->capture_default_str();
  ke->add_option("--M", ke_M, "vanishing moments")->capture_default_str();
  ke->add_option("--level", ke_level, "sample level for CSV output")->capture_default_str();
  ke->callback([&] {
    action = [&] {
      const MomentKernel k = build_kernel(ke_d, ke_M);
      std::ofstream file;
      if (!g.out.empty()) {
        file.open(g.out);
        if (!file) throw StructuralError("cannot write " + g.out);
      }
      std::ostream& os = g.out.empty() ? std::cout : file;
      if (g.format == "json") {
        write_kernel_json(os, k);
      } else {
        write_kernel_csv(os, k, ke_level);
      }
      const double worst = *std::max_element(k.moment_residuals().begin(), k.moment_residuals().end());
      return report_check(g, worst <= checks::kMomentResidualTol && k.annulus_floor() > 0.0,
                          "moment residuals and annulus floor");
    };
  });

  try {
    const std::vector<std::string> forward = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    // CLI11 consumes the vector overload from the back.
    std::vector<std::string> args(forward.rbegin(), forward.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
