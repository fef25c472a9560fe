#pragma once

// Experiment drivers: blow-up of E_N on a fixed witness, uniform bounds over a
// random corpus, convergence of Haar partial sums, and the L_k E_N L_j
// envelope. Each returns a numeric table, its fits and a manifest.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "haar/dyadic.hpp"
#include "haar/haar_system.hpp"
#include "haar/local_means.hpp"

namespace haar {

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::size_t d = 1;
  int J = 10;
  /// Experiment default when unset.
  std::optional<Box> box;
  NormParams params;
  int N_min = 0;
  int N_max = 7;
  std::uint64_t seed = 1;
  int corpus_size = 8;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  /// Kernel moments; 0 picks default_moments(d, params).
  int moments = 0;

  /// N_min <= N_max <= J - 3, corpus_size >= 1, d >= 1.
  void validate() const;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Least squares y = slope x + intercept; needs at least 4 finite points.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::vector<double> column(const std::string& name) const;
};

/// Ordered key/value record of what produced a result.
struct Manifest {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
};

Manifest config_manifest(const std::string& experiment, const ExperimentConfig& cfg);
/// Adds kernel_M, the difference order, the largest moment residual and the floors.
void describe_kernel(Manifest& manifest, const MomentKernel& kernel);

void write_csv(std::ostream& os, const ResultTable& table);
/// Array of records, one object per row.
void write_json(std::ostream& os, const ResultTable& table);
void write_manifest(std::ostream& os, const Manifest& manifest);
/// Writes the table to cfg.output_path (or `os` when it is empty) and the
/// manifest next to it as <output_path>.manifest.json.
void write_result(const ExperimentConfig& cfg, const ResultTable& table, const Manifest& manifest,
                  std::ostream& os);

/// Seeded sums of `bumps` smooth compactly supported bumps inside [0,1]^d.
/// Element c works at one scale u_c, stratified over [u_min, u_max] across
/// the corpus: its bumps have widths 2^-u with u within 1/2 of u_c, random
/// signs, and centers in a window of side `window` 2^-u_c placed at random in
/// [0,1]^d, so bump clusters look alike at every scale. Amplitudes are
/// scaled by w^{s - d/p} so every scale carries comparable smoothness norm.
struct CorpusSpec {
  int bumps = 5;
  double u_min = 1.0;
  double u_max = 5.0;
  double window = 4.0;
  double s = 0.0;
  double p = 2.0;
};

std::vector<GridFunction> bump_corpus(std::size_t d, int J, const Box& box, int count, std::uint64_t seed,
                                      const CorpusSpec& spec);

// ---------------------------------------------------------------------------

enum class BlowupMode {
  Witness,  ///< non-density region; expected slope s - 1
  Control,  ///< uniform-boundedness region; expected slope 0
};

/// x_1 eta(x) with eta = 1 on [-2,2]^d, eta = 0 off (-2.5,2.5)^d, sampled on
/// [-3,3)^d at level J.
GridFunction blowup_witness(std::size_t d, int J);

struct BlowupResult {
  ResultTable table;  // N, norm, log2_norm, base_term, tail
  SlopeFit fit;
  double expected_slope = 0.0;
  Manifest manifest;
};

BlowupResult run_blowup(const ExperimentConfig& cfg, BlowupMode mode = BlowupMode::Witness);

struct UniformityResult {
  ResultTable table;  // N, ratio_E, ratio_T_sign, ratio_T_binary
  SlopeFit fit_expectation;
  SlopeFit fit_sign;
  SlopeFit fit_binary;
  Manifest manifest;
};

/// d = 1 unless cfg.d says otherwise; box defaults to [-1,2)^d.
UniformityResult run_uniformity(const ExperimentConfig& cfg, const CorpusSpec& corpus = {});

struct ConvergenceResult {
  ResultTable table;  // element, n, level, error
  /// Largest error at the final prefix over the corpus.
  double final_error = 0.0;
  /// Corpus elements whose errors increase somewhere along the ladder.
  int non_monotone = 0;
  Manifest manifest;
};

/// Errors ||P_n f - f|| in the discrete F^s_{p,q} norm along `enumeration`
/// (entry ends plus the final prefix). Box defaults to [0,1)^d; when
/// `enumeration` is empty the admissible one through level J - 1 is used.
ConvergenceResult run_convergence(const ExperimentConfig& cfg, const Enumeration& enumeration = {});

struct EnvelopeResult {
  ResultTable table;  // j, k, N, case, measured, bound, envelope, log2_gap
  double max_gap = -kInf;
  SlopeFit fit_j, fit_k, fit_N;
  /// Largest |L_k E_N g| off U_{N,k} relative to ||g||_inf, over k > N.
  double support_leak = 0.0;
  Manifest manifest;
};

/// Sampled (j, k, N) triples covering all four cases, `triples` of them.
EnvelopeResult run_lken_lj(const ExperimentConfig& cfg, int triples = 48);

}  // namespace haar
