#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "haar/error.hpp"
#include "haar/local_means.hpp"
#include "json.hpp"

namespace haar {

namespace {

using cplx = std::complex<double>;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Legendre P_0..P_{m-1} at u in [-1, 1].
void legendre(double u, int m, double* out) {
  if (m <= 0) return;
  out[0] = 1.0;
  if (m > 1) out[1] = u;
  for (int l = 2; l < m; ++l) out[l] = ((2 * l - 1) * u * out[l - 1] - (l - 1) * out[l - 2]) / l;
}

// Smallest change (in l2) to g that zeroes its first `order` discrete moments.
// Returns the largest entry of the applied change.
double correct_moments(std::vector<double>& g, std::ptrdiff_t half, int order) {
  const auto T = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd V(order, T);
  std::vector<double> row(static_cast<std::size_t>(order));
  for (Eigen::Index t = 0; t < T; ++t) {
    const double u = static_cast<double>(t - (half - 1)) / static_cast<double>(half);
    legendre(u, order, row.data());
    for (int m = 0; m < order; ++m) V(m, t) = row[static_cast<std::size_t>(m)];
  }
  const Eigen::MatrixXd gram = V * V.transpose();
  const auto ldlt = gram.ldlt();
  Eigen::Map<Eigen::VectorXd> gv(g.data(), T);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(T);
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd y = ldlt.solve(-(V * gv));
    const Eigen::VectorXd c = V.transpose() * y;
    gv += c;
    total += c;
  }
  return total.cwiseAbs().maxCoeff();
}

// sum_t w_t e^{-2 pi i xi t / n}, t = -half+1 .. half-1.
cplx dtft(const std::vector<double>& w, std::ptrdiff_t half, double n, double xi) {
  const double step = -2.0 * std::numbers::pi * xi / n;
  const double t0 = -static_cast<double>(half - 1);
  const cplx rot(std::cos(step), std::sin(step));
  cplx z(std::cos(step * t0), std::sin(step * t0));
  cplx acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * z;
    z *= rot;
  }
  return acc;
}

// Frequencies sampled on the shell lo <= |xi| <= hi.
std::vector<std::vector<double>> shell_samples(std::size_t d, double lo, double hi) {
  std::vector<std::vector<double>> pts;
  if (d == 1) {
    const int n = 512;
    for (int i = 0; i <= n; ++i) pts.push_back({lo + (hi - lo) * i / n});
    return pts;
  }
  std::vector<std::vector<double>> dirs;
  if (d == 2) {
    const int na = 128;
    for (int a = 0; a < na; ++a) {
      const double th = 2.0 * std::numbers::pi * a / na;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> e(d, 0.0);
      e[i] = 1.0;
      dirs.push_back(e);
    }
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 512; ++k) {
      std::vector<double> v(d);
      double nrm = 0.0;
      for (auto& x : v) {
        x = gauss(rng);
        nrm += x * x;
      }
      nrm = std::sqrt(nrm);
      for (auto& x : v) x /= nrm;
      dirs.push_back(std::move(v));
    }
  }
  const int nr = d == 2 ? 48 : 24;
  for (int r = 0; r <= nr; ++r) {
    const double rad = lo + (hi - lo) * r / nr;
    for (const auto& u : dirs) {
      std::vector<double> p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = rad * u[i];
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

std::string format_point(const std::vector<double>& xi) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < xi.size(); ++i) os << (i ? ", " : "") << xi[i];
  os << ')';
  return os.str();
}

struct FactorTaps {
  std::vector<double> smooth;
  std::vector<double> oscillating;
  double correction = 0.0;
};

}  // namespace

double BumpProfile::operator()(double u) const {
  const double v = u / radius;
  if (std::fabs(v) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

double MomentKernel::smooth_factor(double u) const { return profile_(u) / smooth_mass_; }

double MomentKernel::oscillating_factor(double u) const {
  double acc = 0.0;
  for (int i = 0; i <= order_; ++i) {
    const double sign = ((order_ - i) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom(order_, i) * smooth_factor(u + (i - 0.5 * order_) * delta_);
  }
  return acc;
}

namespace {

// Factors at n = 2^{J-k} cells per unit of the rescaled variable.
FactorTaps factor_taps(const MomentKernel& kern, std::ptrdiff_t half, bool with_oscillating) {
  const double n = 2.0 * static_cast<double>(half);
  const auto T = static_cast<std::size_t>(2 * half - 1);
  FactorTaps out;
  out.smooth.resize(T);
  double mass = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double u = static_cast<double>(static_cast<std::ptrdiff_t>(i) - (half - 1)) / n;
    out.smooth[i] = kern.smooth_factor(u);
    mass += out.smooth[i];
  }
  for (auto& v : out.smooth) v /= mass;
  if (!with_oscillating) return out;
  out.oscillating.resize(T);
  double peak = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double u = static_cast<double>(static_cast<std::ptrdiff_t>(i) - (half - 1)) / n;
    out.oscillating[i] = kern.oscillating_factor(u) / n;
    peak = std::max(peak, std::fabs(out.oscillating[i]));
  }
  const double change = correct_moments(out.oscillating, half, kern.difference_order());
  out.correction = peak > 0.0 ? change / peak : 0.0;
  return out;
}

}  // namespace

KernelTaps MomentKernel::taps(int k, int J) const {
  if (k < 0) throw DomainError("kernel level must be non-negative");
  if (J - k < 4) {
    throw ResolutionError("L_" + std::to_string(k) + " needs at least 8 cells per half-support (J >= k + 4), got J = " +
                          std::to_string(J));
  }
  const std::ptrdiff_t half = std::ptrdiff_t{1} << (J - k - 1);
  if (2 * half - 1 <= order_) throw ResolutionError("too few kernel taps for the requested moments");
  FactorTaps f = factor_taps(*this, half, k > 0);
  KernelTaps t;
  t.level = k;
  t.resolution = J;
  t.half = half;
  t.smooth = std::move(f.smooth);
  t.oscillating = std::move(f.oscillating);
  return t;
}

namespace {

GridFunction sample_kernel(const MomentKernel& kern, int level, bool oscillating) {
  const std::size_t d = kern.dim();
  const Box box(1, std::vector<std::int64_t>(d, -1), std::vector<std::int64_t>(d, 1));
  return make_grid(d, level, box, [&](std::span<const double> x) {
    if (!oscillating) {
      double v = 1.0;
      for (double xi : x) v *= kern.smooth_factor(xi);
      return v;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double v = kern.oscillating_factor(x[i]);
      for (std::size_t l = 0; l < d; ++l) {
        if (l != i) v *= kern.smooth_factor(x[l]);
      }
      acc += v;
    }
    return acc;
  });
}

}  // namespace

GridFunction MomentKernel::beta0_samples(int level) const { return sample_kernel(*this, level, false); }
GridFunction MomentKernel::beta_samples(int level) const { return sample_kernel(*this, level, true); }

MomentKernel build_kernel(std::size_t d, int M, BumpProfile profile, int working_level) {
  if (d == 0) throw DomainError("build_kernel: dimension must be positive");
  if (M < 1) throw DomainError("build_kernel: M must be at least 1");
  if (!(profile.radius > 0.0 && profile.radius < 0.5)) throw DomainError("build_kernel: bump radius must lie in (0, 1/2)");
  if (working_level < 6 || working_level > 16) throw DomainError("build_kernel: working level must lie in [6, 16]");

  MomentKernel k;
  k.d_ = d;
  k.M_ = M;
  // An odd-order difference has an odd symbol, and the sum over axes can cancel
  // on the diagonals in d >= 2; one more difference keeps every term the same sign.
  k.order_ = (d >= 2 && M % 2 == 1) ? M + 1 : M;
  k.profile_ = profile;
  k.delta_ = (1.0 - 2.0 * profile.radius) / k.order_;
  k.working_level_ = working_level;
  {
    // Midpoint rule; the integrand is smooth and compactly supported.
    const int n = 1 << 16;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += profile(-profile.radius + (i + 0.5) * 2.0 * profile.radius / n);
    k.smooth_mass_ = acc * 2.0 * profile.radius / n;
  }

  const std::ptrdiff_t half = std::ptrdiff_t{1} << (working_level - 1);
  const double n = 2.0 * static_cast<double>(half);
  const FactorTaps f = factor_taps(k, half, true);
  k.max_correction_ = f.correction;

  // Multi-index moments of beta from the 1D factor moments.
  std::vector<double> mg(static_cast<std::size_t>(M)), ms(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    double ag = 0.0, as = 0.0;
    for (std::size_t i = 0; i < f.smooth.size(); ++i) {
      const double x = static_cast<double>(static_cast<std::ptrdiff_t>(i) - (half - 1)) / n;
      const double xm = std::pow(x, m);
      ag += f.oscillating[i] * xm;
      as += f.smooth[i] * xm;
    }
    mg[static_cast<std::size_t>(m)] = ag;
    ms[static_cast<std::size_t>(m)] = as;
  }
  k.residuals_.assign(static_cast<std::size_t>(M), 0.0);
  std::vector<int> idx(d, 0);
  while (true) {
    int total = 0;
    for (int v : idx) total += v;
    if (total < M) {
      double moment = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        double term = mg[static_cast<std::size_t>(idx[i])];
        for (std::size_t l = 0; l < d; ++l) {
          if (l != i) term *= ms[static_cast<std::size_t>(idx[l])];
        }
        moment += term;
      }
      auto& slot = k.residuals_[static_cast<std::size_t>(total)];
      slot = std::max(slot, std::fabs(moment));
    }
    std::size_t a = 0;
    while (a < d && ++idx[a] >= M) idx[a++] = 0;
    if (a == d) break;
  }
  const double worst = *std::max_element(k.residuals_.begin(), k.residuals_.end());
  if (!(worst <= 1e-8)) {
    throw ConstructionError("build_kernel: moment residual " + std::to_string(worst) + " exceeds 1e-8");
  }

  // Transforms of the factors; |xi| <= 1 only needs modest sampling.
  auto beta_hat = [&](const std::vector<double>& xi) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      cplx term = dtft(f.oscillating, half, n, xi[i]);
      for (std::size_t l = 0; l < d; ++l) {
        if (l != i) term *= dtft(f.smooth, half, n, xi[l]);
      }
      acc += term;
    }
    return std::abs(acc);
  };
  auto beta0_hat = [&](const std::vector<double>& xi) {
    cplx acc = 1.0;
    for (std::size_t i = 0; i < d; ++i) acc *= dtft(f.smooth, half, n, xi[i]);
    return std::abs(acc);
  };

  double floor = kInf;
  std::vector<double> at;
  for (const auto& xi : shell_samples(d, 0.125, 1.0)) {
    const double v = beta_hat(xi);
    if (v < floor) {
      floor = v;
      at = xi;
    }
  }
  if (!(floor > 0.0)) {
    throw ConstructionError("build_kernel: beta^ vanishes on the annulus near xi = " + format_point(at));
  }
  k.annulus_floor_ = floor;

  double floor0 = kInf;
  for (const auto& xi : shell_samples(d, 0.0, 1.0)) {
    const double v = beta0_hat(xi);
    if (v < floor0) {
      floor0 = v;
      at = xi;
    }
  }
  if (!(floor0 > 0.0)) {
    throw ConstructionError("build_kernel: beta0^ vanishes near xi = " + format_point(at));
  }
  k.beta0_floor_ = floor0;
  return k;
}

void write_kernel_csv(std::ostream& os, const MomentKernel& kernel, int level) {
  const std::size_t d = kernel.dim();
  const std::ptrdiff_t half = std::ptrdiff_t{1} << (level - 1);
  const FactorTaps f = factor_taps(kernel, half, true);
  for (std::size_t i = 1; i <= d; ++i) os << "t_" << i << ',';
  os << "beta0,beta\n";
  const auto T = static_cast<std::ptrdiff_t>(f.smooth.size());
  std::vector<std::ptrdiff_t> idx(d, 0);
  while (true) {
    double b0 = 1.0, b = 0.0;
    for (std::size_t i = 0; i < d; ++i) b0 *= f.smooth[static_cast<std::size_t>(idx[i])];
    for (std::size_t i = 0; i < d; ++i) {
      double term = f.oscillating[static_cast<std::size_t>(idx[i])];
      for (std::size_t l = 0; l < d; ++l) {
        if (l != i) term *= f.smooth[static_cast<std::size_t>(idx[l])];
      }
      b += term;
    }
    for (std::size_t i = 0; i < d; ++i) os << idx[i] - (half - 1) << ',';
    os << b0 << ',' << b << '\n';
    std::size_t a = d;
    while (a > 0) {
      --a;
      if (++idx[a] < T) break;
      idx[a] = 0;
      if (a == 0) return;
    }
  }
}

void write_kernel_json(std::ostream& os, const MomentKernel& kernel) {
  nlohmann::json j;
  j["d"] = kernel.dim();
  j["M"] = kernel.moments();
  j["difference_order"] = kernel.difference_order();
  j["bump_radius"] = kernel.profile().radius;
  j["working_level"] = kernel.working_level();
  j["moment_residuals"] = kernel.moment_residuals();
  j["annulus_floor"] = kernel.annulus_floor();
  j["beta0_floor"] = kernel.beta0_floor();
  j["max_correction"] = kernel.max_correction();
  os << j.dump(2) << '\n';
}

}  // namespace haar
