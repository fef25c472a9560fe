#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "fftw_util.hpp"
#include "haar/error.hpp"
#include "haar/local_means.hpp"

namespace haar {

namespace {

using cplx = std::complex<double>;

using detail::fftw_buffer;
using detail::Plan;

// Signed frequency index of DFT bin c on an axis of n samples.
double signed_bin(std::size_t c, std::size_t n) {
  return c <= n / 2 ? static_cast<double>(c) : static_cast<double>(c) - static_cast<double>(n);
}

// Applies a Fourier multiplier m(freq_index, xi) to real grid data on the
// periodized box. `freq` receives the signed bin indices, `xi` the frequencies
// in cycles per unit length.
using Multiplier = std::function<cplx(std::span<const std::int64_t> bins, std::span<const double> xi)>;

GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m) {
  const std::size_t d = f.dim();
  std::vector<int> dims(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    dims[i] = static_cast<int>(f.shape()[i]);
    total *= static_cast<std::size_t>(dims[i]);
  }
  const std::size_t last = static_cast<std::size_t>(dims[d - 1]) / 2 + 1;
  const std::size_t spec_size = total / static_cast<std::size_t>(dims[d - 1]) * last;

  auto real = fftw_buffer<double>(total);
  auto spec = fftw_buffer<fftw_complex>(spec_size);
  Plan fwd(fftw_plan_dft_r2c(static_cast<int>(d), dims.data(), real.get(), spec.get(), FFTW_ESTIMATE));
  Plan inv(fftw_plan_dft_c2r(static_cast<int>(d), dims.data(), spec.get(), real.get(), FFTW_ESTIMATE));
  if (!fwd.p || !inv.p) throw Error("FFTW plan creation failed");

  std::copy(f.values().begin(), f.values().end(), real.get());
  fftw_execute(fwd.p);

  std::vector<double> period(d);
  for (std::size_t i = 0; i < d; ++i) period[i] = f.box().side(i);
  std::vector<std::int64_t> bins(d);
  std::vector<double> xi(d);
  std::vector<std::size_t> idx(d, 0);
  const double norm = 1.0 / static_cast<double>(total);
  for (std::size_t flat = 0; flat < spec_size; ++flat) {
    for (std::size_t i = 0; i < d; ++i) {
      const double b = i + 1 == d ? static_cast<double>(idx[i]) : signed_bin(idx[i], static_cast<std::size_t>(dims[i]));
      bins[i] = static_cast<std::int64_t>(b);
      xi[i] = b / period[i];
    }
    const cplx w = m(bins, xi) * norm;
    const cplx v(spec[flat][0], spec[flat][1]);
    const cplx r = v * w;
    spec[flat][0] = r.real();
    spec[flat][1] = r.imag();
    for (std::size_t i = d; i-- > 0;) {
      const std::size_t extent = i + 1 == d ? last : static_cast<std::size_t>(dims[i]);
      if (++idx[i] < extent) break;
      idx[i] = 0;
    }
  }
  fftw_execute(inv.p);
  GridFunction out = GridFunction::zeros(f.box(), f.level());
  std::copy(real.get(), real.get() + total, out.values().begin());
  return out;
}

double radius(std::span<const double> xi) {
  double r = 0.0;
  for (double x : xi) r += x * x;
  return std::sqrt(r);
}

// Exact symbol of a periodic tap convolution on n samples:
// S(c) = sum_t w_t e^{-2 pi i c t / n}.
std::vector<cplx> tap_symbol(const std::vector<double>& taps, std::ptrdiff_t half, std::size_t n) {
  auto in = fftw_buffer<fftw_complex>(n);
  auto out = fftw_buffer<fftw_complex>(n);
  for (std::size_t i = 0; i < n; ++i) in[i][0] = in[i][1] = 0.0;
  const auto N = static_cast<std::ptrdiff_t>(n);
  for (std::size_t i = 0; i < taps.size(); ++i) {
    std::ptrdiff_t t = (static_cast<std::ptrdiff_t>(i) - (half - 1)) % N;
    if (t < 0) t += N;
    in[static_cast<std::size_t>(t)][0] += taps[i];
  }
  Plan p(fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  fftw_execute(p.p);
  std::vector<cplx> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = cplx(out[i][0], out[i][1]);
  return s;
}

}  // namespace

double SpectralCutoff::operator()(double r) const {
  if (r <= plateau) return 1.0;
  if (r >= support) return 0.0;
  const double t = (r - plateau) / (support - plateau);
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = psi(1.0 - t);
  return a / (a + psi(t));
}

GridFunction spectral_projection(const GridFunction& f, int N, const SpectralCutoff& cutoff) {
  if (N < 0) throw DomainError("spectral_projection: N must be non-negative");
  if (N > f.level() - 2) {
    throw ResolutionError("spectral_projection: N = " + std::to_string(N) + " needs J >= N + 2");
  }
  const double scale = std::ldexp(1.0, -N);
  return apply_multiplier(f, [&](std::span<const std::int64_t>, std::span<const double> xi) {
    return cplx(cutoff(scale * radius(xi)), 0.0);
  });
}

GridFunction lambda_band(const GridFunction& f, const MomentKernel& kernel, int j, const SpectralCutoff& cutoff) {
  if (f.dim() != kernel.dim()) throw StructuralError("lambda_band: kernel and grid dimensions differ");
  if (j < 0) throw DomainError("lambda_band: j must be non-negative");
  if (j > f.level() - 2) throw ResolutionError("lambda_band: j = " + std::to_string(j) + " needs J >= j + 2");
  const KernelTaps taps = kernel.taps(j, f.level());
  const std::size_t d = f.dim();
  std::vector<std::vector<cplx>> smooth(d), osc(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto n = static_cast<std::size_t>(f.shape()[i]);
    smooth[i] = tap_symbol(taps.smooth, taps.half, n);
    if (j > 0) osc[i] = tap_symbol(taps.oscillating, taps.half, n);
  }
  const double guard = 0.5 * (j == 0 ? kernel.beta0_floor() : kernel.annulus_floor());
  const double s0 = std::ldexp(1.0, -j);
  const double s1 = std::ldexp(1.0, -j + 1);
  auto bin_index = [&](std::int64_t b, std::size_t axis) {
    const auto n = f.shape()[axis];
    return static_cast<std::size_t>(b < 0 ? b + n : b);
  };
  return apply_multiplier(f, [&](std::span<const std::int64_t> bins, std::span<const double> xi) {
    const double r = radius(xi);
    const double num = j == 0 ? cutoff(r) : cutoff(s0 * r) - cutoff(s1 * r);
    if (num == 0.0) return cplx(0.0, 0.0);
    cplx sym;
    if (j == 0) {
      sym = 1.0;
      for (std::size_t i = 0; i < d; ++i) sym *= smooth[i][bin_index(bins[i], i)];
    } else {
      sym = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        cplx term = osc[i][bin_index(bins[i], i)];
        for (std::size_t l = 0; l < d; ++l) {
          if (l != i) term *= smooth[l][bin_index(bins[l], l)];
        }
        sym += term;
      }
    }
    if (std::abs(sym) < guard) {
      throw ConstructionError("lambda_band: |symbol| = " + std::to_string(std::abs(sym)) +
                              " below half the kernel floor at |xi| = " + std::to_string(r));
    }
    return num / sym;
  });
}

}  // namespace haar
