#include <algorithm>
#include <complex>

#include "fftw_util.hpp"
#include "grid_ops.hpp"
#include "haar/error.hpp"

namespace haar::detail {

namespace {

// Smallest 2^a 3^b >= n.
std::size_t fft_size(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p3 = 3; p3 < best; p3 *= 3) {
    std::size_t m = p3;
    while (m < n) m *= 2;
    best = std::min(best, m);
  }
  return best;
}

}  // namespace

void convolve_axis_fft(const double* in, double* out, const AxisView& v, const std::vector<double>& taps,
                       std::ptrdiff_t center, Extension ext) {
  const auto n = static_cast<std::ptrdiff_t>(v.n);
  std::ptrdiff_t lo = 0, hi = 0;  // range of shifts t - center
  if (!taps.empty()) {
    lo = -center;
    hi = static_cast<std::ptrdiff_t>(taps.size()) - 1 - center;
  }
  const bool periodic = ext == Extension::Periodic;
  // Periodic lines are circular of length n; otherwise pad so no output
  // sample wraps onto data.
  const auto L = periodic ? v.n : fft_size(v.n + static_cast<std::size_t>(std::max({hi, -lo, std::ptrdiff_t{0}})));
  const auto Ls = static_cast<std::ptrdiff_t>(L);
  const std::size_t spec = L / 2 + 1;
  const std::size_t lines = v.inner;

  auto kern = fftw_buffer<double>(L);
  auto kspec = fftw_buffer<fftw_complex>(spec);
  std::fill(kern.get(), kern.get() + L, 0.0);
  for (std::size_t t = 0; t < taps.size(); ++t) {
    std::ptrdiff_t o = (static_cast<std::ptrdiff_t>(t) - center) % Ls;
    if (o < 0) o += Ls;
    kern[static_cast<std::size_t>(o)] += taps[t];
  }
  {
    Plan kp(fftw_plan_dft_r2c_1d(static_cast<int>(L), kern.get(), kspec.get(), FFTW_ESTIMATE));
    if (!kp.p) throw Error("FFTW plan creation failed");
    fftw_execute(kp.p);
  }

  auto buf = fftw_buffer<double>(L * lines);
  auto bspec = fftw_buffer<fftw_complex>(spec * lines);
  const int len = static_cast<int>(L);
  Plan fwd(fftw_plan_many_dft_r2c(1, &len, static_cast<int>(lines), buf.get(), nullptr, 1, len, bspec.get(),
                                  nullptr, 1, static_cast<int>(spec), FFTW_ESTIMATE));
  Plan inv(fftw_plan_many_dft_c2r(1, &len, static_cast<int>(lines), bspec.get(), nullptr, 1,
                                  static_cast<int>(spec), buf.get(), nullptr, 1, len, FFTW_ESTIMATE));
  if (!fwd.p || !inv.p) throw Error("FFTW plan creation failed");

  const double norm = 1.0 / static_cast<double>(L);
  for (std::size_t o = 0; o < v.outer; ++o) {
    const double* src = in + o * v.n * v.inner;
    double* dst = out + o * v.n * v.inner;
    std::fill(buf.get(), buf.get() + L * lines, 0.0);
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      const double* row = src + static_cast<std::size_t>(c) * v.inner;
      for (std::size_t i = 0; i < lines; ++i) buf[i * L + static_cast<std::size_t>(c)] = row[i];
    }
    fftw_execute(fwd.p);
    for (std::size_t i = 0; i < lines; ++i) {
      for (std::size_t b = 0; b < spec; ++b) {
        const std::complex<double> x(bspec[i * spec + b][0], bspec[i * spec + b][1]);
        const std::complex<double> k(kspec[b][0], kspec[b][1]);
        const std::complex<double> y = x * k * norm;
        bspec[i * spec + b][0] = y.real();
        bspec[i * spec + b][1] = y.imag();
      }
    }
    fftw_execute(inv.p);
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      double* row = dst + static_cast<std::size_t>(c) * v.inner;
      for (std::size_t i = 0; i < lines; ++i) row[i] = buf[i * L + static_cast<std::size_t>(c)];
    }
  }
}

}  // namespace haar::detail
