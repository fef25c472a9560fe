#include <string>

#include "grid_ops.hpp"
#include "haar/error.hpp"
#include "haar/local_means.hpp"

namespace haar {

namespace {

// Above this many taps the FFT path is cheaper than the direct sum.
constexpr std::size_t kFftTaps = 48;

}  // namespace

GridFunction local_mean(const GridFunction& f, const MomentKernel& kernel, int k, Extension ext) {
  if (f.dim() != kernel.dim()) throw StructuralError("local_mean: kernel and grid dimensions differ");
  const KernelTaps taps = kernel.taps(k, f.level());
  const std::ptrdiff_t center = taps.half - 1;
  const Extension mode = ext == Extension::Periodic ? Extension::Periodic : Extension::Zero;
  const std::size_t d = f.dim();
  const std::size_t size = f.size();

  std::vector<double> a(size), b(size);
  auto run = [&](std::size_t oscillating_axis, std::vector<double>& result) {
    const double* src = f.values().data();
    for (std::size_t axis = 0; axis < d; ++axis) {
      const auto& w = axis == oscillating_axis ? taps.oscillating : taps.smooth;
      double* dst = axis % 2 == 0 ? a.data() : b.data();
      const auto v = detail::axis_view(f.shape(), axis);
      if (w.size() > kFftTaps) {
        detail::convolve_axis_fft(src, dst, v, w, center, mode);
      } else {
        detail::convolve_axis(src, dst, v, w, center, mode);
      }
      src = dst;
    }
    result.assign(src, src + size);
  };

  GridFunction out = GridFunction::zeros(f.box(), f.level());
  std::vector<double> term;
  if (k == 0) {
    run(d, term);
    std::copy(term.begin(), term.end(), out.values().begin());
    return out;
  }
  for (std::size_t i = 0; i < d; ++i) {
    run(i, term);
    auto v = out.values();
    for (std::size_t c = 0; c < size; ++c) v[c] += term[c];
  }
  return out;
}

std::vector<double> local_means_decay(const GridFunction& f, const MomentKernel& kernel, int j, int k_max, double p) {
  if (j < 0 || k_max <= j) throw DomainError("local_means_decay: needs 0 <= j < k_max");
  const double base = lp_quasinorm(f, p);
  if (!(base > 0.0)) throw DomainError("local_means_decay: f vanishes");
  const GridFunction lj = local_mean(f, kernel, j);
  std::vector<double> out;
  for (int k = j + 1; k <= k_max; ++k) out.push_back(lp_quasinorm(local_mean(lj, kernel, k), p) / base);
  return out;
}

}  // namespace haar
