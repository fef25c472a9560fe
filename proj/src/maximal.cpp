#include <algorithm>
#include <cmath>

#include "grid_ops.hpp"
#include "haar/error.hpp"
#include "haar/local_means.hpp"

namespace haar {

namespace {

// Running max over rows [c - R, c + R] clipped to the axis, van Herk /
// Gil-Werman style: block prefix and suffix maxima over a zero-padded row.
// Inputs are non-negative, so zero padding is neutral.
void window_max_axis(std::vector<double>& data, const detail::AxisView& v, std::size_t R) {
  if (R == 0) return;
  const std::size_t w = 2 * R + 1;
  const std::size_t L = v.n + 2 * R;
  const std::size_t inner = v.inner;
  std::vector<double> g(L * inner), h(L * inner);
  const std::vector<double> zeros(inner, 0.0);
  for (std::size_t o = 0; o < v.outer; ++o) {
    double* base = data.data() + o * v.n * inner;
    auto padded = [&](std::size_t c) -> const double* {
      return (c < R || c >= R + v.n) ? zeros.data() : base + (c - R) * inner;
    };
    for (std::size_t c = 0; c < L; ++c) {
      const double* x = padded(c);
      double* gc = g.data() + c * inner;
      if (c % w == 0) {
        std::copy(x, x + inner, gc);
      } else {
        const double* gp = gc - inner;
        for (std::size_t i = 0; i < inner; ++i) gc[i] = std::max(gp[i], x[i]);
      }
    }
    for (std::size_t c = L; c-- > 0;) {
      const double* x = padded(c);
      double* hc = h.data() + c * inner;
      if (c + 1 == L || (c + 1) % w == 0) {
        std::copy(x, x + inner, hc);
      } else {
        const double* hn = hc + inner;
        for (std::size_t i = 0; i < inner; ++i) hc[i] = std::max(hn[i], x[i]);
      }
    }
    // Output row c covers padded rows [c, c + 2R].
    for (std::size_t c = 0; c < v.n; ++c) {
      const double* hc = h.data() + c * inner;
      const double* gc = g.data() + (c + 2 * R) * inner;
      double* out = base + c * inner;
      for (std::size_t i = 0; i < inner; ++i) out[i] = std::max(hc[i], gc[i]);
    }
  }
}

}  // namespace

GridFunction window_maximal(const GridFunction& f, int j, MaximalVariant variant, double A) {
  const std::size_t d = f.dim();
  const int J = f.level();
  GridFunction out = GridFunction::zeros(f.box(), J);
  auto in = f.values();
  if (variant != MaximalVariant::Weighted) {
    const int radius_exp = variant == MaximalVariant::Local ? 1 : 5;
    const double cells = std::floor(std::ldexp(1.0, J - j + radius_exp));
    std::vector<double> data(in.size());
    for (std::size_t c = 0; c < in.size(); ++c) data[c] = std::fabs(in[c]);
    for (std::size_t axis = 0; axis < d; ++axis) {
      const auto v = detail::axis_view(f.shape(), axis);
      const auto R = static_cast<std::size_t>(std::min(cells, static_cast<double>(v.n)));
      window_max_axis(data, v, R);
    }
    std::copy(data.begin(), data.end(), out.values().begin());
    return out;
  }

  if (!(A > 0.0)) throw DomainError("window_maximal: the weighted variant needs A > 0");
  // Weight depends only on the squared integer offset; tabulate it.
  std::size_t max_sq = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const auto n = static_cast<std::size_t>(f.shape()[i]);
    max_sq += (n - 1) * (n - 1);
  }
  const double scale = std::ldexp(1.0, j - J);
  std::vector<double> weight(max_sq + 1);
  for (std::size_t s = 0; s <= max_sq; ++s) weight[s] = std::pow(1.0 + scale * std::sqrt(static_cast<double>(s)), -A);

  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < in.size(); ++c) {
    if (in[c] != 0.0) support.push_back(c);
  }
  std::vector<std::vector<std::int64_t>> pos(in.size(), std::vector<std::int64_t>(d));
  for (std::size_t c = 0; c < in.size(); ++c) f.unravel(c, pos[c]);
  auto res = out.values();
  for (std::size_t x = 0; x < in.size(); ++x) {
    double best = 0.0;
    for (std::size_t y : support) {
      std::size_t sq = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const auto diff = static_cast<std::size_t>(std::llabs(pos[x][i] - pos[y][i]));
        sq += diff * diff;
      }
      best = std::max(best, std::fabs(in[y]) * weight[sq]);
    }
    res[x] = best;
  }
  return out;
}

}  // namespace haar
