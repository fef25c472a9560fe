#include "haar/haar_system.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include "haar/error.hpp"
#include "haar/simd.hpp"

namespace haar {

namespace {

std::int64_t floor_shift(std::int64_t v, int shift) { return v >> shift; }

// Calls fn(flat_start, length, sign) for maximal runs of constant sign of the
// atom along the last axis. Returns false when the support misses the grid.
template <class Fn>
bool visit_atom(const GridFunction& g, const HaarAtom& atom, Fn&& fn) {
  const std::size_t d = g.dim();
  if (atom.dim() != d) throw StructuralError("atom dimension does not match the grid");
  const int k = atom.level;
  const int J = g.level();
  const bool oscillating = !atom.is_father();
  if (J < k + (oscillating ? 1 : 0)) {
    throw ResolutionError("atom at level " + std::to_string(k) + " is not resolved by a grid at level " +
                          std::to_string(J));
  }
  const std::int64_t width = std::int64_t{1} << (J - k);
  const std::int64_t half = width / 2;
  // Clipped local index ranges per axis.
  std::vector<std::int64_t> lo(d), hi(d), split(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::int64_t start = atom.offset[i] * width - g.first_index(i);
    lo[i] = std::max<std::int64_t>(start, 0);
    hi[i] = std::min<std::int64_t>(start + width, g.shape()[i]);
    split[i] = start + half;
    if (lo[i] >= hi[i]) return false;
  }
  std::vector<std::int64_t> idx(lo.begin(), lo.end());
  const std::size_t last = d - 1;
  while (true) {
    double sign = 1.0;
    std::size_t base = 0;
    for (std::size_t i = 0; i < last; ++i) {
      if (atom.eps[i] && idx[i] >= split[i]) sign = -sign;
      base += static_cast<std::size_t>(idx[i]) * g.stride(i);
    }
    if (atom.eps[last]) {
      const std::int64_t mid = std::clamp(split[last], lo[last], hi[last]);
      if (mid > lo[last]) fn(base + static_cast<std::size_t>(lo[last]), static_cast<std::size_t>(mid - lo[last]), sign);
      if (hi[last] > mid) fn(base + static_cast<std::size_t>(mid), static_cast<std::size_t>(hi[last] - mid), -sign);
    } else {
      fn(base + static_cast<std::size_t>(lo[last]), static_cast<std::size_t>(hi[last] - lo[last]), sign);
    }
    // Advance the multi-index over all axes but the last.
    std::size_t axis = last;
    while (axis > 0) {
      --axis;
      if (++idx[axis] < hi[axis]) break;
      idx[axis] = lo[axis];
      if (axis == 0) return true;
    }
    if (last == 0) return true;
  }
}

std::vector<std::vector<std::int64_t>> level_offsets(const Box& box, int N) {
  if (!box.aligned_to(N)) throw AlignmentError("box is not aligned to 2^-" + std::to_string(N));
  const std::size_t d = box.dim();
  std::vector<std::int64_t> first(d), count(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    first[i] = box.first_index(i, N);
    count[i] = box.cell_count(i, N);
    total *= static_cast<std::size_t>(count[i]);
  }
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(total);
  std::vector<std::int64_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<std::int64_t> mu(d);
    for (std::size_t i = 0; i < d; ++i) mu[i] = first[i] + idx[i];
    out.push_back(std::move(mu));
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < count[i]) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- atoms

HaarAtom HaarAtom::father(std::vector<std::int64_t> unit_cube) {
  HaarAtom a;
  a.eps.assign(unit_cube.size(), 0);
  a.level = 0;
  a.offset = std::move(unit_cube);
  return a;
}

bool HaarAtom::is_father() const {
  return std::all_of(eps.begin(), eps.end(), [](std::uint8_t e) { return e == 0; });
}

std::vector<std::int64_t> HaarAtom::unit_cube() const {
  std::vector<std::int64_t> nu(offset.size());
  for (std::size_t i = 0; i < offset.size(); ++i) nu[i] = floor_shift(offset[i], level);
  return nu;
}

double HaarAtom::norm_sq() const { return std::ldexp(1.0, -level * static_cast<int>(dim())); }

std::vector<std::vector<std::uint8_t>> oscillating_signatures(std::size_t d) {
  std::vector<std::vector<std::uint8_t>> out;
  const std::size_t count = std::size_t{1} << d;
  for (std::size_t e = 1; e < count; ++e) {
    std::vector<std::uint8_t> eps(d);
    for (std::size_t i = 0; i < d; ++i) eps[i] = static_cast<std::uint8_t>((e >> (d - 1 - i)) & 1U);
    out.push_back(std::move(eps));
  }
  return out;
}

// ---------------------------------------------------------------- masks

void CoefficientMask::set(const std::vector<std::int64_t>& mu, const std::vector<std::uint8_t>& eps,
                          double value) {
  if (!std::isfinite(value)) throw DomainError("coefficient mask entries must be finite");
  values_[{mu, eps}] = value;
}

double CoefficientMask::at(const std::vector<std::int64_t>& mu, const std::vector<std::uint8_t>& eps) const {
  if (values_.empty()) return default_;
  const auto it = values_.find({mu, eps});
  return it == values_.end() ? default_ : it->second;
}

double CoefficientMask::sup_norm() const {
  double m = std::fabs(default_);
  for (const auto& [key, v] : values_) m = std::max(m, std::fabs(v));
  return m;
}

CoefficientMask CoefficientMask::random_signs(const Box& box, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoefficientMask mask(1.0);
  const auto sigs = oscillating_signatures(box.dim());
  for (const auto& mu : level_offsets(box, N)) {
    for (const auto& eps : sigs) mask.set(mu, eps, (rng() >> 63) ? 1.0 : -1.0);
  }
  return mask;
}

CoefficientMask CoefficientMask::random_binary(const Box& box, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoefficientMask mask(1.0);
  const auto sigs = oscillating_signatures(box.dim());
  for (const auto& mu : level_offsets(box, N)) {
    for (const auto& eps : sigs) mask.set(mu, eps, (rng() >> 63) ? 1.0 : 0.0);
  }
  return mask;
}

CoefficientMask CoefficientMask::complement() const {
  CoefficientMask out(1.0 - default_);
  for (const auto& [key, v] : values_) out.values_[key] = 1.0 - v;
  return out;
}

// ---------------------------------------------------------------- coefficients

GridFunction evaluate_atom(const HaarAtom& atom, int J, const Box& box) {
  GridFunction g = GridFunction::zeros(box, J);
  double* data = g.values().data();
  visit_atom(g, atom, [&](std::size_t start, std::size_t len, double sign) {
    std::fill(data + start, data + start + len, sign);
  });
  return g;
}

Coefficient haar_coefficient(const GridFunction& f, const HaarAtom& atom) {
  const double* data = f.values().data();
  const auto& k = simd::active();
  double acc = 0.0;
  const bool hit = visit_atom(f, atom, [&](std::size_t start, std::size_t len, double sign) {
    acc += sign * k.sum(data + start, len);
  });
  if (!hit) return {0.0, true};
  return {acc * f.cell_volume(), false};
}

namespace {

void add_atom(GridFunction& out, const HaarAtom& atom, double weight) {
  double* data = out.values().data();
  visit_atom(out, atom, [&](std::size_t start, std::size_t len, double sign) {
    const double w = sign * weight;
    for (std::size_t i = 0; i < len; ++i) data[start + i] += w;
  });
}

}  // namespace

GridFunction haar_multiplier(const GridFunction& f, int N, const CoefficientMask& mask) {
  if (N < 0) throw DomainError("haar_multiplier: negative level");
  if (f.level() < N + 1) {
    throw ResolutionError("haar_multiplier: level " + std::to_string(N) + " needs J >= N + 1");
  }
  GridFunction out = GridFunction::zeros(f.box(), f.level());
  const auto sigs = oscillating_signatures(f.dim());
  const double scale = std::ldexp(1.0, N * static_cast<int>(f.dim()));
  for (const auto& mu : level_offsets(f.box(), N)) {
    for (const auto& eps : sigs) {
      const double a = mask.at(mu, eps);
      if (a == 0.0) continue;
      const HaarAtom atom{eps, N, mu};
      const double c = haar_coefficient(f, atom).value;
      if (c != 0.0) add_atom(out, atom, a * scale * c);
    }
  }
  return out;
}

GridFunction level_projection(const GridFunction& f, int N) {
  return haar_multiplier(f, N, CoefficientMask(1.0));
}

// ---------------------------------------------------------------- enumerations

Enumeration admissible_enumeration(const Box& box, int K) {
  if (K < 0) throw DomainError("admissible_enumeration: K must be non-negative");
  if (!box.aligned_to(0)) throw AlignmentError("admissible_enumeration: box must be a union of unit cubes");
  Enumeration e;
  e.unit_cubes = level_offsets(box, 0);
  const std::size_t d = box.dim();
  const auto sigs = oscillating_signatures(d);
  const auto cubes = static_cast<std::int64_t>(e.unit_cubes.size());
  // Anti-diagonals of the (cube, level) table: entry (i, k) with i + k = diag,
  // visited from the newest cube down to cube 0.
  for (std::int64_t diag = 0; diag <= cubes - 1 + K; ++diag) {
    for (std::int64_t i = std::min<std::int64_t>(diag, cubes - 1); i >= 0; --i) {
      const auto k = static_cast<int>(diag - i);
      if (k > K) break;
      const auto& nu = e.unit_cubes[static_cast<std::size_t>(i)];
      if (k == 0) e.atoms.push_back(HaarAtom::father(nu));
      const std::int64_t per_axis = std::int64_t{1} << k;
      std::size_t total = 1;
      for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(per_axis);
      for (const auto& eps : sigs) {
        std::vector<std::int64_t> idx(d, 0);
        for (std::size_t n = 0; n < total; ++n) {
          HaarAtom atom{eps, k, std::vector<std::int64_t>(d)};
          for (std::size_t a = 0; a < d; ++a) atom.offset[a] = nu[a] * per_axis + idx[a];
          e.atoms.push_back(std::move(atom));
          for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
          }
        }
      }
      e.entry_ends.push_back(e.atoms.size());
    }
  }
  return e;
}

bool is_admissible(const Enumeration& e) {
  std::map<std::vector<std::int64_t>, int> finest;
  std::set<HaarAtom> seen;
  for (const auto& atom : e.atoms) {
    if (!seen.insert(atom).second) return false;
    if (atom.is_father() && atom.level != 0) return false;
    auto [it, fresh] = finest.try_emplace(atom.unit_cube(), atom.level);
    if (fresh) continue;
    if (atom.level < it->second) return false;
    it->second = atom.level;
  }
  return true;
}

GridFunction partial_sum(const GridFunction& f, const Enumeration& e, std::size_t n) {
  if (n > e.atoms.size()) throw DomainError("partial_sum: prefix longer than the enumeration");
  GridFunction out = GridFunction::zeros(f.box(), f.level());
  for (std::size_t m = 0; m < n; ++m) {
    const auto& atom = e.atoms[m];
    const Coefficient c = haar_coefficient(f, atom);
    if (c.outside_box || c.value == 0.0) continue;
    add_atom(out, atom, c.value / atom.norm_sq());
  }
  return out;
}

PartialSumSplit decompose_partial_sum(const Enumeration& e, std::size_t n,
                                      const std::vector<std::int64_t>& unit_cube) {
  if (!is_admissible(e)) throw StructuralError("decompose_partial_sum: enumeration is not admissible");
  if (n > e.atoms.size()) throw DomainError("decompose_partial_sum: prefix longer than the enumeration");
  const std::size_t d = unit_cube.size();
  std::map<int, std::size_t> count;
  bool father = false;
  bool any = false;
  for (std::size_t m = 0; m < n; ++m) {
    const auto& atom = e.atoms[m];
    if (atom.unit_cube() != unit_cube) continue;
    any = true;
    if (atom.is_father()) {
      father = true;
    } else {
      ++count[atom.level];
    }
  }
  PartialSumSplit split;
  if (!any) {
    split.empty = true;
    return split;
  }
  if (!father) {
    throw StructuralError("decompose_partial_sum: level-0 atoms precede the father function of the cube");
  }
  const std::size_t sigs = (std::size_t{1} << d) - 1;
  int level = 0;
  while (true) {
    const std::size_t full = sigs << (static_cast<std::size_t>(level) * d);
    const auto it = count.find(level);
    if (it == count.end() || it->second < full) break;
    ++level;
  }
  split.level = level;
  for (std::size_t m = 0; m < n; ++m) {
    const auto& atom = e.atoms[m];
    if (atom.level == level && !atom.is_father() && atom.unit_cube() == unit_cube) {
      split.mask.set(atom.offset, atom.eps, 1.0);
    }
  }
  return split;
}

void write_enumeration_csv(std::ostream& os, const Enumeration& e) {
  const std::size_t d = e.atoms.empty() ? (e.unit_cubes.empty() ? 1 : e.unit_cubes[0].size()) : e.atoms[0].dim();
  os << "n";
  for (std::size_t i = 1; i <= d; ++i) os << ",nu_" << i;
  for (std::size_t i = 1; i <= d; ++i) os << ",eps_" << i;
  os << ",k";
  for (std::size_t i = 1; i <= d; ++i) os << ",ell_" << i;
  os << '\n';
  for (std::size_t m = 0; m < e.atoms.size(); ++m) {
    const auto& a = e.atoms[m];
    os << (m + 1);
    for (auto v : a.unit_cube()) os << ',' << v;
    for (auto v : a.eps) os << ',' << static_cast<int>(v);
    os << ',' << a.level;
    for (auto v : a.offset) os << ',' << v;
    os << '\n';
  }
}

GridFunction restrict_to_unit_cube(const GridFunction& f, const std::vector<std::int64_t>& unit_cube) {
  GridFunction out = f;
  const GridFunction indicator = evaluate_atom(HaarAtom::father(unit_cube), f.level(), f.box());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= indicator[i];
  return out;
}

}  // namespace haar
