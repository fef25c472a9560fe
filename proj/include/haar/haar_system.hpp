#pragma once

// The inhomogeneous Haar system on a box: atoms h^{(eps)}_{k,l}, exact
// coefficients against grid data, frequency-layer projections and
// multipliers, admissible enumerations, and partial-sum projections.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "haar/dyadic.hpp"

namespace haar {

/// h^{(eps)}_{level,offset}(x) = prod_i h^{(eps_i)}(2^level x_i - offset_i), where
/// h^{(0)} is the indicator of [0,1) and h^{(1)} = 1_[0,1/2) - 1_[1/2,1).
struct HaarAtom {
  std::vector<std::uint8_t> eps;
  int level = 0;
  std::vector<std::int64_t> offset;

  static HaarAtom father(std::vector<std::int64_t> unit_cube);

  std::size_t dim() const { return eps.size(); }
  bool is_father() const;
  /// Integer unit cube containing the support.
  std::vector<std::int64_t> unit_cube() const;
  /// ||h||_2^2 = 2^{-level d}.
  double norm_sq() const;

  friend bool operator==(const HaarAtom&, const HaarAtom&) = default;
  friend auto operator<=>(const HaarAtom&, const HaarAtom&) = default;
};

/// All eps in {0,1}^d \ {0}, lexicographic with the first axis most significant.
std::vector<std::vector<std::uint8_t>> oscillating_signatures(std::size_t d);

/// Bounded coefficients a_{mu,eps} for the frequency-layer multiplier T_N.
/// Entries not set explicitly take the default value.
class CoefficientMask {
 public:
  explicit CoefficientMask(double default_value = 1.0) : default_(default_value) {}

  void set(const std::vector<std::int64_t>& mu, const std::vector<std::uint8_t>& eps, double value);
  double at(const std::vector<std::int64_t>& mu, const std::vector<std::uint8_t>& eps) const;
  double default_value() const { return default_; }
  std::size_t explicit_entries() const { return values_.size(); }
  double sup_norm() const;

  /// Independent uniform +-1 entries for every level-N atom meeting the box.
  static CoefficientMask random_signs(const Box& box, int N, std::uint64_t seed);
  /// Independent uniform 0/1 entries for every level-N atom meeting the box.
  static CoefficientMask random_binary(const Box& box, int N, std::uint64_t seed);
  /// 1 - a, entrywise (including the default).
  CoefficientMask complement() const;

 private:
  using Key = std::pair<std::vector<std::int64_t>, std::vector<std::uint8_t>>;
  std::map<Key, double> values_;
  double default_;
};

struct Enumeration {
  std::vector<HaarAtom> atoms;
  /// Unit cubes covered, in the fixed labeling order.
  std::vector<std::vector<std::int64_t>> unit_cubes;
  /// Prefix lengths at which a table entry (cube, level) is complete; empty
  /// for hand-built orderings.
  std::vector<std::size_t> entry_ends;
};

/// The atom sampled on the grid of side 2^-J over `box` (values +-1 or 0).
GridFunction evaluate_atom(const HaarAtom& atom, int J, const Box& box);

struct Coefficient {
  double value = 0.0;
  /// The atom's support does not meet the box; value is 0.
  bool outside_box = false;
};

/// Raw inner product <f, h> (no normalization).
Coefficient haar_coefficient(const GridFunction& f, const HaarAtom& atom);

/// sum_{eps != 0} sum_mu 2^{Nd} <f, h_{N,mu}> h_{N,mu}.
GridFunction level_projection(const GridFunction& f, int N);

/// sum_{eps != 0} sum_mu a_{mu,eps} 2^{Nd} <f, h_{N,mu}> h_{N,mu}.
GridFunction haar_multiplier(const GridFunction& f, int N, const CoefficientMask& mask);

/// Diagonal (cube, level) enumeration through level K over a box made of
/// integer unit cubes; fathers open each cube's level-0 entry and the atoms
/// of one entry follow lexicographic (eps, offset) order.
Enumeration admissible_enumeration(const Box& box, int K);

/// Within every unit cube, support sizes never increase along the order, and
/// no atom repeats.
bool is_admissible(const Enumeration& e);

/// Orthogonal projection onto the span of the first n atoms.
GridFunction partial_sum(const GridFunction& f, const Enumeration& e, std::size_t n);

/// On one unit cube a prefix of an admissible enumeration is E_level plus a
/// 0/1 multiplier on the level-`level` atoms it has already reached.
struct PartialSumSplit {
  int level = 0;
  CoefficientMask mask{0.0};
  /// The prefix holds no atom of this cube, so the partial sum vanishes there.
  bool empty = false;
};

PartialSumSplit decompose_partial_sum(const Enumeration& e, std::size_t n,
                                      const std::vector<std::int64_t>& unit_cube);

/// CSV columns: n, nu_1..nu_d, eps_1..eps_d, k, ell_1..ell_d (n is 1-based).
void write_enumeration_csv(std::ostream& os, const Enumeration& e);

/// f times the indicator of an integer unit cube.
GridFunction restrict_to_unit_cube(const GridFunction& f, const std::vector<std::int64_t>& unit_cube);

}  // namespace haar
