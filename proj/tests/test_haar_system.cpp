#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "haar/error.hpp"
#include "haar/haar_system.hpp"
#include "oracles.hpp"

using namespace haar;
using doctest::Approx;

namespace {

HaarAtom atom(std::vector<std::uint8_t> eps, int k, std::vector<std::int64_t> l) {
  return HaarAtom{std::move(eps), k, std::move(l)};
}

}  // namespace

TEST_CASE("atoms sampled on the grid") {
  auto h = evaluate_atom(atom({1}, 0, {0}), 1, Box::cube(1, 0, 1));
  REQUIRE(h.size() == 2);
  CHECK(h[0] == 1.0);
  CHECK(h[1] == -1.0);

  auto h2 = evaluate_atom(atom({1, 0}, 0, {0, 0}), 2, Box::cube(2, 0, 1));
  for (std::size_t c = 0; c < h2.size(); ++c) {
    const auto x = h2.center(c);
    CHECK(h2[c] == (x[0] < 0.5 ? 1.0 : -1.0));
  }
  CHECK_THROWS_AS(evaluate_atom(atom({1}, 2, {0}), 2, Box::cube(1, 0, 1)), ResolutionError);
}

TEST_CASE("atoms agree with the pointwise definition") {
  const Box box = Box::cube(2, -1, 2);
  for (const auto& eps : oscillating_signatures(2)) {
    for (int k = 0; k <= 3; ++k) {
      const auto a = atom(eps, k, {std::int64_t{-1} << k, 3});
      CHECK(oracle::max_abs_diff(evaluate_atom(a, 5, box), oracle::atom(a, 5, box)) == 0.0);
    }
  }
}

TEST_CASE("oscillating signatures") {
  const auto s = oscillating_signatures(2);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == std::vector<std::uint8_t>{0, 1});
  CHECK(s[1] == std::vector<std::uint8_t>{1, 0});
  CHECK(s[2] == std::vector<std::uint8_t>{1, 1});
  CHECK(oscillating_signatures(3).size() == 7);
}

TEST_CASE("orthogonality and normalization") {
  const Box box = Box::cube(2, 0, 1);
  const int J = 5;
  std::vector<HaarAtom> atoms{HaarAtom::father({0, 0})};
  for (int k = 0; k <= 2; ++k) {
    for (const auto& eps : oscillating_signatures(2)) {
      for (std::int64_t a = 0; a < (1 << k); ++a) {
        for (std::int64_t b = 0; b < (1 << k); ++b) atoms.push_back(atom(eps, k, {a, b}));
      }
    }
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto gi = evaluate_atom(atoms[i], J, box);
    CHECK(inner_product(gi, gi) == Approx(atoms[i].norm_sq()).epsilon(1e-14));
    if (!atoms[i].is_father()) CHECK(atoms[i].norm_sq() == std::ldexp(1.0, -2 * atoms[i].level));
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      CHECK(std::fabs(inner_product(gi, evaluate_atom(atoms[j], J, box))) < 1e-15);
    }
  }
}

TEST_CASE("haar coefficients") {
  const Box box = Box::cube(1, 0, 1);
  auto one = make_grid(1, 4, box, [](std::span<const double>) { return 1.0; });
  CHECK(haar_coefficient(one, atom({1}, 2, {1})).value == 0.0);

  const auto a = atom({1}, 2, {3});
  CHECK(haar_coefficient(evaluate_atom(a, 4, box), a).value == Approx(0.25));

  auto x = make_grid(1, 6, box, [](std::span<const double> p) { return p[0]; });
  CHECK(haar_coefficient(x, atom({1}, 0, {0})).value == Approx(-0.25).epsilon(1e-14));

  const auto far = haar_coefficient(x, atom({1}, 0, {4}));
  CHECK(far.outside_box);
  CHECK(far.value == 0.0);

  const auto f = oracle::random_grid(2, 4, Box::cube(2, -1, 1), 17);
  for (const auto& eps : oscillating_signatures(2)) {
    const auto b = atom(eps, 1, {-1, 1});
    CHECK(haar_coefficient(f, b).value == Approx(oracle::inner(f, oracle::atom(b, 4, f.box()))).epsilon(1e-13));
  }
}

TEST_CASE("level projection is the martingale difference") {
  for (std::size_t d : {1u, 2u}) {
    const Box box = Box::cube(d, -1, 1);
    const int J = d == 1 ? 7 : 5;
    const auto f = oracle::random_grid(d, J, box, 23 + d);
    GridFunction telescoped = conditional_expectation(f, 0);
    for (int N = 0; N < J; ++N) {
      const auto p = level_projection(f, N);
      const auto diff = conditional_expectation(f, N + 1) - conditional_expectation(f, N);
      CHECK(oracle::max_abs_diff(p, diff) < 1e-10);
      CHECK(oracle::max_abs_diff(level_projection(p, N), p) < 1e-12);
      telescoped += p;
      CHECK(oracle::max_abs_diff(telescoped, conditional_expectation(f, N + 1)) < 1e-10);
    }
    auto c = make_grid(d, J, box, [](std::span<const double>) { return -3.0; });
    CHECK(oracle::max_abs(level_projection(c, 1)) < 1e-14);
    CHECK_THROWS_AS(level_projection(f, J), ResolutionError);
  }
}

TEST_CASE("frequency-layer multipliers") {
  const Box box = Box::cube(2, 0, 2);
  const auto f = oracle::random_grid(2, 5, box, 4);
  const int N = 2;
  CHECK(oracle::max_abs_diff(haar_multiplier(f, N, CoefficientMask(1.0)), level_projection(f, N)) < 1e-13);
  CHECK(oracle::max_abs(haar_multiplier(f, N, CoefficientMask(0.0))) == 0.0);

  const auto a = CoefficientMask::random_binary(box, N, 99);
  const auto sum = haar_multiplier(f, N, a) + haar_multiplier(f, N, a.complement());
  CHECK(oracle::max_abs_diff(sum, level_projection(f, N)) < 1e-12);

  const auto s = CoefficientMask::random_signs(box, N, 5);
  CHECK(s.sup_norm() == 1.0);
  CHECK(s.explicit_entries() == 3u * 64u);

  // One selected atom: T_N returns exactly its normalized component.
  CoefficientMask one(0.0);
  const auto h = atom({1, 1}, N, {3, 5});
  one.set(h.offset, h.eps, 1.0);
  const auto g = evaluate_atom(h, 5, box);
  const double c = haar_coefficient(f, h).value * std::ldexp(1.0, 2 * N);
  CHECK(oracle::max_abs_diff(haar_multiplier(f, N, one), c * g) < 1e-13);
}

TEST_CASE("admissible enumeration follows the diagonal table order") {
  const auto e = admissible_enumeration(Box::cube(1, 0, 2), 1);
  REQUIRE(e.unit_cubes.size() == 2);
  const std::vector<HaarAtom> head{
      HaarAtom::father({0}), atom({1}, 0, {0}),  // entry 1: (nu_0, 0)
      HaarAtom::father({1}), atom({1}, 0, {1}),  // entry 2: (nu_1, 0)
      atom({1}, 1, {0}),     atom({1}, 1, {1}),  // entry 3: (nu_0, 1)
  };
  REQUIRE(e.atoms.size() >= head.size());
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(e.atoms[i] == head[i]);
  CHECK(e.atoms.size() == 8);
  CHECK(e.atoms[6] == atom({1}, 1, {2}));
  CHECK(e.atoms[7] == atom({1}, 1, {3}));
  CHECK(is_admissible(e));
}

TEST_CASE("admissibility scanner") {
  auto e = admissible_enumeration(Box::cube(2, 0, 2), 2);
  CHECK(is_admissible(e));

  // Level-1 atom moved ahead of a level-0 atom of the same cube.
  auto bad = e;
  bad.entry_ends.clear();
  std::swap(bad.atoms[1], bad.atoms[bad.atoms.size() - 1]);
  CHECK_FALSE(is_admissible(bad));

  auto dup = e;
  dup.atoms.push_back(dup.atoms.front());
  CHECK_FALSE(is_admissible(dup));

  // Cube-major order keeps every cube internally ordered, so it is admissible.
  Enumeration interleaved;
  for (const auto& nu : e.unit_cubes) {
    for (const auto& a : e.atoms) {
      if (a.unit_cube() == nu) interleaved.atoms.push_back(a);
    }
  }
  interleaved.unit_cubes = e.unit_cubes;
  CHECK(is_admissible(interleaved));
}

TEST_CASE("prefixes are levels below m plus part of level m") {
  const auto e = admissible_enumeration(Box::cube(2, 0, 2), 2);
  for (const auto& nu : e.unit_cubes) {
    int prev = -1;
    for (const auto& a : e.atoms) {
      if (a.unit_cube() != nu) continue;
      CHECK(a.level >= prev);
      prev = a.level;
    }
  }
}

TEST_CASE("partial sums") {
  const Box box = Box::cube(2, -1, 1);
  const int J = 4;
  const auto f = oracle::random_grid(2, J, box, 31);
  const auto e = admissible_enumeration(box, J - 1);
  CHECK(oracle::max_abs_diff(partial_sum(f, e, e.atoms.size()), f) < 1e-12);
  CHECK(oracle::max_abs_diff(partial_sum(f, e, 1), 0.0 * f) > 0.0);

  // Fathers only, attached at the head of each cube's level-0 entry.
  Enumeration fathers;
  for (const auto& nu : e.unit_cubes) fathers.atoms.push_back(HaarAtom::father(nu));
  fathers.unit_cubes = e.unit_cubes;
  CHECK(oracle::max_abs_diff(partial_sum(f, fathers, fathers.atoms.size()), conditional_expectation(f, 0)) < 1e-14);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, e.atoms.size())(rng);
    const auto p = partial_sum(f, e, n);
    CHECK(oracle::max_abs_diff(partial_sum(p, e, n), p) < 1e-10);
    CHECK(lp_quasinorm(p, 2.0) <= lp_quasinorm(f, 2.0) * (1 + 1e-12));
    const auto g = oracle::random_grid(2, J, box, 100 + trial);
    const auto lin = partial_sum(2.0 * f - g, e, n) - (2.0 * p - partial_sum(g, e, n));
    CHECK(oracle::max_abs(lin) < 1e-12);
  }
  CHECK_THROWS_AS(partial_sum(f, admissible_enumeration(box, J), 1000), ResolutionError);
}

TEST_CASE("partial sums split into E plus a 0/1 multiplier per cube") {
  for (std::size_t d : {1u, 2u}) {
    const Box box = Box::cube(d, 0, 2);
    const int J = d == 1 ? 6 : 4;
    const int K = J - 1;
    const auto f = oracle::random_grid(d, J, box, 41 + d);
    const auto e = admissible_enumeration(box, K);
    std::map<std::vector<std::int64_t>, int> last_level;
    for (std::size_t n = 0; n <= e.atoms.size(); n += (d == 1 ? 1 : 3)) {
      const auto p = partial_sum(f, e, n);
      for (const auto& nu : e.unit_cubes) {
        const auto split = decompose_partial_sum(e, n, nu);
        const auto fnu = restrict_to_unit_cube(f, nu);
        GridFunction expect = 0.0 * f;
        if (!split.empty) {
          expect = conditional_expectation(fnu, split.level);
          if (split.level < J) expect += haar_multiplier(fnu, split.level, split.mask);
        }
        CHECK(oracle::max_abs_diff(restrict_to_unit_cube(p, nu), expect) < 1e-10);
        if (!split.empty) {
          auto [it, fresh] = last_level.emplace(nu, split.level);
          CHECK(split.level >= it->second);
          it->second = split.level;
        }
      }
    }
    for (const auto& nu : e.unit_cubes) {
      const auto full = decompose_partial_sum(e, e.atoms.size(), nu);
      CHECK(full.level == K + 1);
      CHECK(full.mask.sup_norm() == 0.0);
    }
  }
}

TEST_CASE("split at a completed level has a zero mask") {
  const auto e = admissible_enumeration(Box::cube(1, 0, 1), 3);
  // father, level 0, level 1 (2 atoms): the next entry opens level 2.
  const auto s = decompose_partial_sum(e, 4, {0});
  CHECK(s.level == 2);
  CHECK(s.mask.sup_norm() == 0.0);
  CHECK(decompose_partial_sum(e, 0, {0}).empty);

  auto bad = e;
  std::swap(bad.atoms[1], bad.atoms[3]);
  bad.entry_ends.clear();
  CHECK_THROWS_AS(decompose_partial_sum(bad, 2, {0}), StructuralError);
}

TEST_CASE("enumeration CSV export") {
  std::ostringstream os;
  write_enumeration_csv(os, admissible_enumeration(Box::cube(1, 0, 1), 0));
  CHECK(os.str() == "n,nu_1,eps_1,k,ell_1\n1,0,0,0,0\n2,0,1,0,0\n");
}
