#include <frostman/cascade.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include <frostman/set_models.hpp>

using namespace frostman;

TEST_CASE("derive_params snaps near-integer logs and rejects infeasible scales") {
  // Full interval, theta=1/2, delta=1/4: fine scale delta^2 = 2^-4 gives
  // m=4; coarse width must clear delta, so ell=2 and capping starts at 2.
  auto t = OccupancyTree::full(1, 8);
  const auto p = derive_params(0.5, 0.25, 0.5, 1.0, t);
  CHECK(p.m == 4);
  CHECK(p.ell == 2);
  CHECK(p.level_top == 2);

  // d=2 shifts ell by the sqrt(2) diameter: ell = floor(2 + log2(1/4) - 0.5).
  const auto p2 = derive_params(0.5, 0.25, 0.5, 1.0, 2, 8);
  CHECK(p2.m == 4);
  CHECK(p2.ell == 1);
  CHECK(p2.level_top == 3);

  CHECK_THROWS_AS(derive_params(0.5, 0.25, 0.5, 1.0, 1, 3), infeasible_error);  // m=4 > depth
  CHECK_THROWS_AS(derive_params(1.0, 0.5, 0.5, 1.0, 4, 8), infeasible_error);   // ell < 0
  CHECK_THROWS_AS(derive_params(0.5, 0.25, 0.9, 0.5, 1, 8), input_error);       // s > t
  CHECK_THROWS_AS(derive_params(1.5, 0.25, 0.5, 1.0, 1, 8), input_error);
  CHECK_THROWS_AS(derive_params(0.5, 1.25, 0.5, 1.0, 1, 8), input_error);
  CHECK_THROWS_AS(derive_params(0.5, 0.25, -0.1, 1.0, 1, 8), input_error);
}

TEST_CASE("full interval cascade: caps, total, and the equality cover") {
  // theta=1/2, delta=1/4, t=1 on [0,1): base masses 2^-4 aggregate to the
  // cap at every level, so everything is saturated-at-equality and nothing
  // strictly triggers.
  auto t = OccupancyTree::full(1, 8);
  auto res = construct(t, 0.5, 0.25, 0.5, 1.0);
  CHECK(res.params.m == 4);
  CHECK(res.params.level_top == 2);
  CHECK(res.total_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.measure.normalized);

  // Cover: the level_top cubes themselves (sat at equality), mass 1/4 each.
  CHECK(res.cover.cube_count == 4);
  CHECK(res.cover.total_mass == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(res.cover.groups.size() == 1);
  CHECK(res.cover.groups[0].level == 2);
  CHECK(res.cover.groups[0].mass_each == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(res.cover.groups[0].diameter == doctest::Approx(0.25).epsilon(1e-12));

  // Masses: additive at every level, uniform below m by even splitting.
  for (int j = 0; j <= 8; ++j) {
    double sum = 0;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c)
      sum += leaf_mass(res.measure, {j, c});
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(leaf_mass(res.measure, {j, 0}) == doctest::Approx(std::ldexp(1.0, -j)).epsilon(1e-12));
  }

  // Branching premise: 2^s = sqrt(2) < 2 = min branching below m.
  CHECK(res.branching.premise);
  CHECK(res.branching.holds);
  CHECK(res.branching.worst_margin >= 0.0);
}

TEST_CASE("hand-checkable three-leaf cascade") {
  // Leaves {0,2,3} at depth 2, m=2, level_top=1, t=1/5.  Base fills 2^-0.4
  // per leaf; the right level-1 cube aggregates 2^-0.2... capped at
  // 2^-0.2; the left one keeps its single leaf's 2^-0.4.
  auto tree = OccupancyTree::from_codes(1, 2, {0, 2, 3});
  FrostmanParams p;
  p.theta = 1.0;
  p.delta = 0.25;
  p.s = 0.1;
  p.t = 0.2;
  p.m = 2;
  p.ell = 1;
  p.level_top = 1;
  auto meas = run_cascade(tree, p);
  const double c1 = std::exp2(-0.4), c2 = std::exp2(-0.2);
  CHECK(meas.total == doctest::Approx(c1 + c2).epsilon(1e-12));
  CHECK(leaf_mass(meas, {2, 0}) == doctest::Approx(c1).epsilon(1e-12));
  CHECK(leaf_mass(meas, {2, 2}) == doctest::Approx(c2 / 2).epsilon(1e-12));
  CHECK(leaf_mass(meas, {2, 3}) == doctest::Approx(c2 / 2).epsilon(1e-12));
  CHECK(leaf_mass(meas, {1, 1}) == doctest::Approx(c2).epsilon(1e-12));
  CHECK(leaf_mass(meas, {2, 1}) == 0.0);  // unoccupied
  CHECK(leaf_mass(meas, {0, 0}) == doctest::Approx(c1 + c2).epsilon(1e-12));

  const double t_total = normalize(meas);
  CHECK(t_total == doctest::Approx(c1 + c2).epsilon(1e-12));
  CHECK(leaf_mass(meas, {0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(meas.normalized);
}

TEST_CASE("digit-set construction matches frozen scale bookkeeping") {
  // Base-4 {0,3} digits, depth 24; theta=1/2, delta=2^-6, s=0.3, t=0.4.
  auto tree = realize(DigitSetSpec{4, {{0, 3}}}, 24);
  auto res = construct(tree, 0.5, std::ldexp(1.0, -6), 0.3, 0.4);
  CHECK(res.params.m == 12);
  CHECK(res.params.ell == 6);
  CHECK(res.params.level_top == 6);
  // T = 2^0.6: the level-6 aggregate of 64 base masses 2^-4.8 exceeds the
  // cap 2^-2.4 at every capping level in between, leaving 8 cover cubes.
  CHECK(res.total_mass == doctest::Approx(std::exp2(0.6)).epsilon(1e-9));
  CHECK(res.cover.cube_count == 8);
  // Sub-base uniform splitting: the branching premise fails (single-child
  // levels exist), but the explicit chain products still clear 2^(0.3 k).
  CHECK_FALSE(res.branching.premise);
  CHECK(res.branching.holds);
  CHECK(res.branching.worst_margin == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(res.branching.worst_level == 14);
}

TEST_CASE("theta=1 pins the cover to a single scale") {
  auto tree = OccupancyTree::full(1, 6);
  auto res = construct(tree, 1.0, std::ldexp(1.0, -3), 0.5, 1.0);
  // delta = 2^-3 = fine scale: m = 3 and ell = 0 collapse the window.
  CHECK(res.params.m == 3);
  CHECK(res.params.level_top == 3);
  CHECK(res.cover.cube_count == 8);
  CHECK(res.total_mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equality cover enumeration agrees with the grouped summary") {
  auto tree = realize(DigitSetSpec{4, {{0, 3}}}, 24);
  auto res = construct(tree, 0.5, std::ldexp(1.0, -6), 0.3, 0.4);
  std::uint64_t n = 0;
  double mass = 0;
  std::uint64_t last_code = 0;
  int seen_level = -1;
  for_each_cover_cube(res.measure, [&](const DyadicCube& q, double m) {
    if (n > 0 && q.level == seen_level) CHECK(q.code > last_code);
    seen_level = q.level;
    last_code = q.code;
    ++n;
    mass += m;
    return true;
  });
  CHECK(n == res.cover.cube_count);
  CHECK(mass == doctest::Approx(res.cover.total_mass).epsilon(1e-9));
  // Early stop is honored.
  std::uint64_t stopped = 0;
  for_each_cover_cube(res.measure, [&](const DyadicCube&, double) {
    ++stopped;
    return stopped < 3;
  });
  CHECK(stopped == 3);
}
