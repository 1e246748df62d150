// Criterion 3: the middle-thirds set at depth 24, realized through the
// iterated-function-system route (two maps of ratio 1/3) and cross-checked
// against the independent base-3 digit routes.  Box fit and the
// scale-resolved estimate must land near log 2 / log 3 at every tested theta,
// with each theta given a matching coverage window: delta(theta) = 2^-round(24*theta)
// so the fine level sits at the tree bottom.

#include <cmath>
#include <string>
#include <vector>

#include <frostman/estimators.hpp>
#include <frostman/set_models.hpp>

#include "criteria.hpp"
#include "oracles.hpp"

namespace acceptance {

Registration crit_middle_thirds() {
  Registration reg;
  reg.number = 3;
  reg.title = "middle thirds: box and scale-resolved estimates near log2/log3";
  reg.budget_seconds = 30.0;
  reg.body = [](Criterion& c) {
    using namespace frostman;
    const int depth = 24;
    const double dim = 0.6309297535714574;  // log 2 / log 3

    IfsSpec ifs;
    ifs.maps.push_back({Frac(1, 3), {Frac(0, 1)}, {}});
    ifs.maps.push_back({Frac(1, 3), {Frac(2, 3)}, {}});
    const auto tree = realize(SetSpec{ifs}, depth);

    // Route crossings: the base-3 digit realization must produce the same
    // occupancy, and the interval-recursion oracle the same level counts.
    const auto digit_tree = realize(DigitSetSpec{3, {{0, 2}}}, depth);
    c.require(equal_occupancy(tree, digit_tree), "IFS route == digit route at depth 24");

    const auto counts = level_counts(tree);
    const testsupport::DigitIntervalOracle oracle(3, {{0, 2}});
    const auto oracle_counts = oracle.level_counts(16);
    bool prefix_ok = true;
    for (int n = 0; n <= 16; ++n) prefix_ok = prefix_ok && counts.occupied[n] == oracle_counts[n];
    c.require(prefix_ok, "levels 0..16 match the interval-recursion oracle");
    c.require(counts.occupied[20] == 12178 && counts.occupied[24] == 70990,
              "frozen deep counts: M_20 = 12178, M_24 = 70990");

    const auto fit = box_dimension(counts, 6, depth);
    c.require_close(fit.slope, dim, 0.03, "box-counting slope within 0.03 of log2/log3");

    const std::vector<double> thetas{0.25, 0.5, 0.75, 1.0};
    const std::vector<double> frozen{0.648257, 0.649014, 0.651806, 0.671472};
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double theta = thetas[i];
      const double delta = std::exp2(-std::round(24 * theta));
      const auto at = intermediate_dim_at_scale(tree, theta, delta);
      std::ostringstream os;
      os << "s*(theta=" << theta << ", delta=2^" << -std::round(24 * theta) << ")";
      c.require_close(at.s_star, dim, 0.05, os.str() + " within 0.05 of log2/log3");
      c.require_close(at.s_star, frozen[i], 1e-3, os.str() + " regression anchor");
      c.require(at.level_fine == 24, os.str() + " reaches the tree bottom");
    }
  };
  return reg;
}

}  // namespace acceptance
