// Criterion 5: the minimal-cover-cost recurrence against brute force.  On 200
// random trees the DP value must equal an explicit enumeration of every
// admissible cover — exactly (rational exponents, exact power-sum scalars) on
// even repetitions, and to 1e-12 relative (double front end, arbitrary real
// exponent) on odd ones.  Trees whose cover count would explode are skipped
// before selection so the enumeration stays total.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <frostman/cover_dp.hpp>
#include <frostman/estimators.hpp>
#include <frostman/occupancy_tree.hpp>

#include "criteria.hpp"
#include "oracles.hpp"

namespace acceptance {

Registration crit_cover_brute() {
  Registration reg;
  reg.number = 5;
  reg.title = "cover-cost recurrence equals exhaustive enumeration on 200 random trees";
  reg.body = [](Criterion& c) {
    using namespace frostman;
    using testsupport::ExactCoverPolicy;
    constexpr std::uint64_t kCoverCap = 200000;

    std::mt19937_64 rng(20260823);
    int accepted = 0, attempts = 0, skipped = 0;
    int exact_bad = 0, real_bad = 0, total_bad = 0;
    std::string first_detail;

    while (accepted < 200 && attempts < 4000) {
      ++attempts;
      const int d = 1 + static_cast<int>(rng() % 2);
      const int depth = 2 + static_cast<int>(rng() % 7);
      const auto tree =
          testsupport::random_tree(rng, {d, depth, 3 + static_cast<int>(rng() % 16),
                                         rng() % 3 == 0});
      const int a = static_cast<int>(rng() % depth);
      const int b = a + 1 + static_cast<int>(rng() % (depth - a));

      bool tractable = true;
      for (std::uint32_t id = 0; id < tree.node_count(a) && tractable; ++id)
        tractable = testsupport::count_covers(tree, a, id, b, kCoverCap) < kCoverCap;
      if (!tractable) {
        ++skipped;
        continue;
      }

      if (accepted % 2 == 0) {
        // Exact route: s = p/q, DP on the exact scalar vs exact brute minimum.
        const long long p = 1 + static_cast<long long>(rng() % 4);
        const long long q = 1 + static_cast<long long>(rng() % 4);
        const ExactCoverPolicy pol{d, p, q};
        const auto costs = cover_node_costs(tree, a, b, pol);
        bool ok = true;
        for (std::uint32_t id = 0; id < tree.node_count(a); ++id) {
          const auto brute = testsupport::brute_min_cover_cost(tree, a, id, b, pol, kCoverCap * 2);
          if (brute.aborted || !(costs[id] == brute.min_cost)) ok = false;
        }
        const auto exact_total = cover_cost_total(tree, a, b, pol);
        const double via_double =
            cover_cost(tree, static_cast<double>(p) / static_cast<double>(q), a, b);
        const double want = exact_total.to_double();
        if (std::abs(via_double - want) > 1e-12 * std::max(1.0, std::abs(want))) ++total_bad;
        if (!ok) {
          ++exact_bad;
          if (first_detail.empty()) {
            std::ostringstream os;
            os << "exact mismatch: d=" << d << " depth=" << depth << " window [" << a << "," << b
               << "] s=" << p << "/" << q;
            first_detail = os.str();
          }
        }
      } else {
        // Real exponent: double DP vs double minimum over the explicit list.
        const double s = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        const double half_log = (d == 2) ? 0.5 : 0.0;  // log2 sqrt(d)
        double brute_total = 0;
        bool ok = true;
        for (std::uint32_t id = 0; id < tree.node_count(a); ++id) {
          const auto covers = testsupport::enumerate_covers(tree, a, id, b, kCoverCap * 2);
          if (covers.aborted) {
            ok = false;
            break;
          }
          double best = 0;
          bool first = true;
          for (const auto& hist : covers.histograms) {
            double cost = 0;
            for (std::size_t k = 0; k < hist.size(); ++k)
              cost += hist[k] * std::exp2(s * (half_log - (a + static_cast<int>(k))));
            if (first || cost < best) best = cost;
            first = false;
          }
          brute_total += best * static_cast<double>(tree.node(a, id).mult);
        }
        const double got = cover_cost(tree, s, a, b);
        if (!ok || std::abs(got - brute_total) > 1e-12 * std::max(1.0, std::abs(brute_total))) {
          ++real_bad;
          if (first_detail.empty()) {
            std::ostringstream os;
            os << "double mismatch: d=" << d << " depth=" << depth << " window [" << a << "," << b
               << "] s=" << s << " got=" << got << " brute=" << brute_total;
            first_detail = os.str();
          }
        }
      }
      ++accepted;
    }

    c.require(accepted == 200, "200 tractable instances found");
    c.require(exact_bad == 0, "exact route: all per-cube DP values equal the brute minimum");
    c.require(real_bad == 0, "double route: DP total within 1e-12 of the brute total");
    c.require(total_bad == 0, "double front end within 1e-12 of the exact total");
    if (!first_detail.empty()) c.note("first mismatch: " + first_detail);
    c.note("instances: " + std::to_string(accepted) + " accepted, " + std::to_string(skipped) +
           " skipped as intractable");
  };
  return reg;
}

}  // namespace acceptance
