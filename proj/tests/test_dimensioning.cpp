#include <cmath>
#include <vector>

#include "doctest.h"
#include "m2m/dimensioning.hpp"

using namespace m2m;

namespace {

/// Dense-grid oracle for the barring maximizer, sharing one R(k) cache the
/// way the implementation does.
double dense_barring_scan(int n, const ContentionSpace& space, double step) {
    std::vector<double> cache(static_cast<std::size_t>(n) + 1, -1.0);
    auto r_of = [&](int k) {
        auto& slot = cache[static_cast<std::size_t>(k)];
        if (slot < 0.0) slot = reliability(k, space);
        return slot;
    };
    double best_q = 0.0;
    double best = r_of(n);
    for (double q = step; q < 1.0 + 1e-12; q += step) {
        const double qq = std::min(q, 1.0);
        const double v = qq >= 1.0 ? 0.0 : detail::barring_mixture(n, qq, r_of);
        if (v > best + 1e-15) {
            best = v;
            best_q = qq;
        }
    }
    return best_q;
}

}  // namespace

TEST_CASE("optimal split degenerate and oracle cells") {
    CHECK(optimal_split(5, 2, 3).s1 == 1);

    {
        // exhaustive scan over the three candidate splits
        const auto got = optimal_split(2, 4, 1);
        int best_s1 = 1;
        double best = -1.0;
        for (int s1 = 1; s1 <= 3; ++s1) {
            const double r = reliability(2, ContentionSpace{s1, 4, 1});
            if (r > best) {
                best = r;
                best_s1 = s1;
            }
        }
        CHECK(got.s1 == best_s1);
        CHECK(got.reliability == doctest::Approx(best).epsilon(1e-12));
    }

    {
        const auto got = optimal_split(1000, 40, 54);
        for (int s1 = 1; s1 < 40; ++s1) {
            CHECK(got.reliability >= reliability(1000, ContentionSpace{s1, 40, 54}) - 1e-12);
        }
    }
}

TEST_CASE("ternary split search agrees with the exhaustive mode") {
    for (int n : {800, 5000}) {
        const auto fast = optimal_split(n, 600, 54);
        const auto full = optimal_split(n, 600, 54, /*exhaustive=*/true);
        CHECK(fast.reliability == doctest::Approx(full.reliability).epsilon(1e-10));
    }
}

TEST_CASE("required RAOs basics") {
    const auto lone = required_raos(1, 0.999, 54);
    CHECK(lone.s == 2);
    CHECK(lone.reliability == 1.0);
    CHECK(required_raos(0, 0.9, 4).s == 2);

    const auto a = required_raos(1000, 0.99, 54);
    const auto b = required_raos(2000, 0.99, 54);
    CHECK(b.s >= a.s);

    // definition check: meets the target at S_req, misses it at S_req - 1
    const auto req = required_raos(100, 0.99, 54);
    CHECK(req.reliability >= 0.99);
    CHECK(optimal_split(100, req.s, 54).reliability >= 0.99);
    CHECK(optimal_split(100, req.s - 1, 54).reliability < 0.99);
}

TEST_CASE("required RAOs is monotone in the reliability target") {
    const auto lo = required_raos(500, 0.9, 54);
    const auto hi = required_raos(500, 0.999, 54);
    CHECK(hi.s >= lo.s);
}

TEST_CASE("barring optimum is zero when uncongested") {
    CHECK(optimal_barring(5, ContentionSpace{2, 4, 4}) == 0.0);
}

TEST_CASE("two-device single-resource barring has the analytic optimum") {
    // R_Q(2, q) = (1-q) * [q * R(1) + (1-q) * R(2)] with R(2) = 0: maximum at 0.5
    const ContentionSpace space{1, 2, 1};
    const double got = optimal_barring(2, space);
    CHECK(std::abs(got - 0.5) <= 1e-4 + 1e-12);
    CHECK(std::abs(dense_barring_scan(2, space, 1e-3) - got) <= 1e-3 + 1e-12);
}

TEST_CASE("barring maximizer matches a dense grid scan") {
    struct Cell {
        int n;
        ContentionSpace space;
    };
    const std::vector<Cell> cells{
        {2, ContentionSpace{1, 2, 1}},
        {60, ContentionSpace{1, 3, 8}},
        {1500, ContentionSpace{optimal_split(1500, 40, 54).s1, 40, 54}},
    };
    for (const auto& cell : cells) {
        CAPTURE(cell.n);
        const double got = optimal_barring(cell.n, cell.space);
        const double oracle = dense_barring_scan(cell.n, cell.space, 1e-3);
        CHECK(std::abs(got - oracle) <= 1e-3 + 1e-12);
    }
}

TEST_CASE("single-class dimensioning follows the two regimes") {
    const ServingPlan tiny = dimension_single(1, FrameBudget{400, 1.0, 0.99}, 54);
    CHECK(tiny.s == 2);
    CHECK(tiny.q == 0.0);

    // boundary: budget set so the requirement equals L-1 exactly
    const Requirement req = required_raos(700, 0.99, 54);
    const ServingPlan at_edge = dimension_single(700, FrameBudget{req.s + 1, 1.0, 0.99}, 54);
    CHECK(at_edge.s == req.s);
    CHECK(at_edge.q == 0.0);
    CHECK(at_edge.predicted_reliability >= 0.99);

    // one RAO short of the requirement: barred regime
    const ServingPlan barred = dimension_single(700, FrameBudget{req.s, 1.0, 0.99}, 54);
    CHECK(barred.s == req.s - 1);

    const ServingPlan deep = dimension_single(30000, FrameBudget{400, 1.0, 0.99}, 54);
    CHECK(deep.s == 399);
    CHECK(deep.q > 0.0);
    CHECK(deep.predicted_reliability > 0.0);
}

TEST_CASE("plan invariants over a sweep") {
    for (int n_hat : {0, 1, 10, 100, 1000, 4000}) {
        const FrameBudget budget{60, 1.0, 0.99};
        const ServingPlan plan = dimension_single(n_hat, budget, 8);
        CHECK(plan.s <= budget.l - 1);
        CHECK(plan.s1 >= 1);
        CHECK(plan.s1 <= plan.s);
        if (n_hat > 0) {
            const bool fits = required_raos(n_hat, budget.r_req, 8).s <= budget.l - 1;
            if (fits) {
                CHECK(plan.q == 0.0);
            } else {
                CHECK(plan.s == budget.l - 1);
            }
        }
    }
}

TEST_CASE("two-class dimensioning reproduces the three regimes") {
    const int l = 60;
    const int j = 8;

    const TwoClassPlan tiny = dimension_two_class(5, 5, 0.99, 0.99, l, j);
    CHECK(tiny.regime == TwoClassRegime::kBothUnbarred);
    CHECK(tiny.plan1.q == 0.0);
    CHECK(tiny.plan2.q == 0.0);
    CHECK(tiny.plan1.s == required_raos(5, 0.99, j).s);
    CHECK(tiny.plan2.s == required_raos(5, 0.99, j).s);

    // class 1 fits comfortably, class 2 overflows the residual
    const int n1 = 40;
    const int req1 = required_raos(n1, 0.99, j).s;
    REQUIRE(req1 < l - 2);
    const TwoClassPlan squeezed = dimension_two_class(n1, 4000, 0.99, 0.99, l, j);
    CHECK(squeezed.regime == TwoClassRegime::kLowPriorityBarred);
    CHECK(squeezed.plan1.q == 0.0);
    CHECK(squeezed.plan1.s == req1);
    CHECK(squeezed.plan2.s == l - 2 - req1);
    CHECK(squeezed.plan2.q > 0.0);
    CHECK(squeezed.plan1.s + squeezed.plan2.s == l - 2);

    const TwoClassPlan blocked = dimension_two_class(50000, 10, 0.99, 0.99, l, j);
    CHECK(blocked.regime == TwoClassRegime::kLowPriorityBlocked);
    CHECK(blocked.plan1.s == l - 2);
    CHECK(blocked.plan1.q > 0.0);
    CHECK(blocked.plan2.s == 0);
    CHECK(blocked.plan2.q == 1.0);
}

TEST_CASE("two-class plans never exceed the serving budget") {
    const int l = 40;
    const int j = 4;
    for (int n1 : {0, 3, 30, 300, 3000}) {
        for (int n2 : {0, 3, 300, 30000}) {
            const TwoClassPlan plan = dimension_two_class(n1, n2, 0.99, 0.9, l, j);
            CAPTURE(n1);
            CAPTURE(n2);
            CHECK(plan.plan1.s + plan.plan2.s <= l - 2);
            if (plan.regime == TwoClassRegime::kLowPriorityBlocked) {
                CHECK(plan.plan2.q == 1.0);
                CHECK(plan.plan2.s == 0);
            }
        }
    }
}
