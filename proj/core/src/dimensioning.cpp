#include "m2m/dimensioning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace m2m {

namespace {

constexpr int kFullScanMax = 512;
constexpr int kSearchCap = 1 << 21;

SplitChoice scan_range(int n, int s_total, int j, int lo, int hi) {
    SplitChoice best{lo, -1.0};
    for (int s1 = lo; s1 <= hi; ++s1) {
        const double r = reliability(n, ContentionSpace{s1, s_total, j});
        if (r > best.reliability) best = {s1, r};
    }
    return best;
}

}  // namespace

SplitChoice optimal_split(int n, int s_total, int j, bool exhaustive) {
    if (s_total < 2) throw std::invalid_argument("optimal_split: need s_total >= 2");
    if (s_total == 2) return {1, reliability(n, ContentionSpace{1, 2, j})};
    if (exhaustive || s_total <= kFullScanMax) return scan_range(n, s_total, j, 1, s_total - 1);
    int lo = 1;
    int hi = s_total - 1;
    while (hi - lo > 8) {
        const int m1 = lo + (hi - lo) / 3;
        const int m2 = hi - (hi - lo) / 3;
        const double f1 = reliability(n, ContentionSpace{m1, s_total, j});
        const double f2 = reliability(n, ContentionSpace{m2, s_total, j});
        if (f1 < f2) {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }
    return scan_range(n, s_total, j, lo, hi);
}

Requirement required_raos(int n, double r_req, int j) {
    if (!(r_req > 0.0 && r_req < 1.0))
        throw std::invalid_argument("required_raos: need 0 < r_req < 1");
    if (j < 1) throw std::invalid_argument("required_raos: need j >= 1");
    if (n <= 1) return {2, 1, 1.0};
    auto best_at = [&](int s) { return optimal_split(n, s, j); };
    int hi = 2;
    SplitChoice choice = best_at(hi);
    while (choice.reliability < r_req) {
        if (hi > kSearchCap) throw std::runtime_error("required_raos: search cap exceeded");
        hi *= 2;
        choice = best_at(hi);
    }
    int lo = hi / 2;  // known to fail (or hi == 2)
    if (hi == 2) return {2, choice.s1, choice.reliability};
    while (lo + 1 < hi) {
        const int mid = lo + (hi - lo) / 2;
        const SplitChoice c = best_at(mid);
        if (c.reliability >= r_req) {
            hi = mid;
            choice = c;
        } else {
            lo = mid;
        }
    }
    return {hi, choice.s1, choice.reliability};
}

double optimal_barring(int n, const ContentionSpace& space) {
    space.validate();
    if (n < 1) throw std::invalid_argument("optimal_barring: need n >= 1");

    // R(k) is shared across the whole q-grid.
    std::vector<double> r_cache(static_cast<std::size_t>(n) + 1,
                                -1.0);
    auto r_of = [&](int k) {
        auto& slot = r_cache[static_cast<std::size_t>(k)];
        if (slot < 0.0) slot = reliability(k, space);
        return slot;
    };
    auto rq = [&](double q) {
        if (q <= 0.0) return r_of(n);
        if (q >= 1.0) return 0.0;
        return detail::barring_mixture(n, q, r_of);
    };

    double best_q = 0.0;
    double best_val = rq(0.0);
    auto consider = [&](double q) {
        const double v = rq(q);
        if (v > best_val + 1e-15) {
            best_val = v;
            best_q = q;
        }
    };
    for (int i = 1; i <= 100; ++i) consider(i * 1e-2);
    const double coarse = best_q;
    for (int i = -9; i <= 9; ++i) {
        const double q = coarse + i * 1e-3;
        if (q > 0.0 && q < 1.0 && i != 0) consider(q);
    }
    const double fine = best_q;
    for (int i = -9; i <= 9; ++i) {
        const double q = fine + i * 1e-4;
        if (q > 0.0 && q < 1.0 && i != 0) consider(q);
    }
    return best_q;
}

ServingPlan dimension_single(int n_hat, const FrameBudget& budget, int j) {
    budget.validate();
    if (j < 1) throw std::invalid_argument("dimension_single: need j >= 1");
    if (n_hat <= 0) return ServingPlan{2, 1, 0.0, 1.0};
    const Requirement req = required_raos(n_hat, budget.r_req, j);
    if (req.s <= budget.l - 1) {
        return ServingPlan{req.s, req.s1, 0.0, req.reliability};
    }
    const int s = budget.l - 1;
    const SplitChoice split = optimal_split(n_hat, s, j);
    const ContentionSpace space{split.s1, s, j};
    const double q = optimal_barring(n_hat, space);
    return ServingPlan{s, split.s1, q, reliability_with_barring(n_hat, q, space)};
}

namespace {

ServingPlan constrained_plan(int n_hat, int s, int j) {
    // Serving allocation when a class is squeezed below its requirement:
    // best split of the s available RAOs plus the optimal barring factor.
    if (s <= 0) return ServingPlan{0, 0, 1.0, 0.0};
    if (n_hat <= 0) return ServingPlan{std::min(s, 2), std::min(s, 2) == 2 ? 1 : s, 0.0, 1.0};
    SplitChoice split;
    if (s == 1) {
        split = {1, reliability(n_hat, ContentionSpace{1, 1, j})};
    } else {
        split = optimal_split(n_hat, s, j);
    }
    const ContentionSpace space{split.s1, s, j};
    const double q = optimal_barring(n_hat, space);
    return ServingPlan{s, split.s1, q, reliability_with_barring(n_hat, q, space)};
}

}  // namespace

TwoClassPlan dimension_two_class(int n_hat_1, int n_hat_2, double r_req_1, double r_req_2, int l,
                                 int j) {
    if (l < 4) throw std::invalid_argument("dimension_two_class: need L >= 4");
    const Requirement req1 =
        n_hat_1 > 0 ? required_raos(n_hat_1, r_req_1, j) : Requirement{2, 1, 1.0};
    const Requirement req2 =
        n_hat_2 > 0 ? required_raos(n_hat_2, r_req_2, j) : Requirement{2, 1, 1.0};
    const int budget = l - 2;

    TwoClassPlan out;
    if (req1.s + req2.s <= budget) {
        out.regime = TwoClassRegime::kBothUnbarred;
        out.plan1 = ServingPlan{req1.s, req1.s1, 0.0, req1.reliability};
        out.plan2 = ServingPlan{req2.s, req2.s1, 0.0, req2.reliability};
        return out;
    }
    if (req1.s < budget) {
        out.regime = TwoClassRegime::kLowPriorityBarred;
        out.plan1 = ServingPlan{req1.s, req1.s1, 0.0, req1.reliability};
        out.plan2 = constrained_plan(n_hat_2, budget - req1.s, j);
        return out;
    }
    out.regime = TwoClassRegime::kLowPriorityBlocked;
    out.plan1 = constrained_plan(n_hat_1, budget, j);
    out.plan2 = ServingPlan{0, 0, 1.0, 0.0};
    return out;
}

}  // namespace m2m
