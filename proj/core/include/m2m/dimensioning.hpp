#pragma once

#include "m2m/reliability.hpp"

namespace m2m {

/// Serving-phase allocation for one traffic class.
struct ServingPlan {
    int s = 2;    ///< total serving RAOs
    int s1 = 1;   ///< first-frame size
    double q = 0.0;  ///< barring probability
    double predicted_reliability = 1.0;

    ContentionSpace space(int j) const { return ContentionSpace{s1, s, j}; }
};

enum class TwoClassRegime { kBothUnbarred = 1, kLowPriorityBarred = 2, kLowPriorityBlocked = 3 };

struct TwoClassPlan {
    ServingPlan plan1;
    ServingPlan plan2;
    TwoClassRegime regime = TwoClassRegime::kBothUnbarred;
};

struct SplitChoice {
    int s1 = 1;
    double reliability = 0.0;
};

/// argmax over s1 in {1..s_total-1} of reliability(n, {s1, s_total, j});
/// ties break toward the smaller s1. Full scan for s_total <= 512 (or when
/// exhaustive is set); ternary search on the empirically unimodal profile
/// above that.
SplitChoice optimal_split(int n, int s_total, int j, bool exhaustive = false);

struct Requirement {
    int s = 2;
    int s1 = 1;
    double reliability = 1.0;
};

/// Smallest total serving size whose best split meets r_req, found by
/// exponential bracketing plus binary search (max-over-splits reliability is
/// nondecreasing in s). n <= 0 returns the minimal two-frame structure.
Requirement required_raos(int n, double r_req, int j);

/// argmax over q in [0,1] of reliability_with_barring, via a 1e-2 coarse grid
/// refined locally to 1e-4. Ties break toward the smaller q.
double optimal_barring(int n, const ContentionSpace& space);

/// Single-class serving-phase dimensioning: unbarred (q = 0, s = S_req) when
/// the requirement fits within L-1, otherwise s = L-1 with the optimal
/// barring factor.
ServingPlan dimension_single(int n_hat, const FrameBudget& budget, int j);

/// Two-class dimensioning with strict priority for class 1:
///  (i) both requirements fit within L-2: both unbarred;
///  (ii) class 1 fits but the sum does not: class 2 gets the residual RAOs
///       and a barring factor;
///  (iii) class 1 alone exceeds L-2: class 2 fully blocked (q = 1, s = 0),
///        class 1 gets L-2 RAOs and a barring factor.
TwoClassPlan dimension_two_class(int n_hat_1, int n_hat_2, double r_req_1, double r_req_2, int l,
                                 int j);

}  // namespace m2m
