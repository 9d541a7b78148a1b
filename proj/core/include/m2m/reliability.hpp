#pragma once

#include <functional>

namespace m2m {

/// Two-frame serving-phase contention space: s1 RAOs in the first frame,
/// s - s1 in the second, j preambles per RAO. s1 == s means the second
/// frame is absent.
struct ContentionSpace {
    int s1 = 1;
    int s = 2;
    int j = 54;

    int first_frame_resources() const { return s1 * j; }
    int second_frame_resources() const { return (s - s1) * j; }
    void validate() const;
};

/// Per-access-frame resource and reliability budget.
struct FrameBudget {
    int l = 400;          ///< maximum RAOs per access frame
    double tau_s = 1.0;   ///< maximum allowed delay; frame duration is tau/2
    double r_req = 0.99;  ///< required reliability, in (0,1)
    void validate() const;
};

/// Probability that a device picks a first-frame resource no other device
/// picks: (1 - 1/(s1*j))^(n-1).
double p1_success(int n, const ContentionSpace& space);

/// Second-frame success mixture over the collided-count pmf:
///   sum_{k=2}^{n} (1 - 1/((s-s1)*j))^(k-1) * Pr[N_C = k | n, s1*j].
double p2_success(int n, const ContentionSpace& space);

/// Probability that a device obtains a resource within the two-frame serving
/// phase. Combines the first-frame success probability with the second-frame
/// retry conditioned on the device itself having collided (the collided-count
/// distribution seen by a collided device is size-biased); agrees with
/// protocol-level Monte Carlo to within statistical error.
double reliability(int n, const ContentionSpace& space);

/// Reliability under an access-barring factor q: each device independently
/// participates with probability 1-q; a participant contends with the
/// binomially-thinned remainder of the other n-1 devices.
/// Exact identities: q = 0 returns reliability(n, space); q = 1 returns 0.
double reliability_with_barring(int n, double q, const ContentionSpace& space);

namespace detail {

/// (1-q) * sum_k Binom(n-1, 1-q)[k] * r_of_contenders(k+1).
/// Exact binomial summation up to n <= 2000, 6-sigma window beyond.
double barring_mixture(int n, double q, const std::function<double(int)>& r_of_contenders);

}  // namespace detail

}  // namespace m2m
