#pragma once

#include <cstdint>
#include <vector>

namespace m2m {

/// Distribution of the number of singleton bins ("successful devices") when
/// n balls are thrown uniformly into m bins.
struct OccupancyPmf {
    enum class Method { kExact, kMonteCarlo };
    std::vector<double> p;  ///< p[s] = Pr[N_S = s], s = 0..n
    Method method = Method::kExact;
};

struct OccupancyOptions {
    int exact_threshold = 500;       ///< exact arbitrary-precision evaluation for n <= this
    int mc_replications = 100000;    ///< Monte Carlo replications above the threshold
    std::uint64_t mc_seed = 0x9e3779b9u;
};

/// Pr[N_S = s | n, m]: number of devices alone on their contention resource.
/// Exact via big-integer inclusion-exclusion up to the size threshold,
/// seeded Monte Carlo beyond it; the method used is reported in the result.
OccupancyPmf success_pmf(int n, int m, const OccupancyOptions& opts = {});

/// Pr[N_C = k | n, m] = Pr[N_S = n - k | n, m]: number of collided devices.
OccupancyPmf collision_pmf(int n, int m, const OccupancyOptions& opts = {});

/// Exact falling-factorial moments E[(N_S)_r] for r = 1, 2, 3, evaluated
/// stably in doubles. Used by the large-n surrogate and by tests.
struct OccupancyMoments {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
};
OccupancyMoments occupancy_factorial_moments(int n, int m);

namespace detail {

/// Exact pmf, always big-integer; cost grows roughly cubically in n.
std::vector<double> exact_success_pmf(int n, int m);

/// Skew-corrected normal surrogate on the integer grid, renormalized, with
/// the impossible outcome s = n-1 removed. Accurate to ~1e-6 for n >~ 30.
std::vector<double> surrogate_success_pmf(int n, int m);

}  // namespace detail

}  // namespace m2m
