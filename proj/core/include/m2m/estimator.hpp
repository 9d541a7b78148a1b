#pragma once

#include <cstdint>
#include <vector>

#include "m2m/rng.hpp"

namespace m2m {

/// Parameters of the geometric preamble-selection profile used in the
/// estimation RAO. Preamble j (1-based) is selected with probability
/// p0 / alpha^j, conditioned on none of the earlier preambles having
/// been selected by the same device.
struct EstimatorConfig {
    double p0 = 0.001;
    double alpha = 1.056;
    int preamble_count = 54;   ///< J
    int n_max = 60000;         ///< upper end of the estimation search range

    void validate() const;  ///< throws std::invalid_argument on violation
};

enum class PreambleState : std::uint8_t { kIdle = 0, kSingleton = 1, kCollision = 2 };

/// Ternary outcome of one estimation RAO. Only the three-valued symbol per
/// preamble is kept; raw multiplicities are never stored.
struct PreambleObservation {
    std::vector<PreambleState> states;
};

struct Estimate {
    int n_hat = 0;
    double log_likelihood = 0.0;
    bool clamped = false;  ///< maximizer hit 0 or n_max
};

/// [p0/alpha, p0/alpha^2, ..., p0/alpha^J]; strictly decreasing.
std::vector<double> selection_probabilities(const EstimatorConfig& config);

/// a_1 = 1, a_{j+1} = a_j * (1 - p_j): probability a device has not
/// transmitted any preamble before scanning preamble j.
std::vector<double> survival_factors(const EstimatorConfig& config);

/// Unconditional probability that a device transmits preamble j: a_j * p_j.
std::vector<double> transmit_probabilities(const EstimatorConfig& config);

/// One estimation RAO with n contenders, each transmitting at most one
/// preamble according to the selection profile. Deterministic per rng state.
PreambleObservation simulate_estimation_rao(int n, const EstimatorConfig& config, Rng& rng);

/// Sum over preambles of ln f(s_j | n), where f treats the number of devices
/// still able to transmit preamble j as its expectation a_j*n and the count
/// on preamble j as Binomial(a_j*n, p_j) with real-valued a_j*n.
/// Returns -inf when the observation is impossible at this n.
double log_likelihood(const PreambleObservation& obs, double n, const EstimatorConfig& config);

/// Maximum-likelihood contender count over the integers in [0, n_max].
/// Maximizes the continuous relaxation by bracketed golden-section search,
/// then compares flanking integers; ties break toward the smaller count.
Estimate estimate(const PreambleObservation& obs, const EstimatorConfig& config);

}  // namespace m2m
