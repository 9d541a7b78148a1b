#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "m2m/estimator.hpp"

using namespace m2m;

namespace {

PreambleObservation obs_of(std::vector<PreambleState> states) {
    return PreambleObservation{std::move(states)};
}

constexpr auto kIdle = PreambleState::kIdle;
constexpr auto kSingle = PreambleState::kSingleton;
constexpr auto kColl = PreambleState::kCollision;

}  // namespace

TEST_CASE("selection probabilities follow the geometric profile") {
    const auto p = selection_probabilities({0.5, 2.0, 2, 100});
    REQUIRE(p.size() == 2);
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.125).epsilon(1e-12));

    const auto q = selection_probabilities({0.001, 1.056, 2, 100});
    CHECK(std::abs(q[0] - 9.4697e-4) < 1e-8);
    CHECK(std::abs(q[1] - 8.9675e-4) < 1e-8);

    const auto r = selection_probabilities({1.0, 1.0 + 1e-9, 1, 100});
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-6));

    const auto full = selection_probabilities({0.001, 1.056, 54, 60000});
    for (std::size_t j = 1; j < full.size(); ++j) {
        CHECK(full[j] < full[j - 1]);
        CHECK(full[j] > 0.0);
        CHECK(full[j] < 1.0);
    }
}

TEST_CASE("config invariants are enforced") {
    CHECK_THROWS_AS(selection_probabilities({0.0, 2.0, 2, 100}), std::invalid_argument);
    CHECK_THROWS_AS(selection_probabilities({1.5, 2.0, 2, 100}), std::invalid_argument);
    CHECK_THROWS_AS(selection_probabilities({0.5, 1.0, 2, 100}), std::invalid_argument);
    CHECK_THROWS_AS(selection_probabilities({0.5, 2.0, 0, 100}), std::invalid_argument);
    CHECK_THROWS_AS(selection_probabilities({0.5, 2.0, 2, 0}), std::invalid_argument);
}

TEST_CASE("survival factors start at one and decay") {
    const auto a = survival_factors({0.5, 2.0, 2, 100});
    REQUIRE(a.size() == 2);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(0.75).epsilon(1e-12));

    const auto tiny = survival_factors({1e-9, 1.056, 54, 100});
    for (double v : tiny) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

    const auto big = survival_factors({0.9, 1.1, 10, 100});
    for (std::size_t j = 1; j < big.size(); ++j) CHECK(big[j] <= big[j - 1]);
}

TEST_CASE("a device transmits at most one preamble in expectation") {
    for (const EstimatorConfig cfg :
         {EstimatorConfig{0.9, 1.05, 20, 100}, EstimatorConfig{0.001, 1.056, 54, 100}}) {
        const auto q = transmit_probabilities(cfg);
        double total = 0.0;
        for (double v : q) total += v;
        CHECK(total <= 1.0 + 1e-12);
    }
}

TEST_CASE("estimation RAO with no devices is all idle") {
    Rng rng(1);
    const auto obs = simulate_estimation_rao(0, {0.001, 1.056, 54, 60000}, rng);
    for (auto s : obs.states) CHECK(s == kIdle);
}

TEST_CASE("one device with a forced first preamble") {
    Rng rng(1);
    const auto obs = simulate_estimation_rao(1, {1.0, 1.0 + 1e-12, 2, 100}, rng);
    CHECK(obs.states[0] == kSingle);
    CHECK(obs.states[1] == kIdle);
}

TEST_CASE("per-preamble singleton frequencies match the a_j * p_j profile") {
    // The observation hides multiplicities, so check the per-preamble
    // transmit probability q_j = a_j * p_j through the singleton frequency,
    // which is n * q_j * (1 - q_j)^(n-1) exactly.
    const EstimatorConfig cfg{0.001, 1.056, 54, 60000};
    const auto q = transmit_probabilities(cfg);
    const int n = 10000;
    const int reps = 10000;
    Rng rng(20240917);
    std::vector<long> singleton_counts(q.size(), 0);
    for (int r = 0; r < reps; ++r) {
        const auto obs = simulate_estimation_rao(n, cfg, rng);
        for (std::size_t j = 0; j < obs.states.size(); ++j) {
            if (obs.states[j] == kSingle) singleton_counts[j]++;
        }
    }
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double p_single = n * q[j] * std::exp((n - 1) * std::log1p(-q[j]));
        const double se = std::sqrt(reps * p_single * (1.0 - p_single));
        CAPTURE(j);
        CHECK(std::abs(static_cast<double>(singleton_counts[j]) - reps * p_single) <=
              3.9 * se + 1e-9);
    }
}

TEST_CASE("log likelihood on the stated anchor points") {
    // all idle at n = 0: every factor is 1
    const EstimatorConfig cfg{0.001, 1.056, 3, 100};
    CHECK(log_likelihood(obs_of({kIdle, kIdle, kIdle}), 0.0, cfg) == 0.0);
    // impossible events at n = 0
    CHECK(log_likelihood(obs_of({kColl, kIdle, kIdle}), 0.0, cfg) ==
          -std::numeric_limits<double>::infinity());
    CHECK(log_likelihood(obs_of({kSingle, kIdle, kIdle}), 0.0, cfg) ==
          -std::numeric_limits<double>::infinity());
    // J=1, p_1 = 0.5, singleton at n = 2: ln(2 * 0.5 * 0.5) = ln(0.5)
    const EstimatorConfig one{0.525, 1.05, 1, 100};
    CHECK(selection_probabilities(one)[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(log_likelihood(obs_of({kSingle}), 2.0, one) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("degenerate observations clamp at the range ends") {
    const EstimatorConfig cfg{0.001, 1.056, 54, 60000};
    const auto all_idle = estimate(obs_of(std::vector<PreambleState>(54, kIdle)), cfg);
    CHECK(all_idle.n_hat == 0);
    CHECK(all_idle.clamped);

    const auto all_coll = estimate(obs_of(std::vector<PreambleState>(54, kColl)), cfg);
    CHECK(all_coll.n_hat == 60000);
    CHECK(all_coll.clamped);
}

TEST_CASE("estimate equals the exhaustive grid maximizer") {
    const EstimatorConfig cfg{0.3, 1.2, 8, 200};
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_true = static_cast<int>(rng.below(180));
        const auto obs = simulate_estimation_rao(n_true, cfg, rng);
        const auto est = estimate(obs, cfg);
        int best_n = 0;
        double best = log_likelihood(obs, 0.0, cfg);
        for (int n = 1; n <= cfg.n_max; ++n) {
            const double v = log_likelihood(obs, n, cfg);
            if (v > best) {
                best = v;
                best_n = n;
            }
        }
        CAPTURE(trial);
        CAPTURE(n_true);
        CHECK(est.n_hat == best_n);
        CHECK(est.log_likelihood == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("estimate is deterministic") {
    const EstimatorConfig cfg{0.001, 1.056, 54, 60000};
    Rng rng(5);
    const auto obs = simulate_estimation_rao(4000, cfg, rng);
    const auto a = estimate(obs, cfg);
    const auto b = estimate(obs, cfg);
    CHECK(a.n_hat == b.n_hat);
    CHECK(a.log_likelihood == b.log_likelihood);
    CHECK(a.clamped == b.clamped);
}

TEST_CASE("growing collision prefix pushes the estimate up") {
    const EstimatorConfig cfg{0.3, 1.2, 8, 5000};
    int prev = 0;
    for (int k = 0; k <= 8; ++k) {
        std::vector<PreambleState> states(8, kIdle);
        for (int j = 0; j < k; ++j) states[static_cast<std::size_t>(j)] = kColl;
        const auto est = estimate(obs_of(states), cfg);
        CHECK(est.n_hat >= prev);
        prev = est.n_hat;
    }
}
