#include "m2m/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace m2m {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void EstimatorConfig::validate() const {
    if (!(p0 > 0.0 && p0 <= 1.0)) throw std::invalid_argument("estimator: need 0 < p0 <= 1");
    if (!(alpha > 1.0)) throw std::invalid_argument("estimator: need alpha > 1");
    if (preamble_count < 1) throw std::invalid_argument("estimator: need J >= 1");
    if (n_max < 1) throw std::invalid_argument("estimator: need n_max >= 1");
}

std::vector<double> selection_probabilities(const EstimatorConfig& config) {
    config.validate();
    std::vector<double> p(config.preamble_count);
    double denom = config.alpha;
    for (int j = 0; j < config.preamble_count; ++j) {
        p[j] = config.p0 / denom;
        denom *= config.alpha;
    }
    return p;
}

std::vector<double> survival_factors(const EstimatorConfig& config) {
    const auto p = selection_probabilities(config);
    std::vector<double> a(p.size());
    a[0] = 1.0;
    for (std::size_t j = 1; j < p.size(); ++j) a[j] = a[j - 1] * (1.0 - p[j - 1]);
    return a;
}

std::vector<double> transmit_probabilities(const EstimatorConfig& config) {
    auto q = selection_probabilities(config);
    const auto a = survival_factors(config);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] *= a[j];
    return q;
}

PreambleObservation simulate_estimation_rao(int n, const EstimatorConfig& config, Rng& rng) {
    if (n < 0) throw std::invalid_argument("estimation RAO: need n >= 0");
    const auto q = transmit_probabilities(config);
    std::vector<double> cum(q.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        acc += q[j];
        cum[j] = acc;
    }
    std::vector<int> counts(q.size(), 0);
    for (int d = 0; d < n; ++d) {
        const double u = rng.uniform();
        if (u >= acc) continue;  // transmitted nothing
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        counts[static_cast<std::size_t>(it - cum.begin())]++;
    }
    PreambleObservation obs;
    obs.states.resize(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        obs.states[j] = counts[j] == 0   ? PreambleState::kIdle
                        : counts[j] == 1 ? PreambleState::kSingleton
                                         : PreambleState::kCollision;
    }
    return obs;
}

namespace {

struct Profile {
    std::vector<double> p;
    std::vector<double> a;
    std::vector<double> log1mp;  // ln(1 - p_j)
    std::vector<double> logp;    // ln p_j
};

Profile make_profile(const EstimatorConfig& config) {
    Profile pr;
    pr.p = selection_probabilities(config);
    pr.a = survival_factors(config);
    pr.log1mp.resize(pr.p.size());
    pr.logp.resize(pr.p.size());
    for (std::size_t j = 0; j < pr.p.size(); ++j) {
        pr.log1mp[j] = std::log1p(-pr.p[j]);
        pr.logp[j] = std::log(pr.p[j]);
    }
    return pr;
}

double log_likelihood_impl(const PreambleObservation& obs, double n, const Profile& pr) {
    double total = 0.0;
    for (std::size_t j = 0; j < obs.states.size(); ++j) {
        const double m = pr.a[j] * n;  // expected devices able to transmit preamble j
        const double log_idle = m * pr.log1mp[j];
        switch (obs.states[j]) {
            case PreambleState::kIdle:
                total += log_idle;
                break;
            case PreambleState::kSingleton: {
                if (m <= 0.0) return kNegInf;
                total += std::log(m) + pr.logp[j] + (m - 1.0) * pr.log1mp[j];
                break;
            }
            case PreambleState::kCollision: {
                const double idle = std::exp(log_idle);
                const double singleton =
                    m <= 0.0 ? 0.0 : std::exp(std::log(m) + pr.logp[j] + (m - 1.0) * pr.log1mp[j]);
                const double coll = 1.0 - idle - singleton;
                if (coll <= 0.0) return kNegInf;
                total += std::log(coll);
                break;
            }
        }
        if (total == kNegInf) return kNegInf;
    }
    return total;
}

}  // namespace

double log_likelihood(const PreambleObservation& obs, double n, const EstimatorConfig& config) {
    if (obs.states.size() != static_cast<std::size_t>(config.preamble_count))
        throw std::invalid_argument("log_likelihood: observation length != J");
    if (n < 0.0) throw std::invalid_argument("log_likelihood: need n >= 0");
    return log_likelihood_impl(obs, n, make_profile(config));
}

Estimate estimate(const PreambleObservation& obs, const EstimatorConfig& config) {
    if (obs.states.size() != static_cast<std::size_t>(config.preamble_count))
        throw std::invalid_argument("estimate: observation length != J");
    const Profile pr = make_profile(config);
    const auto f = [&](double n) { return log_likelihood_impl(obs, n, pr); };
    const double n_max = config.n_max;

    // Coarse geometric scan locates a bracket; the likelihood can be -inf on
    // an initial segment when collisions are observed.
    std::vector<double> grid{0.0};
    for (double x = 1.0; x < n_max; x *= 2.0) grid.push_back(x);
    grid.push_back(n_max);
    std::size_t best_idx = 0;
    double best_val = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if (v > best_val) {
            best_val = v;
            best_idx = i;
        }
    }
    double lo = grid[best_idx > 0 ? best_idx - 1 : 0];
    double hi = grid[std::min(best_idx + 1, grid.size() - 1)];

    // Golden-section over the bracket.
    constexpr double kGolden = 0.6180339887498949;
    double c = hi - kGolden * (hi - lo);
    double d = lo + kGolden * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > 0.25) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGolden * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGolden * (hi - lo);
            fd = f(d);
        }
    }
    const double x_star = 0.5 * (lo + hi);

    // Integer refinement; smaller count wins ties.
    std::vector<int> candidates{0, config.n_max};
    for (int base : {static_cast<int>(std::floor(x_star)), static_cast<int>(std::ceil(x_star))}) {
        for (int delta : {-1, 0, 1}) {
            const int v = base + delta;
            if (v >= 0 && v <= config.n_max) candidates.push_back(v);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    Estimate out;
    out.n_hat = candidates.front();
    out.log_likelihood = f(candidates.front());
    for (int cand : candidates) {
        const double v = f(cand);
        if (v > out.log_likelihood) {
            out.log_likelihood = v;
            out.n_hat = cand;
        }
    }
    out.clamped = (out.n_hat == 0 || out.n_hat == config.n_max);
    return out;
}

}  // namespace m2m
