#include "m2m/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "m2m/occupancy.hpp"

namespace m2m {

void ContentionSpace::validate() const {
    if (s1 < 1) throw std::invalid_argument("contention space: need s1 >= 1");
    if (s < s1) throw std::invalid_argument("contention space: need s >= s1");
    if (j < 1) throw std::invalid_argument("contention space: need j >= 1");
}

void FrameBudget::validate() const {
    if (l < 2) throw std::invalid_argument("frame budget: need L >= 2");
    if (!(tau_s > 0.0)) throw std::invalid_argument("frame budget: need tau > 0");
    if (!(r_req > 0.0 && r_req < 1.0))
        throw std::invalid_argument("frame budget: need 0 < r_req < 1");
}

namespace {

// The closed forms feed threshold searches evaluated thousands of times, so
// the collided-count pmf switches from exact big-integer evaluation to the
// moment-matched surrogate at a much lower count than the public
// success_pmf() surface does. The surrogate is indistinguishable from exact
// past a few dozen devices (validated in tests).
constexpr int kInternalExactMax = 64;

struct SparsePmf {
    int lo = 0;                // first singleton count with nonzero mass
    std::vector<double> w;     // w[i] = Pr[N_S = lo + i]
};

SparsePmf internal_pmf(int n, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, SparsePmf> cache;
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.try_emplace({n, m});
    if (inserted) {
        const std::vector<double> dense = n <= kInternalExactMax
                                              ? detail::exact_success_pmf(n, m)
                                              : detail::surrogate_success_pmf(n, m);
        std::size_t lo = 0;
        std::size_t hi = dense.size();
        while (lo < hi && dense[lo] == 0.0) ++lo;
        while (hi > lo && dense[hi - 1] == 0.0) --hi;
        it->second.lo = static_cast<int>(lo);
        it->second.w.assign(dense.begin() + static_cast<std::ptrdiff_t>(lo),
                            dense.begin() + static_cast<std::ptrdiff_t>(hi));
        if (cache.size() > 2048) {
            auto victim = cache.begin();
            if (victim == it) ++victim;
            cache.erase(victim);
        }
    }
    return it->second;
}

struct CollidedMixtures {
    double plain = 0.0;        // sum_{k>=2} beta^(k-1) Pr[C=k]
    double size_biased = 0.0;  // sum_{k>=2} (k/n) beta^(k-1) Pr[C=k]
};

CollidedMixtures collided_mixtures(int n, int m1, double beta) {
    CollidedMixtures out;
    const SparsePmf pmf = internal_pmf(n, m1);
    const double log_beta = beta > 0.0 ? std::log(beta) : 0.0;
    for (std::size_t i = 0; i < pmf.w.size(); ++i) {
        const double w = pmf.w[i];
        if (w <= 0.0) continue;
        const int k = n - (pmf.lo + static_cast<int>(i));
        if (k < 2) continue;
        const double factor = beta > 0.0 ? std::exp((k - 1) * log_beta) : 0.0;
        out.plain += w * factor;
        out.size_biased += w * factor * (static_cast<double>(k) / n);
    }
    return out;
}

}  // namespace

double p1_success(int n, const ContentionSpace& space) {
    space.validate();
    if (n < 1) throw std::invalid_argument("p1_success: need n >= 1");
    const double m1 = space.first_frame_resources();
    return std::exp((n - 1) * std::log1p(-1.0 / m1));
}

double p2_success(int n, const ContentionSpace& space) {
    space.validate();
    if (n < 1) throw std::invalid_argument("p2_success: need n >= 1");
    if (space.s <= space.s1) return 0.0;
    if (n < 2) return 0.0;  // the k >= 2 sum is empty
    const int m2 = space.second_frame_resources();
    const double beta = 1.0 - 1.0 / m2;
    return collided_mixtures(n, space.first_frame_resources(), beta).plain;
}

double reliability(int n, const ContentionSpace& space) {
    space.validate();
    if (n < 0) throw std::invalid_argument("reliability: need n >= 0");
    if (n <= 1) return 1.0;
    const double p1 = p1_success(n, space);
    const int m2 = space.second_frame_resources();
    if (m2 <= 0) return p1;
    const double beta = 1.0 - 1.0 / m2;
    // sum_{k>=2} (k/n) beta^(k-1) Pr[C=k] is the unconditional probability of
    // colliding in frame one and winning the frame-two retry.
    return p1 + collided_mixtures(n, space.first_frame_resources(), beta).size_biased;
}

namespace detail {

double barring_mixture(int n, double q, const std::function<double(int)>& r_of_contenders) {
    const int others = n - 1;
    if (others == 0) return (1.0 - q) * r_of_contenders(1);
    const double participate = 1.0 - q;
    const double log_p = std::log(participate);
    const double log_q = std::log(q);
    double acc = 0.0;
    if (n <= 2000) {
        // exact binomial summation
        double log_choose = 0.0;  // ln C(others, k), built incrementally
        for (int k = 0; k <= others; ++k) {
            if (k > 0) log_choose += std::log(static_cast<double>(others - k + 1) / k);
            const double lw = log_choose + k * log_p + (others - k) * log_q;
            if (lw > -745.0) acc += std::exp(lw) * r_of_contenders(k + 1);
        }
        return participate * acc;
    }
    // deterministic window, weights truncated at 6 standard deviations
    const double mean = others * participate;
    const double sd = std::sqrt(others * participate * q);
    const int lo = std::max(0, static_cast<int>(std::floor(mean - 6.0 * sd)));
    const int hi = std::min(others, static_cast<int>(std::ceil(mean + 6.0 * sd)));
    std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
    double total = 0.0;
    for (int k = lo; k <= hi; ++k) {
        const double lw = std::lgamma(others + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(others - k + 1.0) + k * log_p + (others - k) * log_q;
        const double wk = std::exp(lw);
        w[static_cast<std::size_t>(k - lo)] = wk;
        total += wk;
    }
    for (int k = lo; k <= hi; ++k) {
        acc += w[static_cast<std::size_t>(k - lo)] / total * r_of_contenders(k + 1);
    }
    return participate * acc;
}

}  // namespace detail

double reliability_with_barring(int n, double q, const ContentionSpace& space) {
    space.validate();
    if (n < 1) throw std::invalid_argument("reliability_with_barring: need n >= 1");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("reliability_with_barring: need q in [0,1]");
    if (q == 0.0) return reliability(n, space);
    if (q == 1.0) return 0.0;
    return detail::barring_mixture(n, q, [&](int k) { return reliability(k, space); });
}

}  // namespace m2m
