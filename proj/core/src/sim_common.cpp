#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "m2m/sim.hpp"

namespace m2m {

void ArpParams::validate() const {
    if (preambles_per_rao < 1) throw std::invalid_argument("arp: need preambles_per_rao >= 1");
    if (max_raos_per_lte_frame < 1 || max_raos_per_lte_frame > 10)
        throw std::invalid_argument("arp: need 1 <= max_raos_per_lte_frame <= 10");
    if (max_retransmissions < 0) throw std::invalid_argument("arp: need max_retransmissions >= 0");
    if (msg2_window_ms < 1 || msg4_timer_ms < 1 || contention_timer_ms < 1)
        throw std::invalid_argument("arp: timers must be positive");
    if (backoff_ms < 0) throw std::invalid_argument("arp: need backoff >= 0");
    if (enb_processing_ms < 0 || ue_processing_ms < 0)
        throw std::invalid_argument("arp: processing times must be >= 0");
}

void TrafficScenario::validate() const {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("scenario: device counts must be >= 0");
    if (!(activation_window_s > 0.0)) throw std::invalid_argument("scenario: window must be > 0");
    if (!(tau1_s > 0.0 && tau2_s > 0.0)) throw std::invalid_argument("scenario: tau must be > 0");
    if (!(reporting_interval_s > 0.0))
        throw std::invalid_argument("scenario: reporting interval must be > 0");
    if (burst_start_s < 0.0) throw std::invalid_argument("scenario: burst start must be >= 0");
}

ArrivalSchedule TrafficScenario::make_tc1_arrivals(Rng& rng) const {
    AlarmBurst burst{n1, activation_window_s, beta_a, beta_b};
    return alarm_arrivals(burst, burst_start_s, rng);
}

ArrivalSchedule TrafficScenario::make_tc2_arrivals(Rng& rng) const {
    PeriodicProcess proc{n2, reporting_interval_s};
    if (n2 == 0) return {};
    return periodic_arrivals(proc, effective_tc2_horizon_s(), rng);
}

double TrafficScenario::effective_tc2_horizon_s() const {
    if (tc2_arrival_horizon_s > 0.0) return tc2_arrival_horizon_s;
    return burst_start_s + activation_window_s + 2.0 * tau1_s;
}

double TrafficScenario::effective_horizon_s() const {
    if (horizon_s > 0.0) return horizon_s;
    double h = burst_start_s + activation_window_s + 3.0 * tau1_s;
    if (n2 > 0) h = std::max(h, effective_tc2_horizon_s() + tau2_s + tau1_s);
    return h;
}

namespace detail {

namespace {
double percentile(std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(sorted.size()))) - 1;
    return sorted[std::min(idx, sorted.size() - 1)];
}
}  // namespace

ClassStats summarize_class(TrafficClass cls, const std::vector<DeviceOutcome>& devices) {
    ClassStats st;
    st.cls = cls;
    std::vector<double> delays;
    for (const auto& d : devices) {
        if (d.cls != cls) continue;
        st.arrivals++;
        if (d.success) {
            st.successes++;
            delays.push_back(static_cast<double>(d.complete_ms - d.arrival_ms));
        } else if (d.failed) {
            st.failures++;
        } else {
            st.pending++;
        }
    }
    st.reliability = st.arrivals > 0 ? static_cast<double>(st.successes) / st.arrivals : 0.0;
    if (!delays.empty()) {
        std::sort(delays.begin(), delays.end());
        double sum = 0.0;
        for (double d : delays) sum += d;
        st.mean_delay_ms = sum / static_cast<double>(delays.size());
        st.p50_delay_ms = percentile(delays, 0.50);
        st.p99_delay_ms = percentile(delays, 0.99);
    }
    return st;
}

}  // namespace detail

}  // namespace m2m
