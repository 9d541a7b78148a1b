#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "m2m/dimensioning.hpp"
#include "m2m/estimator.hpp"
#include "m2m/rng.hpp"
#include "m2m/traffic.hpp"

namespace m2m {

/// Legacy access-reservation parameters. Defaults follow the standard
/// 20 MHz configuration.
struct ArpParams {
    int preambles_per_rao = 54;
    int max_raos_per_lte_frame = 8;
    int max_retransmissions = 9;
    int msg2_window_ms = 5;
    int msg4_timer_ms = 24;
    int contention_timer_ms = 48;
    int backoff_ms = 20;
    int enb_processing_ms = 3;
    int ue_processing_ms = 3;
    std::string system_bandwidth = "20MHz";

    void validate() const;

    /// Preamble subframe start -> RAR delivered (RAR placed mid-window).
    int rar_delay_ms() const { return 1 + enb_processing_ms + (msg2_window_ms + 1) / 2; }
    /// Preamble subframe start -> contention resolution received (success).
    int success_delay_ms() const { return rar_delay_ms() + ue_processing_ms + enb_processing_ms; }
    /// Preamble subframe start -> device concludes its preamble collided.
    int failure_feedback_ms() const { return 1 + enb_processing_ms + msg2_window_ms; }
};

/// Traffic mix shared by both access schemes.
struct TrafficScenario {
    int n1 = 0;  ///< alarm-burst devices (TC1)
    double burst_start_s = 0.0;
    double activation_window_s = 10.0;
    double beta_a = 3.0;
    double beta_b = 4.0;
    double tau1_s = 1.0;  ///< TC1 latency budget; access frame lasts tau1/2

    int n2 = 0;  ///< periodic-reporting population (TC2)
    double reporting_interval_s = 60.0;
    double tau2_s = 60.0;
    double tc2_arrival_horizon_s = 0.0;  ///< 0 -> derived from the burst span
    double horizon_s = 0.0;              ///< 0 -> derived

    ArrivalSchedule make_tc1_arrivals(Rng& rng) const;
    ArrivalSchedule make_tc2_arrivals(Rng& rng) const;
    double effective_tc2_horizon_s() const;
    double effective_horizon_s() const;
    void validate() const;
};

struct LegacyOptions {
    int baseline_raos_per_frame = 2;   ///< one RAO every 5 ms
    int escalated_raos_per_frame = 8;  ///< dynamic-allocation ceiling (M2M share)
    double escalate_collision_fraction = 0.5;
    int deescalate_calm_raos = 10;
    bool dynamic_allocation = true;
};

struct ProposedOptions {
    int l = 400;  ///< gross M2M RAOs per access frame
    double r_req_1 = 0.99;
    double r_req_2 = 0.99;
    EstimatorConfig estimator{};
    bool oracle_estimates = false;  ///< feed true gated counts instead of estimating
};

/// Broadcast control message announcing the current access frame layout.
struct SibMessage {
    std::int64_t frame_start_ms = 0;
    std::int64_t broadcast_ms = 0;
    std::int64_t next_estimation_subframe_ms = 0;
    double p0 = 0.0;
    double alpha = 0.0;
    int preamble_count = 0;
    struct ClassBlock {
        TrafficClass cls;
        int serving_rao_count = 0;  ///< S
        int first_frame_size = 0;   ///< S1
        double barring_q = 0.0;
        std::vector<std::int64_t> serving_slots_ms;  ///< bitmap, absolute subframes
    };
    std::vector<ClassBlock> classes;
};

struct DeviceOutcome {
    TrafficClass cls = TrafficClass::kAlarm;
    std::int64_t arrival_ms = 0;
    std::int64_t deadline_ms = 0;
    std::int64_t complete_ms = -1;  ///< physical completion; -1 if never completed
    int preamble_tx = 0;
    bool barred = false;  ///< barred at least once
    bool success = false;  ///< completed within the latency budget
    bool failed = false;   ///< budget expired or retransmissions exhausted
};

struct ClassStats {
    TrafficClass cls = TrafficClass::kAlarm;
    long arrivals = 0;
    long successes = 0;
    long failures = 0;
    long pending = 0;  ///< unresolved at the simulation horizon
    double reliability = 0.0;
    double mean_delay_ms = 0.0;
    double p50_delay_ms = 0.0;
    double p99_delay_ms = 0.0;
    double mean_estimate = 0.0;  ///< mean per-frame contender estimate (proposed)
    double mean_barring_q = 0.0;
};

struct SimOutcome {
    std::vector<DeviceOutcome> devices;
    std::vector<ClassStats> per_class;
    std::vector<SibMessage> sibs;
    long contention_raos = 0;
    long preamble_transmissions = 0;
    double rao_utilization = 0.0;  ///< transmissions / (contention RAOs * J)
    long frames = 0;
};

/// Explicit-schedule ARP round(s), used for analytic cross-checks.
struct ArpRunConfig {
    std::vector<std::int64_t> rao_times_ms;
    bool spread_initial_attempt = false;  ///< initial RAO uniform over the schedule
    int max_retransmissions = -1;         ///< -1: take from params
    std::int64_t deadline_ms = -1;        ///< -1: unconstrained
};

SimOutcome run_arp(const std::vector<std::int64_t>& arrivals_ms, const ArpRunConfig& cfg,
                   const ArpParams& params, Rng& rng);

/// Legacy LTE access with idealized dynamic allocation (instantaneous
/// overload detection). Classes share the RACH indistinguishably.
SimOutcome run_legacy_dynamic(const TrafficScenario& scenario, const ArpParams& params,
                              const LegacyOptions& options, Rng& rng);

/// Estimation + serving access frames: per frame, gate arrivals, estimate the
/// per-class contender counts from one estimation RAO each, dimension the
/// serving phase, broadcast the layout, and run the two-frame contention.
SimOutcome run_proposed(const TrafficScenario& scenario, const ArpParams& params,
                        const ProposedOptions& options, Rng& rng);

namespace detail {
ClassStats summarize_class(TrafficClass cls, const std::vector<DeviceOutcome>& devices);
}

}  // namespace m2m
