#pragma once

#include <cstdint>
#include <vector>

#include "m2m/rng.hpp"

namespace m2m {

enum class TrafficClass : int { kAlarm = 1, kPeriodic = 2 };

/// Beta-activated burst: n_devices activation instants drawn from
/// t0 + activation_window * Beta(beta_a, beta_b).
struct AlarmBurst {
    int n_devices = 0;
    double activation_window_s = 10.0;
    double beta_a = 3.0;
    double beta_b = 4.0;
    void validate() const;
};

/// Aggregate periodic-reporting population, modeled as a Poisson process
/// with rate n_devices / reporting_interval.
struct PeriodicProcess {
    int n_devices = 0;
    double reporting_interval_s = 60.0;
    double rate() const { return n_devices / reporting_interval_s; }
    void validate() const;
};

struct Arrival {
    double time_s = 0.0;
    TrafficClass cls = TrafficClass::kAlarm;
    int device_id = 0;
};

/// Time-ordered arrivals; device ids unique within a class.
struct ArrivalSchedule {
    std::vector<Arrival> events;
};

ArrivalSchedule alarm_arrivals(const AlarmBurst& burst, double t0_s, Rng& rng);

ArrivalSchedule periodic_arrivals(const PeriodicProcess& proc, double horizon_s, Rng& rng);

/// Gated-arrival batching: each event joins the first frame start at or after
/// its arrival time (an arrival exactly at a frame start joins that frame).
/// Events after the last frame start land in `overflow` so that no event is
/// lost.
struct GatedBatches {
    std::vector<std::vector<const Arrival*>> batches;  // one per frame start
    std::vector<const Arrival*> overflow;
};

GatedBatches gate_arrivals(const ArrivalSchedule& schedule,
                           const std::vector<double>& frame_starts_s);

}  // namespace m2m
