#include "m2m/traffic.hpp"

#include <algorithm>
#include <stdexcept>

namespace m2m {

void AlarmBurst::validate() const {
    if (n_devices < 0) throw std::invalid_argument("alarm burst: need n_devices >= 0");
    if (!(activation_window_s > 0.0))
        throw std::invalid_argument("alarm burst: need activation window > 0");
    if (!(beta_a > 0.0 && beta_b > 0.0))
        throw std::invalid_argument("alarm burst: need positive beta shapes");
}

void PeriodicProcess::validate() const {
    if (n_devices < 0) throw std::invalid_argument("periodic process: need n_devices >= 0");
    if (!(reporting_interval_s > 0.0))
        throw std::invalid_argument("periodic process: need reporting interval > 0");
}

ArrivalSchedule alarm_arrivals(const AlarmBurst& burst, double t0_s, Rng& rng) {
    burst.validate();
    ArrivalSchedule out;
    out.events.reserve(static_cast<std::size_t>(burst.n_devices));
    for (int i = 0; i < burst.n_devices; ++i) {
        const double t = t0_s + burst.activation_window_s * rng.beta(burst.beta_a, burst.beta_b);
        out.events.push_back({t, TrafficClass::kAlarm, i});
    }
    std::sort(out.events.begin(), out.events.end(), [](const Arrival& a, const Arrival& b) {
        return a.time_s != b.time_s ? a.time_s < b.time_s : a.device_id < b.device_id;
    });
    return out;
}

ArrivalSchedule periodic_arrivals(const PeriodicProcess& proc, double horizon_s, Rng& rng) {
    proc.validate();
    if (!(horizon_s > 0.0)) throw std::invalid_argument("periodic arrivals: need horizon > 0");
    ArrivalSchedule out;
    if (proc.n_devices == 0) return out;
    const double rate = proc.rate();
    double t = 0.0;
    int id = 0;
    for (;;) {
        t += rng.exponential(rate);
        if (t > horizon_s) break;
        out.events.push_back({t, TrafficClass::kPeriodic, id++});
    }
    return out;
}

GatedBatches gate_arrivals(const ArrivalSchedule& schedule,
                           const std::vector<double>& frame_starts_s) {
    for (std::size_t i = 1; i < frame_starts_s.size(); ++i) {
        if (!(frame_starts_s[i] > frame_starts_s[i - 1]))
            throw std::invalid_argument("gate_arrivals: frame starts must be strictly increasing");
    }
    GatedBatches out;
    out.batches.resize(frame_starts_s.size());
    for (const Arrival& ev : schedule.events) {
        const auto it = std::lower_bound(frame_starts_s.begin(), frame_starts_s.end(), ev.time_s);
        if (it == frame_starts_s.end()) {
            out.overflow.push_back(&ev);
        } else {
            out.batches[static_cast<std::size_t>(it - frame_starts_s.begin())].push_back(&ev);
        }
    }
    return out;
}

}  // namespace m2m
