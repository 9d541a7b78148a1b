#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "m2m/sim.hpp"

namespace m2m {

namespace {

struct Attempt {
    std::int64_t ready_ms;
    int device;
    bool operator>(const Attempt& o) const {
        return ready_ms != o.ready_ms ? ready_ms > o.ready_ms : device > o.device;
    }
};

using AttemptQueue = std::priority_queue<Attempt, std::vector<Attempt>, std::greater<Attempt>>;

struct ContestResult {
    long raos_used = 0;
    long transmissions = 0;
};

/// One RAO's contention: draws a preamble per participant (in queue order),
/// completes singletons, hands collided devices to on_collision.
template <typename OnCollision>
void contest_rao(std::int64_t rao_ms, const std::vector<int>& participants,
                 std::vector<DeviceOutcome>& devices, const ArpParams& params, Rng& rng,
                 ContestResult& result, OnCollision&& on_collision) {
    const int j = params.preambles_per_rao;
    static thread_local std::vector<int> counts;
    counts.assign(static_cast<std::size_t>(j), 0);
    static thread_local std::vector<int> picks;
    picks.resize(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        const int pre = static_cast<int>(rng.below(static_cast<std::uint64_t>(j)));
        picks[i] = pre;
        counts[static_cast<std::size_t>(pre)]++;
        devices[static_cast<std::size_t>(participants[i])].preamble_tx++;
    }
    result.raos_used++;
    result.transmissions += static_cast<long>(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        DeviceOutcome& dev = devices[static_cast<std::size_t>(participants[i])];
        if (counts[static_cast<std::size_t>(picks[i])] == 1) {
            dev.complete_ms = rao_ms + params.success_delay_ms();
            if (dev.complete_ms <= dev.deadline_ms) {
                dev.success = true;
            } else {
                dev.failed = true;  // resolved too late
            }
        } else {
            on_collision(participants[i]);
        }
    }
}

void finalize_unresolved(std::vector<DeviceOutcome>& devices, std::int64_t horizon_ms) {
    for (auto& d : devices) {
        if (!d.success && !d.failed) {
            if (d.deadline_ms <= horizon_ms) d.failed = true;
            // otherwise left pending at the horizon
        }
    }
}

void backoff_or_fail(DeviceOutcome& dev, int device, std::int64_t rao_ms, int max_retx,
                     const ArpParams& params, Rng& rng, AttemptQueue& queue) {
    const int retransmissions_used = dev.preamble_tx - 1;
    if (retransmissions_used >= max_retx) {
        dev.failed = true;
        return;
    }
    const std::int64_t backoff = rng.between(0, params.backoff_ms);
    queue.push({rao_ms + params.failure_feedback_ms() + backoff, device});
}

}  // namespace

SimOutcome run_arp(const std::vector<std::int64_t>& arrivals_ms, const ArpRunConfig& cfg,
                   const ArpParams& params, Rng& rng) {
    params.validate();
    if (cfg.rao_times_ms.empty()) throw std::invalid_argument("run_arp: empty RAO schedule");
    if (!std::is_sorted(cfg.rao_times_ms.begin(), cfg.rao_times_ms.end()))
        throw std::invalid_argument("run_arp: RAO schedule must be sorted");
    const int max_retx =
        cfg.max_retransmissions >= 0 ? cfg.max_retransmissions : params.max_retransmissions;

    SimOutcome out;
    out.devices.resize(arrivals_ms.size());
    AttemptQueue queue;
    for (std::size_t i = 0; i < arrivals_ms.size(); ++i) {
        auto& dev = out.devices[i];
        dev.cls = TrafficClass::kAlarm;
        dev.arrival_ms = arrivals_ms[i];
        dev.deadline_ms = cfg.deadline_ms >= 0 ? arrivals_ms[i] + cfg.deadline_ms
                                               : std::numeric_limits<std::int64_t>::max();
        std::int64_t ready = arrivals_ms[i];
        if (cfg.spread_initial_attempt) {
            ready = cfg.rao_times_ms[rng.below(cfg.rao_times_ms.size())];
        }
        queue.push({ready, static_cast<int>(i)});
    }

    ContestResult result;
    std::vector<int> participants;
    while (!queue.empty()) {
        const std::int64_t t_min = queue.top().ready_ms;
        const auto it =
            std::lower_bound(cfg.rao_times_ms.begin(), cfg.rao_times_ms.end(), t_min);
        if (it == cfg.rao_times_ms.end()) break;  // schedule exhausted; leave unresolved
        const std::int64_t rao = *it;
        participants.clear();
        while (!queue.empty() && queue.top().ready_ms <= rao) {
            participants.push_back(queue.top().device);
            queue.pop();
        }
        contest_rao(rao, participants, out.devices, params, rng, result, [&](int device) {
            backoff_or_fail(out.devices[static_cast<std::size_t>(device)], device, rao, max_retx,
                            params, rng, queue);
        });
    }
    finalize_unresolved(out.devices, cfg.rao_times_ms.back() + params.success_delay_ms());
    out.contention_raos = result.raos_used;
    out.preamble_transmissions = result.transmissions;
    out.rao_utilization =
        result.raos_used > 0
            ? static_cast<double>(result.transmissions) /
                  (static_cast<double>(result.raos_used) * params.preambles_per_rao)
            : 0.0;
    out.per_class.push_back(detail::summarize_class(TrafficClass::kAlarm, out.devices));
    return out;
}

namespace {

/// RAO grid: baseline places one RAO per 5 ms; escalated mode uses the first
/// max_raos_per_lte_frame subframes of every 10 ms LTE frame.
std::int64_t next_rao_at_or_after(std::int64_t t, bool escalated, int escalated_per_frame) {
    if (!escalated) {
        return (t + 4) / 5 * 5;
    }
    const std::int64_t frame = t / 10;
    const std::int64_t sf = t % 10;
    if (sf < escalated_per_frame) return t;
    return (frame + 1) * 10;
}

}  // namespace

SimOutcome run_legacy_dynamic(const TrafficScenario& scenario, const ArpParams& params,
                              const LegacyOptions& options, Rng& rng) {
    params.validate();
    scenario.validate();
    if (options.baseline_raos_per_frame != 2)
        throw std::invalid_argument("legacy: baseline pattern is fixed at one RAO per 5 ms");
    if (options.escalated_raos_per_frame < 1 || options.escalated_raos_per_frame > 10)
        throw std::invalid_argument("legacy: escalated RAOs per frame must be in [1,10]");

    const std::int64_t horizon_ms =
        static_cast<std::int64_t>(scenario.effective_horizon_s() * 1000.0);

    Rng tc1_rng = rng.derive("arrivals-tc1");
    Rng tc2_rng = rng.derive("arrivals-tc2");
    Rng contention_rng = rng.derive("legacy-contention");

    const ArrivalSchedule tc1 = scenario.make_tc1_arrivals(tc1_rng);
    const ArrivalSchedule tc2 = scenario.make_tc2_arrivals(tc2_rng);

    SimOutcome out;
    out.devices.reserve(tc1.events.size() + tc2.events.size());
    AttemptQueue queue;
    auto add_devices = [&](const ArrivalSchedule& sched, double tau_s) {
        for (const Arrival& ev : sched.events) {
            DeviceOutcome dev;
            dev.cls = ev.cls;
            dev.arrival_ms = static_cast<std::int64_t>(ev.time_s * 1000.0);
            dev.deadline_ms = dev.arrival_ms + static_cast<std::int64_t>(tau_s * 1000.0);
            out.devices.push_back(dev);
            queue.push({dev.arrival_ms, static_cast<int>(out.devices.size()) - 1});
        }
    };
    add_devices(tc1, scenario.tau1_s);
    add_devices(tc2, scenario.tau2_s);

    bool escalated = false;
    int calm = 0;
    ContestResult result;
    std::vector<int> participants;
    const int j = params.preambles_per_rao;
    std::vector<int> counts(static_cast<std::size_t>(j));

    std::int64_t cursor = 0;
    while (!queue.empty()) {
        std::int64_t t_min = std::max<std::int64_t>(cursor, queue.top().ready_ms);
        if (t_min > horizon_ms) break;
        std::int64_t rao;
        if (escalated) {
            // step through every escalated RAO so the calm counter sees them
            rao = next_rao_at_or_after(cursor, true, options.escalated_raos_per_frame);
        } else {
            rao = next_rao_at_or_after(t_min, false, options.escalated_raos_per_frame);
        }
        if (rao > horizon_ms) break;
        cursor = rao + 1;

        participants.clear();
        while (!queue.empty() && queue.top().ready_ms <= rao) {
            participants.push_back(queue.top().device);
            queue.pop();
        }
        if (participants.empty()) {
            if (escalated && options.dynamic_allocation) {
                if (++calm >= options.deescalate_calm_raos) {
                    escalated = false;
                    calm = 0;
                }
            }
            continue;
        }

        // inline contest so the per-RAO collision fraction is observable
        std::fill(counts.begin(), counts.end(), 0);
        static thread_local std::vector<int> picks;
        picks.resize(participants.size());
        for (std::size_t i = 0; i < participants.size(); ++i) {
            const int pre = static_cast<int>(contention_rng.below(static_cast<std::uint64_t>(j)));
            picks[i] = pre;
            counts[static_cast<std::size_t>(pre)]++;
            out.devices[static_cast<std::size_t>(participants[i])].preamble_tx++;
        }
        result.raos_used++;
        result.transmissions += static_cast<long>(participants.size());
        int used_preambles = 0;
        int collided_preambles = 0;
        for (int c : counts) {
            if (c >= 1) ++used_preambles;
            if (c >= 2) ++collided_preambles;
        }
        for (std::size_t i = 0; i < participants.size(); ++i) {
            DeviceOutcome& dev = out.devices[static_cast<std::size_t>(participants[i])];
            if (counts[static_cast<std::size_t>(picks[i])] == 1) {
                dev.complete_ms = rao + params.success_delay_ms();
                if (dev.complete_ms <= dev.deadline_ms) {
                    dev.success = true;
                } else {
                    dev.failed = true;
                }
            } else {
                backoff_or_fail(dev, participants[i], rao, params.max_retransmissions, params,
                                contention_rng, queue);
            }
        }

        if (options.dynamic_allocation && used_preambles > 0) {
            const double frac = static_cast<double>(collided_preambles) / used_preambles;
            if (frac > options.escalate_collision_fraction) {
                escalated = true;
                calm = 0;
            } else if (escalated) {
                if (++calm >= options.deescalate_calm_raos) {
                    escalated = false;
                    calm = 0;
                }
            }
        }
    }
    finalize_unresolved(out.devices, horizon_ms);
    out.contention_raos = result.raos_used;
    out.preamble_transmissions = result.transmissions;
    out.rao_utilization =
        result.raos_used > 0
            ? static_cast<double>(result.transmissions) /
                  (static_cast<double>(result.raos_used) * params.preambles_per_rao)
            : 0.0;
    out.per_class.push_back(detail::summarize_class(TrafficClass::kAlarm, out.devices));
    if (scenario.n2 > 0) {
        out.per_class.push_back(detail::summarize_class(TrafficClass::kPeriodic, out.devices));
    }
    return out;
}

}  // namespace m2m
