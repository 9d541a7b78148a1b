#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "m2m/sim.hpp"

namespace m2m {

namespace {

struct Pending {
    int device = 0;  // index into SimOutcome::devices
};

struct ClassState {
    TrafficClass cls = TrafficClass::kAlarm;
    std::vector<Pending> backlog;
    double estimate_sum = 0.0;
    double barring_sum = 0.0;
    long active_frames = 0;
};

struct EstimationProfile {
    std::vector<double> cum;  // cumulative transmit probabilities
    double total = 0.0;
};

EstimationProfile make_estimation_profile(const EstimatorConfig& cfg) {
    EstimationProfile prof;
    const auto q = transmit_probabilities(cfg);
    prof.cum.resize(q.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        acc += q[i];
        prof.cum[i] = acc;
    }
    prof.total = acc;
    return prof;
}

}  // namespace

SimOutcome run_proposed(const TrafficScenario& scenario, const ArpParams& params,
                        const ProposedOptions& options, Rng& rng) {
    params.validate();
    scenario.validate();
    options.estimator.validate();
    const std::int64_t frame_ms = static_cast<std::int64_t>(scenario.tau1_s * 500.0);
    if (frame_ms < 30 || frame_ms % 10 != 0)
        throw std::invalid_argument("proposed: access frame must be a multiple of 10 ms, >= 30 ms");
    const int j = params.preambles_per_rao;
    const bool two_class = scenario.n2 > 0;
    const int n_classes = two_class ? 2 : 1;
    if (options.l < 16 * n_classes)
        throw std::invalid_argument("proposed: RAO budget too small for the frame layout");

    const std::int64_t horizon_ms =
        static_cast<std::int64_t>(scenario.effective_horizon_s() * 1000.0);

    Rng tc1_rng = rng.derive("arrivals-tc1");
    Rng tc2_rng = rng.derive("arrivals-tc2");
    Rng est_rng = rng.derive("proposed-estimation");
    Rng serve_rng = rng.derive("proposed-serving");

    const ArrivalSchedule tc1 = scenario.make_tc1_arrivals(tc1_rng);
    const ArrivalSchedule tc2 = scenario.make_tc2_arrivals(tc2_rng);

    SimOutcome out;
    out.devices.reserve(tc1.events.size() + tc2.events.size());
    // arrivals bucketed by gating frame: first frame start at or after arrival
    auto frame_of = [&](std::int64_t t) { return (t + frame_ms - 1) / frame_ms; };
    std::vector<std::vector<int>> gated;  // frame index -> device indices
    auto add_devices = [&](const ArrivalSchedule& sched, double tau_s) {
        for (const Arrival& ev : sched.events) {
            DeviceOutcome dev;
            dev.cls = ev.cls;
            dev.arrival_ms = static_cast<std::int64_t>(ev.time_s * 1000.0);
            dev.deadline_ms = dev.arrival_ms + static_cast<std::int64_t>(tau_s * 1000.0);
            const auto fr = static_cast<std::size_t>(frame_of(dev.arrival_ms));
            if (gated.size() <= fr) gated.resize(fr + 1);
            gated[fr].push_back(static_cast<int>(out.devices.size()));
            out.devices.push_back(dev);
        }
    };
    add_devices(tc1, scenario.tau1_s);
    add_devices(tc2, scenario.tau2_s);

    const EstimationProfile est_profile = make_estimation_profile(options.estimator);
    const int preamble_j = options.estimator.preamble_count;

    ClassState states[2];
    states[0].cls = TrafficClass::kAlarm;
    states[1].cls = TrafficClass::kPeriodic;

    const std::int64_t serving_gap_ms =
        params.failure_feedback_ms() + params.ue_processing_ms;
    const int gap_slot_bound = static_cast<int>((serving_gap_ms * 8 + 9) / 10) + 1;

    long transmissions = 0;
    long raos_used = 0;

    const std::int64_t last_frame = std::max<std::int64_t>(
        static_cast<std::int64_t>(gated.size()), horizon_ms / frame_ms + 1);

    std::vector<int> population[2];
    std::vector<int> f1_pick, f2_entrants, f2_pick;
    std::vector<int> counts;

    for (std::int64_t fr = 0; fr < last_frame; ++fr) {
        const std::int64_t t0 = fr * frame_ms;
        if (t0 > horizon_ms) break;

        // M2M RAO slots of this frame: 8 of every 10 subframes, capped at l
        std::vector<std::int64_t> slots;
        slots.reserve(static_cast<std::size_t>(options.l));
        for (std::int64_t t = t0; t < t0 + frame_ms && static_cast<int>(slots.size()) < options.l;
             ++t) {
            if (t % 10 < 8) slots.push_back(t);
        }
        if (static_cast<int>(slots.size()) < n_classes + 4) break;  // degenerate tail frame

        // build per-class population: backlog survivors, then newly gated
        bool any = false;
        for (int c = 0; c < n_classes; ++c) {
            population[c].clear();
            for (const Pending& p : states[c].backlog) {
                DeviceOutcome& dev = out.devices[static_cast<std::size_t>(p.device)];
                if (dev.deadline_ms < t0) {
                    dev.failed = true;  // latency budget expired while waiting
                } else {
                    population[c].push_back(p.device);
                }
            }
            states[c].backlog.clear();
        }
        if (fr < static_cast<std::int64_t>(gated.size())) {
            for (int dev_idx : gated[static_cast<std::size_t>(fr)]) {
                const auto cls = out.devices[static_cast<std::size_t>(dev_idx)].cls;
                const int c = cls == TrafficClass::kAlarm ? 0 : 1;
                population[c].push_back(dev_idx);
            }
        }
        for (int c = 0; c < n_classes; ++c) any = any || !population[c].empty();
        out.frames++;

        // estimation RAOs, one per class, in the first slots of the frame
        int n_hat[2] = {0, 0};
        std::int64_t last_est_slot = slots[0];
        for (int c = 0; c < n_classes; ++c) {
            const std::int64_t est_slot = slots[static_cast<std::size_t>(c)];
            last_est_slot = est_slot;
            PreambleObservation obs;
            obs.states.assign(static_cast<std::size_t>(preamble_j), PreambleState::kIdle);
            counts.assign(static_cast<std::size_t>(preamble_j), 0);
            for (int dev_idx : population[c]) {
                const double u = est_rng.uniform();
                if (u >= est_profile.total) continue;
                const auto it =
                    std::upper_bound(est_profile.cum.begin(), est_profile.cum.end(), u);
                counts[static_cast<std::size_t>(it - est_profile.cum.begin())]++;
                out.devices[static_cast<std::size_t>(dev_idx)].preamble_tx++;
                transmissions++;
            }
            raos_used++;
            for (std::size_t p = 0; p < counts.size(); ++p) {
                obs.states[p] = counts[p] == 0   ? PreambleState::kIdle
                                : counts[p] == 1 ? PreambleState::kSingleton
                                                 : PreambleState::kCollision;
            }
            if (options.oracle_estimates) {
                n_hat[c] = static_cast<int>(population[c].size());
            } else {
                n_hat[c] = estimate(obs, options.estimator).n_hat;
            }
        }

        // serving budget: slots usable after the SIB, minus the inter-frame
        // feedback gaps the layout will insert
        const std::int64_t sib_ms =
            last_est_slot + 1 + params.enb_processing_ms + params.msg2_window_ms;
        const std::int64_t serving_ready = sib_ms + 1 + params.ue_processing_ms;
        std::vector<std::int64_t> usable;
        usable.reserve(slots.size());
        for (std::int64_t t : slots) {
            if (t >= serving_ready) usable.push_back(t);
        }
        const int budget = std::max(0, static_cast<int>(usable.size()) -
                                           n_classes * gap_slot_bound);
        const int l_algo = budget + n_classes;

        ServingPlan plans[2];
        if (two_class) {
            const TwoClassPlan tp = dimension_two_class(n_hat[0], n_hat[1], options.r_req_1,
                                                        options.r_req_2, l_algo, j);
            plans[0] = tp.plan1;
            plans[1] = tp.plan2;
        } else {
            plans[0] = dimension_single(n_hat[0], FrameBudget{l_algo, scenario.tau1_s,
                                                              options.r_req_1},
                                        j);
        }

        // lay out the serving slots: per class, frame one, feedback gap, frame two
        SibMessage sib;
        sib.frame_start_ms = t0;
        sib.broadcast_ms = sib_ms;
        sib.next_estimation_subframe_ms = t0 + frame_ms;
        sib.p0 = options.estimator.p0;
        sib.alpha = options.estimator.alpha;
        sib.preamble_count = preamble_j;
        std::size_t pos = 0;
        std::vector<std::int64_t> class_slots[2];
        for (int c = 0; c < n_classes; ++c) {
            const ServingPlan& plan = plans[c];
            auto take = [&](int count, std::int64_t not_before) {
                while (pos < usable.size() && usable[pos] < not_before) ++pos;
                for (int k = 0; k < count; ++k) {
                    if (pos >= usable.size())
                        throw std::logic_error("proposed: serving layout exceeded the frame");
                    class_slots[c].push_back(usable[pos++]);
                }
            };
            if (plan.s > 0) {
                take(plan.s1, 0);
                if (plan.s > plan.s1) {
                    take(plan.s - plan.s1, class_slots[c].back() + serving_gap_ms);
                }
            }
            SibMessage::ClassBlock block;
            block.cls = states[c].cls;
            block.serving_rao_count = plan.s;
            block.first_frame_size = plan.s1;
            block.barring_q = plan.q;
            block.serving_slots_ms = class_slots[c];
            sib.classes.push_back(block);
            if (!population[c].empty()) {
                states[c].estimate_sum += n_hat[c];
                states[c].barring_sum += plan.q;
                states[c].active_frames++;
            }
        }
        out.sibs.push_back(std::move(sib));

        // two-frame serving contention per class
        for (int c = 0; c < n_classes; ++c) {
            const ServingPlan& plan = plans[c];
            if (population[c].empty()) continue;
            raos_used += plan.s;
            if (plan.s == 0 || plan.q >= 1.0) {
                for (int dev_idx : population[c]) {
                    auto& dev = out.devices[static_cast<std::size_t>(dev_idx)];
                    dev.barred = true;
                    states[c].backlog.push_back({dev_idx});
                }
                continue;
            }
            const int s1 = plan.s1;
            const int s2 = plan.s - plan.s1;
            const int m1 = s1 * j;
            const int m2 = s2 * j;

            f2_entrants.clear();
            f1_pick.clear();
            counts.assign(static_cast<std::size_t>(m1), 0);
            std::vector<int> admitted;
            admitted.reserve(population[c].size());
            for (int dev_idx : population[c]) {
                auto& dev = out.devices[static_cast<std::size_t>(dev_idx)];
                if (plan.q > 0.0 && serve_rng.uniform() < plan.q) {
                    dev.barred = true;
                    states[c].backlog.push_back({dev_idx});
                    continue;
                }
                admitted.push_back(dev_idx);
                const int r = static_cast<int>(serve_rng.below(static_cast<std::uint64_t>(m1)));
                f1_pick.push_back(r);
                counts[static_cast<std::size_t>(r)]++;
                dev.preamble_tx++;
                transmissions++;
            }
            for (std::size_t i = 0; i < admitted.size(); ++i) {
                auto& dev = out.devices[static_cast<std::size_t>(admitted[i])];
                const int r = f1_pick[i];
                if (counts[static_cast<std::size_t>(r)] == 1) {
                    const std::int64_t slot = class_slots[c][static_cast<std::size_t>(r / j)];
                    dev.complete_ms = slot + params.success_delay_ms();
                    if (dev.complete_ms <= dev.deadline_ms) {
                        dev.success = true;
                    } else {
                        dev.failed = true;
                    }
                } else {
                    f2_entrants.push_back(admitted[i]);
                }
            }
            if (s2 <= 0) {
                for (int dev_idx : f2_entrants) states[c].backlog.push_back({dev_idx});
                continue;
            }
            f2_pick.clear();
            counts.assign(static_cast<std::size_t>(m2), 0);
            for (int dev_idx : f2_entrants) {
                const int r = static_cast<int>(serve_rng.below(static_cast<std::uint64_t>(m2)));
                f2_pick.push_back(r);
                counts[static_cast<std::size_t>(r)]++;
                out.devices[static_cast<std::size_t>(dev_idx)].preamble_tx++;
                transmissions++;
            }
            for (std::size_t i = 0; i < f2_entrants.size(); ++i) {
                auto& dev = out.devices[static_cast<std::size_t>(f2_entrants[i])];
                const int r = f2_pick[i];
                if (counts[static_cast<std::size_t>(r)] == 1) {
                    const std::int64_t slot =
                        class_slots[c][static_cast<std::size_t>(s1 + r / j)];
                    dev.complete_ms = slot + params.success_delay_ms();
                    if (dev.complete_ms <= dev.deadline_ms) {
                        dev.success = true;
                    } else {
                        dev.failed = true;
                    }
                } else {
                    states[c].backlog.push_back({f2_entrants[i]});
                }
            }
        }
    }

    for (int c = 0; c < n_classes; ++c) {
        for (const Pending& p : states[c].backlog) {
            auto& dev = out.devices[static_cast<std::size_t>(p.device)];
            if (dev.deadline_ms <= horizon_ms) dev.failed = true;
        }
    }

    out.contention_raos = raos_used;
    out.preamble_transmissions = transmissions;
    out.rao_utilization = raos_used > 0 ? static_cast<double>(transmissions) /
                                              (static_cast<double>(raos_used) * j)
                                        : 0.0;
    for (int c = 0; c < n_classes; ++c) {
        ClassStats st = detail::summarize_class(states[c].cls, out.devices);
        if (states[c].active_frames > 0) {
            st.mean_estimate = states[c].estimate_sum / states[c].active_frames;
            st.mean_barring_q = states[c].barring_sum / states[c].active_frames;
        }
        out.per_class.push_back(st);
    }
    return out;
}

}  // namespace m2m
