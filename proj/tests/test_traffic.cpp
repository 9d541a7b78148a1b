#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "m2m/traffic.hpp"

using namespace m2m;

TEST_CASE("alarm burst basics") {
    Rng rng(1);
    CHECK(alarm_arrivals(AlarmBurst{0, 10.0, 3, 4}, 0.0, rng).events.empty());

    const AlarmBurst burst{20000, 10.0, 3.0, 4.0};
    Rng rng2(2);
    const auto sched = alarm_arrivals(burst, 5.0, rng2);
    REQUIRE(sched.events.size() == 20000);
    CHECK(std::is_sorted(sched.events.begin(), sched.events.end(),
                         [](const Arrival& a, const Arrival& b) { return a.time_s < b.time_s; }));
    double sum = 0.0;
    for (const auto& ev : sched.events) {
        REQUIRE(ev.time_s >= 5.0);
        REQUIRE(ev.time_s <= 15.0);
        sum += ev.time_s - 5.0;
    }
    const double mean = sum / 20000;
    const double sd = 10.0 * std::sqrt(12.0 / (49.0 * 8.0));
    CHECK(std::abs(mean - 10.0 * 3.0 / 7.0) <= 3.0 * sd / std::sqrt(20000.0));
}

TEST_CASE("device ids are unique within the burst") {
    Rng rng(3);
    const auto sched = alarm_arrivals(AlarmBurst{500, 1.0, 3, 4}, 0.0, rng);
    std::vector<int> ids;
    for (const auto& ev : sched.events) ids.push_back(ev.device_id);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("periodic arrivals have the configured aggregate rate") {
    Rng rng(4);
    CHECK(periodic_arrivals(PeriodicProcess{0, 60.0}, 10.0, rng).events.empty());

    const PeriodicProcess proc{600, 60.0};  // 10 arrivals per second
    long total = 0;
    const int reps = 200;
    const double horizon = 50.0;
    for (int r = 0; r < reps; ++r) {
        Rng rr(1000 + static_cast<std::uint64_t>(r));
        total += static_cast<long>(periodic_arrivals(proc, horizon, rr).events.size());
    }
    const double expected = proc.rate() * horizon * reps;
    CHECK(std::abs(static_cast<double>(total) - expected) <= 3.0 * std::sqrt(expected));
}

TEST_CASE("inter-arrival gaps pass a KS test against the exponential law") {
    const PeriodicProcess proc{1000, 60.0};
    Rng rng(7);
    const auto sched = periodic_arrivals(proc, 650.0, rng);
    REQUIRE(sched.events.size() >= 10000);
    std::vector<double> gaps;
    double prev = 0.0;
    for (std::size_t i = 0; i < 10000; ++i) {
        gaps.push_back(sched.events[i].time_s - prev);
        prev = sched.events[i].time_s;
    }
    std::sort(gaps.begin(), gaps.end());
    const double rate = proc.rate();
    double d = 0.0;
    const auto n = static_cast<double>(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double cdf = 1.0 - std::exp(-rate * gaps[i]);
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    CHECK(d * std::sqrt(n) < 1.6276);  // 1% asymptotic critical value
}

TEST_CASE("gating assigns each event to the first frame at or after it") {
    ArrivalSchedule sched;
    sched.events = {{0.1, TrafficClass::kAlarm, 0},
                    {0.6, TrafficClass::kAlarm, 1},
                    {1.1, TrafficClass::kAlarm, 2}};
    const auto gated = gate_arrivals(sched, {0.5, 1.0, 1.5});
    REQUIRE(gated.batches.size() == 3);
    REQUIRE(gated.batches[0].size() == 1);
    CHECK(gated.batches[0][0]->device_id == 0);
    REQUIRE(gated.batches[1].size() == 1);
    CHECK(gated.batches[1][0]->device_id == 1);
    REQUIRE(gated.batches[2].size() == 1);
    CHECK(gated.batches[2][0]->device_id == 2);
    CHECK(gated.overflow.empty());
}

TEST_CASE("an arrival exactly at a frame start joins that frame") {
    ArrivalSchedule sched;
    sched.events = {{0.5, TrafficClass::kAlarm, 0}};
    const auto gated = gate_arrivals(sched, {0.5, 1.0});
    CHECK(gated.batches[0].size() == 1);
    CHECK(gated.batches[1].empty());
}

TEST_CASE("gating conserves events and never assigns backwards") {
    Rng rng(9);
    ArrivalSchedule sched;
    for (int i = 0; i < 5000; ++i) {
        sched.events.push_back({rng.uniform() * 12.0, TrafficClass::kPeriodic, i});
    }
    std::vector<double> frames;
    for (int f = 0; f < 10; ++f) frames.push_back(1.0 + f);
    const auto gated = gate_arrivals(sched, frames);
    std::size_t total = gated.overflow.size();
    for (std::size_t f = 0; f < gated.batches.size(); ++f) {
        total += gated.batches[f].size();
        for (const Arrival* ev : gated.batches[f]) {
            CHECK(frames[f] >= ev->time_s);
            if (f > 0) CHECK(ev->time_s > frames[f - 1]);
        }
    }
    CHECK(total == sched.events.size());
    for (const Arrival* ev : gated.overflow) CHECK(ev->time_s > frames.back());
}

TEST_CASE("empty schedule gates to empty batches") {
    const auto gated = gate_arrivals(ArrivalSchedule{}, {0.5, 1.0});
    CHECK(gated.batches[0].empty());
    CHECK(gated.batches[1].empty());
    CHECK(gated.overflow.empty());
}

TEST_CASE("generators are reproducible per seed") {
    Rng a(42);
    Rng b(42);
    const auto s1 = alarm_arrivals(AlarmBurst{100, 10, 3, 4}, 0.0, a);
    const auto s2 = alarm_arrivals(AlarmBurst{100, 10, 3, 4}, 0.0, b);
    REQUIRE(s1.events.size() == s2.events.size());
    for (std::size_t i = 0; i < s1.events.size(); ++i) {
        CHECK(s1.events[i].time_s == s2.events[i].time_s);
        CHECK(s1.events[i].device_id == s2.events[i].device_id);
    }
}
