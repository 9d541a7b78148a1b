#include "m2m/experiments.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>

#include "m2m/dimensioning.hpp"
#include "m2m/rng.hpp"

namespace m2m {

namespace {

/// Runs job(i) for i in [0, count) on config.threads workers. Each job only
/// touches its own output slot, so scheduling order cannot affect results.
void parallel_for(int threads, std::size_t count, const std::function<void(std::size_t)>& job) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            job(i);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

ResultRow make_row(const ScenarioConfig& config, const SimOutcome& outcome, TrafficClass cls,
                   int n1, int l, const std::string& scheme, int rep, std::uint64_t seed) {
    ResultRow row;
    row.scenario = config.scenario_id;
    row.cls = static_cast<int>(cls);
    row.n1 = n1;
    row.n2 = config.n2;
    row.l = l;
    row.scheme = scheme;
    row.replication = rep;
    row.seed = seed;
    for (const auto& st : outcome.per_class) {
        if (st.cls != cls) continue;
        row.reliability = st.reliability;
        row.mean_delay_ms = st.mean_delay_ms;
        row.p99_delay_ms = st.p99_delay_ms;
        row.barring_q = st.mean_barring_q;
        row.estimate_n_hat = st.mean_estimate;
    }
    return row;
}

}  // namespace

std::vector<EstimatorRow> run_estimator_sweep(const ScenarioConfig& config) {
    config.validate();
    const auto cells = config.n_grid.size() * static_cast<std::size_t>(config.replications);
    std::vector<EstimatorRow> rows(cells);
    parallel_for(config.threads, cells, [&](std::size_t i) {
        const std::size_t grid_idx = i / static_cast<std::size_t>(config.replications);
        const int rep = static_cast<int>(i % static_cast<std::size_t>(config.replications));
        const int n_true = config.n_grid[grid_idx];
        const std::uint64_t seed = derive_seed(config.master_seed, "estimator-sweep", i);
        Rng rng(seed);
        const PreambleObservation obs = simulate_estimation_rao(n_true, config.estimator, rng);
        const Estimate est = estimate(obs, config.estimator);
        rows[i] = EstimatorRow{config.scenario_id, n_true, rep, est.n_hat, est.clamped, seed};
    });
    return rows;
}

namespace {

struct ComparisonCell {
    int n1 = 0;
    double tau1_s = 0.0;
    int l = 0;
    int rep = 0;
};

std::vector<ResultRow> run_cells(const ScenarioConfig& config,
                                 const std::vector<std::string>& schemes) {
    std::vector<ComparisonCell> cells;
    for (double tau1 : config.tau1_list_s) {
        const int l = ScenarioConfig::l_for_tau1(tau1);
        for (int n1 : config.n1_list) {
            for (int rep = 0; rep < config.replications; ++rep) {
                cells.push_back({n1, tau1, l, rep});
            }
        }
    }
    const int classes = config.n2 > 0 ? 2 : 1;
    std::vector<ResultRow> rows(cells.size() * schemes.size() *
                                static_cast<std::size_t>(classes));
    parallel_for(config.threads, cells.size(), [&](std::size_t i) {
        const ComparisonCell& cell = cells[i];
        const TrafficScenario traffic = config.traffic_for(cell.n1, cell.tau1_s);
        // both schemes share the cell seed: arrival streams pair up, while
        // contention streams differ by their derivation labels
        const std::uint64_t seed = derive_seed(config.master_seed, "comparison-cell", i);
        std::size_t slot = i * schemes.size() * static_cast<std::size_t>(classes);
        for (const std::string& scheme : schemes) {
            Rng rng(seed);
            SimOutcome outcome;
            if (scheme == "legacy") {
                outcome = run_legacy_dynamic(traffic, config.arp, LegacyOptions{}, rng);
            } else {
                ProposedOptions opts;
                opts.l = cell.l;
                opts.r_req_1 = config.r_req_tc1;
                opts.r_req_2 = config.r_req_tc2;
                opts.estimator = config.estimator;
                opts.oracle_estimates = config.oracle_estimates;
                outcome = run_proposed(traffic, config.arp, opts, rng);
            }
            rows[slot++] = make_row(config, outcome, TrafficClass::kAlarm, cell.n1, cell.l,
                                    scheme, cell.rep, seed);
            if (classes == 2) {
                rows[slot++] = make_row(config, outcome, TrafficClass::kPeriodic, cell.n1,
                                        cell.l, scheme, cell.rep, seed);
            }
        }
    });
    return rows;
}

}  // namespace

std::vector<ResultRow> run_reliability_comparison(const ScenarioConfig& config) {
    config.validate();
    return run_cells(config, {"legacy", "proposed"});
}

std::vector<ResultRow> run_custom(const ScenarioConfig& config, const std::string& scheme) {
    config.validate();
    if (scheme == "both") return run_cells(config, {"legacy", "proposed"});
    if (scheme != "legacy" && scheme != "proposed")
        throw std::invalid_argument("custom scenario: scheme must be legacy|proposed|both");
    return run_cells(config, {scheme});
}

std::vector<DimensionRow> run_dimensioning_table(const ScenarioConfig& config) {
    config.validate();
    std::vector<DimensionRow> rows;
    const int j = config.arp.preambles_per_rao;
    for (int n_hat : config.n_hat_grid) {
        if (config.table_two_class) {
            const TwoClassPlan plan = dimension_two_class(n_hat, config.table_n_hat_2,
                                                          config.r_req_tc1, config.r_req_tc2,
                                                          config.table_l, j);
            rows.push_back({n_hat, config.table_l, plan.plan1.s, plan.plan1.s1, plan.plan1.q,
                            plan.plan1.predicted_reliability, static_cast<int>(plan.regime), 1});
            rows.push_back({config.table_n_hat_2, config.table_l, plan.plan2.s, plan.plan2.s1,
                            plan.plan2.q, plan.plan2.predicted_reliability,
                            static_cast<int>(plan.regime), 2});
        } else {
            const ServingPlan plan = dimension_single(
                n_hat, FrameBudget{config.table_l, 1.0, config.r_req_tc1}, j);
            rows.push_back({n_hat, config.table_l, plan.s, plan.s1, plan.q,
                            plan.predicted_reliability, 0, 1});
        }
    }
    return rows;
}

std::string run_scenario(const ScenarioConfig& config) {
    config.validate();
    switch (config.kind) {
        case ScenarioKind::kEstimatorSweep:
            emit_estimator_rows(run_estimator_sweep(config), config.output_path);
            break;
        case ScenarioKind::kReliabilityComparison:
            emit_results(run_reliability_comparison(config), config.output_path);
            break;
        case ScenarioKind::kCustom:
            emit_results(run_custom(config, "both"), config.output_path);
            break;
        case ScenarioKind::kDimensioningTable: {
            std::ofstream out(config.output_path, std::ios::binary);
            if (!out) {
                throw std::runtime_error("dimensioning table: cannot open '" +
                                         config.output_path + "'");
            }
            out << "n_hat,l,class,regime,s,s1,q,predicted_reliability\n";
            for (const auto& r : run_dimensioning_table(config)) {
                out << r.n_hat << ',' << r.l << ',' << r.cls << ',' << r.regime << ',' << r.s
                    << ',' << r.s1 << ',' << format_double(r.q) << ','
                    << format_double(r.predicted_reliability) << '\n';
            }
            break;
        }
    }
    return config.output_path;
}

}  // namespace m2m
