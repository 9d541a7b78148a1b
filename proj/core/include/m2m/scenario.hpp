#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "m2m/estimator.hpp"
#include "m2m/sim.hpp"

namespace m2m {

enum class ScenarioKind { kEstimatorSweep, kReliabilityComparison, kDimensioningTable, kCustom };

/// Full experiment description, loadable from a sectioned key=value file.
struct ScenarioConfig {
    int schema_version = 1;
    ScenarioKind kind = ScenarioKind::kReliabilityComparison;
    std::string scenario_id = "default";

    // [traffic]
    std::vector<int> n1_list{1000};
    int n2 = 10000;
    double activation_window_s = 10.0;
    double burst_start_s = 0.0;
    double beta_a = 3.0;
    double beta_b = 4.0;
    double reporting_interval_s = 60.0;
    double tc2_arrival_horizon_s = 0.0;
    double horizon_s = 0.0;

    // [frame]
    std::vector<double> tau1_list_s{1.0};
    double tau2_s = 60.0;
    double r_req_tc1 = 0.99;
    double r_req_tc2 = 0.99;

    // [estimator]
    EstimatorConfig estimator{};
    bool oracle_estimates = false;

    // [estimator-sweep]
    std::vector<int> n_grid{100, 1000, 10000, 30000};

    // [dimensioning-table]
    std::vector<int> n_hat_grid{100, 1000, 10000, 30000};
    int table_l = 400;
    bool table_two_class = false;
    int table_n_hat_2 = 0;

    // [run]
    int replications = 100;
    std::uint64_t master_seed = 1;
    std::string output_path = "results.csv";
    int threads = 1;

    ArpParams arp{};

    /// Gross M2M RAOs per access frame for a TC1 delay budget: the frame
    /// spans tau1/2 and carries 8 RAOs per 10 ms (two subframes per LTE
    /// frame are reserved for other traffic).
    static int l_for_tau1(double tau1_s);

    void validate() const;
    TrafficScenario traffic_for(int n1, double tau1_s) const;
};

/// Parse a config file. Throws std::runtime_error with file/line context on
/// malformed input, std::invalid_argument naming the violated invariant.
ScenarioConfig load_config(const std::string& path);

std::string to_string(ScenarioKind kind);

}  // namespace m2m
