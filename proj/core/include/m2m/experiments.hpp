#pragma once

#include <string>
#include <vector>

#include "m2m/results.hpp"
#include "m2m/scenario.hpp"

namespace m2m {

/// Replicated single-RAO estimation across the configured count grid.
std::vector<EstimatorRow> run_estimator_sweep(const ScenarioConfig& config);

/// Legacy vs proposed across the N1 and tau1 grids. Both schemes of a cell
/// consume the same arrival schedules (paired seeds); rows are one per
/// (grid point, replication, scheme, class).
std::vector<ResultRow> run_reliability_comparison(const ScenarioConfig& config);

/// Single-scheme custom scenario (first entries of the grids).
std::vector<ResultRow> run_custom(const ScenarioConfig& config, const std::string& scheme);

/// Serving-phase dimensioning table for a grid of estimates, no simulation.
struct DimensionRow {
    int n_hat = 0;
    int l = 0;
    int s = 0;
    int s1 = 0;
    double q = 0.0;
    double predicted_reliability = 0.0;
    int regime = 0;  // 0: single-class; 1..3: two-class regimes
    int cls = 1;
};
std::vector<DimensionRow> run_dimensioning_table(const ScenarioConfig& config);

/// Dispatches on config.kind, writes the CSV(s), returns the output path.
std::string run_scenario(const ScenarioConfig& config);

}  // namespace m2m
