#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace m2m {

/// One (replication, class, scheme) cell of a simulation experiment.
struct ResultRow {
    std::string scenario;
    int cls = 1;
    int n1 = 0;
    int n2 = 0;
    int l = 0;
    std::string scheme;  // "legacy" | "proposed"
    int replication = 0;
    double reliability = 0.0;
    double mean_delay_ms = 0.0;
    double p99_delay_ms = 0.0;
    double barring_q = 0.0;
    double estimate_n_hat = 0.0;
    std::uint64_t seed = 0;
};

/// Per-cell aggregate written to the plot-ready companion file.
struct AggregateRow {
    std::string scenario;
    std::string scheme;
    int cls = 1;
    int n1 = 0;
    int l = 0;
    double reliability_mean = 0.0;
    double reliability_ci95 = 0.0;
    double delay_p50_ms = 0.0;
    double delay_p99_ms = 0.0;
};

/// One estimator-sweep replication.
struct EstimatorRow {
    std::string scenario;
    int n_true = 0;
    int replication = 0;
    int n_hat = 0;
    bool clamped = false;
    std::uint64_t seed = 0;
};

/// Writes rows (sorted by scenario, scheme, n1, replication, class) to a CSV
/// with a fixed header, plus a companion aggregate file at path + ".agg.csv".
/// Byte-identical output for identical inputs.
void emit_results(std::vector<ResultRow> rows, const std::string& path);

void emit_estimator_rows(std::vector<EstimatorRow> rows, const std::string& path);

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

/// Shortest-width fixed formatting used in all CSV output ('.' decimal
/// separator, locale-independent).
std::string format_double(double v);

std::string aggregate_path_for(const std::string& results_path);

}  // namespace m2m
