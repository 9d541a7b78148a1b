#include "m2m/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

namespace m2m {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string aggregate_path_for(const std::string& results_path) {
    return results_path + ".agg.csv";
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("results: cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::string, int, int, int>;
    struct Acc {
        std::vector<double> reliabilities;
        std::vector<double> p50s;
        std::vector<double> p99s;
    };
    std::map<Key, Acc> cells;
    for (const auto& r : rows) {
        auto& acc = cells[{r.scenario, r.scheme, r.cls, r.n1, r.l}];
        acc.reliabilities.push_back(r.reliability);
        acc.p50s.push_back(r.mean_delay_ms);
        acc.p99s.push_back(r.p99_delay_ms);
    }
    std::vector<AggregateRow> out;
    out.reserve(cells.size());
    for (auto& [key, acc] : cells) {
        AggregateRow a;
        std::tie(a.scenario, a.scheme, a.cls, a.n1, a.l) = key;
        const auto n = static_cast<double>(acc.reliabilities.size());
        double mean = 0.0;
        for (double v : acc.reliabilities) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : acc.reliabilities) var += (v - mean) * (v - mean);
        var = n > 1 ? var / (n - 1) : 0.0;
        a.reliability_mean = mean;
        a.reliability_ci95 = n > 0 ? 1.96 * std::sqrt(var / n) : 0.0;
        std::sort(acc.p50s.begin(), acc.p50s.end());
        std::sort(acc.p99s.begin(), acc.p99s.end());
        const auto mid = acc.p50s.size() / 2;
        a.delay_p50_ms = acc.p50s.empty() ? 0.0 : acc.p50s[mid];
        a.delay_p99_ms = acc.p99s.empty() ? 0.0 : acc.p99s[mid];
        out.push_back(std::move(a));
    }
    return out;
}

void emit_results(std::vector<ResultRow> rows, const std::string& path) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.scenario, a.scheme, a.n1, a.replication, a.cls) <
               std::tie(b.scenario, b.scheme, b.n1, b.replication, b.cls);
    });
    auto out = open_or_throw(path);
    out << "scenario,class,n1,n2,l,scheme,replication,reliability,mean_delay_ms,"
           "p99_delay_ms,barring_q,estimate_n_hat,seed\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.cls << ',' << r.n1 << ',' << r.n2 << ',' << r.l << ','
            << r.scheme << ',' << r.replication << ',' << format_double(r.reliability) << ','
            << format_double(r.mean_delay_ms) << ',' << format_double(r.p99_delay_ms) << ','
            << format_double(r.barring_q) << ',' << format_double(r.estimate_n_hat) << ','
            << r.seed << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("results: write failed for '" + path + "'");

    auto agg = open_or_throw(aggregate_path_for(path));
    agg << "scenario,scheme,class,n1,l,reliability_mean,reliability_ci95,delay_p50_ms,"
           "delay_p99_ms\n";
    for (const auto& a : aggregate_rows(rows)) {
        agg << a.scenario << ',' << a.scheme << ',' << a.cls << ',' << a.n1 << ',' << a.l << ','
            << format_double(a.reliability_mean) << ',' << format_double(a.reliability_ci95)
            << ',' << format_double(a.delay_p50_ms) << ',' << format_double(a.delay_p99_ms)
            << '\n';
    }
    agg.flush();
    if (!agg) {
        throw std::runtime_error("results: write failed for '" + aggregate_path_for(path) + "'");
    }
}

void emit_estimator_rows(std::vector<EstimatorRow> rows, const std::string& path) {
    std::sort(rows.begin(), rows.end(), [](const EstimatorRow& a, const EstimatorRow& b) {
        return std::tie(a.scenario, a.n_true, a.replication) <
               std::tie(b.scenario, b.n_true, b.replication);
    });
    auto out = open_or_throw(path);
    out << "scenario,n_true,replication,n_hat,clamped,seed\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.n_true << ',' << r.replication << ',' << r.n_hat << ','
            << (r.clamped ? 1 : 0) << ',' << r.seed << '\n';
    }

    struct Acc {
        std::vector<double> values;
    };
    std::map<int, Acc> per_n;
    std::string scenario = rows.empty() ? "" : rows.front().scenario;
    for (const auto& r : rows) per_n[r.n_true].values.push_back(r.n_hat);
    auto agg = open_or_throw(aggregate_path_for(path));
    agg << "scenario,n_true,replications,n_hat_mean,n_hat_std,rel_error\n";
    for (auto& [n_true, acc] : per_n) {
        const auto n = static_cast<double>(acc.values.size());
        double mean = 0.0;
        for (double v : acc.values) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : acc.values) var += (v - mean) * (v - mean);
        var = n > 1 ? var / (n - 1) : 0.0;
        const double rel = n_true > 0 ? std::abs(mean - n_true) / n_true : 0.0;
        agg << scenario << ',' << n_true << ',' << acc.values.size() << ','
            << format_double(mean) << ',' << format_double(std::sqrt(var)) << ','
            << format_double(rel) << '\n';
    }
    agg.flush();
    if (!agg) {
        throw std::runtime_error("results: write failed for '" + aggregate_path_for(path) + "'");
    }
}

}  // namespace m2m
