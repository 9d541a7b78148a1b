#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "m2m/experiments.hpp"

using namespace m2m;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("m2m-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& body) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config gets full defaults") {
    TempDir tmp;
    const auto p = write_file(tmp.path, "min.ini",
                              "schema_version = 1\n"
                              "kind = estimator-sweep\n");
    const auto cfg = load_config(p.string());
    CHECK(cfg.kind == ScenarioKind::kEstimatorSweep);
    CHECK(cfg.estimator.p0 == doctest::Approx(0.001));
    CHECK(cfg.estimator.alpha == doctest::Approx(1.056));
    CHECK(cfg.estimator.preamble_count == 54);
    CHECK(cfg.estimator.n_max == 60000);
    CHECK(cfg.arp.preambles_per_rao == 54);
    CHECK(cfg.arp.max_retransmissions == 9);
    CHECK(cfg.r_req_tc1 == doctest::Approx(0.99));
}

TEST_CASE("frame budget follows the delay target") {
    CHECK(ScenarioConfig::l_for_tau1(1.0) == 400);
    CHECK(ScenarioConfig::l_for_tau1(5.0) == 2000);
    CHECK(ScenarioConfig::l_for_tau1(10.0) == 4000);
}

TEST_CASE("invalid values are rejected with the violated invariant named") {
    TempDir tmp;
    const auto p = write_file(tmp.path, "bad.ini",
                              "schema_version = 1\n"
                              "[traffic]\n"
                              "n1 = -5\n");
    CHECK_THROWS_AS(load_config(p.string()), std::invalid_argument);
    try {
        load_config(p.string());
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("n1") != std::string::npos);
    }
}

TEST_CASE("parse errors carry file and line context") {
    TempDir tmp;
    const auto p = write_file(tmp.path, "broken.ini",
                              "schema_version = 1\n"
                              "kind = custom\n"
                              "what is this\n");
    try {
        load_config(p.string());
        REQUIRE(false);
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":3:") != std::string::npos);
        CHECK(msg.find("broken.ini") != std::string::npos);
    }
}

TEST_CASE("missing schema version is an error") {
    TempDir tmp;
    const auto p = write_file(tmp.path, "nosv.ini", "kind = custom\n");
    CHECK_THROWS(load_config(p.string()));
}

TEST_CASE("unknown keys fail loudly") {
    TempDir tmp;
    const auto p = write_file(tmp.path, "junk.ini",
                              "schema_version = 1\n[traffic]\nn3 = 4\n");
    CHECK_THROWS_AS(load_config(p.string()), std::runtime_error);
}

TEST_CASE("zero replications produce an empty, header-only output") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kEstimatorSweep;
    cfg.replications = 0;
    cfg.n_grid = {5, 10};
    const auto rows = run_estimator_sweep(cfg);
    CHECK(rows.empty());
    TempDir tmp;
    const auto p = (tmp.path / "empty.csv").string();
    emit_estimator_rows(rows, p);
    CHECK(slurp(p) == "scenario,n_true,replication,n_hat,clamped,seed\n");
}

TEST_CASE("estimator sweep finds a singleton population") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kEstimatorSweep;
    cfg.replications = 40;
    cfg.n_grid = {1};
    cfg.estimator = EstimatorConfig{0.9, 1.01, 8, 100};
    const auto rows = run_estimator_sweep(cfg);
    REQUIRE(rows.size() == 40);
    double mean = 0.0;
    for (const auto& r : rows) {
        CHECK((r.n_hat == 0 || r.n_hat == 1));
        mean += r.n_hat;
    }
    CHECK(mean / 40.0 > 0.8);
}

TEST_CASE("comparison emits the full cell grid") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kReliabilityComparison;
    cfg.scenario_id = "cardinality";
    cfg.n1_list = {5, 10, 20};
    cfg.n2 = 0;  // single class
    cfg.tau1_list_s = {1.0};
    cfg.activation_window_s = 0.5;
    cfg.replications = 5;
    cfg.threads = 2;
    const auto rows = run_reliability_comparison(cfg);
    CHECK(rows.size() == 2u * 3u * 5u);  // schemes x grid x replications, one class
    long proposed = 0;
    for (const auto& r : rows) {
        CHECK((r.scheme == "legacy" || r.scheme == "proposed"));
        proposed += r.scheme == "proposed" ? 1 : 0;
        CHECK(r.cls == 1);
        CHECK(r.l == 400);
    }
    CHECK(proposed == 15);
}

TEST_CASE("paired schemes consume identical arrival schedules") {
    // tiny uncontended cells: both schemes must serve every device, and the
    // delays differ, so equality of arrival counts is the telling check
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kReliabilityComparison;
    cfg.n1_list = {7};
    cfg.n2 = 3;
    cfg.reporting_interval_s = 2.0;
    cfg.tc2_arrival_horizon_s = 2.0;
    cfg.tau1_list_s = {1.0};
    cfg.activation_window_s = 0.5;
    cfg.replications = 3;
    const auto rows = run_reliability_comparison(cfg);
    for (const auto& r : rows) {
        CHECK(r.reliability == 1.0);
    }
}

TEST_CASE("custom scenarios can run a single scheme") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kCustom;
    cfg.n1_list = {15};
    cfg.n2 = 0;
    cfg.tau1_list_s = {1.0};
    cfg.activation_window_s = 0.5;
    cfg.replications = 2;
    const auto rows = run_custom(cfg, "proposed");
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) CHECK(r.scheme == "proposed");
    CHECK_THROWS_AS(run_custom(cfg, "hybrid"), std::invalid_argument);
}

TEST_CASE("emitted CSV is byte-identical across reruns and sorted") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kReliabilityComparison;
    cfg.scenario_id = "determinism";
    cfg.n1_list = {30, 12};
    cfg.n2 = 0;
    cfg.tau1_list_s = {1.0};
    cfg.activation_window_s = 0.5;
    cfg.replications = 2;
    cfg.master_seed = 12345;

    TempDir tmp;
    const auto p1 = (tmp.path / "a.csv").string();
    const auto p2 = (tmp.path / "b.csv").string();
    emit_results(run_reliability_comparison(cfg), p1);
    cfg.threads = 3;  // parallel dispatch must not affect the bytes
    emit_results(run_reliability_comparison(cfg), p2);
    const auto a = slurp(p1);
    CHECK(a == slurp(p2));
    CHECK(slurp(aggregate_path_for(p1)) == slurp(aggregate_path_for(p2)));

    // header plus sortedness of (scenario, scheme, n1, replication)
    std::stringstream ss(a);
    std::string line;
    std::getline(ss, line);
    CHECK(line ==
          "scenario,class,n1,n2,l,scheme,replication,reliability,mean_delay_ms,"
          "p99_delay_ms,barring_q,estimate_n_hat,seed");
    auto sort_key = [](const std::string& row) {
        std::vector<std::string> fields;
        std::stringstream fs(row);
        std::string f;
        while (std::getline(fs, f, ',')) fields.push_back(f);
        REQUIRE(fields.size() == 13);
        return std::make_tuple(fields[0], fields[5], std::stoi(fields[2]),
                               std::stoi(fields[6]), std::stoi(fields[1]));
    };
    bool have_prev = false;
    std::tuple<std::string, std::string, int, int, int> prev;
    int data_rows = 0;
    while (std::getline(ss, line)) {
        data_rows++;
        const auto key = sort_key(line);
        if (have_prev) CHECK(prev <= key);
        prev = key;
        have_prev = true;
    }
    CHECK(data_rows == 2 * 2 * 2);
}

TEST_CASE("empty result set still writes the headers") {
    TempDir tmp;
    const auto p = (tmp.path / "none.csv").string();
    emit_results({}, p);
    CHECK(slurp(p).rfind("scenario,class,n1,", 0) == 0);
    CHECK(slurp(aggregate_path_for(p)).rfind("scenario,scheme,class,", 0) == 0);
}

TEST_CASE("dimensioning table covers both modes") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::kDimensioningTable;
    cfg.n_hat_grid = {1, 100};
    cfg.table_l = 60;
    cfg.arp.preambles_per_rao = 8;
    auto rows = run_dimensioning_table(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].s == 2);
    CHECK(rows[0].q == 0.0);

    cfg.table_two_class = true;
    cfg.table_n_hat_2 = 100000;
    rows = run_dimensioning_table(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].cls == 2);
}
