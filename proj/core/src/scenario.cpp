#include "m2m/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace m2m {

int ScenarioConfig::l_for_tau1(double tau1_s) {
    const double frame_ms = tau1_s * 500.0;
    return static_cast<int>(std::llround(frame_ms / 10.0 * 8.0));
}

void ScenarioConfig::validate() const {
    if (schema_version != 1) throw std::invalid_argument("config: unsupported schema_version");
    for (int n1 : n1_list) {
        if (n1 < 0) throw std::invalid_argument("config: n1 must be >= 0");
    }
    if (n2 < 0) throw std::invalid_argument("config: n2 must be >= 0");
    if (!(activation_window_s > 0.0))
        throw std::invalid_argument("config: activation_window must be > 0");
    if (!(reporting_interval_s > 0.0))
        throw std::invalid_argument("config: reporting_interval must be > 0");
    for (double tau : tau1_list_s) {
        if (!(tau > 0.0)) throw std::invalid_argument("config: tau1 must be > 0");
        const double frame_ms = tau * 500.0;
        if (std::abs(frame_ms - std::llround(frame_ms)) > 1e-9 ||
            std::llround(frame_ms) % 10 != 0)
            throw std::invalid_argument("config: tau1/2 must be a whole number of 10 ms frames");
    }
    if (!(tau2_s > 0.0)) throw std::invalid_argument("config: tau2 must be > 0");
    if (!(r_req_tc1 > 0.0 && r_req_tc1 < 1.0) || !(r_req_tc2 > 0.0 && r_req_tc2 < 1.0))
        throw std::invalid_argument("config: reliability targets must be in (0,1)");
    if (replications < 0) throw std::invalid_argument("config: replications must be >= 0");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    for (int n : n_grid) {
        if (n < 0) throw std::invalid_argument("config: estimator grid values must be >= 0");
    }
    estimator.validate();
    arp.validate();
}

TrafficScenario ScenarioConfig::traffic_for(int n1, double tau1_s) const {
    TrafficScenario sc;
    sc.n1 = n1;
    sc.burst_start_s = burst_start_s;
    sc.activation_window_s = activation_window_s;
    sc.beta_a = beta_a;
    sc.beta_b = beta_b;
    sc.tau1_s = tau1_s;
    sc.n2 = n2;
    sc.reporting_interval_s = reporting_interval_s;
    sc.tau2_s = tau2_s;
    sc.tc2_arrival_horizon_s = tc2_arrival_horizon_s;
    sc.horizon_s = horizon_s;
    return sc;
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::kEstimatorSweep: return "estimator-sweep";
        case ScenarioKind::kReliabilityComparison: return "reliability-comparison";
        case ScenarioKind::kDimensioningTable: return "dimensioning-table";
        case ScenarioKind::kCustom: return "custom";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct ParseContext {
    const std::string& path;
    int line = 0;
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
    }
};

double parse_double(const std::string& v, const ParseContext& ctx) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) ctx.fail("trailing characters after number '" + v + "'");
        return d;
    } catch (const std::logic_error&) {
        ctx.fail("expected a number, got '" + v + "'");
    }
}

long parse_long(const std::string& v, const ParseContext& ctx) {
    try {
        std::size_t used = 0;
        const long n = std::stol(v, &used);
        if (used != v.size()) ctx.fail("trailing characters after integer '" + v + "'");
        return n;
    } catch (const std::logic_error&) {
        ctx.fail("expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const ParseContext& ctx) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    ctx.fail("expected a boolean, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& v, const ParseContext& ctx, F&& one) {
    std::vector<T> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(one(item, ctx));
    }
    if (out.empty()) ctx.fail("expected a non-empty list");
    return out;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    ScenarioConfig cfg;
    ParseContext ctx{path};
    std::string section;
    std::string line;
    bool saw_schema = false;
    while (std::getline(in, line)) {
        ctx.line++;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') ctx.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) ctx.fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) ctx.fail("empty key");
        if (value.empty()) ctx.fail("empty value for key '" + key + "'");

        auto as_int = [&] { return static_cast<int>(parse_long(value, ctx)); };
        auto as_dbl = [&] { return parse_double(value, ctx); };

        if (section.empty() || section == "scenario") {
            if (key == "schema_version") {
                cfg.schema_version = as_int();
                saw_schema = true;
            } else if (key == "kind") {
                if (value == "estimator-sweep") cfg.kind = ScenarioKind::kEstimatorSweep;
                else if (value == "reliability-comparison")
                    cfg.kind = ScenarioKind::kReliabilityComparison;
                else if (value == "dimensioning-table")
                    cfg.kind = ScenarioKind::kDimensioningTable;
                else if (value == "custom") cfg.kind = ScenarioKind::kCustom;
                else ctx.fail("unknown scenario kind '" + value + "'");
            } else if (key == "id") {
                cfg.scenario_id = value;
            } else if (key == "replications") {
                cfg.replications = as_int();
            } else if (key == "seed") {
                cfg.master_seed = static_cast<std::uint64_t>(parse_long(value, ctx));
            } else if (key == "output") {
                cfg.output_path = value;
            } else if (key == "threads") {
                cfg.threads = as_int();
            } else {
                ctx.fail("unknown key '" + key + "' in [scenario]");
            }
        } else if (section == "traffic") {
            if (key == "n1") cfg.n1_list = {as_int()};
            else if (key == "n1_list")
                cfg.n1_list = parse_list<int>(value, ctx, [](const std::string& s,
                                                             const ParseContext& c) {
                    return static_cast<int>(parse_long(s, c));
                });
            else if (key == "n2") cfg.n2 = as_int();
            else if (key == "activation_window_s") cfg.activation_window_s = as_dbl();
            else if (key == "burst_start_s") cfg.burst_start_s = as_dbl();
            else if (key == "beta_a") cfg.beta_a = as_dbl();
            else if (key == "beta_b") cfg.beta_b = as_dbl();
            else if (key == "reporting_interval_s") cfg.reporting_interval_s = as_dbl();
            else if (key == "tc2_arrival_horizon_s") cfg.tc2_arrival_horizon_s = as_dbl();
            else if (key == "horizon_s") cfg.horizon_s = as_dbl();
            else ctx.fail("unknown key '" + key + "' in [traffic]");
        } else if (section == "frame") {
            if (key == "tau1_s") cfg.tau1_list_s = {as_dbl()};
            else if (key == "tau1_list_s")
                cfg.tau1_list_s = parse_list<double>(value, ctx, parse_double);
            else if (key == "tau2_s") cfg.tau2_s = as_dbl();
            else if (key == "r_req_tc1") cfg.r_req_tc1 = as_dbl();
            else if (key == "r_req_tc2") cfg.r_req_tc2 = as_dbl();
            else ctx.fail("unknown key '" + key + "' in [frame]");
        } else if (section == "estimator") {
            if (key == "p0") cfg.estimator.p0 = as_dbl();
            else if (key == "alpha") cfg.estimator.alpha = as_dbl();
            else if (key == "preambles") cfg.estimator.preamble_count = as_int();
            else if (key == "n_max") cfg.estimator.n_max = as_int();
            else if (key == "oracle") cfg.oracle_estimates = parse_bool(value, ctx);
            else if (key == "n_grid")
                cfg.n_grid = parse_list<int>(value, ctx,
                                             [](const std::string& s, const ParseContext& c) {
                                                 return static_cast<int>(parse_long(s, c));
                                             });
            else ctx.fail("unknown key '" + key + "' in [estimator]");
        } else if (section == "dimensioning") {
            if (key == "n_hat_grid")
                cfg.n_hat_grid = parse_list<int>(value, ctx,
                                                 [](const std::string& s, const ParseContext& c) {
                                                     return static_cast<int>(parse_long(s, c));
                                                 });
            else if (key == "l") cfg.table_l = as_int();
            else if (key == "two_class") cfg.table_two_class = parse_bool(value, ctx);
            else if (key == "n_hat_2") cfg.table_n_hat_2 = as_int();
            else ctx.fail("unknown key '" + key + "' in [dimensioning]");
        } else if (section == "arp") {
            if (key == "preambles_per_rao") cfg.arp.preambles_per_rao = as_int();
            else if (key == "max_retransmissions") cfg.arp.max_retransmissions = as_int();
            else if (key == "backoff_ms") cfg.arp.backoff_ms = as_int();
            else if (key == "msg2_window_ms") cfg.arp.msg2_window_ms = as_int();
            else ctx.fail("unknown key '" + key + "' in [arp]");
        } else {
            ctx.fail("unknown section [" + section + "]");
        }
    }
    if (!saw_schema) {
        ctx.line = 0;
        ctx.fail("missing required key schema_version");
    }
    cfg.validate();
    return cfg;
}

}  // namespace m2m
