// Command-line front end: estimator sweeps, legacy-vs-proposed comparisons,
// serving-phase dimensioning tables, and custom scenarios driven by a config
// file with optional flag overrides.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "m2m/dimensioning.hpp"
#include "m2m/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    std::optional<std::string> output;
    std::optional<int> threads;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("-c,--config", flags.config_path, "scenario config file");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("-s,--seed", flags.seed, "master seed override");
    cmd->add_option("-r,--replications", flags.replications, "replication count override");
    cmd->add_option("-o,--out", flags.output, "results CSV path override");
    cmd->add_option("-t,--threads", flags.threads, "worker threads");
    cmd->add_flag("-v,--verbose", flags.verbosity, "verbose progress output");
}

m2m::ScenarioConfig resolve(const CommonFlags& flags, m2m::ScenarioKind expected) {
    m2m::ScenarioConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = m2m::load_config(flags.config_path);
    } else {
        cfg.kind = expected;
    }
    cfg.kind = expected;
    if (flags.seed) cfg.master_seed = *flags.seed;
    if (flags.replications) cfg.replications = *flags.replications;
    if (flags.output) cfg.output_path = *flags.output;
    if (flags.threads) cfg.threads = *flags.threads;
    cfg.validate();
    return cfg;
}

void report(const m2m::ScenarioConfig& cfg, const std::string& path, int verbosity) {
    if (verbosity > 0) {
        std::printf("scenario %s (%s): results -> %s, aggregates -> %s\n",
                    cfg.scenario_id.c_str(), m2m::to_string(cfg.kind).c_str(), path.c_str(),
                    m2m::aggregate_path_for(path).c_str());
    } else {
        std::printf("%s\n", path.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proactive M2M access-frame analytics and simulation"};
    app.require_subcommand(1);

    CommonFlags sweep_flags;
    auto* sweep = app.add_subcommand("estimate-sweep",
                                     "replicated single-RAO estimation across a count grid");
    add_common(sweep, sweep_flags, false);
    std::vector<int> sweep_grid;
    sweep->add_option("--n-grid", sweep_grid, "contender counts to sweep");

    CommonFlags cmp_flags;
    auto* cmp = app.add_subcommand("compare",
                                   "legacy vs proposed reliability across the N1/tau1 grids");
    add_common(cmp, cmp_flags, true);

    CommonFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "custom scenario run");
    add_common(sim, sim_flags, true);
    std::string sim_scheme = "both";
    sim->add_option("--scheme", sim_scheme, "legacy | proposed | both")
        ->check(CLI::IsMember({"legacy", "proposed", "both"}));

    auto* dim = app.add_subcommand("dimension",
                                   "print serving-phase dimensioning for given estimates");
    int dim_n_hat = 0;
    std::optional<int> dim_n_hat_2;
    int dim_l = 400;
    int dim_j = 54;
    double dim_r1 = 0.99;
    double dim_r2 = 0.99;
    dim->add_option("--n-hat", dim_n_hat, "estimated contenders (class 1)")->required();
    dim->add_option("--n-hat2", dim_n_hat_2, "estimated contenders (class 2, enables two-class)");
    dim->add_option("--l", dim_l, "RAOs per access frame");
    dim->add_option("--preambles", dim_j, "preambles per RAO");
    dim->add_option("--r-req", dim_r1, "required reliability (class 1)");
    dim->add_option("--r-req2", dim_r2, "required reliability (class 2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            auto cfg = resolve(sweep_flags, m2m::ScenarioKind::kEstimatorSweep);
            if (!sweep_grid.empty()) cfg.n_grid = sweep_grid;
            cfg.validate();
            m2m::emit_estimator_rows(m2m::run_estimator_sweep(cfg), cfg.output_path);
            report(cfg, cfg.output_path, sweep_flags.verbosity);
        } else if (cmp->parsed()) {
            const auto cfg = resolve(cmp_flags, m2m::ScenarioKind::kReliabilityComparison);
            m2m::emit_results(m2m::run_reliability_comparison(cfg), cfg.output_path);
            report(cfg, cfg.output_path, cmp_flags.verbosity);
        } else if (sim->parsed()) {
            const auto cfg = resolve(sim_flags, m2m::ScenarioKind::kCustom);
            m2m::emit_results(m2m::run_custom(cfg, sim_scheme), cfg.output_path);
            report(cfg, cfg.output_path, sim_flags.verbosity);
        } else if (dim->parsed()) {
            if (dim_n_hat_2) {
                const auto plan =
                    m2m::dimension_two_class(dim_n_hat, *dim_n_hat_2, dim_r1, dim_r2, dim_l,
                                             dim_j);
                std::printf("regime %d\n", static_cast<int>(plan.regime));
                std::printf("class 1: S=%d S1=%d Q=%s predicted=%s\n", plan.plan1.s,
                            plan.plan1.s1, m2m::format_double(plan.plan1.q).c_str(),
                            m2m::format_double(plan.plan1.predicted_reliability).c_str());
                std::printf("class 2: S=%d S1=%d Q=%s predicted=%s\n", plan.plan2.s,
                            plan.plan2.s1, m2m::format_double(plan.plan2.q).c_str(),
                            m2m::format_double(plan.plan2.predicted_reliability).c_str());
            } else {
                const auto plan = m2m::dimension_single(
                    dim_n_hat, m2m::FrameBudget{dim_l, 1.0, dim_r1}, dim_j);
                std::printf("S=%d S1=%d Q=%s predicted=%s\n", plan.s, plan.s1,
                            m2m::format_double(plan.q).c_str(),
                            m2m::format_double(plan.predicted_reliability).c_str());
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
