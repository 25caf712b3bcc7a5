// Command-line front end: Monte-Carlo experiments and single-scene solves.

#include "mibf/errors.hpp"
#include "mibf/experiments.hpp"
#include "mibf/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

using namespace mibf;

struct CommonOptions {
    std::uint64_t seed = 1;
    std::size_t receivers = 0;  // 0: experiment default
    std::string f_values;
    std::size_t constellations = 1000;
    std::string priorities;
    std::string load = "matched";
    std::string out;
    bool quick = false;
    unsigned threads = 1;
    int max_iters = 50;
    double min_gain = 1e-6;
};

LoadPolicy parse_load(const std::string& text) {
    if (text == "matched") return MatchedLoad{};
    const auto v = parse_number_list(text);
    if (v.size() != 1 || !(v[0] > 0.0)) throw ValidationError("--load takes 'matched' or a positive resistance");
    return FixedLoad{v[0]};
}

void add_common(CLI::App* cmd, CommonOptions& o, bool sweep) {
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--f", o.f_values, "F values: 'a,b,c' or 'lo:hi:n' (log-spaced)");
    cmd->add_option("--load", o.load, "receiver load: 'matched' or ohms")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads")->capture_default_str();
    cmd->add_option("--max-iters", o.max_iters, "iterative method iteration cap")->capture_default_str();
    cmd->add_option("--min-gain", o.min_gain, "iterative method stopping gain")->capture_default_str();
    if (!sweep) return;
    cmd->add_option("--receivers", o.receivers, "receivers per constellation");
    cmd->add_option("--constellations", o.constellations, "constellations per F")->capture_default_str();
    cmd->add_option("--priorities", o.priorities, "comma-separated receiver priorities");
    cmd->add_option("--out", o.out, "CSV output path");
    cmd->add_flag("--quick", o.quick, "100 constellations");
}

ExperimentSpec make_spec(ExperimentKind kind, const CommonOptions& o) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.master_seed = o.seed;
    spec.constellations = o.quick ? 100 : o.constellations;
    spec.load_policy = parse_load(o.load);
    spec.threads = o.threads;
    spec.iterative.max_iters = o.max_iters;
    spec.iterative.min_gain = o.min_gain;
    switch (kind) {
    case ExperimentKind::Pattern:
        spec.receivers = 1;
        spec.f_values = {0.1, 1.0, 10.0, 100.0};
        break;
    case ExperimentKind::Priority:
        spec.receivers = 2;
        spec.f_values = {10.0};
        break;
    case ExperimentKind::EfficiencySweep:
        spec.receivers = 5;
        spec.f_values = default_f_grid();
        break;
    case ExperimentKind::OracleCheck:
        spec.receivers = 3;
        spec.constellations = o.quick ? 20 : (o.constellations == 1000 ? 50 : o.constellations);
        spec.f_values = {0.1, 100.0};
        break;
    }
    if (o.receivers != 0) spec.receivers = o.receivers;
    if (!o.f_values.empty()) spec.f_values = parse_f_values(o.f_values);
    if (!o.priorities.empty()) spec.priorities = parse_number_list(o.priorities);
    return spec;
}

void print_summary(const ExperimentRecord& rec) {
    const auto summary = summarize(rec);
    std::cout << std::setprecision(4) << std::fixed;
    std::cout << std::setw(10) << "F" << "  " << std::left << std::setw(18) << "method" << std::right
              << std::setw(10) << "mean" << std::setw(10) << "std" << std::setw(8) << "n" << '\n';
    for (const auto& s : summary) {
        std::cout << std::setw(10) << s.coupling << "  " << std::left << std::setw(18) << s.method << std::right
                  << std::setw(10) << s.mean << std::setw(10) << s.stddev << std::setw(8) << s.count << '\n';
    }
    if (rec.kind != ExperimentKind::EfficiencySweep) return;
    std::cout << "\niterative gain over the best baseline\n";
    std::cout << std::setw(10) << "F" << "  " << std::left << std::setw(18) << "baseline" << std::right
              << std::setw(10) << "base" << std::setw(10) << "iter" << std::setw(10) << "abs" << std::setw(10)
              << "rel" << '\n';
    for (const auto& g : gain_table(summary)) {
        std::cout << std::setw(10) << g.coupling << "  " << std::left << std::setw(18) << g.best_baseline
                  << std::right << std::setw(10) << g.baseline_mean << std::setw(10) << g.iterative_mean
                  << std::setw(10) << g.absolute_gain << std::setw(9) << 100.0 * g.relative_gain << "%\n";
    }
}

void print_pattern(const ExperimentRecord& rec) {
    // Compact view: every 15 degrees.
    std::cout << std::setprecision(4) << std::fixed;
    std::cout << std::setw(10) << "F" << std::setw(8) << "angle" << std::setw(12) << "optimized" << std::setw(12)
              << "uniform" << '\n';
    for (std::size_t i = 0; i + 1 < rec.pattern.size(); i += 2) {
        const auto& opt = rec.pattern[i];
        if (opt.angle_deg % 15 != 0) continue;
        std::cout << std::setw(10) << opt.coupling << std::setw(8) << opt.angle_deg << std::setw(12)
                  << opt.mean_efficiency << std::setw(12) << rec.pattern[i + 1].mean_efficiency << '\n';
    }
}

int run_sweep(ExperimentKind kind, const CommonOptions& o) {
    const ExperimentSpec spec = make_spec(kind, o);
    const ExperimentRecord rec = run_experiment(spec);
    if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw Error("cannot write " + o.out);
        rec.write_csv(f);
    }
    if (kind == ExperimentKind::Pattern) {
        print_pattern(rec);
    } else {
        print_summary(rec);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beamforming simulator for multi-receiver magnetic-induction power transfer"};
    app.set_version_flag("--version", std::string(mibf::kVersion));
    app.require_subcommand(1);

    CommonOptions pattern_opts, priority_opts, sweep_opts, oracle_opts, solve_opts;
    auto* pattern = app.add_subcommand("pattern", "mean efficiency against receiver angle, optimized vs uniform");
    add_common(pattern, pattern_opts, true);
    auto* priority = app.add_subcommand("priority", "two receivers with 1:1 and weighted priorities");
    add_common(priority, priority_opts, true);
    auto* sweep = app.add_subcommand("efficiency-sweep", "all methods over a grid of F");
    add_common(sweep, sweep_opts, true);
    auto* oracle_cmd = app.add_subcommand("oracle-check", "iterative method against brute-force search");
    add_common(oracle_cmd, oracle_opts, true);
    int oracle_restarts = 20;
    oracle_cmd->add_option("--restarts", oracle_restarts, "random restarts per scene")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "every method on one scene");
    add_common(solve, solve_opts, false);
    std::string scenario_path, write_path;
    std::size_t index = 0, solve_receivers = 5;
    bool with_oracle = false;
    solve->add_option("scenario", scenario_path, "JSON scenario file");
    solve->add_option("--index", index, "constellation index of an efficiency sweep (with --seed)");
    solve->add_option("--receivers", solve_receivers, "receivers when rebuilding from a seed")->capture_default_str();
    solve->add_flag("--oracle", with_oracle, "also run the brute-force search");
    solve->add_option("--write-scenario", write_path, "save the solved scene as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pattern->parsed()) return run_sweep(ExperimentKind::Pattern, pattern_opts);
        if (priority->parsed()) return run_sweep(ExperimentKind::Priority, priority_opts);
        if (sweep->parsed()) return run_sweep(ExperimentKind::EfficiencySweep, sweep_opts);
        if (oracle_cmd->parsed()) {
            ExperimentSpec spec = make_spec(ExperimentKind::OracleCheck, oracle_opts);
            spec.oracle.restarts = oracle_restarts;
            const ExperimentRecord rec = run_oracle_check(spec);
            if (!oracle_opts.out.empty()) {
                std::ofstream f(oracle_opts.out, std::ios::binary);
                rec.write_csv(f);
            }
            double worst = 0.0;
            for (std::size_t i = 0; i + 1 < rec.rows.size(); i += 2) {
                worst = std::max(worst, rec.rows[i + 1].efficiency - rec.rows[i].efficiency);
            }
            print_summary(rec);
            std::cout << "largest oracle - iterative gap: " << worst << '\n';
            return 0;
        }
        if (solve->parsed()) {
            Scenario scenario;
            if (!scenario_path.empty()) {
                scenario = load_scenario(scenario_path);
            } else {
                // Rebuild constellation `index` of an efficiency sweep.
                CommonOptions o = solve_opts;
                o.receivers = solve_receivers;
                ExperimentSpec spec = make_spec(ExperimentKind::EfficiencySweep, o);
                if (solve_opts.f_values.empty()) throw ValidationError("--f is required without a scenario file");
                if (spec.f_values.size() != 1) throw ValidationError("--f takes a single value for solve");
                scenario.load_policy = spec.load_policy;
                scenario.constellation = sweep_constellation(spec, index, spec.f_values.front());
            }
            if (!write_path.empty()) {
                std::ofstream f(write_path, std::ios::binary);
                if (!f) throw Error("cannot write " + write_path);
                f << write_scenario(scenario);
            }
            SolveOptions opts;
            opts.with_oracle = with_oracle;
            opts.iterative.max_iters = solve_opts.max_iters;
            opts.iterative.min_gain = solve_opts.min_gain;
            run_solve(scenario, opts, std::cout);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
