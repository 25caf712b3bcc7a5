#pragma once

// Monte-Carlo experiment harness. Every constellation draws from its own
// generator, stream_rng(master_seed, index), and results are merged in index
// order, so output bytes do not depend on the thread count.

#include "mibf/beamforming.hpp"
#include "mibf/oracle.hpp"
#include "mibf/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mibf {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { Pattern, Priority, EfficiencySweep, OracleCheck };

std::string_view kind_name(ExperimentKind k);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::EfficiencySweep;
    std::size_t receivers = 5;
    std::vector<double> f_values;             ///< coupling factors F
    std::size_t constellations = 1000;
    std::vector<double> priorities;           ///< empty: all ones (priority run: {2, 1})
    std::uint64_t master_seed = 1;
    LoadPolicy load_policy = MatchedLoad{};
    CircuitParams params = CircuitParams::defaults();
    double distance = 0.4;
    IterativeOptions iterative;
    oracle::OracleConfig oracle;              ///< oracle-check only
    int angle_steps = 360;                    ///< pattern only
    unsigned threads = 1;

    void validate() const;
};

/// 25 log-spaced points on [0.1, 100].
std::vector<double> default_f_grid();

/// "0.1,1,10" (list) or "0.1:100:25" (n log-spaced points, endpoints included).
std::vector<double> parse_f_values(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

/// One (F, constellation, method) evaluation.
struct RunRow {
    double coupling = 0.0;
    std::size_t constellation = 0;
    std::string method;
    double efficiency = 0.0;                    ///< weighted objective
    std::vector<double> receiver_efficiencies;  ///< unweighted, per receiver
    int iterations = 0;
    bool converged = true;
};

/// Mean efficiency of one drive at one angle, over all constellations.
struct PatternRow {
    double coupling = 0.0;
    int angle_deg = 0;
    std::string method;
    double mean_efficiency = 0.0;
};

struct ExperimentRecord {
    ExperimentKind kind = ExperimentKind::EfficiencySweep;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<RunRow> rows;
    std::vector<PatternRow> pattern;

    /// `#`-prefixed metadata lines, a header line, then one row per entry.
    ///  runs:    F,constellation,method,efficiency,iterations,converged,rx_efficiencies
    ///  pattern: F,angle_deg,method,mean_efficiency
    /// rx_efficiencies is a ';'-separated list in receiver order.
    void write_csv(std::ostream& out) const;
    std::string csv() const;
};

struct MethodSummary {
    double coupling = 0.0;
    std::string method;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

/// Mean and sample standard deviation of `efficiency` per (F, method), in
/// first-appearance order.
std::vector<MethodSummary> summarize(const ExperimentRecord& record);

struct GainRow {
    double coupling = 0.0;
    std::string best_baseline;
    double baseline_mean = 0.0;
    double iterative_mean = 0.0;
    double absolute_gain = 0.0;
    double relative_gain = 0.0;  ///< absolute_gain / baseline_mean
};

/// Iterative mean against the best of the other methods at each F.
std::vector<GainRow> gain_table(const std::vector<MethodSummary>& summary);

/// Geometry of sweep constellation `index` at coupling F: the scene a CSV row
/// with that index and F was computed on.
Constellation sweep_constellation(const ExperimentSpec& spec, std::size_t index, double coupling);

ExperimentRecord run_pattern(const ExperimentSpec& spec);
ExperimentRecord run_priority(const ExperimentSpec& spec);
ExperimentRecord run_efficiency_sweep(const ExperimentSpec& spec);
/// Iterative vs oracle on scenes with K = 1 + (index mod receivers) and F
/// log-uniform over the range of f_values.
ExperimentRecord run_oracle_check(const ExperimentSpec& spec);
ExperimentRecord run_experiment(const ExperimentSpec& spec);

struct SolveOptions {
    bool with_oracle = false;
    oracle::OracleConfig oracle;
    IterativeOptions iterative;
};

/// Single-scene report: impedance blocks, A and C, every method's drive,
/// currents, powers and efficiencies. Without receivers only the
/// transmit-side solution under the uniform drive is reported.
ExperimentRecord run_solve(const Scenario& scenario, const SolveOptions& opts, std::ostream& report);

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t n, unsigned threads, Fn fn);

} // namespace mibf

#include "mibf/detail/parallel.hpp"
