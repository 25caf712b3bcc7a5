#include "mibf/experiments.hpp"

#include "mibf/errors.hpp"
#include "mibf/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace mibf {

namespace {

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& xs, char sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += num(xs[i]);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> common_metadata(const ExperimentSpec& spec) {
    return {
        {"mibf_version", kVersion},
        {"experiment", std::string(kind_name(spec.kind))},
        {"seed", std::to_string(spec.master_seed)},
        {"receivers", std::to_string(spec.receivers)},
        {"constellations", std::to_string(spec.constellations)},
        {"F", join(spec.f_values, ';')},
        {"load_policy", describe(spec.load_policy)},
        {"R_ohm", num(spec.params.resistance)},
        {"f0_hz", num(spec.params.resonance)},
        {"f_hz", num(spec.params.frequency)},
        {"L_h", num(spec.params.inductance)},
        {"distance_m", num(spec.distance)},
        {"iterative_max_iters", std::to_string(spec.iterative.max_iters)},
        {"iterative_min_gain", num(spec.iterative.min_gain)},
    };
}

RunRow make_row(double coupling, std::size_t index, std::string method, const BeamformingResult& r) {
    return {coupling, index, std::move(method), r.efficiency, r.receiver_efficiencies, r.iterations, r.converged};
}

std::vector<double> priorities_for(const ExperimentSpec& spec, std::vector<double> fallback) {
    return spec.priorities.empty() ? std::move(fallback) : spec.priorities;
}

void apply_priorities(Constellation& c, const std::vector<double>& w) {
    for (std::size_t i = 0; i < c.receivers.size(); ++i) c.receivers[i].priority = w[i];
}

// Draws the geometry of one constellation; F only rescales it afterwards.
Constellation base_constellation(const ExperimentSpec& spec, std::size_t index) {
    auto rng = stream_rng(spec.master_seed, index);
    return random_constellation(spec.receivers, 1.0, spec.params, rng, spec.load_policy, spec.distance);
}

} // namespace

std::string_view kind_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Pattern: return "pattern";
    case ExperimentKind::Priority: return "priority";
    case ExperimentKind::EfficiencySweep: return "efficiency-sweep";
    case ExperimentKind::OracleCheck: return "oracle-check";
    }
    return "unknown";
}

void ExperimentSpec::validate() const {
    if (constellations < 1) throw ValidationError("need at least one constellation");
    if (f_values.empty()) throw ValidationError("need at least one F value");
    for (double f : f_values) {
        if (!(f > 0.0) || !std::isfinite(f)) throw ValidationError("F values must be positive");
    }
    if (receivers < 1) throw ValidationError("need at least one receiver");
    if (kind == ExperimentKind::Pattern && receivers != 1) {
        throw ValidationError("pattern experiment uses exactly one receiver");
    }
    if (kind == ExperimentKind::Priority && receivers != 2) {
        throw ValidationError("priority experiment uses exactly two receivers");
    }
    if (!priorities.empty()) {
        if (priorities.size() != receivers) throw ValidationError("one priority per receiver is required");
        for (double w : priorities) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("priorities must be nonnegative");
        }
    }
    if (angle_steps < 1) throw ValidationError("angle_steps must be positive");
    params.validate();
}

std::vector<double> default_f_grid() { return parse_f_values("0.1:100:25"); }

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const auto* first = item.data();
        const auto* last = item.data() + item.size();
        while (first < last && *first == ' ') ++first;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc{} || res.ptr != last) throw ValidationError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("empty number list");
    return out;
}

std::vector<double> parse_f_values(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_number_list(text);
    std::string spec = text;
    for (auto& ch : spec) if (ch == ':') ch = ',';
    const auto parts = parse_number_list(spec);
    if (parts.size() != 3) throw ValidationError("range must be lo:hi:count");
    const double lo = parts[0], hi = parts[1];
    const auto count = static_cast<long>(parts[2]);
    if (!(lo > 0.0) || !(hi >= lo) || count < 1 || static_cast<double>(count) != parts[2]) {
        throw ValidationError("range needs 0 < lo <= hi and an integer count >= 1");
    }
    if (count == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(count));
    const double step = std::log10(hi / lo) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo * std::pow(10.0, step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

void ExperimentRecord::write_csv(std::ostream& out) const {
    for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
    if (!pattern.empty()) {
        out << "F,angle_deg,method,mean_efficiency\n";
        for (const auto& p : pattern) {
            out << num(p.coupling) << ',' << p.angle_deg << ',' << p.method << ',' << num(p.mean_efficiency) << '\n';
        }
        return;
    }
    out << "F,constellation,method,efficiency,iterations,converged,rx_efficiencies\n";
    for (const auto& r : rows) {
        out << num(r.coupling) << ',' << r.constellation << ',' << r.method << ',' << num(r.efficiency) << ','
            << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << join(r.receiver_efficiencies, ';') << '\n';
    }
}

std::string ExperimentRecord::csv() const {
    std::ostringstream ss;
    write_csv(ss);
    return ss.str();
}

std::vector<MethodSummary> summarize(const ExperimentRecord& record) {
    std::vector<MethodSummary> out;
    std::map<std::pair<double, std::string>, std::size_t> slot;
    std::vector<double> sum_sq;
    for (const auto& r : record.rows) {
        const auto key = std::make_pair(r.coupling, r.method);
        auto it = slot.find(key);
        if (it == slot.end()) {
            it = slot.emplace(key, out.size()).first;
            out.push_back({r.coupling, r.method, 0.0, 0.0, 0});
            sum_sq.push_back(0.0);
        }
        auto& s = out[it->second];
        // Welford update.
        ++s.count;
        const double delta = r.efficiency - s.mean;
        s.mean += delta / static_cast<double>(s.count);
        sum_sq[it->second] += delta * (r.efficiency - s.mean);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].stddev = out[i].count > 1 ? std::sqrt(sum_sq[i] / static_cast<double>(out[i].count - 1)) : 0.0;
    }
    return out;
}

std::vector<GainRow> gain_table(const std::vector<MethodSummary>& summary) {
    std::vector<GainRow> out;
    std::map<double, std::size_t> slot;
    for (const auto& s : summary) {
        auto it = slot.find(s.coupling);
        if (it == slot.end()) {
            it = slot.emplace(s.coupling, out.size()).first;
            GainRow g;
            g.coupling = s.coupling;
            g.baseline_mean = -1.0;
            out.push_back(g);
        }
        auto& g = out[it->second];
        if (s.method == method_name(Method::Iterative)) {
            g.iterative_mean = s.mean;
        } else if (s.mean > g.baseline_mean) {
            g.baseline_mean = s.mean;
            g.best_baseline = s.method;
        }
    }
    for (auto& g : out) {
        g.absolute_gain = g.iterative_mean - g.baseline_mean;
        g.relative_gain = g.baseline_mean > 0.0 ? g.absolute_gain / g.baseline_mean : 0.0;
    }
    return out;
}

Constellation sweep_constellation(const ExperimentSpec& spec, std::size_t index, double coupling) {
    Constellation c = base_constellation(spec, index).with_coupling(coupling, spec.params, spec.load_policy);
    if (!spec.priorities.empty()) apply_priorities(c, spec.priorities);
    return c;
}

ExperimentRecord run_pattern(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentRecord rec;
    rec.kind = ExperimentKind::Pattern;
    rec.metadata = common_metadata(spec);
    rec.metadata.emplace_back("angle_steps", std::to_string(spec.angle_steps));
    rec.metadata.emplace_back("transmitter", "canonical axes");
    rec.metadata.emplace_back("target", "receiver at 0 deg, drive optimized by the iterative method");

    const auto steps = static_cast<std::size_t>(spec.angle_steps);
    const CVector uniform_drive{1.0, 1.0, 1.0};
    for (double f : spec.f_values) {
        const double load = load_for(spec.load_policy, f, spec.params.resistance);
        // Per constellation: efficiencies of [optimized..., uniform...] over the angle grid.
        const auto per = parallel_map<std::vector<double>>(spec.constellations, spec.threads, [&](std::size_t idx) {
            auto rng = stream_rng(spec.master_seed, idx);
            const Vec3 target_axis = random_unit_vector(rng);
            const Vec3 eval_axis = random_unit_vector(rng);

            Constellation c;
            c.ref_distance = spec.distance;
            c.coupling_factor = f;
            c.ref_mutual = spec.params.mutual_for_coupling(f);
            c.receivers = {Receiver{position_on_circle(spec.distance, 0.0), target_axis, 1.0, load}};
            const CVector drive = iterative_beamforming(Scene::build(c, spec.params), spec.iterative).drive;

            std::vector<double> eff(2 * steps);
            c.receivers[0].axis = eval_axis;
            for (std::size_t a = 0; a < steps; ++a) {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(steps);
                c.receivers[0].position = position_on_circle(spec.distance, angle);
                const SystemImpedance z = build_impedance(c, spec.params);
                const TransferMatrices t = transfer_matrices(z);
                eff[a] = evaluate_drive(z, t, drive).efficiency;
                eff[steps + a] = evaluate_drive(z, t, uniform_drive).efficiency;
            }
            return eff;
        });

        std::vector<double> total(2 * steps, 0.0);
        for (const auto& e : per)
            for (std::size_t i = 0; i < total.size(); ++i) total[i] += e[i];
        const double n = static_cast<double>(spec.constellations);
        for (std::size_t a = 0; a < steps; ++a) {
            const int deg = static_cast<int>(std::lround(360.0 * static_cast<double>(a) / static_cast<double>(steps)));
            rec.pattern.push_back({f, deg, "optimized", total[a] / n});
            rec.pattern.push_back({f, deg, "uniform", total[steps + a] / n});
        }
    }
    return rec;
}

ExperimentRecord run_priority(const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<double> weighted = priorities_for(spec, {2.0, 1.0});
    ExperimentSpec base = spec;
    base.priorities.clear();

    ExperimentRecord rec;
    rec.kind = ExperimentKind::Priority;
    rec.metadata = common_metadata(spec);
    rec.metadata.emplace_back("priorities", join(weighted, ';'));
    rec.metadata.emplace_back("closest_neighbor_target", "receiver 1");

    const std::string weighted_name = "iterative_" + num(weighted[0]) + ":" + num(weighted[1]);
    for (double f : spec.f_values) {
        const auto per = parallel_map<std::vector<RunRow>>(spec.constellations, spec.threads, [&](std::size_t idx) {
            Constellation equal = sweep_constellation(base, idx, f);
            Constellation prioritized = equal;
            apply_priorities(prioritized, weighted);
            const Scene equal_scene = Scene::build(equal, spec.params);
            const Scene weighted_scene = Scene::build(prioritized, spec.params);
            return std::vector<RunRow>{
                make_row(f, idx, "iterative_1:1", solve_with_priorities(equal_scene, Method::Iterative, spec.iterative)),
                make_row(f, idx, weighted_name, solve_with_priorities(weighted_scene, Method::Iterative, spec.iterative)),
                make_row(f, idx, "closest_neighbor", mrc_closest_neighbor(equal_scene, 0)),
            };
        });
        for (const auto& rows : per) rec.rows.insert(rec.rows.end(), rows.begin(), rows.end());
    }
    return rec;
}

ExperimentRecord run_efficiency_sweep(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentRecord rec;
    rec.kind = ExperimentKind::EfficiencySweep;
    rec.metadata = common_metadata(spec);
    rec.metadata.emplace_back("priorities", spec.priorities.empty() ? "all 1" : join(spec.priorities, ';'));
    for (double f : spec.f_values) {
        const auto per = parallel_map<std::vector<RunRow>>(spec.constellations, spec.threads, [&](std::size_t idx) {
            const Scene scene = Scene::build(sweep_constellation(spec, idx, f), spec.params);
            std::vector<RunRow> rows;
            for (Method m : kAllMethods) {
                rows.push_back(make_row(f, idx, std::string(method_name(m)), run_method(scene, m, spec.iterative)));
            }
            return rows;
        });
        for (const auto& rows : per) rec.rows.insert(rec.rows.end(), rows.begin(), rows.end());
    }
    return rec;
}

ExperimentRecord run_oracle_check(const ExperimentSpec& spec) {
    spec.validate();
    const double lo = *std::min_element(spec.f_values.begin(), spec.f_values.end());
    const double hi = *std::max_element(spec.f_values.begin(), spec.f_values.end());

    ExperimentRecord rec;
    rec.kind = ExperimentKind::OracleCheck;
    rec.metadata = common_metadata(spec);
    rec.metadata.emplace_back("oracle_restarts", std::to_string(spec.oracle.restarts));
    rec.metadata.emplace_back("oracle_max_evals", std::to_string(spec.oracle.max_evals));
    rec.metadata.emplace_back("oracle_seed", std::to_string(spec.oracle.seed));
    rec.metadata.emplace_back("scene_rule", "K = 1 + (index mod receivers), F log-uniform on [min F, max F]");

    const auto per = parallel_map<std::vector<RunRow>>(spec.constellations, spec.threads, [&](std::size_t idx) {
        auto rng = stream_rng(spec.master_seed, idx);
        const std::size_t k = 1 + idx % spec.receivers;
        std::uniform_real_distribution<double> u(std::log10(lo), std::log10(hi));
        const double f = std::pow(10.0, u(rng));
        Constellation c = random_constellation(k, f, spec.params, rng, spec.load_policy, spec.distance);
        const Scene scene = Scene::build(std::move(c), spec.params);
        const auto it = iterative_beamforming(scene, spec.iterative);
        const auto best = oracle::brute_force_best(scene, spec.oracle, spec.iterative);
        return std::vector<RunRow>{make_row(f, idx, "iterative", it), make_row(f, idx, "oracle", best)};
    });
    for (const auto& rows : per) rec.rows.insert(rec.rows.end(), rows.begin(), rows.end());
    return rec;
}

ExperimentRecord run_experiment(const ExperimentSpec& spec) {
    switch (spec.kind) {
    case ExperimentKind::Pattern: return run_pattern(spec);
    case ExperimentKind::Priority: return run_priority(spec);
    case ExperimentKind::EfficiencySweep: return run_efficiency_sweep(spec);
    case ExperimentKind::OracleCheck: return run_oracle_check(spec);
    }
    throw ValidationError("unknown experiment kind");
}

namespace {

void print_matrix(std::ostream& os, const char* name, const CMatrix& m) {
    os << name << " (" << m.rows() << "x" << m.cols() << ")\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << "  ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Complex z = m(r, c);
            os << std::setw(13) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::setw(11)
               << std::abs(z.imag()) << "j  ";
        }
        os << '\n';
    }
}

void print_vector(std::ostream& os, const char* name, const CVector& v) {
    os << "  " << name << " = [";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].real() << (v[i].imag() < 0 ? "-" : "+") << std::abs(v[i].imag()) << "j";
    }
    os << "]\n";
}

} // namespace

ExperimentRecord run_solve(const Scenario& scenario, const SolveOptions& opts, std::ostream& os) {
    const auto& c = scenario.constellation;
    const Scene scene = Scene::build(c, scenario.params);

    ExperimentRecord rec;
    rec.kind = ExperimentKind::EfficiencySweep;
    rec.metadata = {{"mibf_version", kVersion},
                    {"experiment", "solve"},
                    {"receivers", std::to_string(c.receiver_count())},
                    {"F", num(c.coupling_factor)},
                    {"load_policy", describe(scenario.load_policy)}};

    const auto flags = os.flags();
    const auto precision = os.precision();
    os << std::setprecision(6);
    os << "scene: K=" << c.receiver_count() << "  F=" << c.coupling_factor << "  d=" << c.ref_distance
       << " m  Mbar=" << c.ref_mutual << " H  f=" << scenario.params.frequency
       << " Hz  f0=" << scenario.params.resonance << " Hz  R=" << scenario.params.resistance << " ohm\n";
    for (std::size_t l = 0; l < c.receiver_count(); ++l) {
        os << "  rx" << l + 1 << ": load=" << c.receivers[l].load << " ohm  priority=" << c.receivers[l].priority
           << '\n';
    }
    print_matrix(os, "Z_tx", scene.impedance.z_tx);
    print_matrix(os, "Z_rx", scene.impedance.z_rx);
    print_matrix(os, "Z_ch", scene.impedance.z_ch);
    print_matrix(os, "A", scene.transfer.a);
    print_matrix(os, "C", scene.transfer.c);

    if (c.receiver_count() == 0) {
        const NetworkSolution sol = scene.evaluate(CVector{1.0, 1.0, 1.0});
        os << "transmit-only solution under U = [1, 1, 1] V (no receivers, efficiency not defined)\n";
        print_vector(os, "I_tx", sol.i_tx);
        os << "  P_tx (apparent) = " << sol.p_tx_total << " W\n";
        os.flags(flags);
        os.precision(precision);
        return rec;
    }

    print_matrix(os, "D", scene.d);
    std::vector<std::pair<std::string, BeamformingResult>> results;
    for (Method m : kAllMethods) results.emplace_back(std::string(method_name(m)), run_method(scene, m, opts.iterative));
    if (opts.with_oracle) results.emplace_back("oracle", oracle::brute_force_best(scene, opts.oracle, opts.iterative));

    for (const auto& [name, r] : results) {
        const NetworkSolution sol = scene.evaluate(r.drive);
        os << name << ": efficiency=" << r.efficiency;
        if (name == "iterative") os << "  iterations=" << r.iterations << (r.converged ? " (converged)" : "");
        os << '\n';
        print_vector(os, "U_tx", r.drive);
        print_vector(os, "I_tx", sol.i_tx);
        print_vector(os, "I_rx", sol.i_rx);
        os << "  P_tx (apparent) = " << sol.p_tx_total << " W  P_rx = [" << join(sol.p_rx, ',')
           << "] W  per-receiver efficiency = [" << join(sol.receiver_efficiencies(), ',') << "]\n";
        rec.rows.push_back(make_row(c.coupling_factor, 0, name, r));
    }
    os.flags(flags);
    os.precision(precision);
    return rec;
}

} // namespace mibf
