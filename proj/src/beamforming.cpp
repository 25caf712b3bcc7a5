#include "mibf/beamforming.hpp"

#include "mibf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mibf {

Scene Scene::build(Constellation c, const CircuitParams& params) {
    Scene s;
    s.impedance = build_impedance(c, params);
    s.transfer = transfer_matrices(s.impedance);
    s.d = receiver_matrix(s.transfer.c, s.impedance.priorities, s.impedance.loads);
    s.constellation = std::move(c);
    s.params = params;
    return s;
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::Uniform: return "uniform";
    case Method::ClosestNeighbor: return "closest_neighbor";
    case Method::Eigen: return "eigen";
    case Method::Iterative: return "iterative";
    }
    return "unknown";
}

namespace {

BeamformingResult finish(const Scene& scene, CVector drive) {
    const NetworkSolution sol = scene.evaluate(drive);
    BeamformingResult r;
    r.drive = std::move(drive);
    r.efficiency = sol.efficiency;
    r.receiver_efficiencies = sol.receiver_efficiencies();
    r.trace = {sol.efficiency};
    r.iterate_trace = {sol.efficiency};
    return r;
}

std::vector<double> floored(std::vector<double> x, bool& clamped) {
    const double top = *std::max_element(x.begin(), x.end());
    const double floor = kDegenerateFloor * top;
    for (auto& v : x) {
        if (v < floor) {
            v = floor;
            clamped = true;
        }
    }
    return x;
}

} // namespace

BeamformingResult uniform(const Scene& scene, double voltage) {
    if (!(voltage > 0.0)) throw ValidationError("uniform drive voltage must be positive");
    return finish(scene, CVector{voltage, voltage, voltage});
}

namespace {
constexpr double kDistanceTieTolerance = 1e-9;
} // namespace

std::size_t closest_receiver(const Constellation& c) {
    if (c.receivers.empty()) throw IndexError("scene has no receivers");
    std::size_t best = 0;
    double best_distance = norm(c.receivers[0].position);
    for (std::size_t i = 1; i < c.receivers.size(); ++i) {
        const double dist = norm(c.receivers[i].position);
        // Placement puts every receiver at d up to rounding; treat those as ties.
        if (dist < best_distance * (1.0 - kDistanceTieTolerance)) {
            best = i;
            best_distance = dist;
        }
    }
    return best;
}

BeamformingResult mrc_closest_neighbor(const Scene& scene, std::size_t target) {
    const auto& c = scene.constellation;
    if (target >= c.receivers.size()) {
        throw IndexError("target receiver " + std::to_string(target) + " out of range");
    }
    const auto& rx = c.receivers[target];
    const Vec3 line = unit(rx.position);
    CVector drive(3);
    for (std::size_t k = 0; k < 3; ++k) drive[k] = coupling_factor_vectors(c.tx_basis[k], rx.axis, line);
    return finish(scene, std::move(drive));
}

BeamformingResult mrc_closest_neighbor(const Scene& scene) {
    return mrc_closest_neighbor(scene, closest_receiver(scene.constellation));
}

BeamformingResult eig_receive_power(const Scene& scene) {
    return finish(scene, linalg::hermitian_max_eigpair(scene.d).vector);
}

IterationState iteration_state(const Scene& scene, const CVector& previous) {
    IterationState st;
    st.v.resize(3);
    for (std::size_t i = 0; i < 3; ++i) st.v[i] = std::abs(previous[i]);
    if (*std::max_element(st.v.begin(), st.v.end()) == 0.0) throw ZeroDrive("previous iterate is zero");
    st.v = floored(std::move(st.v), st.clamped);

    st.s = CMatrix::diagonal(std::span<const double>(st.v)) * scene.transfer.a;
    const CVector su = st.s * previous;
    st.g.resize(3);
    for (std::size_t i = 0; i < 3; ++i) st.g[i] = std::abs(su[i]);
    if (*std::max_element(st.g.begin(), st.g.end()) == 0.0) {
        throw DegenerateIteration("every transmitter coil carries zero current");
    }
    st.g = floored(std::move(st.g), st.clamped);

    st.q.resize(3);
    for (std::size_t i = 0; i < 3; ++i) st.q[i] = 1.0 / std::sqrt(st.g[i]);
    return st;
}

CVector iterate_once(const Scene& scene, const CVector& previous, IterationState* state) {
    IterationState st = iteration_state(scene, previous);
    const CMatrix qs = CMatrix::diagonal(std::span<const double>(st.q)) * st.s;
    CVector next = linalg::generalized_max_eigvec(scene.d, qs);
    if (state) *state = std::move(st);
    return next;
}

BeamformingResult iterative_beamforming(const Scene& scene, const IterativeOptions& opts) {
    if (opts.max_iters < 1) throw ValidationError("max_iters must be at least 1");
    if (!(opts.min_gain >= 0.0)) throw ValidationError("min_gain must be nonnegative");

    BeamformingResult best = eig_receive_power(scene);
    best.converged = false;
    CVector current = best.drive;
    double current_eff = best.efficiency;
    // Gains are compared on the scale of unit priorities so that multiplying
    // every priority by a constant does not change where the loop stops.
    const auto& w = scene.impedance.priorities;
    const double weight_scale = w.empty() ? 1.0 : *std::max_element(w.begin(), w.end());
    const double stop_gain = opts.min_gain * (weight_scale > 0.0 ? weight_scale : 1.0);

    for (int n = 1; n <= opts.max_iters; ++n) {
        IterationState st;
        CVector next = iterate_once(scene, current, &st);
        const NetworkSolution sol = scene.evaluate(next);
        best.iterations = n;
        if (st.clamped) ++best.clamped_iterations;
        best.iterate_trace.push_back(sol.efficiency);

        if (sol.efficiency > best.efficiency) {
            best.drive = next;
            best.efficiency = sol.efficiency;
            best.receiver_efficiencies = sol.receiver_efficiencies();
        }
        best.trace.push_back(best.efficiency);

        const double gain = sol.efficiency - current_eff;
        current = std::move(next);
        current_eff = sol.efficiency;
        if (gain < stop_gain) {
            best.converged = std::abs(gain) < stop_gain;
            break;
        }
    }
    return best;
}

BeamformingResult run_method(const Scene& scene, Method method, const IterativeOptions& opts) {
    switch (method) {
    case Method::Uniform: return uniform(scene);
    case Method::ClosestNeighbor: return mrc_closest_neighbor(scene);
    case Method::Eigen: return eig_receive_power(scene);
    case Method::Iterative: return iterative_beamforming(scene, opts);
    }
    throw ValidationError("unknown beamforming method");
}

BeamformingResult solve_with_priorities(const Scene& scene, Method method, const IterativeOptions& opts) {
    const auto& w = scene.impedance.priorities;
    if (std::none_of(w.begin(), w.end(), [](double x) { return x > 0.0; })) {
        throw AllZeroPriorities("at least one receiver needs a positive priority");
    }
    return run_method(scene, method, opts);
}

} // namespace mibf
