#include "mibf/oracle.hpp"

#include "mibf/errors.hpp"
#include "mibf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mibf::oracle {

void OracleConfig::validate() const {
    if (restarts < 1) throw ValidationError("oracle restarts must be at least 1");
    if (max_evals < 100) throw ValidationError("oracle max_evals must be at least 100");
    if (!(convergence_tol >= 0.0)) throw ValidationError("oracle tolerance must be nonnegative");
}

CVector parameterize(const ChartPoint& p, std::size_t pivot) {
    if (pivot > 2) throw IndexError("chart pivot must be 0, 1 or 2");
    CVector v(3);
    v[pivot] = 1.0;
    v[(pivot + 1) % 3] = Complex{p[0], p[1]};
    v[(pivot + 2) % 3] = Complex{p[2], p[3]};
    return linalg::normalized(std::move(v));
}

ChartPoint chart_coordinates(const CVector& drive, std::size_t pivot) {
    if (pivot > 2) throw IndexError("chart pivot must be 0, 1 or 2");
    if (drive.size() != 3) throw DimensionMismatch("drive vector must have three entries");
    const Complex ref = drive[pivot];
    if (ref == Complex{}) throw ZeroDrive("pivot entry is zero; use another chart");
    const Complex a = drive[(pivot + 1) % 3] / ref;
    const Complex b = drive[(pivot + 2) % 3] / ref;
    return {a.real(), a.imag(), b.real(), b.imag()};
}

MinimizeResult nelder_mead(const std::function<double(const ChartPoint&)>& f, const ChartPoint& start,
                           double step, int max_evals, double tol) {
    constexpr std::size_t n = 4;
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    std::array<ChartPoint, n + 1> x{};
    std::array<double, n + 1> fx{};
    int evals = 0;
    auto eval = [&](const ChartPoint& p) {
        ++evals;
        const double v = f(p);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    x[0] = start;
    fx[0] = eval(start);
    for (std::size_t i = 0; i < n; ++i) {
        x[i + 1] = start;
        x[i + 1][i] += step;
        fx[i + 1] = eval(x[i + 1]);
    }

    std::array<std::size_t, n + 1> order{};
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
        if (fx[worst] - fx[best] <= tol) break;

        ChartPoint centroid{};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c) centroid[c] += x[order[i]][c] / n;

        auto along = [&](double t) {
            ChartPoint p;
            for (std::size_t c = 0; c < n; ++c) p[c] = centroid[c] + t * (x[worst][c] - centroid[c]);
            return p;
        };

        const ChartPoint xr = along(-kReflect);
        const double fr = eval(xr);
        if (fr < fx[best]) {
            const ChartPoint xe = along(-kExpand);
            const double fe = eval(xe);
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
            continue;
        }
        if (fr < fx[second]) {
            x[worst] = xr;
            fx[worst] = fr;
            continue;
        }
        const bool outside = fr < fx[worst];
        const ChartPoint xc = along(outside ? -kContract : kContract);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fx[worst])) {
            x[worst] = xc;
            fx[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t c = 0; c < n; ++c) x[i][c] = x[best][c] + kShrink * (x[i][c] - x[best][c]);
            fx[i] = eval(x[i]);
        }
    }

    const auto it = std::min_element(fx.begin(), fx.end());
    const auto idx = static_cast<std::size_t>(it - fx.begin());
    return {x[idx], fx[idx], evals};
}

namespace {

std::size_t largest_entry(const CVector& v) {
    std::size_t idx = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[idx])) idx = i;
    return idx;
}

} // namespace

BeamformingResult brute_force_best(const Scene& scene, const OracleConfig& cfg, const IterativeOptions& iterative) {
    cfg.validate();

    CVector best_drive;
    double best_eff = -1.0;
    auto consider = [&](const CVector& drive) {
        const CVector unit_drive = linalg::normalized(drive);
        const double e = scene.efficiency(unit_drive);
        if (e > best_eff) {
            best_eff = e;
            best_drive = unit_drive;
        }
    };
    auto descend = [&](const CVector& start) {
        const std::size_t pivot = largest_entry(start);
        auto objective = [&](const ChartPoint& p) { return -scene.efficiency(parameterize(p, pivot)); };
        const MinimizeResult m =
            nelder_mead(objective, chart_coordinates(start, pivot), 0.25, cfg.max_evals, cfg.convergence_tol);
        consider(parameterize(m.point, pivot));
    };

    for (Method method : kAllMethods) {
        const CVector start = run_method(scene, method, iterative).drive;
        consider(start);
        descend(start);
    }
    for (int r = 0; r < cfg.restarts; ++r) {
        auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(r));
        std::normal_distribution<double> gauss;
        CVector start(3);
        for (auto& z : start) z = Complex{gauss(rng), gauss(rng)};
        descend(start);
    }

    BeamformingResult out;
    const NetworkSolution sol = scene.evaluate(best_drive);
    out.drive = linalg::canonical_phase(best_drive);
    out.efficiency = sol.efficiency;
    out.receiver_efficiencies = sol.receiver_efficiencies();
    out.trace = {sol.efficiency};
    out.iterate_trace = {sol.efficiency};
    out.iterations = cfg.restarts;
    return out;
}

} // namespace mibf::oracle
