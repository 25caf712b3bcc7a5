#pragma once

// Brute-force reference optimizer for the exact efficiency. Independent of
// the iterative method's approximations; used to bound it from above.

#include "mibf/beamforming.hpp"

#include <array>
#include <cstdint>
#include <functional>

namespace mibf::oracle {

struct OracleConfig {
    int restarts = 20;
    int max_evals = 2000;           ///< objective evaluations per restart
    double convergence_tol = 1e-10; ///< simplex spread in objective value
    std::uint64_t seed = 1;

    void validate() const;
};

using ChartPoint = std::array<double, 4>;

/// Maps four reals to a unit drive whose `pivot` entry is real and positive:
/// the pivot gets 1 and the other two entries (in cyclic order after the
/// pivot) get p0 + i p1 and p2 + i p3 before normalization. Each chart covers
/// every drive direction whose pivot entry is nonzero.
CVector parameterize(const ChartPoint& p, std::size_t pivot = 0);

/// Inverse chart. Throws ZeroDrive if the pivot entry of `drive` is zero.
ChartPoint chart_coordinates(const CVector& drive, std::size_t pivot = 0);

struct MinimizeResult {
    ChartPoint point{};
    double value = 0.0;
    int evaluations = 0;
};

/// Nelder-Mead simplex descent in four dimensions.
MinimizeResult nelder_mead(const std::function<double(const ChartPoint&)>& f, const ChartPoint& start,
                           double step, int max_evals, double tol);

/// Best drive found from the four method outputs (used directly and as
/// simplex starts) plus `restarts` random starts. Deterministic in `seed`.
BeamformingResult brute_force_best(const Scene& scene, const OracleConfig& cfg = {},
                                   const IterativeOptions& iterative = {});

} // namespace mibf::oracle
