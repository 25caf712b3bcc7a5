#pragma once

// Drive-vector strategies for the three-coil transmitter.

#include "mibf/circuit.hpp"

#include <string_view>
#include <vector>

namespace mibf {

/// One constellation with everything that does not depend on the drive
/// precomputed: impedance blocks, A and C, and the receiver matrix D.
struct Scene {
    Constellation constellation;
    CircuitParams params;
    SystemImpedance impedance;
    TransferMatrices transfer;
    CMatrix d;

    static Scene build(Constellation c, const CircuitParams& params);

    NetworkSolution evaluate(const CVector& u_tx) const { return evaluate_drive(impedance, transfer, u_tx); }
    double efficiency(const CVector& u_tx) const { return evaluate(u_tx).efficiency; }
};

enum class Method { Uniform, ClosestNeighbor, Eigen, Iterative };

inline constexpr Method kAllMethods[] = {Method::Uniform, Method::ClosestNeighbor, Method::Eigen,
                                         Method::Iterative};

std::string_view method_name(Method m);

struct BeamformingResult {
    CVector drive;                              ///< U_tx [V]
    double efficiency = 0.0;                    ///< weighted objective at `drive`
    std::vector<double> receiver_efficiencies;  ///< unweighted p_rx[l] / p_tx
    int iterations = 0;
    std::vector<double> trace;                  ///< best-so-far efficiency, one entry per iterate
    std::vector<double> iterate_trace;          ///< raw efficiency of each iterate
    bool converged = true;
    int clamped_iterations = 0;                 ///< iterations where V_n or G_n hit the floor
};

struct IterativeOptions {
    int max_iters = 50;
    double min_gain = 1e-6;  ///< efficiency gain between successive iterates, per unit of the largest priority
};

/// Per-iteration quantities of the iterative method for a previous drive.
struct IterationState {
    std::vector<double> v;  ///< diag(V_n) = |U_{n-1}|
    CMatrix s;              ///< S_n = V_n A
    std::vector<double> g;  ///< G_n = |S_n U_{n-1}|
    std::vector<double> q;  ///< diag(Q_n) = G_n^{-1/2}
    bool clamped = false;
};

/// Entries of V_n and G_n below this fraction of their maximum are raised to it.
inline constexpr double kDegenerateFloor = 1e-12;

BeamformingResult uniform(const Scene& scene, double voltage = 1.0);

/// Index of the receiver nearest the transmitter; distances equal to 1e-9
/// relative are ties, and ties go to the lowest index.
std::size_t closest_receiver(const Constellation& c);

/// U_tx = [J_l1, J_l2, J_l3] * 1 V for receiver `target`.
BeamformingResult mrc_closest_neighbor(const Scene& scene, std::size_t target);
BeamformingResult mrc_closest_neighbor(const Scene& scene);

/// Unit-norm top eigenvector of D, i.e. receive-power maximization under
/// the weak-coupling transmit-power approximation.
BeamformingResult eig_receive_power(const Scene& scene);

IterationState iteration_state(const Scene& scene, const CVector& previous);
/// One generalized-eigenvalue update starting from `previous`.
CVector iterate_once(const Scene& scene, const CVector& previous, IterationState* state = nullptr);

/// Successive generalized-eigenvalue updates started from the eigen
/// solution. Each iterate is scored with the exact apparent transmit power
/// and the best one seen is returned.
BeamformingResult iterative_beamforming(const Scene& scene, const IterativeOptions& opts = {});

BeamformingResult run_method(const Scene& scene, Method method, const IterativeOptions& opts = {});

/// `run_method` after checking that some receiver has positive priority.
/// Throws AllZeroPriorities otherwise.
BeamformingResult solve_with_priorities(const Scene& scene, Method method, const IterativeOptions& opts = {});

} // namespace mibf
