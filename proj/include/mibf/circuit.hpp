#pragma once

// Coupled resonant-circuit network: impedance blocks, the block-inverse
// current solve, and the power bookkeeping behind the efficiency objective.

#include "mibf/circuit_params.hpp"
#include "mibf/geometry.hpp"
#include "mibf/linalg.hpp"

#include <vector>

namespace mibf {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;

/// Partitioned impedance of the full network,
///   [ Z_tx   Z_ch ] [ I_tx ]   [ U_tx ]
///   [ Z_ch^T Z_rx ] [ I_rx ] = [  0   ].
/// Loads and priorities ride along so powers can be evaluated from this alone.
struct SystemImpedance {
    CMatrix z_tx;  ///< 3x3, diagonal
    CMatrix z_rx;  ///< KxK, symmetric, diagonal includes Z_L
    CMatrix z_ch;  ///< 3xK, purely imaginary j w M
    std::vector<double> loads;
    std::vector<double> priorities;

    std::size_t receiver_count() const noexcept { return loads.size(); }
    /// The stacked (K+3)x(K+3) matrix.
    CMatrix full() const;
};

SystemImpedance build_impedance(const Constellation& c, const CircuitParams& params);

/// Drive-independent maps from U_tx to the transmitter and receiver currents:
/// I_tx = A U_tx and I_rx = C U_tx.
struct TransferMatrices {
    CMatrix a;  ///< 3x3, (Z_tx - Z_ch Z_rx^-1 Z_ch^T)^-1
    CMatrix c;  ///< Kx3, -Z_rx^-1 Z_ch^T A
};

TransferMatrices transfer_matrices(const SystemImpedance& z);

struct NetworkSolution {
    CMatrix a;
    CMatrix c;
    CVector i_tx;                 ///< [A]
    CVector i_rx;                 ///< [A]
    double p_tx_total = 0.0;      ///< apparent power sum_k |U_k||I_k| [W]
    std::vector<double> p_rx;     ///< active power |I_l|^2 Z_L per receiver [W]
    double p_rx_weighted = 0.0;   ///< sum_l W_l p_rx[l]
    double efficiency = 0.0;      ///< p_rx_weighted / p_tx_total

    /// Unweighted per-receiver share p_rx[l] / p_tx_total.
    std::vector<double> receiver_efficiencies() const;
};

/// Evaluates currents and powers for `u_tx` with precomputed transfer matrices.
/// Throws ZeroDrive for an all-zero drive.
NetworkSolution evaluate_drive(const SystemImpedance& z, const TransferMatrices& t, const CVector& u_tx);

NetworkSolution solve_network(const SystemImpedance& z, const CVector& u_tx);

/// Weighted receive-to-apparent-transmit power ratio for one drive vector.
double efficiency(const Constellation& c, const CircuitParams& params, const CVector& u_tx);

/// D = C^H diag(W_l Z_L,l) C, so that u^H D u is the weighted receive power.
CMatrix receiver_matrix(const CMatrix& c, const std::vector<double>& priorities,
                        const std::vector<double>& loads);

} // namespace mibf
