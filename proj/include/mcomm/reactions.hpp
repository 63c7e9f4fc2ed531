#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mcomm/jump_event.hpp"

namespace mcomm {

enum class OutputKind { RC, CATREG };

/**
 * Receiver output module over the local state (n_B, n_X).
 *
 * RC      B -> X (k+ n_B),  X -> B (k- n_X)
 * CATREG  B -> B + X (k+ n_B),  X -> 0 (k- n_X),  B -> 0 driven by X (k0 n_X)
 */
struct ReceiverModule {
    OutputKind kind = OutputKind::RC;
    double k_plus = 0.0;
    double k_minus = 0.0;
    double k_zero = 0.0;
    Eigen::Matrix2d r_matrix = Eigen::Matrix2d::Zero();
    std::vector<JumpEvent> events;

    double association() const { return k_plus / k_minus; }
};

ReceiverModule rc_module(double k_plus, double k_minus);
ReceiverModule catreg_module(double k_plus, double k_minus, double k_zero);

/// Enzymatic reaction cycle constants. The enzyme K is the signalling molecule.
///   K + Z <-> C1 -> K + Z*     (beta1, beta2, k1)
///   P + Z* <-> C2 -> P + Z     (alpha1, alpha2, k2)
struct ErcParams {
    double beta1 = 1.0;
    double beta2 = 1.0;
    double k1 = 0.05;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double k2 = 0.5;
    double z_total = 500.0;
    double p_total = 200.0;
};

void validate(const ErcParams& p);

/// Small parameters of the time-scale separation.
struct RegimeCheck {
    double epsilon1 = 0.0;  ///< d / (beta1 Z_T)
    double epsilon2 = 0.0;  ///< k1 / k-
    double threshold = 0.2;
    bool within() const { return epsilon1 <= threshold && epsilon2 <= threshold; }
};

RegimeCheck regime(const ErcParams& p, double hop_rate, double k_minus, double threshold = 0.2);

/// Where the ERC species live in the global state. `z` and `p` are only
/// used by the nonlinear event set.
struct ErcIndexMap {
    std::size_t signal = 0;  ///< n_{L,R}
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    std::size_t z_star = 0;
    std::optional<std::size_t> z;
    std::optional<std::size_t> p;
};

/// Six mass-action events over a state of dimension `state_dim`.
/// Binding sequesters a signalling molecule into C1 until unbinding or catalysis.
std::vector<JumpEvent> erc_events(const ErcParams& params, const ErcIndexMap& map, std::size_t state_dim);

/// Linear events with the Z and P pools held saturated at Z_T and P_T.
/// K acts through the rate beta1 Z_T n_{L,R} only; the signalling count is not changed.
std::vector<JumpEvent> linearized_erc_events(const ErcParams& params, const ErcIndexMap& map,
                                             std::size_t state_dim);

}  // namespace mcomm
