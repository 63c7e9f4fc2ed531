#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mcomm/link.hpp"
#include "mcomm/reactions.hpp"
#include "mcomm/voxel_grid.hpp"

namespace mcomm {

/// Values on positive angular frequencies (rad/s). Gains and PSDs are even
/// in omega, so only omega > 0 is stored.
struct SpectralCurve {
    std::vector<double> omegas;
    std::vector<double> values;
};

/// `points` log-spaced frequencies from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Row vector 1_X (i omega I - A)^{-1}, from one LU solve of the transpose.
Eigen::RowVectorXcd output_resolvent(const LinkModel& link, double omega);

/// Psi(i omega) = 1_X (i omega I - A)^{-1} 1_T.
std::complex<double> transfer_function(const LinkModel& link, double omega);

/// |Psi(i omega)|^2 on the grid.
SpectralCurve channel_gain(const LinkModel& link, std::span<const double> omegas);

/// Phi_eta(omega) = sum_j |1_X (i omega I - A)^{-1} q_j|^2 W_j(<n(inf)>).
SpectralCurve noise_psd(const LinkModel& link, double c, std::span<const double> omegas);

/// 1_R^T (sI - H)^{-1} 1_T for the diffusion-only medium.
std::complex<double> diffusion_response(const VoxelGrid& grid, std::complex<double> s);

/// Singular-perturbation approximation of Psi for ERC + RC:
///   Psi~(s) = Q(s) k1 beta1 Z_T / (s + beta2 + k1)
///   Q(s) = r [(1 + alpha1 alpha2 P_T / D(s)) / (1+r)] / (s + alpha1 P_T/(1+r)) * 1_R^T (sI-H)^{-1} 1_T
///   D(s) = (s + alpha2 + k2)(s + alpha1 P_T) - alpha1 alpha2 P_T,   r = k+/k-.
std::complex<double> closed_form_gain_rc(const VoxelGrid& grid, const ErcParams& erc, double k_plus, double k_minus,
                                         double omega);

/// Same structure for ERC + CATREG, with D(s) = (s + alpha2 + k2)(s + alpha1 P_T + k+ - r k0) - alpha1 alpha2 P_T.
std::complex<double> closed_form_gain_catreg(const VoxelGrid& grid, const ErcParams& erc, double k_plus,
                                             double k_minus, double k_zero, double omega);

}  // namespace mcomm
