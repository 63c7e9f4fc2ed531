#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcomm/jump_event.hpp"
#include "mcomm/reactions.hpp"
#include "mcomm/voxel_grid.hpp"

namespace mcomm {

/**
 * Transmitter, medium and receiver as one jump process over a global state.
 *
 * State layout: voxel signalling counts n_{L,1..m} first, then receiver
 * species. OM-only: (n_L | X). ERC-OM linearized: (n_L | C1, C2, Z*, X).
 * ERC-OM nonlinear additionally carries (Z, P) at the end.
 */
struct LinkModel {
    std::vector<std::string> species_names;
    std::vector<JumpEvent> events;
    std::size_t input_index = 0;   ///< transmitter voxel T (0-based state index)
    std::size_t output_index = 0;  ///< X (0-based state index)
    std::optional<Eigen::MatrixXd> a_matrix;  ///< present iff every rate law is linear
    std::vector<std::int64_t> initial_state;  ///< default SSA start (pools full, everything else empty)
    std::size_t voxel_count = 0;

    std::size_t dim() const { return species_names.size(); }
    std::size_t index_of(const std::string& species) const;

    Eigen::VectorXd input_vector() const;
    Eigen::RowVectorXd output_selector() const;

    /// Sum over events of q_j W_j(n).
    Eigen::VectorXd drift(std::span<const double> n) const;
};

/// Matrix A with A n = sum_j q_j W_j(n); empty if any rate is not linear.
/// Zero-order events are rejected since they contribute no A-term.
std::optional<Eigen::MatrixXd> linear_generator(std::span<const JumpEvent> events, std::size_t dim);

LinkModel assemble_om_only(const VoxelGrid& grid, const ReceiverModule& module);
LinkModel assemble_erc_om(const VoxelGrid& grid, const ErcParams& erc, const ReceiverModule& module, bool linearized);

/// <n(inf)> solving A <n> + 1_T c = 0. Requires a Hurwitz A.
Eigen::VectorXd mean_steady_state(const LinkModel& link, double c);

/// Throws NumericalError naming the eigenvalue with the largest real part when A is not Hurwitz.
void require_hurwitz(const Eigen::MatrixXd& a);

struct MeanTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

/// Integrates d<n>/dt = A <n> + 1_T c and reports the state at each grid time.
MeanTrajectory ode_mean_trajectory(const LinkModel& link, double c, std::span<const double> time_grid,
                                   const Eigen::VectorXd& initial_state);

}  // namespace mcomm
