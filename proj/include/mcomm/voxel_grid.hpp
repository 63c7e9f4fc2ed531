#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mcomm/jump_event.hpp"

namespace mcomm {

/// Escape of signalling molecules out of the medium through a voxel's surface.
struct Escape {
    std::size_t voxel = 0;  ///< 1-based voxel index
    double rate = 0.0;      ///< per-molecule escape rate e (1/s)
};

/**
 * A homogeneous medium of Mx x My x Mz cubic voxels.
 *
 * Voxels are numbered 1-based with x fastest:
 *   index = x + (y-1)*Mx + (z-1)*Mx*My.
 * Molecules hop between face-adjacent voxels at rate d = D / delta^2.
 */
class VoxelGrid {
   public:
    std::array<int, 3> dims{1, 1, 1};
    double delta = 1.0;       ///< voxel edge length (um)
    double diff_coeff = 1.0;  ///< D (um^2/s)
    std::size_t tx_index = 1;
    std::size_t rx_index = 2;
    std::vector<Escape> escapes;

    std::size_t voxel_count() const { return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]; }
    double hop_rate() const { return diff_coeff / (delta * delta); }

    /// 1-based linear index of voxel (x, y, z), each coordinate 1-based.
    std::size_t index_of(int x, int y, int z) const;
    std::array<int, 3> coords_of(std::size_t index) const;

    /// 1-based indices of the face neighbours of a voxel, in +x,-x,+y,-y,+z,-z order.
    std::vector<std::size_t> neighbours(std::size_t index) const;

    /// Number of voxel faces lying on the outer surface of the medium.
    int exterior_faces(std::size_t index) const;

    /// Sum of escape rates attached to a voxel.
    double escape_rate(std::size_t index) const;
};

/// Validated construction. Throws ValidationError on any violated invariant.
VoxelGrid build_grid(std::array<int, 3> dims, double delta, double diff_coeff, std::size_t tx, std::size_t rx,
                     std::vector<Escape> escapes);

/// One escape per voxel with rate `rate` times its number of exterior faces.
std::vector<Escape> absorbing_boundary(std::array<int, 3> dims, double rate);

/// Hop events for every ordered face-adjacent pair, then one event per escape.
std::vector<JumpEvent> diffusion_events(const VoxelGrid& grid);

/// Generator of the diffusion-only dynamics: H n = sum_j q_j W_j(n).
Eigen::MatrixXd h_matrix(const VoxelGrid& grid);

}  // namespace mcomm
