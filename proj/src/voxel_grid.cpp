#include "mcomm/voxel_grid.hpp"

#include <cmath>
#include <string>

#include "mcomm/errors.hpp"

namespace mcomm {

std::size_t VoxelGrid::index_of(int x, int y, int z) const {
    if (x < 1 || x > dims[0] || y < 1 || y > dims[1] || z < 1 || z > dims[2])
        throw ValidationError("voxel coordinate (" + std::to_string(x) + "," + std::to_string(y) + "," +
                              std::to_string(z) + ") outside the grid");
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(y - 1) * dims[0] +
           static_cast<std::size_t>(z - 1) * dims[0] * dims[1];
}

std::array<int, 3> VoxelGrid::coords_of(std::size_t index) const {
    if (index < 1 || index > voxel_count()) throw ValidationError("voxel index out of range");
    const auto i = static_cast<int>(index - 1);
    return {i % dims[0] + 1, (i / dims[0]) % dims[1] + 1, i / (dims[0] * dims[1]) + 1};
}

std::vector<std::size_t> VoxelGrid::neighbours(std::size_t index) const {
    const auto [x, y, z] = coords_of(index);
    static constexpr int offsets[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<std::size_t> out;
    for (const auto& o : offsets) {
        const int nx = x + o[0], ny = y + o[1], nz = z + o[2];
        if (nx >= 1 && nx <= dims[0] && ny >= 1 && ny <= dims[1] && nz >= 1 && nz <= dims[2])
            out.push_back(index_of(nx, ny, nz));
    }
    return out;
}

int VoxelGrid::exterior_faces(std::size_t index) const {
    return 6 - static_cast<int>(neighbours(index).size());
}

double VoxelGrid::escape_rate(std::size_t index) const {
    double e = 0.0;
    for (const auto& esc : escapes)
        if (esc.voxel == index) e += esc.rate;
    return e;
}

VoxelGrid build_grid(std::array<int, 3> dims, double delta, double diff_coeff, std::size_t tx, std::size_t rx,
                     std::vector<Escape> escapes) {
    for (int m : dims)
        if (m < 1) throw ValidationError("grid dimensions must be >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("voxel edge length delta must be > 0");
    if (!(diff_coeff > 0.0) || !std::isfinite(diff_coeff))
        throw ValidationError("diffusion coefficient must be > 0");

    VoxelGrid g;
    g.dims = dims;
    g.delta = delta;
    g.diff_coeff = diff_coeff;
    const auto n = g.voxel_count();
    if (tx < 1 || tx > n) throw ValidationError("transmitter voxel index out of range");
    if (rx < 1 || rx > n) throw ValidationError("receiver voxel index out of range");
    if (tx == rx) throw ValidationError("transmitter and receiver must occupy distinct voxels");
    for (const auto& e : escapes) {
        if (e.voxel < 1 || e.voxel > n) throw ValidationError("escape voxel index out of range");
        if (!(e.rate >= 0.0) || !std::isfinite(e.rate)) throw ValidationError("escape rate must be >= 0");
    }
    if (!(g.hop_rate() > 0.0)) throw ValidationError("hop rate D/delta^2 underflows to zero");
    g.tx_index = tx;
    g.rx_index = rx;
    g.escapes = std::move(escapes);
    return g;
}

std::vector<Escape> absorbing_boundary(std::array<int, 3> dims, double rate) {
    VoxelGrid shape;
    shape.dims = dims;
    std::vector<Escape> out;
    for (std::size_t i = 1; i <= shape.voxel_count(); ++i) {
        const int faces = shape.exterior_faces(i);
        if (faces > 0) out.push_back({i, rate * faces});
    }
    return out;
}

std::vector<JumpEvent> diffusion_events(const VoxelGrid& grid) {
    const auto m = grid.voxel_count();
    const double d = grid.hop_rate();
    std::vector<JumpEvent> events;
    for (std::size_t i = 1; i <= m; ++i) {
        for (auto j : grid.neighbours(i)) {
            std::vector<int> q(m, 0);
            q[i - 1] = -1;
            q[j - 1] = 1;
            events.push_back(linear_event(std::move(q), i - 1, d, "hop " + std::to_string(i) + "->" + std::to_string(j)));
        }
    }
    for (const auto& e : grid.escapes) {
        std::vector<int> q(m, 0);
        q[e.voxel - 1] = -1;
        events.push_back(linear_event(std::move(q), e.voxel - 1, e.rate, "escape " + std::to_string(e.voxel)));
    }
    return events;
}

Eigen::MatrixXd h_matrix(const VoxelGrid& grid) {
    const auto m = static_cast<Eigen::Index>(grid.voxel_count());
    const double d = grid.hop_rate();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 1; i <= grid.voxel_count(); ++i) {
        const auto c = static_cast<Eigen::Index>(i - 1);
        for (auto j : grid.neighbours(i)) {
            h(static_cast<Eigen::Index>(j - 1), c) += d;
            h(c, c) -= d;
        }
    }
    for (const auto& e : grid.escapes) {
        const auto c = static_cast<Eigen::Index>(e.voxel - 1);
        h(c, c) -= e.rate;
    }
    return h;
}

}  // namespace mcomm
