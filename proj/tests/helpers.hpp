#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mcomm/jump_event.hpp"
#include "mcomm/voxel_grid.hpp"

namespace testutil {

// Propensity evaluated straight from the rate-law data, independent of JumpEvent::rate.
inline double propensity(const mcomm::JumpEvent& ev, const Eigen::VectorXd& n) {
    if (auto* lin = std::get_if<mcomm::LinearRate>(&ev.rate_law)) {
        double w = 0.0;
        for (auto [i, c] : lin->terms) w += c * n(static_cast<Eigen::Index>(i));
        return w;
    }
    if (auto* ma = std::get_if<mcomm::MassActionRate>(&ev.rate_law)) {
        double w = ma->k;
        for (auto i : ma->reactants) w *= n(static_cast<Eigen::Index>(i));
        return w;
    }
    return std::get<mcomm::ZeroOrderRate>(ev.rate_law).rate;
}

// sum_j q_j W_j(n)
inline Eigen::VectorXd event_drift(const std::vector<mcomm::JumpEvent>& events, const Eigen::VectorXd& n) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n.size());
    for (const auto& ev : events) {
        const double w = propensity(ev, n);
        for (std::size_t i = 0; i < ev.stoich.size(); ++i) out(static_cast<Eigen::Index>(i)) += ev.stoich[i] * w;
    }
    return out;
}

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / scale;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline Eigen::VectorXd random_state(std::mt19937_64& rng, Eigen::Index dim, double hi = 1000.0) {
    std::uniform_real_distribution<double> u(0.0, hi);
    Eigen::VectorXd n(dim);
    for (Eigen::Index i = 0; i < dim; ++i) n(i) = u(rng);
    return n;
}

// 5x1x1 line, transmitter 2, receiver 4, escape e = d/10 at voxel 3.
inline mcomm::VoxelGrid line_grid() {
    const double d = 9.0;
    return mcomm::build_grid({5, 1, 1}, 1.0 / 3.0, 1.0, 2, 4, {{3, d / 10.0}});
}

}  // namespace testutil
