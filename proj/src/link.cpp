#include "mcomm/link.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "mcomm/errors.hpp"

namespace mcomm {

std::size_t LinkModel::index_of(const std::string& species) const {
    const auto it = std::find(species_names.begin(), species_names.end(), species);
    if (it == species_names.end()) throw ValidationError("unknown species '" + species + "'");
    return static_cast<std::size_t>(it - species_names.begin());
}

Eigen::VectorXd LinkModel::input_vector() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    v(static_cast<Eigen::Index>(input_index)) = 1.0;
    return v;
}

Eigen::RowVectorXd LinkModel::output_selector() const {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dim()));
    v(static_cast<Eigen::Index>(output_index)) = 1.0;
    return v;
}

Eigen::VectorXd LinkModel::drift(std::span<const double> n) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    for (const auto& e : events) {
        const double w = e.rate(n);
        for (std::size_t i = 0; i < e.stoich.size(); ++i)
            if (e.stoich[i] != 0) out(static_cast<Eigen::Index>(i)) += e.stoich[i] * w;
    }
    return out;
}

std::optional<Eigen::MatrixXd> linear_generator(std::span<const JumpEvent> events, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : events) {
        const auto* lin = std::get_if<LinearRate>(&e.rate_law);
        if (!lin) return std::nullopt;
        for (const auto& [col, c] : lin->terms)
            for (std::size_t row = 0; row < e.stoich.size(); ++row)
                if (e.stoich[row] != 0)
                    a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += e.stoich[row] * c;
    }
    return a;
}

namespace {

std::vector<std::string> voxel_names(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back("nL_" + std::to_string(i));
    return names;
}

/// Diffusion events with the state padded from m to `dim` (voxel entries keep their indices).
void add_diffusion(LinkModel& link, const VoxelGrid& grid, std::size_t dim) {
    const auto m = grid.voxel_count();
    std::vector<std::size_t> identity(m);
    std::iota(identity.begin(), identity.end(), 0);
    for (const auto& e : diffusion_events(grid)) link.events.push_back(embed(e, identity, dim));
}

void finish(LinkModel& link) {
    for (const auto& e : link.events) validate(e);
    link.a_matrix = linear_generator(link.events, link.dim());
    link.initial_state.resize(link.dim(), 0);
}

}  // namespace

LinkModel assemble_om_only(const VoxelGrid& grid, const ReceiverModule& module) {
    const auto m = grid.voxel_count();
    LinkModel link;
    link.voxel_count = m;
    link.species_names = voxel_names(m);
    link.species_names.push_back("X");
    const auto dim = m + 1;
    add_diffusion(link, grid, dim);

    // B is the signalling count in the receiver voxel; X is appended last.
    const std::size_t map[2] = {grid.rx_index - 1, m};
    for (const auto& e : module.events) link.events.push_back(embed(e, map, dim));

    link.input_index = grid.tx_index - 1;
    link.output_index = m;
    finish(link);
    return link;
}

LinkModel assemble_erc_om(const VoxelGrid& grid, const ErcParams& erc, const ReceiverModule& module,
                          bool linearized) {
    validate(erc);
    const auto m = grid.voxel_count();
    LinkModel link;
    link.voxel_count = m;
    link.species_names = voxel_names(m);
    for (const char* s : {"C1", "C2", "Zstar", "X"}) link.species_names.emplace_back(s);
    if (!linearized) {
        link.species_names.emplace_back("Z");
        link.species_names.emplace_back("P");
    }
    const auto dim = link.species_names.size();
    add_diffusion(link, grid, dim);

    ErcIndexMap map;
    map.signal = grid.rx_index - 1;
    map.c1 = m;
    map.c2 = m + 1;
    map.z_star = m + 2;
    const std::size_t x = m + 3;
    if (linearized) {
        for (auto& e : linearized_erc_events(erc, map, dim)) link.events.push_back(std::move(e));
    } else {
        map.z = m + 4;
        map.p = m + 5;
        for (auto& e : erc_events(erc, map, dim)) link.events.push_back(std::move(e));
    }

    // Output module with B := Z*.
    const std::size_t om_map[2] = {map.z_star, x};
    for (const auto& e : module.events) link.events.push_back(embed(e, om_map, dim));

    link.input_index = grid.tx_index - 1;
    link.output_index = x;
    finish(link);
    if (!linearized) {
        link.initial_state[*map.z] = std::llround(erc.z_total);
        link.initial_state[*map.p] = std::llround(erc.p_total);
    }
    return link;
}

void require_hurwitz(const Eigen::MatrixXd& a) {
    const Eigen::VectorXcd eig = a.eigenvalues();
    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < eig.size(); ++i)
        if (eig(i).real() > eig(worst).real()) worst = i;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (eig.size() > 0 && eig(worst).real() >= -1e-12 * scale) {
        std::ostringstream msg;
        msg << "no stationary state: A has eigenvalue " << eig(worst).real() << (eig(worst).imag() < 0 ? "" : "+")
            << eig(worst).imag() << "i with nonnegative real part";
        throw NumericalError(msg.str());
    }
}

namespace {

const Eigen::MatrixXd& require_linear(const LinkModel& link) {
    if (!link.a_matrix) throw ValidationError("link has nonlinear rates; linearize it first");
    return *link.a_matrix;
}

}  // namespace

Eigen::VectorXd mean_steady_state(const LinkModel& link, double c) {
    const auto& a = require_linear(link);
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("mean input rate c must be >= 0");
    require_hurwitz(a);
    const Eigen::VectorXd b = link.input_vector() * c;
    Eigen::VectorXd n = a.fullPivLu().solve(-b);

    const double residual = (a * n + b).norm();
    const double scale = a.norm() * n.norm() + b.norm();
    if (residual > 1e-9 * std::max(scale, 1e-300) && scale > 0)
        throw NumericalError("steady-state solve residual too large");

    const double tol = 1e-9 * std::max(1.0, n.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n.size(); ++i) {
        if (n(i) < -tol)
            throw NumericalError("negative steady-state mean for species '" +
                                 link.species_names[static_cast<std::size_t>(i)] + "'");
        n(i) = std::max(n(i), 0.0);
    }
    return n;
}

MeanTrajectory ode_mean_trajectory(const LinkModel& link, double c, std::span<const double> time_grid,
                                   const Eigen::VectorXd& initial_state) {
    const auto& a = require_linear(link);
    if (time_grid.empty() || time_grid.front() != 0.0)
        throw ValidationError("time grid must start at 0");
    for (std::size_t i = 1; i < time_grid.size(); ++i)
        if (!(time_grid[i] > time_grid[i - 1])) throw ValidationError("time grid must be strictly increasing");
    if (initial_state.size() != static_cast<Eigen::Index>(link.dim()))
        throw ValidationError("initial state has wrong dimension");

    using State = std::vector<double>;
    const Eigen::VectorXd b = link.input_vector() * c;
    const auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
        Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::Map<Eigen::VectorXd> dv(dxdt.data(), static_cast<Eigen::Index>(dxdt.size()));
        dv.noalias() = a * xv + b;
    };

    MeanTrajectory out;
    State x(initial_state.data(), initial_state.data() + initial_state.size());
    auto stepper = boost::numeric::odeint::make_dense_output(1e-8, 1e-8,
                                                             boost::numeric::odeint::runge_kutta_dopri5<State>());
    const auto observer = [&](const State& s, double t) {
        out.times.push_back(t);
        out.states.emplace_back(Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size())));
    };
    if (time_grid.size() == 1) {
        observer(x, 0.0);
        return out;
    }
    const double dt0 = std::min(1e-3, (time_grid[1] - time_grid[0]) / 10.0);
    boost::numeric::odeint::integrate_times(stepper, rhs, x, time_grid.begin(), time_grid.end(), dt0, observer);
    return out;
}

}  // namespace mcomm
