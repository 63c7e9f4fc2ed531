#include "mcomm/spectral.hpp"

#include <cmath>

#include "mcomm/errors.hpp"

namespace mcomm {

using cd = std::complex<double>;

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("frequency grid needs 0 < lo < hi");
    if (points < 2) throw ValidationError("frequency grid needs at least 2 points");
    std::vector<double> out(points);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

const Eigen::MatrixXd& linear_a(const LinkModel& link) {
    if (!link.a_matrix) throw ValidationError("spectral analysis needs a linear link (linearize the ERC)");
    return *link.a_matrix;
}

void check_grid(std::span<const double> omegas) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!std::isfinite(omegas[i])) throw ValidationError("frequency grid must be finite");
        if (i > 0 && !(omegas[i] > omegas[i - 1])) throw ValidationError("frequency grid must be increasing");
    }
}

}  // namespace

Eigen::RowVectorXcd output_resolvent(const LinkModel& link, double omega) {
    const auto& a = linear_a(link);
    const auto n = a.rows();
    const Eigen::MatrixXcd m = cd(0.0, omega) * Eigen::MatrixXcd::Identity(n, n) - a.cast<cd>();
    const Eigen::MatrixXcd mt = m.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(mt);
    if (!(lu.rcond() > 1e-14))
        throw NumericalError("i*omega*I - A is numerically singular at omega = " + std::to_string(omega));
    const Eigen::VectorXcd e_x = link.output_selector().transpose().cast<cd>();
    const Eigen::VectorXcd y = lu.solve(e_x);
    const double residual = (mt * y - e_x).norm();
    if (residual > 1e-10 * (mt.norm() * y.norm() + 1.0))
        throw NumericalError("resolvent solve residual too large at omega = " + std::to_string(omega));
    return y.transpose();
}

std::complex<double> transfer_function(const LinkModel& link, double omega) {
    return output_resolvent(link, omega)(static_cast<Eigen::Index>(link.input_index));
}

SpectralCurve channel_gain(const LinkModel& link, std::span<const double> omegas) {
    check_grid(omegas);
    SpectralCurve out{{omegas.begin(), omegas.end()}, {}};
    out.values.reserve(omegas.size());
    for (double w : omegas) out.values.push_back(std::norm(transfer_function(link, w)));
    return out;
}

SpectralCurve noise_psd(const LinkModel& link, double c, std::span<const double> omegas) {
    check_grid(omegas);
    if (!(c > 0.0)) throw ValidationError("noise PSD needs a positive mean input rate c");
    const Eigen::VectorXd mean = mean_steady_state(link, c);
    std::vector<double> weights;
    weights.reserve(link.events.size());
    for (const auto& e : link.events) weights.push_back(e.rate(std::span<const double>(mean.data(), mean.size())));

    SpectralCurve out{{omegas.begin(), omegas.end()}, {}};
    out.values.reserve(omegas.size());
    for (double w : omegas) {
        const Eigen::RowVectorXcd row = output_resolvent(link, w);
        double psd = 0.0;
        for (std::size_t j = 0; j < link.events.size(); ++j) {
            if (weights[j] == 0.0) continue;
            cd proj = 0.0;
            const auto& q = link.events[j].stoich;
            for (std::size_t i = 0; i < q.size(); ++i)
                if (q[i] != 0) proj += row(static_cast<Eigen::Index>(i)) * static_cast<double>(q[i]);
            psd += std::norm(proj) * weights[j];
        }
        out.values.push_back(psd);
    }
    return out;
}

std::complex<double> diffusion_response(const VoxelGrid& grid, std::complex<double> s) {
    const Eigen::MatrixXd h = h_matrix(grid);
    const auto n = h.rows();
    const Eigen::MatrixXcd m = s * Eigen::MatrixXcd::Identity(n, n) - h.cast<cd>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    if (!(lu.rcond() > 1e-14)) throw NumericalError("sI - H is numerically singular");
    Eigen::VectorXcd e_t = Eigen::VectorXcd::Zero(n);
    e_t(static_cast<Eigen::Index>(grid.tx_index - 1)) = 1.0;
    return lu.solve(e_t)(static_cast<Eigen::Index>(grid.rx_index - 1));
}

namespace {

cd closed_form(const VoxelGrid& grid, const ErcParams& p, double k_plus, double k_minus, double omega,
               double extra_decay) {
    validate(p);
    if (!(k_plus >= 0.0) || !(k_minus > 0.0)) throw ValidationError("closed form needs k+ >= 0 and k- > 0");
    const cd s(0.0, omega);
    const double r = k_plus / k_minus;
    const double ap = p.alpha1 * p.p_total;
    const cd cycle = (s + p.alpha2 + p.k2) * (s + ap + extra_decay) - p.alpha1 * p.alpha2 * p.p_total;
    const cd q = r * ((1.0 + p.alpha2 * ap / cycle) / (1.0 + r)) / (s + ap / (1.0 + r)) * diffusion_response(grid, s);
    return q * p.k1 * p.beta1 * p.z_total / (s + p.beta2 + p.k1);
}

}  // namespace

std::complex<double> closed_form_gain_rc(const VoxelGrid& grid, const ErcParams& erc, double k_plus, double k_minus,
                                         double omega) {
    return closed_form(grid, erc, k_plus, k_minus, omega, 0.0);
}

std::complex<double> closed_form_gain_catreg(const VoxelGrid& grid, const ErcParams& erc, double k_plus,
                                             double k_minus, double k_zero, double omega) {
    if (!(k_zero >= 0.0)) throw ValidationError("k_zero must be >= 0");
    const double r = k_plus / k_minus;
    return closed_form(grid, erc, k_plus, k_minus, omega, k_plus - r * k_zero);
}

}  // namespace mcomm
