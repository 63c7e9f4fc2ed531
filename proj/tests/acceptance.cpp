// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance               run all criteria
//   acceptance --criterion N run only criterion N (1..8)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "helpers.hpp"
#include "mcomm/experiments.hpp"
#include "mcomm/spectral.hpp"
#include "mcomm/ssa.hpp"

using namespace mcomm;

namespace {

// Pinned tolerances and budgets.
constexpr double kLinearizationRelTol = 0.10;
constexpr double kLinearizationSigmas = 3.0;
constexpr double kClosedFormRelTol = 0.20;
constexpr double kIdentityRelTol = 1e-12;
constexpr double kKktRelTol = 1e-6;
constexpr double kRefinementRelTol = 0.005;
constexpr double kSecondsCriterion1 = 300.0;
constexpr double kSecondsCapacity = 60.0;

const std::vector<double> kRatios{0.5, 1.0, 2.0, 5.0};

struct Outcome {
    bool pass;
    std::string detail;
};

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentConfig base_config() { return ExperimentConfig{}; }

ExperimentConfig with_ratio(double r) {
    auto cfg = base_config();
    cfg.receiver.output_module = OutputKind::CATREG;
    cfg.receiver.k_plus = r * cfg.receiver.k_minus;
    return cfg;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// 1. Nonlinear ERC-RC SSA steady state vs linearized mean.
Outcome linearization_validity() {
    auto cfg = base_config();
    cfg.receiver.output_module = OutputKind::RC;
    cfg.ssa.runs = 1000;
    cfg.ssa.t_end = 100.0;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_verification(cfg, worker_threads());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double diff = std::abs(res.ssa_window_mean - res.linear_window_mean);
    const bool rel_ok = res.window_rel_deviation <= kLinearizationRelTol;
    const bool sigma_ok = diff <= kLinearizationSigmas * res.ssa_window_stderr;
    const bool time_ok = secs <= kSecondsCriterion1;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "ssa n_X=%.5f +/- %.5f, linear=%.5f, rel dev=%.4f (tol %.2f), |diff|/stderr=%.2f (tol %.0f), "
                  "%.1fs",
                  res.ssa_window_mean, res.ssa_window_stderr, res.linear_window_mean, res.window_rel_deviation,
                  kLinearizationRelTol, diff / res.ssa_window_stderr, kLinearizationSigmas, secs);
    return {rel_ok && sigma_ok && time_ok, buf};
}

// 2. ERC-OM gain strictly above OM-only on [1e-2, 1e2].
Outcome gain_ordering() {
    bool pass = true;
    std::string detail;
    for (double r : kRatios) {
        const auto cfg = with_ratio(r);
        std::vector<double> w;
        for (double x : frequency_grid(cfg))
            if (x <= 1e2) w.push_back(x);
        const auto om = channel_gain(make_link(cfg, Configuration::OmOnly), w);
        const auto erc = channel_gain(make_link(cfg, Configuration::ErcOm), w);
        double worst = INFINITY;
        for (std::size_t i = 0; i < w.size(); ++i) worst = std::min(worst, erc.values[i] / om.values[i]);
        pass = pass && worst > 1.0;
        detail += fmt("r=%g: ", r) + fmt("erc/om gain at lowest omega=%.4g, ", erc.values[0] / om.values[0]) +
                  fmt("min=%.4g; ", worst);
    }
    return {pass, detail};
}

// 3. ERC-OM noise strictly below OM-only for omega <= 1.
Outcome noise_ordering() {
    bool pass = true;
    std::string detail;
    for (double r : kRatios) {
        const auto cfg = with_ratio(r);
        std::vector<double> w;
        for (double x : frequency_grid(cfg))
            if (x <= 1.0) w.push_back(x);
        const auto om = noise_psd(make_link(cfg, Configuration::OmOnly), cfg.input.c, w);
        const auto erc = noise_psd(make_link(cfg, Configuration::ErcOm), cfg.input.c, w);
        double worst = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, erc.values[i] / om.values[i]);
        pass = pass && worst < 1.0;
        detail += fmt("r=%g: ", r) + fmt("max erc/om noise=%.4g; ", worst);
    }
    return {pass, detail};
}

// 4. ERC-OM capacity above OM-only over the k+ sweep, two enzyme pools.
Outcome capacity_ordering() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto kp = log_grid(0.1, 10.0, 10);
    bool pass = true;
    std::string detail;
    for (auto [zt, pt] : {std::pair{500.0, 200.0}, std::pair{2000.0, 500.0}}) {
        auto cfg = base_config();
        cfg.receiver.erc.z_total = zt;
        cfg.receiver.erc.p_total = pt;
        const auto om = capacity_sweep(cfg, Configuration::OmOnly, "k_plus", kp, worker_threads());
        const auto erc = capacity_sweep(cfg, Configuration::ErcOm, "k_plus", kp, worker_threads());
        double worst = INFINITY;
        for (std::size_t i = 0; i < kp.size(); ++i) worst = std::min(worst, erc[i].capacity / om[i].capacity);
        pass = pass && worst > 1.0;
        detail += fmt("Z_T=%g ", zt) + fmt("P_T=%g: ", pt) + fmt("min erc/om capacity=%.4g ", worst) +
                  fmt("(k+=10: om %.4g, ", om.back().capacity) + fmt("erc %.4g); ", erc.back().capacity);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {pass && secs <= kSecondsCapacity, detail + fmt("%.1fs", secs)};
}

// 5. ERC-OM capacity strictly increasing in Z_T at two k+ values.
Outcome zt_monotonicity() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> zt{500.0, 1000.0, 2000.0, 5000.0};
    bool pass = true;
    std::string detail;
    for (double kp : {1.0, 10.0}) {
        auto cfg = base_config();
        cfg.receiver.k_plus = kp;
        const auto rows = capacity_sweep(cfg, Configuration::ErcOm, "z_total", zt, worker_threads());
        detail += fmt("k+=%g:", kp);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            detail += fmt(" %.4g", rows[i].capacity);
            if (i > 0 && !(rows[i].capacity > rows[i - 1].capacity)) pass = false;
        }
        detail += "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {pass && secs <= kSecondsCapacity, detail + fmt("%.1fs", secs)};
}

// 6. Closed-form gain within 20% of the full linearized model on [1e-2, 1].
Outcome closed_form_fidelity() {
    bool pass = true;
    std::string detail;
    for (auto kind : {OutputKind::RC, OutputKind::CATREG}) {
        auto cfg = base_config();
        cfg.receiver.output_module = kind;
        const auto grid = make_grid(cfg.grid);
        const auto link = make_link(cfg, Configuration::ErcOm);
        const auto& r = cfg.receiver;
        double worst = 0.0;
        for (double w : log_grid(1e-2, 1.0, 100)) {
            const double full = std::norm(transfer_function(link, w));
            const auto psi = kind == OutputKind::RC ? closed_form_gain_rc(grid, r.erc, r.k_plus, r.k_minus, w)
                                                    : closed_form_gain_catreg(grid, r.erc, r.k_plus, r.k_minus, r.k_zero, w);
            worst = std::max(worst, std::abs(std::norm(psi) - full) / full);
        }
        pass = pass && worst <= kClosedFormRelTol;
        detail += (kind == OutputKind::RC ? "RC" : "CATREG") + fmt(" max rel err=%.4f; ", worst);
    }
    return {pass, detail + fmt("tol %.2f", kClosedFormRelTol)};
}

// 7. Structural identities.
Outcome structural_identities() {
    std::string detail;

    // (a) H of the five-voxel line.
    const auto line = testutil::line_grid();
    const double d = line.hop_rate(), e = 0.1 * d;
    Eigen::MatrixXd h_expected(5, 5);
    h_expected << -d, d, 0, 0, 0, d, -2 * d, d, 0, 0, 0, d, -2 * d - e, d, 0, 0, 0, d, -2 * d, d, 0, 0, 0, d, -d;
    const bool a_ok = (h_matrix(line) - h_expected).cwiseAbs().maxCoeff() <= 1e-14 * d;
    detail += std::string("(a) ") + (a_ok ? "ok" : "MISMATCH");

    // (b) A n vs sum of q_j W_j(n).
    std::mt19937_64 rng(77);
    double worst_b = 0.0;
    for (auto which : {Configuration::OmOnly, Configuration::ErcOm})
        for (auto kind : {OutputKind::RC, OutputKind::CATREG}) {
            auto cfg = base_config();
            cfg.receiver.output_module = kind;
            const auto link = make_link(cfg, which);
            for (int t = 0; t < 100; ++t) {
                const auto n = testutil::random_state(rng, static_cast<Eigen::Index>(link.dim()));
                worst_b = std::max(worst_b, testutil::rel_err(*link.a_matrix * n, testutil::event_drift(link.events, n)));
            }
        }
    const bool b_ok = worst_b <= kIdentityRelTol;
    detail += fmt("; (b) max rel=%.2e", worst_b);

    // (c) conjugate symmetry and evenness on random stable links.
    std::uniform_real_distribution<double> u(0.1, 5.0);
    double worst_c = 0.0;
    for (int t = 0; t < 10; ++t) {
        const std::array<int, 3> dims{3, 2, 1};
        const auto grid = build_grid(dims, 1.0, u(rng), 1, 6, absorbing_boundary(dims, u(rng)));
        const auto link = t % 2 ? assemble_om_only(grid, rc_module(u(rng), u(rng)))
                                : assemble_erc_om(grid, ErcParams{}, catreg_module(u(rng), u(rng), 0.01), true);
        for (double w : {0.03, 0.8, 12.0}) {
            const auto p = transfer_function(link, w), m = transfer_function(link, -w);
            worst_c = std::max(worst_c, std::abs(m - std::conj(p)) / std::abs(p));
            const std::vector<double> pw{w}, mw{-w};
            const double np = noise_psd(link, 5.0, pw).values[0], nm = noise_psd(link, 5.0, mw).values[0];
            worst_c = std::max(worst_c, std::abs(np - nm) / np);
        }
    }
    const bool c_ok = worst_c <= kIdentityRelTol;
    detail += fmt("; (c) max rel=%.2e", worst_c);

    // (d) water-filling KKT and dominance.
    const auto cfg = base_config();
    const auto link = make_link(cfg, Configuration::ErcOm);
    const auto w = frequency_grid(cfg);
    const auto gain = channel_gain(link, w);
    const auto noise = noise_psd(link, cfg.input.c, w);
    const auto best = water_filling(gain, noise, cfg.input.power_budget);
    double kkt = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double floor = noise.values[i] / gain.values[i];
        const double phi = best.input_psd.values[i];
        if (phi > 0.0)
            kkt = std::max(kkt, std::abs(best.water_level - floor - phi) / best.water_level);
        else
            kkt = std::max(kkt, std::max(0.0, best.water_level * (1.0 - kKktRelTol) - floor) / best.water_level);
    }
    bool dominated = true;
    for (int t = 0; t < 50; ++t) {
        SpectralCurve alloc{w, {}};
        const double corner = std::pow(10.0, -2.0 + 5.0 * u(rng) / 5.0);
        for (double x : w) alloc.values.push_back(u(rng) / (1.0 + x / corner));
        const double scale = cfg.input.power_budget / two_sided_integral(alloc);
        for (auto& v : alloc.values) v *= scale;
        if (mutual_information(gain, noise, alloc) > best.capacity * (1.0 + 1e-12)) dominated = false;
    }
    const bool d_ok = kkt <= kKktRelTol && dominated;
    detail += fmt("; (d) kkt=%.2e", kkt) + (dominated ? " dominant" : " NOT dominant");

    // (e) exact pool conservation along a nonlinear ERC-RC trajectory.
    auto rc_cfg = base_config();
    rc_cfg.receiver.output_module = OutputKind::RC;
    const auto nl = make_link(rc_cfg, Configuration::ErcOm, false);
    const auto tr = ssa_run(nl, rc_cfg.input.c, 20.0, 5, nl.initial_state);
    const auto z = nl.index_of("Z"), zs = nl.index_of("Zstar"), c1 = nl.index_of("C1"), c2 = nl.index_of("C2"),
               x = nl.index_of("X"), p = nl.index_of("P");
    bool e_ok = true;
    for (const auto& s : tr.states) {
        if (s[z] + s[zs] + s[c1] + s[c2] + s[x] != 500 || s[p] + s[c2] != 200) e_ok = false;
        for (auto v : s)
            if (v < 0) e_ok = false;
    }
    detail += fmt("; (e) %g events, pools ", static_cast<double>(tr.states.size() - 1)) + (e_ok ? "exact" : "BROKEN");
    return {a_ok && b_ok && c_ok && d_ok && e_ok, detail};
}

// 8. Water-filling self-consistency.
Outcome water_filling_consistency() {
    bool pass = true;
    std::string detail;
    for (auto which : {Configuration::OmOnly, Configuration::ErcOm}) {
        auto cfg = base_config();
        double last = 0.0;
        detail += to_string(which) + ":";
        for (double budget : {1.0, 10.0, 100.0, 1000.0}) {
            cfg.input.power_budget = budget;
            const double c = link_capacity(cfg, which).capacity;
            if (c < last) pass = false;
            last = c;
            detail += fmt(" %.4g", c);
        }
        cfg.input.power_budget = 100.0;
        cfg.frequency.points = 400;
        const double coarse = link_capacity(cfg, which).capacity;
        cfg.frequency.points = 800;
        const double fine = link_capacity(cfg, which).capacity;
        const double change = std::abs(fine - coarse) / fine;
        if (!(change < kRefinementRelTol)) pass = false;
        detail += fmt(", 400->800 change=%.2e; ", change);
    }
    return {pass, detail};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"linearization validity", linearization_validity},
    {"gain ordering", gain_ordering},
    {"noise ordering", noise_ordering},
    {"capacity ordering", capacity_ordering},
    {"Z_T monotonicity", zt_monotonicity},
    {"closed-form fidelity", closed_form_fidelity},
    {"structural identities", structural_identities},
    {"water-filling self-consistency", water_filling_consistency},
};

}  // namespace

int main(int argc, char** argv) {
    std::size_t only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::stoul(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (only > kCriteria.size()) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", kCriteria.size());
        return 2;
    }

    int failures = 0;
    for (std::size_t k = 0; k < kCriteria.size(); ++k) {
        if (only && only != k + 1) continue;
        Outcome o;
        try {
            o = kCriteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, kCriteria[k].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
