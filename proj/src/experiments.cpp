#include "mcomm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "mcomm/errors.hpp"
#include "mcomm/spectral.hpp"
#include "mcomm/ssa.hpp"

namespace mcomm {

namespace {

std::vector<Configuration> configured_links(const ExperimentConfig& cfg) {
    switch (cfg.receiver.configuration) {
        case Configuration::OmOnly: return {Configuration::OmOnly};
        case Configuration::ErcOm: return {Configuration::ErcOm};
        case Configuration::Both: return {Configuration::OmOnly, Configuration::ErcOm};
    }
    return {};
}

void require_linearized(const ExperimentConfig& cfg) {
    if (!cfg.receiver.linearized)
        throw ValidationError("receiver.linearized: spectral analysis needs the linearized model (set it to true)");
}

void require_closed_form_target(const ExperimentConfig& cfg) {
    if (cfg.closed_form && cfg.receiver.configuration == Configuration::OmOnly)
        throw ValidationError("closed_form: needs an erc_om or both configuration");
}

std::vector<std::string> curve_header(const ExperimentConfig& cfg) {
    const auto links = configured_links(cfg);
    std::vector<std::string> header{"omega"};
    if (links.size() == 1 && !cfg.closed_form) {
        header.push_back("value");
    } else if (links.size() == 1) {
        header.push_back("full_model");
    } else {
        header.push_back("om_only");
        header.push_back("erc_om");
    }
    if (cfg.closed_form) header.push_back("closed_form");
    return header;
}

template <typename CurveFn>
CsvTable curve_table(const ExperimentConfig& cfg, CurveFn&& curve_of) {
    require_linearized(cfg);
    require_closed_form_target(cfg);
    const auto omegas = frequency_grid(cfg);
    std::vector<SpectralCurve> curves;
    for (auto which : configured_links(cfg)) curves.push_back(curve_of(make_link(cfg, which), omegas));

    CsvTable t;
    t.header = curve_header(cfg);
    const auto grid = make_grid(cfg.grid);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        std::vector<double> row{omegas[i]};
        for (const auto& c : curves) row.push_back(c.values[i]);
        if (cfg.closed_form) {
            const auto& r = cfg.receiver;
            const auto psi = r.output_module == OutputKind::RC
                                 ? closed_form_gain_rc(grid, r.erc, r.k_plus, r.k_minus, omegas[i])
                                 : closed_form_gain_catreg(grid, r.erc, r.k_plus, r.k_minus, r.k_zero, omegas[i]);
            row.push_back(std::norm(psi));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

VoxelGrid make_grid(const GridSpec& spec) {
    VoxelGrid shape;
    shape.dims = spec.dims;
    shape.delta = spec.delta;
    shape.diff_coeff = spec.diff_coeff;
    std::vector<Escape> escapes;
    if (spec.boundary == Boundary::Absorbing) {
        const double e = spec.escape_rate.value_or(shape.hop_rate() / 10.0);
        escapes = absorbing_boundary(spec.dims, e);
    }
    escapes.insert(escapes.end(), spec.escapes.begin(), spec.escapes.end());
    return build_grid(spec.dims, spec.delta, spec.diff_coeff, spec.tx, spec.rx, std::move(escapes));
}

ReceiverModule make_module(const ReceiverSpec& spec) {
    return spec.output_module == OutputKind::RC ? rc_module(spec.k_plus, spec.k_minus)
                                                : catreg_module(spec.k_plus, spec.k_minus, spec.k_zero);
}

LinkModel make_link(const ExperimentConfig& cfg, Configuration which, bool linearized) {
    const auto grid = make_grid(cfg.grid);
    const auto module = make_module(cfg.receiver);
    switch (which) {
        case Configuration::OmOnly: return assemble_om_only(grid, module);
        case Configuration::ErcOm: return assemble_erc_om(grid, cfg.receiver.erc, module, linearized);
        case Configuration::Both: break;
    }
    throw ValidationError("make_link: pick a single configuration (om_only or erc_om)");
}

RegimeCheck regime_of(const ExperimentConfig& cfg) {
    const auto grid = make_grid(cfg.grid);
    return regime(cfg.receiver.erc, grid.hop_rate(), cfg.receiver.k_minus, cfg.receiver.regime_threshold);
}

ExperimentConfig with_value(const ExperimentConfig& cfg, const std::string& variable, double value) {
    ExperimentConfig out = cfg;
    if (variable == "k_plus")
        out.receiver.k_plus = value;
    else if (variable == "k_minus")
        out.receiver.k_minus = value;
    else if (variable == "z_total")
        out.receiver.erc.z_total = value;
    else if (variable == "p_total")
        out.receiver.erc.p_total = value;
    else if (variable == "power_budget")
        out.input.power_budget = value;
    else
        throw ValidationError("sweep.variable: unknown sweep variable '" + variable + "'");
    return out;
}

std::vector<double> frequency_grid(const ExperimentConfig& cfg) {
    return log_grid(cfg.frequency.min, cfg.frequency.max, cfg.frequency.points);
}

CapacityResult link_capacity(const ExperimentConfig& cfg, Configuration which) {
    require_linearized(cfg);
    const auto link = make_link(cfg, which);
    const auto omegas = frequency_grid(cfg);
    const auto gain = channel_gain(link, omegas);
    const auto noise = noise_psd(link, cfg.input.c, omegas);
    return water_filling(gain, noise, cfg.input.power_budget, cfg.input.normalization);
}

std::vector<SweepRow> capacity_sweep(const ExperimentConfig& cfg, Configuration which, const std::string& variable,
                                     std::span<const double> values, unsigned threads) {
    if (values.empty()) throw ValidationError("sweep.values: sweep list is empty");
    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_at = values.size();
    std::mutex mu;

    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                const auto res = link_capacity(with_value(cfg, variable, values[i]), which);
                rows[i] = {values[i], res.capacity, res.water_level};
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(values.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
    }
    if (failure) {
        const std::string where = "sweep " + variable + "=" + format_number(values[failed_at]) + ": ";
        try {
            std::rethrow_exception(failure);
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError(where + e.what());
        }
    }
    return rows;
}

CsvTable gain_table(const ExperimentConfig& cfg) {
    return curve_table(cfg, [](const LinkModel& link, const std::vector<double>& w) { return channel_gain(link, w); });
}

CsvTable noise_table(const ExperimentConfig& cfg) {
    if (cfg.closed_form) throw ValidationError("closed_form: only available for the gain command");
    const double c = cfg.input.c;
    return curve_table(cfg, [c](const LinkModel& link, const std::vector<double>& w) { return noise_psd(link, c, w); });
}

CsvTable capacity_table(const ExperimentConfig& cfg, unsigned threads) {
    require_linearized(cfg);
    const auto links = configured_links(cfg);
    std::string variable = "power_budget";
    std::vector<double> values{cfg.input.power_budget};
    if (cfg.sweep) {
        variable = cfg.sweep->variable;
        values = cfg.sweep->values;
    }

    std::vector<std::vector<SweepRow>> columns;
    for (auto which : links) columns.push_back(capacity_sweep(cfg, which, variable, values, threads));

    CsvTable t;
    t.header = {"sweep_value"};
    for (auto which : links) {
        const std::string prefix = links.size() == 1 ? "" : to_string(which) + "_";
        t.header.push_back(prefix + "capacity_nats_per_s");
        t.header.push_back(prefix + "water_level");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<double> row{values[i]};
        for (const auto& col : columns) {
            row.push_back(col[i].capacity);
            row.push_back(col[i].water_level);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "";
}

VerifyResult run_verification(const ExperimentConfig& cfg, unsigned threads) {
    const auto nonlinear = make_link(cfg, Configuration::ErcOm, false);
    const auto linear = make_link(cfg, Configuration::ErcOm, true);
    const double c = cfg.input.c;

    std::vector<double> times;
    const auto steps = static_cast<std::size_t>(std::floor(cfg.ssa.t_end / cfg.ssa.sample_dt + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k) * cfg.ssa.sample_dt);
    if (cfg.ssa.t_end - times.back() > 1e-9 * cfg.ssa.t_end) times.push_back(cfg.ssa.t_end);

    const auto runs = sample_runs(nonlinear, c, times, cfg.ssa.runs, cfg.ssa.seed, nonlinear.initial_state, threads);
    const auto stats = summarize(times, runs);
    const auto ode = ode_mean_trajectory(linear, c, times, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(linear.dim())));

    VerifyResult res;
    res.runs = runs.size();
    res.regime = regime_of(cfg);
    res.window_start = 0.8 * cfg.ssa.t_end;
    res.table.header = {"time", "ssa_mean", "ssa_stderr", "linear_mean"};

    const auto xs = nonlinear.output_index;
    const auto xl = linear.output_index;
    const double n = static_cast<double>(runs.size());
    double linear_sum = 0.0;
    std::size_t linear_count = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double mean = stats.mean[k][xs];
        const double se = std::sqrt(stats.variance[k][xs] / n);
        const double lin = ode.states[k](static_cast<Eigen::Index>(xl));
        res.table.rows.push_back({times[k], mean, se, lin});
        if (times[k] >= res.window_start) {
            linear_sum += lin;
            ++linear_count;
            if (std::abs(lin) > 0.0)
                res.max_pointwise_rel_deviation =
                    std::max(res.max_pointwise_rel_deviation, std::abs(mean - lin) / std::abs(lin));
        }
    }
    const auto w = window_mean(times, runs, xs, res.window_start);
    res.ssa_window_mean = w.mean;
    res.ssa_window_stderr = w.std_error;
    res.linear_window_mean = linear_sum / static_cast<double>(linear_count);
    const double diff = std::abs(res.ssa_window_mean - res.linear_window_mean);
    res.window_rel_deviation = res.linear_window_mean != 0.0 ? diff / std::abs(res.linear_window_mean) : diff;

    if (res.runs < kMinVerifyRuns)
        res.verdict = Verdict::Inconclusive;
    else if (res.window_rel_deviation <= kVerifyTolerance && diff <= 3.0 * res.ssa_window_stderr)
        res.verdict = Verdict::Pass;
    else
        res.verdict = Verdict::Fail;
    return res;
}

}  // namespace mcomm
