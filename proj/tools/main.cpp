// mcomm: gain | noise | capacity | verify driven by one JSON config.
// Precedence for every setting: command-line flag > config file > built-in default.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mcomm/config.hpp"
#include "mcomm/csv.hpp"
#include "mcomm/errors.hpp"
#include "mcomm/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerifyFail = 3;

unsigned default_threads() {
    if (const char* env = std::getenv("MCOMM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw mcomm::ValidationError(std::string("MCOMM_THREADS: expected a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void warn_regime(const mcomm::ExperimentConfig& cfg) {
    if (cfg.receiver.configuration == mcomm::Configuration::OmOnly) return;
    const auto r = mcomm::regime_of(cfg);
    if (!r.within())
        std::cerr << "warning: outside the linearization regime (eps1=" << r.epsilon1 << ", eps2=" << r.epsilon2
                  << ", threshold=" << r.threshold << "); results may be inaccurate\n";
}

std::string output_path(const mcomm::ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / (name + ".csv")).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Molecular communication link analysis: channel gain, noise spectra, capacity and SSA verification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> normalization;
    bool closed_form = false;

    app.add_option("--config", config_path, "JSON experiment config (defaults used when omitted)");
    app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
    app.add_option("--seed", seed, "Base SSA seed (overrides ssa.seed)");
    app.add_option("--threads", threads, "Worker threads (default: MCOMM_THREADS or hardware concurrency)")
        ->check(CLI::PositiveNumber);
    app.add_option("--normalization", normalization, "Capacity normalization: literal | angular")
        ->check(CLI::IsMember({"literal", "angular"}));
    app.add_flag("--closed-form", closed_form, "Add the closed-form channel gain column (gain command)");

    auto* gain = app.add_subcommand("gain", "Write omega vs |Psi(i omega)|^2");
    auto* noise = app.add_subcommand("noise", "Write omega vs output noise PSD");
    auto* capacity = app.add_subcommand("capacity", "Water-filling capacity, single point or sweep");
    auto* verify = app.add_subcommand("verify", "Nonlinear SSA ensemble vs linearized mean ODE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        auto cfg = config_path.empty() ? mcomm::ExperimentConfig{} : mcomm::load_config(config_path);
        if (out_dir) cfg.output_dir = *out_dir;
        if (seed) cfg.ssa.seed = *seed;
        if (normalization) cfg.input.normalization = mcomm::parse_normalization(*normalization);
        if (closed_form) cfg.closed_form = true;
        mcomm::validate(cfg);
        const unsigned n_threads = threads ? *threads : default_threads();
        const auto hash = mcomm::config_hash(cfg);

        warn_regime(cfg);

        if (gain->parsed() || noise->parsed() || capacity->parsed()) {
            const std::string name = gain->parsed() ? "gain" : noise->parsed() ? "noise" : "capacity";
            const auto table = gain->parsed()    ? mcomm::gain_table(cfg)
                               : noise->parsed() ? mcomm::noise_table(cfg)
                                                 : mcomm::capacity_table(cfg, n_threads);
            const auto path = output_path(cfg, name);
            mcomm::write_file_atomic(path, mcomm::render_csv(table, hash));
            std::cout << "wrote " << path << " (" << table.rows.size() << " rows)\n";
            return kExitOk;
        }

        if (verify->parsed()) {
            if (cfg.ssa.runs < mcomm::kMinVerifyRuns)
                std::cerr << "warning: " << cfg.ssa.runs << " runs is below the minimum of " << mcomm::kMinVerifyRuns
                          << "; the verdict will be INCONCLUSIVE\n";
            const auto res = mcomm::run_verification(cfg, n_threads);
            const auto path = output_path(cfg, "verify");
            mcomm::write_file_atomic(path, mcomm::render_csv(res.table, hash));
            std::cout << "wrote " << path << " (" << res.table.rows.size() << " rows)\n"
                      << "runs: " << res.runs << "\n"
                      << "window: t >= " << res.window_start << "\n"
                      << "ssa window mean: " << res.ssa_window_mean << " +/- " << res.ssa_window_stderr << "\n"
                      << "linear window mean: " << res.linear_window_mean << "\n"
                      << "window relative deviation: " << res.window_rel_deviation << "\n"
                      << "max pointwise relative deviation: " << res.max_pointwise_rel_deviation << "\n"
                      << "verdict: " << mcomm::to_string(res.verdict) << "\n";
            return res.verdict == mcomm::Verdict::Fail ? kExitVerifyFail : kExitOk;
        }
    } catch (const mcomm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mcomm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
