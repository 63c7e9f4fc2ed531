#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcomm/link.hpp"

namespace mcomm {

/// One exact sample path. times[0] = 0 holds the initial state; each later
/// entry is the state right after an event. The path is constant on
/// [times.back(), t_end].
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<std::int64_t>> states;
    double t_end = 0.0;
    std::uint64_t seed = 0;
};

/// Gillespie direct method on `link` plus a zero-order emission (rate c, +1 at T).
/// Runs are reproducible given the seed. An absorbing state (total rate 0)
/// ends the path early.
Trajectory ssa_run(const LinkModel& link, double c, double t_end, std::uint64_t seed,
                   std::span<const std::int64_t> initial_state);

/// Zero-order-hold samples of one run: values[t][species].
struct SampledRun {
    std::vector<std::vector<double>> values;
};

/// Runs `run_count` paths seeded base_seed + i, sampled at `sample_times`
/// (which must lie in [0, t_end] with t_end = sample_times.back()).
/// Output order is by run index regardless of `threads`.
std::vector<SampledRun> sample_runs(const LinkModel& link, double c, std::span<const double> sample_times,
                                    std::size_t run_count, std::uint64_t base_seed,
                                    std::span<const std::int64_t> initial_state, unsigned threads = 1);

struct EnsembleStats {
    std::vector<double> sample_times;
    std::vector<std::vector<double>> mean;      ///< [time][species]
    std::vector<std::vector<double>> variance;  ///< unbiased across runs; 0 for a single run
    std::size_t run_count = 0;
};

/// Per-species mean and variance over runs, reduced pairwise in run order.
EnsembleStats summarize(std::span<const double> sample_times, std::span<const SampledRun> runs);

EnsembleStats ensemble_mean(const LinkModel& link, double c, std::span<const double> sample_times,
                            std::size_t run_count, std::uint64_t base_seed,
                            std::span<const std::int64_t> initial_state, unsigned threads = 1);

struct WindowEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples_per_run = 0;
};

/// Time-average each run over samples with t >= t_from, then mean and
/// standard error of those averages across runs.
WindowEstimate window_mean(std::span<const double> sample_times, std::span<const SampledRun> runs,
                           std::size_t species, double t_from);

}  // namespace mcomm
