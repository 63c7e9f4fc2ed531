#pragma once

#include <span>
#include <string>
#include <vector>

#include "mcomm/capacity.hpp"
#include "mcomm/config.hpp"
#include "mcomm/csv.hpp"
#include "mcomm/link.hpp"

namespace mcomm {

VoxelGrid make_grid(const GridSpec& spec);
ReceiverModule make_module(const ReceiverSpec& spec);

/// `which` must be OmOnly or ErcOm.
LinkModel make_link(const ExperimentConfig& cfg, Configuration which, bool linearized = true);

RegimeCheck regime_of(const ExperimentConfig& cfg);

/// Copy of `cfg` with one sweepable parameter replaced.
ExperimentConfig with_value(const ExperimentConfig& cfg, const std::string& variable, double value);

std::vector<double> frequency_grid(const ExperimentConfig& cfg);

CapacityResult link_capacity(const ExperimentConfig& cfg, Configuration which);

struct SweepRow {
    double value = 0.0;
    double capacity = 0.0;  ///< nats/s
    double water_level = 0.0;
};

/// Sweep points are independent and are spread across `threads`.
std::vector<SweepRow> capacity_sweep(const ExperimentConfig& cfg, Configuration which, const std::string& variable,
                                     std::span<const double> values, unsigned threads = 1);

CsvTable gain_table(const ExperimentConfig& cfg);
CsvTable noise_table(const ExperimentConfig& cfg);
CsvTable capacity_table(const ExperimentConfig& cfg, unsigned threads = 1);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

inline constexpr std::size_t kMinVerifyRuns = 100;
inline constexpr double kVerifyTolerance = 0.10;

struct VerifyResult {
    CsvTable table;  ///< time, ssa_mean, ssa_stderr, linear_mean
    double window_start = 0.0;
    double ssa_window_mean = 0.0;
    double ssa_window_stderr = 0.0;
    double linear_window_mean = 0.0;
    double window_rel_deviation = 0.0;  ///< |ssa - linear| / linear over the final 20%
    double max_pointwise_rel_deviation = 0.0;
    RegimeCheck regime;
    std::size_t runs = 0;
    Verdict verdict = Verdict::Inconclusive;
};

/// Nonlinear ERC-OM SSA ensemble against the linearized mean ODE, output species X.
/// Pass needs the final-20% window mean within 10% relative and within 3 standard errors.
VerifyResult run_verification(const ExperimentConfig& cfg, unsigned threads = 1);

}  // namespace mcomm
