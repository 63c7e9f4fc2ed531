#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcomm/capacity.hpp"
#include "mcomm/reactions.hpp"
#include "mcomm/voxel_grid.hpp"

namespace mcomm {

enum class Configuration { OmOnly, ErcOm, Both };
enum class Boundary { Absorbing, Reflecting };

struct GridSpec {
    std::array<int, 3> dims{5, 2, 2};
    double delta = 1.0 / 3.0;
    double diff_coeff = 1.0;
    std::size_t tx = 2;   ///< voxel (2,1,1)
    std::size_t rx = 19;  ///< voxel (4,2,2)
    Boundary boundary = Boundary::Absorbing;
    std::optional<double> escape_rate;  ///< per exterior face; defaults to d/10
    std::vector<Escape> escapes;        ///< extra explicit escapes
};

struct ReceiverSpec {
    Configuration configuration = Configuration::ErcOm;
    OutputKind output_module = OutputKind::CATREG;
    double k_plus = 10.0;
    double k_minus = 10.0;
    double k_zero = 0.01;
    ErcParams erc;
    bool linearized = true;
    double regime_threshold = 0.2;
};

struct InputSpec {
    double c = 10.0;
    double power_budget = 100.0;
    Normalization normalization = Normalization::Literal;
};

struct FrequencySpec {
    double min = 1e-2;
    double max = 1e3;
    std::size_t points = 400;
};

struct SsaSpec {
    std::size_t runs = 1000;
    double t_end = 100.0;
    std::uint64_t seed = 1;
    double sample_dt = 1.0;
};

struct SweepSpec {
    std::string variable;
    std::vector<double> values;
};

/**
 * Everything one experiment needs. Defaults reproduce the reference setup:
 * 5x2x2 voxels of edge 1/3 um, D = 1, absorbing boundary with e = d/10,
 * transmitter at (2,1,1), receiver at (4,2,2), c = 10, ERC constants
 * beta1 = beta2 = 1, k1 = 0.05, alpha1 = alpha2 = 1, k2 = 0.5,
 * Z_T = 500, P_T = 200, k0 = 0.01.
 */
struct ExperimentConfig {
    GridSpec grid;
    ReceiverSpec receiver;
    InputSpec input;
    FrequencySpec frequency;
    SsaSpec ssa;
    std::optional<SweepSpec> sweep;
    bool closed_form = false;
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const;
};

/// Parses and validates; unknown keys are rejected. Errors name the field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Throws ValidationError naming the first bad field.
void validate(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::string to_string(Configuration c);
std::string to_string(OutputKind k);

}  // namespace mcomm
