#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mcomm {

/// W(n) = sum_i c_i n_i. Stored sparsely as (species index, coefficient).
struct LinearRate {
    std::vector<std::pair<std::size_t, double>> terms;
};

/// W(n) = k * prod over reactants of n_i. A species may appear twice.
struct MassActionRate {
    double k = 0.0;
    std::vector<std::size_t> reactants;
};

/// W(n) = rate, independent of state.
struct ZeroOrderRate {
    double rate = 0.0;
};

using RateLaw = std::variant<LinearRate, MassActionRate, ZeroOrderRate>;

/**
 * An elementary state change: stoichiometry q plus propensity W(n).
 *
 * Diffusion hops, boundary escapes, receiver reactions and the transmitter
 * emission are all jump events over a common state vector.
 */
struct JumpEvent {
    std::vector<int> stoich;
    RateLaw rate_law;
    std::string label;

    double rate(std::span<const double> n) const;
    double rate(std::span<const std::int64_t> n) const;

    bool is_linear() const { return !std::holds_alternative<MassActionRate>(rate_law); }

    /// Highest species index referenced by stoich or rate law, plus one.
    std::size_t min_state_dim() const;

    /// Indices whose counts enter W(n).
    std::vector<std::size_t> rate_dependencies() const;
};

/// Checks the JumpEvent invariants; throws ValidationError.
void validate(const JumpEvent& event);

JumpEvent linear_event(std::vector<int> stoich, std::size_t species, double coeff, std::string label = {});
JumpEvent mass_action_event(std::vector<int> stoich, double k, std::vector<std::size_t> reactants,
                            std::string label = {});
JumpEvent zero_order_event(std::vector<int> stoich, double rate, std::string label = {});

/**
 * Re-express an event over a larger state. Local species i maps to global
 * index `index_map[i]`; stoich entries land there and rate-law indices are
 * rewritten. The rate value for corresponding states is unchanged.
 */
JumpEvent embed(const JumpEvent& event, std::span<const std::size_t> index_map, std::size_t global_dim);

}  // namespace mcomm
