#include "mcomm/jump_event.hpp"

#include <algorithm>
#include <sstream>

#include "mcomm/errors.hpp"

namespace mcomm {

namespace {

template <typename T>
double evaluate(const RateLaw& law, std::span<const T> n) {
    return std::visit(
        [&](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, LinearRate>) {
                double w = 0.0;
                for (const auto& [i, c] : r.terms) w += c * static_cast<double>(n[i]);
                return w;
            } else if constexpr (std::is_same_v<R, MassActionRate>) {
                double w = r.k;
                for (auto i : r.reactants) w *= static_cast<double>(n[i]);
                return w;
            } else {
                return r.rate;
            }
        },
        law);
}

}  // namespace

double JumpEvent::rate(std::span<const double> n) const { return evaluate(rate_law, n); }
double JumpEvent::rate(std::span<const std::int64_t> n) const { return evaluate(rate_law, n); }

std::vector<std::size_t> JumpEvent::rate_dependencies() const {
    std::vector<std::size_t> deps;
    if (const auto* lin = std::get_if<LinearRate>(&rate_law)) {
        for (const auto& [i, c] : lin->terms) deps.push_back(i);
    } else if (const auto* ma = std::get_if<MassActionRate>(&rate_law)) {
        deps = ma->reactants;
    }
    std::sort(deps.begin(), deps.end());
    deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
    return deps;
}

std::size_t JumpEvent::min_state_dim() const {
    std::size_t dim = 0;
    for (auto i : rate_dependencies()) dim = std::max(dim, i + 1);
    for (std::size_t i = 0; i < stoich.size(); ++i)
        if (stoich[i] != 0) dim = std::max(dim, i + 1);
    return dim;
}

void validate(const JumpEvent& event) {
    const auto where = [&] { return event.label.empty() ? std::string("jump event") : "jump event '" + event.label + "'"; };
    if (std::none_of(event.stoich.begin(), event.stoich.end(), [](int q) { return q != 0; }))
        throw ValidationError(where() + ": stoichiometry has no nonzero entry");
    if (event.min_state_dim() > event.stoich.size())
        throw ValidationError(where() + ": rate law references a species outside the state");
    if (const auto* lin = std::get_if<LinearRate>(&event.rate_law)) {
        for (const auto& [i, c] : lin->terms)
            if (!(c >= 0.0)) throw ValidationError(where() + ": negative linear coefficient");
    } else if (const auto* ma = std::get_if<MassActionRate>(&event.rate_law)) {
        if (!(ma->k > 0.0)) throw ValidationError(where() + ": mass-action constant must be > 0");
        if (ma->reactants.empty()) throw ValidationError(where() + ": mass-action law without reactants");
    } else if (!(std::get<ZeroOrderRate>(event.rate_law).rate >= 0.0)) {
        throw ValidationError(where() + ": negative zero-order rate");
    }
}

JumpEvent linear_event(std::vector<int> stoich, std::size_t species, double coeff, std::string label) {
    return JumpEvent{std::move(stoich), LinearRate{{{species, coeff}}}, std::move(label)};
}

JumpEvent mass_action_event(std::vector<int> stoich, double k, std::vector<std::size_t> reactants,
                            std::string label) {
    return JumpEvent{std::move(stoich), MassActionRate{k, std::move(reactants)}, std::move(label)};
}

JumpEvent zero_order_event(std::vector<int> stoich, double rate, std::string label) {
    return JumpEvent{std::move(stoich), ZeroOrderRate{rate}, std::move(label)};
}

JumpEvent embed(const JumpEvent& event, std::span<const std::size_t> index_map, std::size_t global_dim) {
    if (event.stoich.size() != index_map.size())
        throw ValidationError("embed: index map length does not match event state dimension");
    for (auto g : index_map)
        if (g >= global_dim) throw ValidationError("embed: index map points outside the global state");
    {
        std::vector<std::size_t> sorted(index_map.begin(), index_map.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("embed: index collision in species map");
    }

    JumpEvent out;
    out.label = event.label;
    out.stoich.assign(global_dim, 0);
    for (std::size_t i = 0; i < event.stoich.size(); ++i) out.stoich[index_map[i]] = event.stoich[i];

    out.rate_law = std::visit(
        [&](const auto& r) -> RateLaw {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, LinearRate>) {
                LinearRate lin;
                for (const auto& [i, c] : r.terms) lin.terms.emplace_back(index_map[i], c);
                return lin;
            } else if constexpr (std::is_same_v<R, MassActionRate>) {
                MassActionRate ma{r.k, {}};
                for (auto i : r.reactants) ma.reactants.push_back(index_map[i]);
                return ma;
            } else {
                return r;
            }
        },
        event.rate_law);
    return out;
}

}  // namespace mcomm
