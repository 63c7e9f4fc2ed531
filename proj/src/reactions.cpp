#include "mcomm/reactions.hpp"

#include <algorithm>
#include <cmath>

#include "mcomm/errors.hpp"

namespace mcomm {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be > 0");
}

}  // namespace

ReceiverModule rc_module(double k_plus, double k_minus) {
    require_positive(k_plus, "k_plus");
    require_positive(k_minus, "k_minus");
    ReceiverModule m;
    m.kind = OutputKind::RC;
    m.k_plus = k_plus;
    m.k_minus = k_minus;
    m.r_matrix << -k_plus, k_minus, k_plus, -k_minus;
    m.events = {linear_event({-1, 1}, 0, k_plus, "B->X"), linear_event({1, -1}, 1, k_minus, "X->B")};
    return m;
}

ReceiverModule catreg_module(double k_plus, double k_minus, double k_zero) {
    require_positive(k_plus, "k_plus");
    require_positive(k_minus, "k_minus");
    if (!(k_zero >= 0.0) || !std::isfinite(k_zero)) throw ValidationError("k_zero must be >= 0");
    ReceiverModule m;
    m.kind = OutputKind::CATREG;
    m.k_plus = k_plus;
    m.k_minus = k_minus;
    m.k_zero = k_zero;
    m.r_matrix << 0.0, -k_zero, k_plus, -k_minus;
    m.events = {linear_event({0, 1}, 0, k_plus, "B->B+X"), linear_event({0, -1}, 1, k_minus, "X->0"),
                linear_event({-1, 0}, 1, k_zero, "B->0 (X)")};
    return m;
}

void validate(const ErcParams& p) {
    require_positive(p.beta1, "beta1");
    require_positive(p.beta2, "beta2");
    require_positive(p.k1, "k1");
    require_positive(p.alpha1, "alpha1");
    require_positive(p.alpha2, "alpha2");
    require_positive(p.k2, "k2");
    require_positive(p.z_total, "z_total");
    require_positive(p.p_total, "p_total");
}

RegimeCheck regime(const ErcParams& p, double hop_rate, double k_minus, double threshold) {
    return {hop_rate / (p.beta1 * p.z_total), p.k1 / k_minus, threshold};
}

namespace {

void check_map(const ErcIndexMap& map, std::size_t state_dim, bool need_pools) {
    std::vector<std::size_t> idx{map.signal, map.c1, map.c2, map.z_star};
    if (need_pools) {
        if (!map.z || !map.p) throw ValidationError("nonlinear ERC needs Z and P indices");
        idx.push_back(*map.z);
        idx.push_back(*map.p);
    }
    for (auto i : idx)
        if (i >= state_dim) throw ValidationError("ERC index outside the state");
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw ValidationError("overlapping indices in ERC species map");
}

std::vector<int> stoich(std::size_t dim, std::initializer_list<std::pair<std::size_t, int>> entries) {
    std::vector<int> q(dim, 0);
    for (const auto& [i, v] : entries) q[i] += v;
    return q;
}

}  // namespace

std::vector<JumpEvent> erc_events(const ErcParams& params, const ErcIndexMap& map, std::size_t state_dim) {
    validate(params);
    check_map(map, state_dim, true);
    const auto n = state_dim;
    const auto z = *map.z, p = *map.p;
    return {
        mass_action_event(stoich(n, {{map.signal, -1}, {z, -1}, {map.c1, 1}}), params.beta1, {map.signal, z},
                          "K+Z->C1"),
        linear_event(stoich(n, {{map.signal, 1}, {z, 1}, {map.c1, -1}}), map.c1, params.beta2, "C1->K+Z"),
        linear_event(stoich(n, {{map.signal, 1}, {map.z_star, 1}, {map.c1, -1}}), map.c1, params.k1, "C1->K+Z*"),
        mass_action_event(stoich(n, {{map.z_star, -1}, {p, -1}, {map.c2, 1}}), params.alpha1, {map.z_star, p},
                          "P+Z*->C2"),
        linear_event(stoich(n, {{map.z_star, 1}, {p, 1}, {map.c2, -1}}), map.c2, params.alpha2, "C2->P+Z*"),
        linear_event(stoich(n, {{p, 1}, {z, 1}, {map.c2, -1}}), map.c2, params.k2, "C2->P+Z"),
    };
}

std::vector<JumpEvent> linearized_erc_events(const ErcParams& params, const ErcIndexMap& map,
                                             std::size_t state_dim) {
    validate(params);
    check_map(map, state_dim, false);
    const auto n = state_dim;
    return {
        linear_event(stoich(n, {{map.c1, 1}}), map.signal, params.beta1 * params.z_total, "K+Z->C1"),
        linear_event(stoich(n, {{map.c1, -1}}), map.c1, params.beta2, "C1->K+Z"),
        linear_event(stoich(n, {{map.z_star, 1}, {map.c1, -1}}), map.c1, params.k1, "C1->K+Z*"),
        linear_event(stoich(n, {{map.z_star, -1}, {map.c2, 1}}), map.z_star, params.alpha1 * params.p_total,
                     "P+Z*->C2"),
        linear_event(stoich(n, {{map.z_star, 1}, {map.c2, -1}}), map.c2, params.alpha2, "C2->P+Z*"),
        linear_event(stoich(n, {{map.c2, -1}}), map.c2, params.k2, "C2->P+Z"),
    };
}

}  // namespace mcomm
