#include "mcomm/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcomm/errors.hpp"

namespace mcomm {

Normalization parse_normalization(const std::string& s) {
    if (s == "literal") return Normalization::Literal;
    if (s == "angular") return Normalization::Angular;
    throw ValidationError("normalization must be 'literal' or 'angular', got '" + s + "'");
}

std::string to_string(Normalization n) { return n == Normalization::Literal ? "literal" : "angular"; }

double CapacityResult::capacity_bits() const { return capacity / std::numbers::ln2; }

namespace {

void check_same_grid(const SpectralCurve& a, const SpectralCurve& b) {
    if (a.omegas.size() != a.values.size() || b.omegas.size() != b.values.size())
        throw ValidationError("spectral curve has mismatched lengths");
    if (a.omegas != b.omegas) throw ValidationError("spectral curves are on different frequency grids");
    // Only omega > 0 is stored; the negative half is implied by evenness.
    for (std::size_t i = 0; i < a.omegas.size(); ++i)
        if (!(a.omegas[i] > 0.0) || (i > 0 && !(a.omegas[i] > a.omegas[i - 1])))
            throw ValidationError("capacity needs a positive, increasing frequency grid");
}

double factor(Normalization n) { return n == Normalization::Literal ? 1.0 : 1.0 / (2.0 * std::numbers::pi); }

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

}  // namespace

double two_sided_integral(const SpectralCurve& curve) { return 2.0 * trapezoid(curve.omegas, curve.values); }

double mutual_information(const SpectralCurve& gain, const SpectralCurve& noise, const SpectralCurve& input_psd,
                          Normalization norm) {
    check_same_grid(gain, noise);
    check_same_grid(gain, input_psd);
    std::vector<double> integrand(gain.omegas.size(), 0.0);
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        const double phi = input_psd.values[i];
        if (phi < 0.0) throw ValidationError("input PSD must be nonnegative");
        if (phi == 0.0) continue;
        if (!(noise.values[i] > 0.0))
            throw NumericalError("infinite SNR: zero noise where the input PSD is nonzero");
        integrand[i] = std::log1p(gain.values[i] / noise.values[i] * phi);
    }
    // 1/2 * (integral over +-omega) = integral over omega > 0.
    return factor(norm) * 0.5 * 2.0 * trapezoid(gain.omegas, integrand);
}

CapacityResult water_filling(const SpectralCurve& gain, const SpectralCurve& noise, double power_budget,
                             Normalization norm) {
    check_same_grid(gain, noise);
    if (!(power_budget > 0.0) || !std::isfinite(power_budget)) throw ValidationError("power budget must be > 0");
    const auto n = gain.omegas.size();
    if (n < 2) throw ValidationError("water-filling needs at least 2 frequencies");
    std::vector<double> floor(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(gain.values[i] > 0.0)) throw ValidationError("channel gain must be > 0 on the whole grid");
        if (!(noise.values[i] > 0.0)) throw ValidationError("noise PSD must be > 0 on the whole grid");
        floor[i] = noise.values[i] / gain.values[i];
    }

    SpectralCurve psd{gain.omegas, std::vector<double>(n)};
    const auto power_at = [&](double level) {
        for (std::size_t i = 0; i < n; ++i) psd.values[i] = std::max(0.0, level - floor[i]);
        return two_sided_integral(psd);
    };

    double lo = *std::min_element(floor.begin(), floor.end());
    const double band = 2.0 * (gain.omegas.back() - gain.omegas.front());
    double hi = lo + power_budget / band;
    while (power_at(hi) < power_budget) hi = lo + 2.0 * (hi - lo);

    double p_lo = 0.0, p_hi = power_at(hi);
    for (int it = 0; it < 200 && std::abs(p_hi - power_budget) > 1e-12 * power_budget; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double p = power_at(mid);
        (p < power_budget ? lo : hi) = mid;
        (p < power_budget ? p_lo : p_hi) = p;
    }
    // Power is piecewise linear in the level; finish with a secant step inside the bracket.
    double level = hi;
    if (p_hi > p_lo) level = std::clamp(lo + (power_budget - p_lo) * (hi - lo) / (p_hi - p_lo), lo, hi);
    if (std::abs(power_at(level) - power_budget) > std::abs(p_hi - power_budget)) level = hi;
    power_at(level);

    CapacityResult result;
    result.water_level = level;
    result.power_budget = power_budget;
    result.normalization = norm;
    result.input_psd = psd;
    result.capacity = mutual_information(gain, noise, psd, norm);
    return result;
}

}  // namespace mcomm
