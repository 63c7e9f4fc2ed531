#pragma once

#include <string>

#include "mcomm/spectral.hpp"

namespace mcomm {

/// Literal: I = 1/2 * integral over all omega of log(1 + SNR Phi_u) d omega.
/// Angular: the same integral times 1/(2 pi).
enum class Normalization { Literal, Angular };

Normalization parse_normalization(const std::string& s);
std::string to_string(Normalization n);

struct CapacityResult {
    double capacity = 0.0;  ///< nats per second
    SpectralCurve input_psd;
    double water_level = 0.0;
    double power_budget = 0.0;
    Normalization normalization = Normalization::Literal;

    double capacity_bits() const;
};

/// Trapezoid integral over the grid, doubled for the negative frequencies.
double two_sided_integral(const SpectralCurve& curve);

double mutual_information(const SpectralCurve& gain, const SpectralCurve& noise, const SpectralCurve& input_psd,
                          Normalization norm = Normalization::Literal);

/// Phi_u = max(0, nu - Phi_eta/|Psi|^2), with nu set so the two-sided input power equals the budget.
CapacityResult water_filling(const SpectralCurve& gain, const SpectralCurve& noise, double power_budget,
                             Normalization norm = Normalization::Literal);

}  // namespace mcomm
