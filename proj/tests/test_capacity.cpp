#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcomm/capacity.hpp"
#include "mcomm/errors.hpp"

using namespace mcomm;

namespace {

SpectralCurve flat(const std::vector<double>& w, double v) { return {w, std::vector<double>(w.size(), v)}; }

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return w;
}

// A lowpass gain over a noise floor with a bump, on a log grid.
std::pair<SpectralCurve, SpectralCurve> shaped_channel() {
    const auto w = log_grid(1e-2, 1e3, 400);
    SpectralCurve g{w, {}}, n{w, {}};
    for (double x : w) {
        g.values.push_back(1.0 / (1.0 + x * x));
        n.values.push_back(0.01 + 0.5 / (1.0 + (x - 3.0) * (x - 3.0)));
    }
    return {g, n};
}

double trapz2(const SpectralCurve& c) {
    double s = 0.0;
    for (std::size_t i = 1; i < c.omegas.size(); ++i)
        s += 0.5 * (c.values[i] + c.values[i - 1]) * (c.omegas[i] - c.omegas[i - 1]);
    return 2.0 * s;
}

}  // namespace

TEST_CASE("normalization names") {
    CHECK(parse_normalization("literal") == Normalization::Literal);
    CHECK(parse_normalization("angular") == Normalization::Angular);
    CHECK(to_string(Normalization::Angular) == "angular");
    CHECK_THROWS_AS(parse_normalization("hz"), ValidationError);
}

TEST_CASE("mutual information closed forms") {
    const auto w = linear_grid(0.5, 4.5, 101);
    const double g = 2.0, eta = 0.5, p = 3.0;
    CHECK(mutual_information(flat(w, g), flat(w, eta), flat(w, 0.0)) == 0.0);
    const double expected = 0.5 * 2.0 * (4.5 - 0.5) * std::log(1.0 + g * p / eta);
    CHECK(mutual_information(flat(w, g), flat(w, eta), flat(w, p)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mutual_information(flat(w, g), flat(w, eta), flat(w, p), Normalization::Angular) ==
          doctest::Approx(expected / (2.0 * std::numbers::pi)).epsilon(1e-12));

    const auto [gain, noise] = shaped_channel();
    SpectralCurve u{gain.omegas, {}};
    for (double x : gain.omegas) u.values.push_back(1.0 / (1.0 + x));
    double last = 0.0;
    for (double scale : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        SpectralCurve su = u;
        for (auto& v : su.values) v *= scale;
        const double mi = mutual_information(gain, noise, su);
        CHECK(mi >= last);
        last = mi;
    }
    CHECK_THROWS_AS(mutual_information(flat(w, g), flat(linear_grid(0, 1, 5), eta), flat(w, p)), ValidationError);
}

TEST_CASE("flat channel water-filling") {
    const auto w = linear_grid(1.0, 11.0, 201);
    const double g = 4.0, eta = 2.0, budget = 7.0;
    const double q = eta / g, band = 10.0;
    const auto res = water_filling(flat(w, g), flat(w, eta), budget);
    CHECK(res.water_level == doctest::Approx(q + budget / (2.0 * band)).epsilon(1e-9));
    for (double v : res.input_psd.values) CHECK(v == doctest::Approx(budget / (2.0 * band)).epsilon(1e-9));
    CHECK(res.capacity == doctest::Approx(band * std::log(1.0 + budget / (2.0 * band) / q)).epsilon(1e-9));
    CHECK(res.capacity_bits() == doctest::Approx(res.capacity / std::log(2.0)));
}

TEST_CASE("water-filling KKT conditions and budget") {
    const auto [gain, noise] = shaped_channel();
    for (double budget : {0.01, 1.0, 100.0}) {
        const auto res = water_filling(gain, noise, budget);
        const double nu = res.water_level;
        CHECK(trapz2(res.input_psd) <= budget * (1.0 + 1e-6));
        CHECK(trapz2(res.input_psd) == doctest::Approx(budget).epsilon(1e-6));
        for (std::size_t i = 0; i < gain.omegas.size(); ++i) {
            const double floor = noise.values[i] / gain.values[i];
            const double u = res.input_psd.values[i];
            CHECK(u >= 0.0);
            if (u > 0.0)
                CHECK(std::abs(nu - floor - u) <= 1e-6 * nu);
            else
                CHECK(floor >= nu * (1.0 - 1e-6));
        }
    }
}

TEST_CASE("water-filling beats random feasible allocations") {
    const auto [gain, noise] = shaped_channel();
    const double budget = 10.0;
    const auto best = water_filling(gain, noise, budget);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        SpectralCurve alloc{gain.omegas, {}};
        const double decay = 10.0 * u(rng);
        for (double x : gain.omegas) alloc.values.push_back(u(rng) * std::exp(-x / (decay + 1e-3)));
        const double scale = budget / trapz2(alloc);
        for (auto& v : alloc.values) v *= scale;
        CHECK(mutual_information(gain, noise, alloc) <= best.capacity * (1.0 + 1e-12));
    }
}

TEST_CASE("water-filling depends only on the noise-to-gain ratio") {
    auto [gain, noise] = shaped_channel();
    const auto a = water_filling(gain, noise, 5.0);
    for (auto& v : gain.values) v *= 2.0;
    for (auto& v : noise.values) v *= 2.0;
    const auto b = water_filling(gain, noise, 5.0);
    CHECK(b.capacity == doctest::Approx(a.capacity).epsilon(1e-12));
    for (std::size_t i = 0; i < a.input_psd.values.size(); ++i)
        CHECK(b.input_psd.values[i] == doctest::Approx(a.input_psd.values[i]).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("capacity grows with the budget and vanishes with it") {
    const auto [gain, noise] = shaped_channel();
    double last = 0.0;
    for (double budget : {1e-6, 1e-3, 1.0, 10.0, 100.0, 1000.0}) {
        const auto res = water_filling(gain, noise, budget);
        CHECK(res.capacity >= last);
        last = res.capacity;
    }
    const auto tiny = water_filling(gain, noise, 1e-9);
    CHECK(tiny.capacity < 1e-6);
    // Support sits at the smallest noise-to-gain ratio.
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < gain.omegas.size(); ++i)
        if (noise.values[i] / gain.values[i] < noise.values[argmin] / gain.values[argmin]) argmin = i;
    for (std::size_t i = 0; i < gain.omegas.size(); ++i)
        if (tiny.input_psd.values[i] > 0.0) CHECK(std::abs(static_cast<long>(i) - static_cast<long>(argmin)) <= 3);
}

TEST_CASE("water-filling input checks") {
    const auto w = linear_grid(1.0, 2.0, 5);
    CHECK_THROWS_AS(water_filling(flat(w, 1.0), flat(w, 1.0), 0.0), ValidationError);
    CHECK_THROWS_AS(water_filling(flat(w, 0.0), flat(w, 1.0), 1.0), ValidationError);
    CHECK_THROWS_AS(water_filling(flat(w, 1.0), flat(w, 0.0), 1.0), ValidationError);
    const auto mixed = linear_grid(-1.0, 1.0, 5);
    CHECK_THROWS_AS(water_filling(flat(mixed, 1.0), flat(mixed, 1.0), 1.0), ValidationError);
    CHECK(two_sided_integral(flat(w, 3.0)) == doctest::Approx(6.0));
}
