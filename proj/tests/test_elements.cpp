#include <doctest.h>

#include <cmath>
#include <numbers>

#include "admissibility_scan.hpp"
#include "memnoise/elements.hpp"
#include "memnoise/errors.hpp"
#include "memnoise/rng.hpp"

using namespace memnoise;
using elements::ElementState;
using elements::PolynomialMemristorModel;
using elements::ThermalResistor;

TEST_CASE("memristance and flux evaluate the cubic characteristic") {
    const PolynomialMemristorModel linear{1.0, 0.0, 0.0, 0.0};
    CHECK(elements::memristance(linear, 0.0) == 1.0);
    CHECK(elements::memristance(linear, -17.3) == 1.0);
    CHECK(elements::flux(linear, 2.5) == 2.5);

    const PolynomialMemristorModel cubic{1.0, 1.0, 1.0, 0.0};
    CHECK(elements::memristance(cubic, 1.0) == 6.0);
    CHECK(elements::memristance(cubic, -1.0) == 2.0);
    CHECK(elements::flux(cubic, 0.0) == 0.0);
    CHECK(elements::flux(cubic, 1.0) == 3.0);
}

TEST_CASE("memristance is the derivative of flux (central differences)") {
    Xoshiro256pp rng(2025);
    const double h = 1e-4;
    for (int trial = 0; trial < 1000; ++trial) {
        PolynomialMemristorModel model;
        model.a = 6.0 * rng.next_unit() - 3.0;
        model.b = 6.0 * rng.next_unit() - 3.0;
        model.c = 6.0 * rng.next_unit() - 3.0;
        const double q = 200.0 * rng.next_unit() - 100.0;
        const double derivative =
            (elements::flux(model, q + h) - elements::flux(model, q - h)) / (2.0 * h);
        const double m = elements::memristance(model, q);
        CHECK(std::abs(derivative - m) < 1e-6 * (1.0 + std::abs(m)));
    }
}

TEST_CASE("admissibility closed form on hand-checked cases") {
    auto report = elements::check_nonnegativity({1.0, 1.0, 1.0, 0.0});
    CHECK(report.admissible);  // b^2 = 1 <= 3ac = 3

    report = elements::check_nonnegativity({1.0, 2.0, 1.0, 0.0});
    CHECK_FALSE(report.admissible);  // b^2 = 4 > 3
    REQUIRE(report.witness_q.has_value());
    CHECK(*report.witness_q == doctest::Approx(-2.0 / 3.0));
    CHECK(elements::memristance({1.0, 2.0, 1.0, 0.0}, *report.witness_q) ==
          doctest::Approx(1.0 - 4.0 / 3.0));

    CHECK(elements::check_nonnegativity({1.0, 0.0, 0.0, 0.0}).admissible);   // constant 1
    CHECK(elements::check_nonnegativity({0.0, 0.0, 0.0, 0.0}).admissible);   // constant 0
    CHECK_FALSE(elements::check_nonnegativity({-1.0, 0.0, 0.0, 0.0}).admissible);
    CHECK_FALSE(elements::check_nonnegativity({1.0, 0.5, 0.0, 0.0}).admissible);  // linear slope
    CHECK_FALSE(elements::check_nonnegativity({1.0, 0.0, -0.1, 0.0}).admissible); // opens down
    CHECK(elements::check_nonnegativity({3.0, -3.0, 3.0, 0.0}).admissible);  // 9 <= 27
}

TEST_CASE("admissibility witness always has negative memristance") {
    Xoshiro256pp rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        PolynomialMemristorModel model;
        model.a = 8.0 * rng.next_unit() - 3.0;
        model.b = 6.0 * rng.next_unit() - 3.0;
        model.c = 8.0 * rng.next_unit() - 3.0;
        const auto report = elements::check_nonnegativity(model);
        if (!report.admissible) {
            REQUIRE(report.witness_q.has_value());
            CHECK(elements::memristance(model, *report.witness_q) < 0.0);
        }
    }
}

TEST_CASE("closed form agrees with the brute-force scan (reduced sample)") {
    // The full 1000-triple run lives in the acceptance suite; this keeps a
    // fast tripwire in the unit tests.
    Xoshiro256pp rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        PolynomialMemristorModel model;
        model.a = 8.0 * rng.next_unit() - 3.0;
        model.b = 6.0 * rng.next_unit() - 3.0;
        model.c = 8.0 * rng.next_unit() - 3.0;
        const bool closed_form = elements::check_nonnegativity(model).admissible;
        CHECK(closed_form == scan_admissible(model));
    }
}

TEST_CASE("memristor voltage follows M(q) * I") {
    const PolynomialMemristorModel linear{1.0, 0.0, 0.0, 0.0};
    CHECK(elements::memristor_voltage(linear, {0.0, 0.0}, 0.5) == 0.5);

    const PolynomialMemristorModel cubic{1.0, 1.0, 1.0, 0.0};
    CHECK(elements::memristor_voltage(cubic, {1.0, 0.0}, 2.0) == 12.0);
    CHECK(elements::memristor_voltage(cubic, {1.0, 0.0}, 0.0) == 0.0);
}

TEST_CASE("linear memristor is bit-identical to a noise-free resistor") {
    const PolynomialMemristorModel linear{1.7, 0.0, 0.0, 0.0};
    const ThermalResistor resistor{1.7, 1.0, false};
    Xoshiro256pp rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double current = 20.0 * rng.next_unit() - 10.0;
        CHECK(elements::memristor_voltage(linear, {0.0, 0.0}, current) ==
              elements::resistor_terminal_voltage(resistor, current, 0.0));
    }
}

TEST_CASE("charge integration: trivial and periodic cases") {
    ElementState state{0.0, 0.0};
    state = elements::advance_charge(state, 0.0, 0.0, 0.1);
    CHECK(state.q == 0.0);
    CHECK(state.t == doctest::Approx(0.1));

    state = elements::advance_charge({0.0, 0.0}, 1.0, 1.0, 0.1);
    CHECK(state.q == doctest::Approx(0.1));

    CHECK_THROWS_AS(elements::advance_charge({0.0, 0.0}, 1.0, 1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(elements::advance_charge({0.0, 0.0}, 1.0, 1.0, -0.1), ArgumentError);

    // One full period of a sine integrates to zero up to trapezoidal error.
    const double amplitude = 2.0;
    const double period = 1.0;
    const int steps = 256;
    const double dt = period / steps;
    ElementState s{0.0, 0.0};
    for (int i = 0; i < steps; ++i) {
        const double i_prev =
            amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / steps);
        const double i_now =
            amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(i + 1) / steps);
        s = elements::advance_charge(s, i_prev, i_now, dt);
    }
    CHECK(std::abs(s.q) < 1e-9 * amplitude * period);
}

TEST_CASE("zero-mean periodic currents return the charge to its start") {
    // Trapezoidal error is O(dt^2) per period; allow a generous multiple.
    Xoshiro256pp rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const double a1 = 2.0 * rng.next_unit() - 1.0;
        const double a2 = 2.0 * rng.next_unit() - 1.0;
        const double phase = 2.0 * std::numbers::pi * rng.next_unit();
        const int steps = 512;
        const double dt = 1.0 / steps;
        auto current = [&](double t) {
            return a1 * std::sin(2.0 * std::numbers::pi * t + phase) +
                   a2 * std::sin(4.0 * std::numbers::pi * t);
        };
        ElementState s{0.0, 0.0};
        for (int i = 0; i < steps; ++i)
            s = elements::advance_charge(s, current(i * dt), current((i + 1) * dt), dt);
        CHECK(std::abs(s.q) < 10.0 * dt * dt);
    }
}

TEST_CASE("resistor terminal voltage and the noise-free contract") {
    const ThermalResistor noisy{1.0, 1.0, true};
    CHECK(elements::resistor_terminal_voltage(noisy, 1.0, 0.0) == 1.0);
    const ThermalResistor r2{2.0, 1.0, true};
    CHECK(elements::resistor_terminal_voltage(r2, 0.0, 0.3) == 0.3);

    const ThermalResistor quiet{1.0, 1.0, false};
    CHECK(elements::resistor_terminal_voltage(quiet, 2.0, 0.0) == 2.0);
    CHECK_THROWS_AS(elements::resistor_terminal_voltage(quiet, 1.0, 0.1), ContractViolation);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ThermalResistor({0.0, 1.0, true}).validate(), ArgumentError);
    CHECK_THROWS_AS(ThermalResistor({1.0, -0.5, true}).validate(), ArgumentError);
    CHECK_THROWS_AS(elements::Capacitor({0.0, 0.0}).validate(), ArgumentError);
    CHECK_THROWS_AS(elements::require_admissible({1.0, 2.0, 1.0, 0.0}), InadmissibleModelError);
    try {
        elements::require_admissible({1.0, 2.0, 1.0, 0.0});
    } catch (const InadmissibleModelError& e) {
        CHECK(e.witness_q == doctest::Approx(-2.0 / 3.0));
    }
}

TEST_CASE("memristance clamp floors at 1e-9 of the linear coefficient") {
    // Boundary model b^2 = 3ac touches M = 0 at q = -b/(3c).
    const PolynomialMemristorModel boundary{1.0, std::sqrt(3.0), 1.0, 0.0};
    CHECK(elements::check_nonnegativity(boundary).admissible);
    unsigned long long clamps = 0;
    const double q_zero = -boundary.b / (3.0 * boundary.c);
    const double clamped = elements::clamped_memristance(boundary, q_zero, clamps);
    CHECK(clamped == 1e-9 * boundary.a);
    CHECK(clamps == 1);
    const double unclamped = elements::clamped_memristance(boundary, 1.0, clamps);
    CHECK(unclamped == elements::memristance(boundary, 1.0));
    CHECK(clamps == 1);
}
