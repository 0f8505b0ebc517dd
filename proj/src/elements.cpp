#include "memnoise/elements.hpp"

#include <cmath>
#include <string>

namespace memnoise::elements {

double memristance(const PolynomialMemristorModel& model, double q) {
    return model.a + 2.0 * model.b * q + 3.0 * model.c * q * q;
}

double flux(const PolynomialMemristorModel& model, double q) {
    return q * (model.a + q * (model.b + q * model.c));
}

AdmissibilityReport check_nonnegativity(const PolynomialMemristorModel& model) {
    const double a = model.a, b = model.b, c = model.c;
    AdmissibilityReport report;

    if (c > 0.0) {
        // M(q) = 3c q^2 + 2b q + a opens upward; nonnegative iff b^2 <= 3ac.
        if (b * b <= 3.0 * a * c) {
            report.admissible = true;
        } else {
            report.admissible = false;
            report.witness_q = -b / (3.0 * c);  // vertex, where M = a - b^2/(3c) < 0
        }
        return report;
    }

    if (c == 0.0) {
        if (b == 0.0) {
            report.admissible = a >= 0.0;
            if (!report.admissible) report.witness_q = 0.0;
        } else {
            // Linear in q: crosses zero at q = -a/(2b).
            report.admissible = false;
            report.witness_q = (-(1.0 + std::abs(a)) - a) / (2.0 * b);
        }
        return report;
    }

    // c < 0: opens downward.
    report.admissible = false;
    const double disc = b * b - 3.0 * a * c;
    if (disc < 0.0) {
        report.witness_q = -b / (3.0 * c);  // no real roots: M < 0 everywhere
    } else {
        const double root_hi = (-b - std::sqrt(disc)) / (3.0 * c);
        const double root_lo = (-b + std::sqrt(disc)) / (3.0 * c);
        report.witness_q = std::max(root_hi, root_lo) + 1.0;
    }
    return report;
}

void require_admissible(const PolynomialMemristorModel& model) {
    const auto report = check_nonnegativity(model);
    if (!report.admissible) {
        const double w = report.witness_q.value_or(0.0);
        throw InadmissibleModelError(
            "memristor model (a=" + std::to_string(model.a) + ", b=" + std::to_string(model.b) +
                ", c=" + std::to_string(model.c) + ") has negative memristance at q=" +
                std::to_string(w),
            w);
    }
}

double memristor_voltage(const PolynomialMemristorModel& model, const ElementState& state,
                         double current) {
    return memristance(model, state.q) * current;
}

ElementState advance_charge(const ElementState& state, double current_prev,
                            double current_now, double dt) {
    if (!(dt > 0.0)) throw ArgumentError("advance_charge: dt must be positive");
    ElementState next;
    next.q = state.q + dt * (current_prev + current_now) / 2.0;
    next.t = state.t + dt;
    return next;
}

double resistor_terminal_voltage(const ThermalResistor& resistor, double current,
                                 double noise_voltage) {
    if (!resistor.noisy && noise_voltage != 0.0)
        throw ContractViolation(
            "resistor_terminal_voltage: nonzero noise voltage applied to a noise-free resistor");
    return resistor.resistance * current + noise_voltage;
}

}  // namespace memnoise::elements
