#pragma once

#include <optional>

#include "memnoise/errors.hpp"

namespace memnoise::elements {

/// Linear resistor with a temperature. `noisy == true` is the physical
/// element (open-circuit noise PSD 4*k*T*R); `noisy == false` is the
/// deliberately unphysical noise-free variant used by the passivity audit.
struct ThermalResistor {
    double resistance = 1.0;
    double temperature = 1.0;
    bool noisy = true;

    void validate() const {
        if (!(resistance > 0.0)) throw ArgumentError("resistor: resistance must be positive");
        if (!(temperature >= 0.0)) throw ArgumentError("resistor: temperature must be nonnegative");
    }
};

/// Cubic flux-charge characteristic: flux(q) = a*q + b*q^2 + c*q^3, so the
/// memristance is M(q) = a + 2*b*q + 3*c*q^2. The linear case b = c = 0
/// behaves as a constant resistor of value a. The model is noise-free by
/// definition; that is exactly the property the audit interrogates.
struct PolynomialMemristorModel {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double q0 = 0.0;

    bool is_linear() const { return b == 0.0 && c == 0.0; }
};

/// Charge/time state advanced by trapezoidal integration of the current.
struct ElementState {
    double q = 0.0;
    double t = 0.0;
};

struct Capacitor {
    double capacitance = 1.0;
    double initial_voltage = 0.0;

    void validate() const {
        if (!(capacitance > 0.0)) throw ArgumentError("capacitor: capacitance must be positive");
    }
};

struct AdmissibilityReport {
    bool admissible = false;
    std::optional<double> witness_q;  // a charge with negative memristance, when inadmissible
};

/// M(q) = a + 2*b*q + 3*c*q^2.
double memristance(const PolynomialMemristorModel& model, double q);

/// flux(q) = a*q + b*q^2 + c*q^3.
double flux(const PolynomialMemristorModel& model, double q);

/// Closed-form test of M(q) >= 0 for all real q:
///   c > 0          : admissible iff b^2 <= 3*a*c (quadratic discriminant)
///   c == 0, b == 0 : admissible iff a >= 0
///   c == 0, b != 0 : inadmissible (M is linear in q, unbounded below)
///   c < 0          : inadmissible (M opens downward)
/// When inadmissible, witness_q is a point with M(witness_q) < 0.
AdmissibilityReport check_nonnegativity(const PolynomialMemristorModel& model);

/// Throws InadmissibleModelError (with witness) unless the model is admissible.
void require_admissible(const PolynomialMemristorModel& model);

/// Terminal voltage M(q)*I at the state's charge; does not mutate state.
double memristor_voltage(const PolynomialMemristorModel& model, const ElementState& state,
                         double current);

/// Trapezoidal charge update: q += dt*(I_prev + I_now)/2, t += dt.
ElementState advance_charge(const ElementState& state, double current_prev,
                            double current_now, double dt);

/// Terminal voltage R*I + u_n under the passive sign convention (current into
/// the positive terminal). A noise-free resistor must be driven with u_n = 0.
double resistor_terminal_voltage(const ThermalResistor& resistor, double current,
                                 double noise_voltage);

/// Memristance floor used during circuit solving so admissible models that
/// touch M = 0 cannot make a node equation singular. Clamp events are counted
/// by the testbenches and reported; a nonzero count flags the run as
/// boundary-degenerate.
inline constexpr double memristance_floor_fraction = 1e-9;

inline double clamped_memristance(const PolynomialMemristorModel& model, double q,
                                  unsigned long long& clamp_count) {
    const double m = memristance(model, q);
    const double floor = memristance_floor_fraction * model.a;
    if (m < floor) {
        ++clamp_count;
        return floor;
    }
    return m;
}

}  // namespace memnoise::elements
