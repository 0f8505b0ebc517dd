#pragma once

#include "memnoise/errors.hpp"

namespace memnoise::audit {

/// One-sided thermal-noise voltage PSD of a passive impedance in the
/// classical limit: 4 * k_B * T * Re[Z]. Zero for purely reactive elements
/// and at zero temperature.
inline double fdt_reference_psd(double re_z, double temperature, double k_boltzmann) {
    if (!(re_z >= 0.0)) throw ArgumentError("fdt_reference_psd: Re[Z] must be nonnegative");
    if (!(temperature >= 0.0))
        throw ArgumentError("fdt_reference_psd: temperature must be nonnegative");
    return 4.0 * k_boltzmann * temperature * re_z;
}

/// Mean power flowing from a noisy resistor at T1 to an equal noisy resistor
/// at T2 over the band [f_low, f_high]: k_B*(T1 - T2)*(f_high - f_low).
/// The common resistance cancels; the argument is kept to document the
/// equal-resistance assumption.
inline double expected_exchange_power(double r0, double t1, double t2, double f_low,
                                      double f_high, double k_boltzmann) {
    if (!(r0 > 0.0)) throw ArgumentError("expected_exchange_power: R0 must be positive");
    if (!(f_high > f_low)) throw ArgumentError("expected_exchange_power: invalid band");
    return k_boltzmann * (t1 - t2) * (f_high - f_low);
}

/// Mean power a noisy resistor at temperature T delivers to a parallel
/// noise-free element of matched resistance: k_B*T*(f_high - f_low).
inline double expected_memristor_absorption(double temperature, double f_low, double f_high,
                                            double k_boltzmann) {
    if (!(temperature >= 0.0))
        throw ArgumentError("expected_memristor_absorption: temperature must be nonnegative");
    if (!(f_high > f_low)) throw ArgumentError("expected_memristor_absorption: invalid band");
    return k_boltzmann * temperature * (f_high - f_low);
}

}  // namespace memnoise::audit
