#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "memnoise/errors.hpp"

namespace memnoise {

enum class UnitSystem { Normalized, Si };

/// Boltzmann constant in J/K, for runs configured in SI units.
inline constexpr double k_boltzmann_si = 1.380649e-23;

/// Global run parameters shared by every noise source and testbench.
///
/// All frequencies share one unit (1/time); `band_low`/`band_high` bound the
/// flat noise band. `n_samples` must be a power of two because records are
/// synthesized in the frequency domain.
struct SimConfig {
    double sample_rate = 1.0;
    double band_low = 0.05;
    double band_high = 0.45;
    std::size_t n_samples = 1u << 20;
    std::uint64_t seed = 0;
    double boltzmann_k = 1.0;
    double burn_in_fraction = 0.1;

    double dt() const { return 1.0 / sample_rate; }
    double bandwidth() const { return band_high - band_low; }
    std::size_t burn_in_samples() const {
        return static_cast<std::size_t>(burn_in_fraction * static_cast<double>(n_samples));
    }

    /// Block length (in samples) used for standard-error estimation:
    /// ten in-band correlation times, where the correlation time is 1/band_low.
    std::size_t block_length() const {
        double len = 10.0 * sample_rate / band_low;
        auto n = static_cast<std::size_t>(len);
        if (static_cast<double>(n) < len) ++n;
        return n > 0 ? n : 1;
    }

    void validate() const {
        if (!(sample_rate > 0.0))
            throw ConfigError("sample_rate must be positive");
        if (!(band_low > 0.0))
            throw ConfigError("band_low must be strictly positive (a DC component would make integrated charge drift without bound)");
        if (!(band_low < band_high))
            throw ConfigError("band_low must be below band_high");
        if (!(band_high <= sample_rate / 2.0 + 1e-12 * sample_rate))
            throw ConfigError("band_high must not exceed the Nyquist frequency sample_rate/2");
        if (n_samples < 4 || (n_samples & (n_samples - 1)) != 0)
            throw ConfigError("n_samples must be a power of two (>= 4)");
        if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
            throw ConfigError("burn_in_fraction must lie in [0, 1)");
        if (!(boltzmann_k > 0.0))
            throw ConfigError("boltzmann_k must be positive");
    }

    static SimConfig with_units(UnitSystem units) {
        SimConfig cfg;
        cfg.boltzmann_k = (units == UnitSystem::Si) ? k_boltzmann_si : 1.0;
        return cfg;
    }
};

}  // namespace memnoise
