#pragma once

// Independent integration oracle for the rectifier cell. The production path
// uses a fixed-step semi-implicit trapezoidal update; this one integrates the
// same node ODE with an adaptive Dormand-Prince 5(4) pair over the identical
// noise waveform, evaluated between samples by 8-point Lagrange interpolation
// on an oversampled grid (interpolation error is negligible when the band
// tops out well below the grid Nyquist). Test-only code: nothing here touches
// the implementation being checked.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "memnoise/elements.hpp"
#include "memnoise/noise.hpp"

namespace oracle {

class BandlimitedDrive {
public:
    explicit BandlimitedDrive(const memnoise::noise::NoiseRecord& record)
        : samples_(record.samples), dt_(record.dt) {}

    double duration() const { return dt_ * static_cast<double>(samples_.size() - 1); }

    double operator()(double t) const {
        const double x = t / dt_;
        const auto center = static_cast<long>(std::floor(x));
        long lo = center - 3;
        lo = std::clamp<long>(lo, 0, static_cast<long>(samples_.size()) - 8);
        const double rel = x - static_cast<double>(lo);

        // Barycentric weights for equispaced nodes 0..7: (-1)^j * C(7, j).
        static constexpr std::array<double, 8> weights = {1.0,  -7.0, 21.0,  -35.0,
                                                          35.0, -21.0, 7.0, -1.0};
        double num = 0.0, den = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double d = rel - static_cast<double>(j);
            if (std::abs(d) < 1e-12) return samples_[static_cast<std::size_t>(lo + j)];
            const double w = weights[static_cast<std::size_t>(j)] / d;
            num += w * samples_[static_cast<std::size_t>(lo + j)];
            den += w;
        }
        return num / den;
    }

private:
    const std::vector<double>& samples_;
    double dt_;
};

struct RectifierOracleResult {
    double dc_mean = 0.0;   // time-average of V over the requested window
    double final_v = 0.0;
    double final_q = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

/// Integrates C dV/dt = i(t) - V/R - V/M(q), dq/dt = V/M(q) with state
/// (V, q, W), W' = V, so the window average of V is exact up to the solver
/// tolerance. Steps never cross `dt_max` so the band-limited drive stays
/// resolved.
inline RectifierOracleResult integrate_rectifier(
    const memnoise::elements::PolynomialMemristorModel& model, double shunt_resistance,
    double capacitance, const BandlimitedDrive& drive, double t_begin_average, double t_end,
    double dt_initial, double dt_max, double rtol = 1e-8, double atol = 1e-12) {
    using State = std::array<double, 3>;

    unsigned long long clamp_scratch = 0;
    const auto deriv = [&](double t, const State& y) -> State {
        const double conductance =
            1.0 / memnoise::elements::clamped_memristance(model, y[1], clamp_scratch);
        const double dv =
            (drive(t) - y[0] / shunt_resistance - y[0] * conductance) / capacitance;
        return {dv, y[0] * conductance, y[0]};
    };

    // Dormand-Prince 5(4) tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    RectifierOracleResult result;
    State y = {0.0, model.q0, 0.0};
    double t = 0.0;
    double h = std::min(dt_initial, dt_max);
    double w_at_begin = 0.0;
    bool captured_begin = t_begin_average <= 0.0;

    State k1 = deriv(t, y);
    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        // Land exactly on the averaging-window edge so W is sampled there.
        if (!captured_begin && t < t_begin_average && t + h > t_begin_average)
            h = t_begin_average - t;

        const auto stage = [&](double frac, const State& incr) {
            State s;
            for (int i = 0; i < 3; ++i) s[i] = y[i] + h * incr[i];
            return deriv(t + frac * h, s);
        };

        const State k2 = stage(c2, {a21 * k1[0], a21 * k1[1], a21 * k1[2]});
        State tmp;
        for (int i = 0; i < 3; ++i) tmp[i] = a31 * k1[i] + a32 * k2[i];
        const State k3 = stage(c3, tmp);
        for (int i = 0; i < 3; ++i) tmp[i] = a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
        const State k4 = stage(c4, tmp);
        for (int i = 0; i < 3; ++i)
            tmp[i] = a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
        const State k5 = stage(c5, tmp);
        for (int i = 0; i < 3; ++i)
            tmp[i] = a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
        const State k6 = stage(1.0, tmp);

        State y_new;
        for (int i = 0; i < 3; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                   b6 * k6[i]);
        const State k7 = deriv(t + h, y_new);

        double err_norm = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err_norm += (err / scale) * (err / scale);
        }
        err_norm = std::sqrt(err_norm / 3.0);

        if (err_norm <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;  // first-same-as-last
            ++result.steps;
            if (!captured_begin && t >= t_begin_average) {
                w_at_begin = y[2];
                captured_begin = true;
            }
        } else {
            ++result.rejected;
        }

        const double factor =
            0.9 * std::pow(err_norm > 1e-12 ? err_norm : 1e-12, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, dt_max);
        if (h < 1e-9) throw std::runtime_error("rectifier oracle: step size collapsed");
    }

    if (!captured_begin) throw std::runtime_error("rectifier oracle: window never started");
    result.dc_mean = (y[2] - w_at_begin) / (t_end - t_begin_average);
    result.final_v = y[0];
    result.final_q = y[1];
    return result;
}

}  // namespace oracle
