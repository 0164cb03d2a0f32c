#pragma once

// Adaptive Dormand-Prince 5(4) integrator for complex state vectors, with the
// fourth-order continuous extension used to sample the solution at requested
// times without constraining the step sequence.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "wcpmem/errors.hpp"

namespace wcpmem::ode {

using State = Eigen::VectorXcd;

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  ///< 0 selects min(max_step, span / 1000)
    double min_step = 0.0;      ///< 0 selects 1e-13 * span
    std::size_t max_steps = 20'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

namespace detail {

// Butcher tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
// Difference between the fifth- and fourth-order weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace detail

/// Integrates y' = rhs(t, y, dydt) from t0 to t1 in place. `observe(t, y)` is
/// called once for every entry of `sample_times` (ascending, inside [t0, t1])
/// with the dense-output state at that time. Throws IntegrationError on step
/// underflow, exhausted step budget, or a non-finite state.
template <class Rhs, class Observer>
Stats integrate_dopri5(Rhs&& rhs, State& y, double t0, double t1, const Options& opt,
                       std::span<const double> sample_times, Observer&& observe) {
    using namespace detail;
    Stats stats;
    const double span = t1 - t0;
    if (!(span > 0.0)) throw InvalidParameter("integrate_dopri5: requires t0 < t1");
    const Eigen::Index dim = y.size();

    State k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim), ynew(dim), err(dim);
    State r2(dim), r3(dim), r4(dim), r5(dim);

    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
        observe(sample_times[next_sample], y);
        ++next_sample;
    }

    const double min_step = opt.min_step > 0.0 ? opt.min_step : 1e-13 * span;
    double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(opt.max_step, span / 1000.0);
    h = std::min(h, opt.max_step);

    double t = t0;
    rhs(t, y, k1);
    ++stats.rhs_evals;

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps)
            throw IntegrationError("integrate_dopri5: step budget exhausted at t = " + std::to_string(t));
        bool last = false;
        if (t + h >= t1 || t1 - (t + h) < min_step) {
            h = t1 - t;
            last = true;
        }

        ytmp = y + h * a21 * k1;
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        rhs(t + h, ynew, k7);
        stats.rhs_evals += 6;

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_norm = std::max(err_norm, std::abs(err[i]) / scale);
        }
        // std::max drops NaN, so check the proposed state itself as well.
        if (!std::isfinite(err_norm) || !ynew.allFinite())
            throw IntegrationError("integrate_dopri5: non-finite state at t = " + std::to_string(t));

        if (err_norm <= 1.0) {
            const double t_new = last ? t1 : t + h;
            if (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
                r2 = ynew - y;
                r3 = h * k1 - r2;
                r4 = r2 - h * k7 - r3;
                r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
                    const double s = sample_times[next_sample];
                    if (s == t_new) {
                        observe(s, ynew);
                    } else {
                        const double th = (s - t) / h;
                        const double th1 = 1.0 - th;
                        ytmp = y + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
                        observe(s, ytmp);
                    }
                    ++next_sample;
                }
            }
            y.swap(ynew);
            k1.swap(k7);
            t = t_new;
            ++stats.accepted;
            const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
            h = std::min(h * factor, opt.max_step);
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            if (h < min_step)
                throw IntegrationError("integrate_dopri5: step size underflow at t = " + std::to_string(t));
        }
    }
    return stats;
}

template <class Rhs>
Stats integrate_dopri5(Rhs&& rhs, State& y, double t0, double t1, const Options& opt) {
    return integrate_dopri5(std::forward<Rhs>(rhs), y, t0, t1, opt, std::span<const double>{},
                            [](double, const State&) {});
}

}  // namespace wcpmem::ode
