#pragma once

// Conservative linear loading->temperature proxy.  A chord through two points
// of the (convex) equilibrium temperature curve over-approximates it on the
// fitted range, so the proxy never reports a temperature below the true one.

#include <cmath>

#include "linewear/thermal.hpp"

namespace linewear::linfit {

struct LinearTempFit {
    double slope_a = 0.0;     // degC per MW
    double intercept_b = 0.0; // degC
    double mw_low = 0.0;
    double mw_high = 0.0;

    double eval(double mw) const { return slope_a * mw + intercept_b; }
    // Envelope for signed flows: upper bound on temperature for |mw| in range.
    double eval_abs(double mw) const { return std::max(eval(mw), eval(-mw)); }
};

constexpr double kFitLowTemp = 95.0;
constexpr double kFitHighTemp = 195.0;
constexpr int kConvexityScanPoints = 32;
constexpr double kConvexityTol = 1e-6;

// Equilibrium temperature at a MW loading.
inline double temp_at_mw(const thermal::ConductorModel& cond, const thermal::WeatherSample& w,
                         double mw) {
    return thermal::solve_temperature(cond, w, mw_to_amps(mw, cond.nominal_kv));
}

// Chord through (mw_low, tau(mw_low)) and (mw_high, tau(mw_high)).
inline LinearTempFit fit_line_temperature(const thermal::ConductorModel& cond,
                                          const thermal::WeatherSample& w,
                                          double mw_low, double mw_high) {
    if (!(mw_low >= 0.0) || !(mw_high > mw_low))
        throw ValidationError({"fit range requires 0 <= mw_low < mw_high"});
    const double t_lo = temp_at_mw(cond, w, mw_low);
    const double t_hi = temp_at_mw(cond, w, mw_high);
    LinearTempFit fit;
    fit.mw_low = mw_low;
    fit.mw_high = mw_high;
    fit.slope_a = (t_hi - t_lo) / (mw_high - mw_low);
    fit.intercept_b = t_lo - fit.slope_a * mw_low;
    if (!(fit.slope_a > 0))
        throw NotConvex("loading-temperature chord slope is not positive");
    for (int i = 1; i < kConvexityScanPoints - 1; ++i) {
        const double mw = mw_low + (mw_high - mw_low) * i / (kConvexityScanPoints - 1);
        if (temp_at_mw(cond, w, mw) > fit.eval(mw) + kConvexityTol)
            throw NotConvex("equilibrium temperature exceeds the chord at " +
                            std::to_string(mw) + " MW");
    }
    return fit;
}

// Fit anchored at the loadings whose equilibrium temperatures equal 95 and
// 195 degC.  If the 195 degC anchor cannot be bracketed, cap at 3x the SLR
// loading instead.
inline LinearTempFit fit_line_temperature(const thermal::ConductorModel& cond,
                                          const thermal::WeatherSample& w,
                                          double slr_mw_fallback = 0.0) {
    const double mw_low = thermal::solve_ampacity(cond, w, kFitLowTemp).rating_mw;
    double mw_high;
    try {
        mw_high = thermal::solve_ampacity(cond, w, kFitHighTemp).rating_mw;
    } catch (const NoBracket&) {
        mw_high = 3.0 * (slr_mw_fallback > 0 ? slr_mw_fallback : mw_low);
    }
    return fit_line_temperature(cond, w, mw_low, mw_high);
}

}  // namespace linewear::linfit
