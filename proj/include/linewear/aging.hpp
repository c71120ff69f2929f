#pragma once

// Conductor annealing: loss of tensile strength (LoTS) from temperature-time
// exposure, equivalent-time accumulation across exposures, and the per-line
// piecewise depreciation cost of one hour at elevated temperature.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "linewear/common.hpp"
#include "linewear/thermal.hpp"

namespace linewear::aging {

struct ExposureRecord {
    double temp_c = 0.0;
    double hours = 0.0;
};

constexpr double kAnnealOnsetTemp = 95.0;  // degC, no strength loss at or below
constexpr double kEndOfLifeLots = 10.0;    // percent
constexpr double kLotsAcsrFactor = 0.735;
constexpr double kLotsAsymptote = 100.0 * kLotsAcsrFactor;

namespace detail {
inline double strength_coeff(double temp_c) { return std::min(100.0, 134.0 - 0.24 * temp_c); }
inline double time_exponent(double temp_c, double strand_d_mm) {
    return (25.4 / strand_d_mm) * (0.001 * temp_c - 0.095);
}
}  // namespace detail

// Percent strength loss of aluminum strands after `hours` at `temp_c`.
inline double lots_aluminum(double temp_c, double hours, double strand_d_mm) {
    if (!(hours > 0) || !(temp_c > 0) || !(strand_d_mm > 0))
        throw ValidationError({"lots_aluminum requires hours > 0, temp > 0, diameter > 0"});
    const double a = detail::strength_coeff(temp_c);
    const double m = detail::time_exponent(temp_c, strand_d_mm);
    const double loss = 100.0 - a * std::pow(hours, -m);
    return std::clamp(loss, 0.0, 100.0);
}

inline double lots_acsr(double temp_c, double hours, double strand_d_mm) {
    return kLotsAcsrFactor * lots_aluminum(temp_c, hours, strand_d_mm);
}

// Time at temp_c that would have produced an ACSR loss of `lots_pct`.
// Returns 0 for zero loss.  Negative return signals an uninvertible state
// (loss at or beyond the asymptote).
inline double equivalent_time(double lots_pct, double temp_c, double strand_d_mm) {
    if (lots_pct <= 0.0) return 0.0;
    const double a = detail::strength_coeff(temp_c);
    const double m = detail::time_exponent(temp_c, strand_d_mm);
    const double base = (100.0 - lots_pct / kLotsAcsrFactor) / a;
    if (base <= 0.0 || m <= 0.0) return -1.0;
    return std::pow(base, -1.0 / m);
}

// Total ACSR LoTS from a multiset of exposures.  Exposures are sorted by
// temperature ascending; at each step the running loss is converted into an
// equivalent time at the (higher) temperature before the new exposure time is
// added.  Exposures at or below the annealing onset contribute nothing.  If
// the running loss cannot be inverted at a step's temperature, that step
// cannot add loss and is skipped.
inline double accumulate_lots(std::vector<ExposureRecord> exposures, double strand_d_mm) {
    for (const auto& e : exposures)
        if (!(e.temp_c > 0) || !(e.hours > 0))
            throw ValidationError({"exposure records require temp > 0 and hours > 0"});
    std::sort(exposures.begin(), exposures.end(),
              [](const ExposureRecord& a, const ExposureRecord& b) { return a.temp_c < b.temp_c; });
    double lots = 0.0;
    for (const auto& e : exposures) {
        if (e.temp_c <= kAnnealOnsetTemp) continue;
        const double t_eq = equivalent_time(lots, e.temp_c, strand_d_mm);
        if (t_eq < 0.0) continue;
        lots = std::max(lots, lots_acsr(e.temp_c, t_eq + e.hours, strand_d_mm));
    }
    return lots;
}

struct LineHealthState {
    std::string line_id;
    std::vector<ExposureRecord> exposures;  // merged by temperature
    double accumulated_lots = 0.0;          // percent, reproducible from exposures

    // Fold one hour-block of realized temperature into the history.
    // Temperatures at or below the annealing onset are not recorded.
    void add_exposure(double temp_c, double hours, double strand_d_mm) {
        if (temp_c <= kAnnealOnsetTemp || hours <= 0) return;
        for (auto& e : exposures) {
            if (std::abs(e.temp_c - temp_c) < 1e-9) {
                e.hours += hours;
                accumulated_lots = accumulate_lots(exposures, strand_d_mm);
                return;
            }
        }
        exposures.push_back({temp_c, hours});
        accumulated_lots = accumulate_lots(exposures, strand_d_mm);
    }
};

struct LineEconomics {
    double cost_per_mva_km = 936.0;  // $/MVA-km capital cost factor
    double capacity_mva = 0.0;
    double length_km = 0.0;
};

struct DepreciationCurve {
    std::string line_id;
    std::vector<std::pair<double, double>> breakpoints;  // (temp degC, $ per hour)
    std::string valid_from;

    // Piecewise-linear interpolation; zero below the first breakpoint, last
    // segment slope extrapolated above the grid.
    double eval(double temp_c) const {
        if (breakpoints.empty()) return 0.0;
        if (temp_c <= breakpoints.front().first) return breakpoints.front().second;
        for (size_t k = 1; k < breakpoints.size(); ++k) {
            if (temp_c <= breakpoints[k].first) {
                const auto& [t0, c0] = breakpoints[k - 1];
                const auto& [t1, c1] = breakpoints[k];
                return c0 + (c1 - c0) * (temp_c - t0) / (t1 - t0);
            }
        }
        const auto& [t0, c0] = breakpoints[breakpoints.size() - 2];
        const auto& [t1, c1] = breakpoints.back();
        return c1 + (c1 - c0) / (t1 - t0) * (temp_c - t1);
    }
};

constexpr double kCurveGridLow = 95.0;
constexpr double kCurveGridHigh = 195.0;
constexpr double kCurveGridStep = 10.0;

// One-hour depreciation cost [$] of operating at temp_c, against the given
// pre-existing exposure history.
inline double one_hour_cost(const LineHealthState& state, double strand_d_mm,
                            const LineEconomics& econ, double temp_c) {
    auto exp2 = state.exposures;
    exp2.push_back({temp_c, 1.0});
    const double delta = accumulate_lots(exp2, strand_d_mm) - state.accumulated_lots;
    return econ.cost_per_mva_km * econ.capacity_mva * econ.length_km * delta / kEndOfLifeLots;
}

// Sample the one-hour cost every 10 degC from 95 degC and lift interior points
// where sampling noise would break nondecreasing slopes, keeping the curve
// convex and above the sampled values.
inline DepreciationCurve build_depreciation_curve(const LineHealthState& state,
                                                  const thermal::ConductorModel& cond,
                                                  const LineEconomics& econ) {
    if (state.accumulated_lots >= kEndOfLifeLots)
        throw EndOfLife("line " + state.line_id + " reached " +
                        std::to_string(state.accumulated_lots) + " % LoTS");
    DepreciationCurve curve;
    curve.line_id = state.line_id;
    for (double t = kCurveGridLow; t <= kCurveGridHigh + 1e-9; t += kCurveGridStep)
        curve.breakpoints.emplace_back(t, one_hour_cost(state, cond.strand_diameter_mm, econ, t));
    curve.breakpoints.front().second = 0.0;  // exact: adding time at 95 degC costs nothing
    for (size_t k = 2; k < curve.breakpoints.size(); ++k) {
        auto& [t0, c0] = curve.breakpoints[k - 2];
        auto& [t1, c1] = curve.breakpoints[k - 1];
        auto& [t2, c2] = curve.breakpoints[k];
        const double prev_slope = (c1 - c0) / (t1 - t0);
        const double min_c2 = c1 + prev_slope * (t2 - t1);
        if (c2 < min_c2) c2 = min_c2;
    }
    return curve;
}

}  // namespace linewear::aging
