#pragma once

// Steady-state conductor heat balance: convective + radiative losses against
// solar + Joule gain.  Solved by bisection for either temperature at a given
// current, or ampacity at a given temperature limit.

#include <algorithm>
#include <cmath>

#include "linewear/common.hpp"

namespace linewear::thermal {

struct ConductorModel {
    std::string name;
    double diameter_mm = 0.0;         // overall conductor diameter
    double strand_diameter_mm = 0.0;  // aluminum strand diameter (annealing model)
    double resistance_low = 0.0;      // ohm/m at t_low
    double resistance_high = 0.0;     // ohm/m at t_high
    double t_low = 25.0;              // degC
    double t_high = 75.0;             // degC
    double emissivity = 0.5;
    double absorptivity = 0.5;
    double max_temp = 95.0;           // degC thermal limit
    double nominal_kv = 345.0;        // line-to-line

    void validate() const {
        std::vector<std::string> bad;
        if (!(diameter_mm > 0)) bad.push_back("conductor " + name + ": diameter must be > 0");
        if (!(strand_diameter_mm > 0)) bad.push_back("conductor " + name + ": strand_diameter must be > 0");
        if (!(resistance_low > 0) || resistance_high < resistance_low)
            bad.push_back("conductor " + name + ": need resistance_high >= resistance_low > 0");
        if (!(t_high > t_low)) bad.push_back("conductor " + name + ": need t_high > t_low");
        if (emissivity < 0 || emissivity > 1) bad.push_back("conductor " + name + ": emissivity outside [0,1]");
        if (absorptivity < 0 || absorptivity > 1) bad.push_back("conductor " + name + ": absorptivity outside [0,1]");
        if (!(max_temp > 0)) bad.push_back("conductor " + name + ": max_temp must be > 0");
        if (!(nominal_kv > 0)) bad.push_back("conductor " + name + ": nominal_kv must be > 0");
        if (!bad.empty()) throw ValidationError(bad);
    }

    // AC resistance [ohm/m], linear in temperature between the two reference points.
    double resistance(double temp_c) const {
        const double slope = (resistance_high - resistance_low) / (t_high - t_low);
        return resistance_low + slope * (temp_c - t_low);
    }
};

struct WeatherSample {
    double wind_speed = 0.0;    // m/s
    double wind_angle = 90.0;   // deg relative to conductor axis, [0, 90]
    double ambient_temp = 25.0; // degC
    double solar_flux = 0.0;    // W/m^2

    void validate() const {
        std::vector<std::string> bad;
        if (wind_speed < 0) bad.push_back("wind_speed must be >= 0");
        if (wind_angle < 0 || wind_angle > 90) bad.push_back("wind_angle outside [0,90]");
        if (solar_flux < 0) bad.push_back("solar_flux must be >= 0");
        if (!bad.empty()) throw ValidationError(bad);
    }
};

struct WeatherSeries {
    std::string line_id;
    int horizon = 0;
    std::vector<WeatherSample> forecast;
    std::vector<WeatherSample> actual;
};

// Air properties at film temperature (sea level).
inline double air_conductivity(double t_film) {
    return 2.424e-2 + 7.477e-5 * t_film - 4.407e-9 * t_film * t_film;  // W/(m K)
}
inline double air_viscosity(double t_film) {
    return 1.458e-6 * std::pow(t_film + 273.0, 1.5) / (t_film + 383.4);  // kg/(m s)
}
inline double air_density(double t_film) {
    return 1.293 / (1.0 + 0.00367 * t_film);  // kg/m^3
}

// Wind direction factor, phi = angle between wind and conductor axis [deg].
inline double wind_angle_factor(double phi_deg) {
    const double phi = phi_deg * M_PI / 180.0;
    return 1.194 - std::cos(phi) + 0.194 * std::cos(2 * phi) + 0.368 * std::sin(2 * phi);
}

namespace detail {

// Convective loss [W/m].  Forced/natural coefficients are compared as heat
// transfer coefficients so the result stays monotone through dT = 0.
inline double convective_loss(const ConductorModel& c, const WeatherSample& w, double temp) {
    const double d_m = c.diameter_mm * 1e-3;
    const double dt = temp - w.ambient_temp;
    const double t_film = 0.5 * (temp + w.ambient_temp);
    const double kf = air_conductivity(t_film);
    const double rho = air_density(t_film);
    const double mu = air_viscosity(t_film);
    const double reynolds = d_m * rho * w.wind_speed / mu;
    const double h_low = wind_angle_factor(w.wind_angle) * (1.01 + 1.35 * std::pow(reynolds, 0.52)) * kf;
    const double h_high = 0.754 * std::pow(reynolds, 0.6) * kf;
    const double h_nat = 3.645 * std::sqrt(rho) * std::pow(d_m, 0.75) * std::pow(std::abs(dt), 0.25);
    return std::max({h_low, h_high, h_nat}) * dt;
}

inline double radiative_loss(const ConductorModel& c, const WeatherSample& w, double temp) {
    const double d_m = c.diameter_mm * 1e-3;
    const double a = (temp + 273.0) / 100.0;
    const double b = (w.ambient_temp + 273.0) / 100.0;
    return 17.8 * d_m * c.emissivity * (a * a * a * a - b * b * b * b);
}

inline double solar_gain(const ConductorModel& c, const WeatherSample& w) {
    return c.absorptivity * w.solar_flux * c.diameter_mm * 1e-3;
}

}  // namespace detail

// Heat balance residual q_c + q_r - q_s - I^2 R(temp) [W/m].
// Zero at the equilibrium temperature; increasing in temp on the physical range.
inline double heat_gain_loss(const ConductorModel& cond, const WeatherSample& w,
                             double current_a, double temp_c) {
    const double joule = current_a * current_a * cond.resistance(temp_c);
    return detail::convective_loss(cond, w, temp_c) + detail::radiative_loss(cond, w, temp_c)
         - detail::solar_gain(cond, w) - joule;
}

constexpr double kResidualTolW = 1e-6;   // W/m
constexpr double kAmpacityTolA = 1e-3;   // A
constexpr int kMaxBisectIters = 200;
constexpr double kTempBracketHi = 500.0; // degC

// Equilibrium conductor temperature [degC] at a given current.
inline double solve_temperature(const ConductorModel& cond, const WeatherSample& w,
                                double current_a) {
    double lo = w.ambient_temp - 1.0;
    double hi = kTempBracketHi;
    double flo = heat_gain_loss(cond, w, current_a, lo);
    double fhi = heat_gain_loss(cond, w, current_a, hi);
    if ((flo < 0) == (fhi < 0))
        throw NoBracket("heat balance residual has equal sign at " + std::to_string(lo) +
                        " and " + std::to_string(hi) + " degC (I=" + std::to_string(current_a) + " A)");
    for (int i = 0; i < kMaxBisectIters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = heat_gain_loss(cond, w, current_a, mid);
        if (std::abs(f) <= kResidualTolW) return mid;
        if ((f < 0) == (flo < 0)) { lo = mid; flo = f; } else { hi = mid; }
    }
    return 0.5 * (lo + hi);
}

struct Ampacity {
    double current_a = 0.0;
    double rating_mw = 0.0;
};

// Largest current whose equilibrium temperature equals temp_limit.
inline Ampacity solve_ampacity(const ConductorModel& cond, const WeatherSample& w,
                               double temp_limit_c) {
    if (solve_temperature(cond, w, 0.0) > temp_limit_c)
        throw InfeasibleLimit("conductor exceeds " + std::to_string(temp_limit_c) +
                              " degC even at zero current");
    // Grow the upper bracket until the limit is exceeded.
    double hi = 2000.0;
    int grow = 0;
    while (solve_temperature(cond, w, hi) < temp_limit_c) {
        hi *= 2.0;
        if (++grow > 20) throw NoBracket("ampacity bracket growth exceeded 20 doublings");
    }
    double lo = 0.0;
    for (int i = 0; i < kMaxBisectIters && hi - lo > kAmpacityTolA; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (solve_temperature(cond, w, mid) < temp_limit_c) lo = mid; else hi = mid;
    }
    Ampacity out;
    out.current_a = 0.5 * (lo + hi);
    out.rating_mw = amps_to_mw(out.current_a, cond.nominal_kv);
    return out;
}

}  // namespace linewear::thermal
