#pragma once

// Static system description: buses, lines (SLR/DLR), thermal generators and
// wind farms, plus the per-day time series (loads, wind) and per-line hourly
// ratings/fits consumed by the optimization models.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linewear/aging.hpp"
#include "linewear/common.hpp"
#include "linewear/linfit.hpp"
#include "linewear/thermal.hpp"

namespace linewear::net {

constexpr int kHorizon = 24;

struct Bus {
    std::string id;
};

struct Line {
    std::string id;
    std::string from;  // sending end
    std::string to;    // receiving end
    double reactance_pu = 0.0;
    double slr_mw = 0.0;          // symmetric static rating
    bool dlr = false;             // rating class
    std::string conductor;        // key into Network::conductors
    aging::LineEconomics econ;
    double angle_limit_rad = 0.6;  // |theta_s - theta_r| bound
};

struct StartupSegment {
    int off_hours = 1;   // segment start: hours offline
    double cost = 0.0;   // $ per startup in this segment
};

struct Generator {
    std::string id;
    std::string bus;
    double cost_quad = 0.0;   // $/MW^2 h
    double cost_lin = 0.0;    // $/MWh
    double cost_const = 0.0;  // $/h while committed
    std::vector<StartupSegment> startup;  // ordered by off_hours ascending (hot to cold)
    double shutdown_cost = 0.0;
    double g_min = 0.0, g_max = 0.0;
    double startup_mw = 0.0, shutdown_mw = 0.0;  // SU_i, SD_i
    double ramp_up = 0.0, ramp_down = 0.0;       // MW/h
    double res_up_cap = 0.0, res_dn_cap = 0.0;   // reserve activation caps G^RU, G^RD
    int min_up = 1, min_down = 1;
    // Initial conditions at the start of the horizon.
    bool init_on = false;
    int init_hours = 24;     // hours already on (if init_on) or off
    double init_g = 0.0;

    double fuel_cost(double g) const { return cost_quad * g * g + cost_lin * g + cost_const; }
};

struct WindFarm {
    std::string id;
    std::string bus;
};

struct Network {
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> gens;
    std::vector<WindFarm> wind;
    std::map<std::string, thermal::ConductorModel> conductors;

    int bus_index(const std::string& id) const {
        for (size_t i = 0; i < buses.size(); ++i)
            if (buses[i].id == id) return static_cast<int>(i);
        throw ValidationError({"unknown bus: " + id});
    }
    const thermal::ConductorModel& conductor_of(const Line& l) const {
        auto it = conductors.find(l.conductor);
        if (it == conductors.end())
            throw ValidationError({"line " + l.id + ": unknown conductor " + l.conductor});
        return it->second;
    }
    // Slack: the first bus; its angle is fixed to zero in every model.
    int slack_bus() const { return 0; }

    void validate() const {
        std::vector<std::string> bad;
        if (buses.empty()) bad.push_back("network has no buses");
        for (const auto& l : lines) {
            if (!(l.reactance_pu > 0)) bad.push_back("line " + l.id + ": reactance must be > 0");
            if (!(l.slr_mw > 0)) bad.push_back("line " + l.id + ": slr_mw must be > 0");
            if (!(l.angle_limit_rad > 0)) bad.push_back("line " + l.id + ": angle limit must be > 0");
            if (conductors.find(l.conductor) == conductors.end())
                bad.push_back("line " + l.id + ": unknown conductor " + l.conductor);
            bool from_ok = false, to_ok = false;
            for (const auto& b : buses) {
                from_ok |= b.id == l.from;
                to_ok |= b.id == l.to;
            }
            if (!from_ok) bad.push_back("line " + l.id + ": unknown from-bus " + l.from);
            if (!to_ok) bad.push_back("line " + l.id + ": unknown to-bus " + l.to);
        }
        for (const auto& g : gens) {
            if (g.min_up < 1) bad.push_back("generator " + g.id + ": min_up must be >= 1");
            if (g.min_down < 1) bad.push_back("generator " + g.id + ": min_down must be >= 1");
            if (!(g.g_max >= g.g_min && g.g_min >= 0))
                bad.push_back("generator " + g.id + ": need 0 <= g_min <= g_max");
            if (g.startup_mw < g.g_min || g.startup_mw > g.g_max)
                bad.push_back("generator " + g.id + ": startup_mw outside [g_min, g_max]");
            if (g.shutdown_mw < g.g_min || g.shutdown_mw > g.g_max)
                bad.push_back("generator " + g.id + ": shutdown_mw outside [g_min, g_max]");
            if (g.startup.empty()) bad.push_back("generator " + g.id + ": no startup segments");
            for (size_t o = 1; o < g.startup.size(); ++o)
                if (g.startup[o].off_hours <= g.startup[o - 1].off_hours)
                    bad.push_back("generator " + g.id + ": startup segments must be ordered by off_hours");
            bool bus_ok = false;
            for (const auto& b : buses) bus_ok |= b.id == g.bus;
            if (!bus_ok) bad.push_back("generator " + g.id + ": unknown bus " + g.bus);
        }
        for (const auto& w : wind) {
            bool bus_ok = false;
            for (const auto& b : buses) bus_ok |= b.id == w.bus;
            if (!bus_ok) bad.push_back("wind farm " + w.id + ": unknown bus " + w.bus);
        }
        // connectivity
        if (!buses.empty()) {
            std::vector<char> seen(buses.size(), 0);
            std::vector<int> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                const int b = stack.back();
                stack.pop_back();
                for (const auto& l : lines) {
                    int u = -1, v = -1;
                    for (size_t i = 0; i < buses.size(); ++i) {
                        if (buses[i].id == l.from) u = static_cast<int>(i);
                        if (buses[i].id == l.to) v = static_cast<int>(i);
                    }
                    if (u == b && v >= 0 && !seen[v]) { seen[v] = 1; stack.push_back(v); }
                    if (v == b && u >= 0 && !seen[u]) { seen[u] = 1; stack.push_back(u); }
                }
            }
            for (size_t i = 0; i < buses.size(); ++i)
                if (!seen[i]) bad.push_back("bus " + buses[i].id + " is disconnected");
        }
        if (!bad.empty()) throw ValidationError(bad);
    }
};

// Per-day exogenous time series.
struct DayData {
    std::string date;
    std::map<std::string, std::vector<double>> load;       // bus -> 24 MW values
    std::map<std::string, std::vector<double>> wind_fc;    // farm -> 24 MW
    std::map<std::string, std::vector<double>> wind_act;   // farm -> 24 MW

    const std::vector<double>& series(const std::map<std::string, std::vector<double>>& m,
                                      const std::string& id) const {
        auto it = m.find(id);
        if (it == m.end()) throw ValidationError({"missing series for " + id + " on " + date});
        if (it->second.size() != kHorizon)
            throw ValidationError({"series for " + id + " on " + date + " is not 24 hours"});
        return it->second;
    }
};

// Hourly rating data for one DLR line.
struct HourRating {
    double dlr_fc_mw = 0.0;    // forecast ampacity rating
    double dlr_act_mw = 0.0;   // realized ampacity rating
    double limit_fc_mw = 0.0;  // K-scaled forecast flow limit
    double limit_act_mw = 0.0; // K-scaled realized flow limit
    linfit::LinearTempFit fit_fc;
    linfit::LinearTempFit fit_act;
};

struct RatingsInput {
    std::map<std::string, std::vector<HourRating>> lines;  // DLR line id -> 24 entries

    const std::vector<HourRating>& of(const std::string& line_id) const {
        auto it = lines.find(line_id);
        if (it == lines.end())
            throw ValidationError({"no ratings for DLR line " + line_id});
        if (it->second.size() != kHorizon)
            throw ValidationError({"ratings for line " + line_id + " are not 24 hours"});
        return it->second;
    }
};

// Security-margin policy: the usable share of the forecast/realized rating,
// floored at the static rating.
inline double k_scaled_limit(double dlr_mw, double slr_mw, double k_factor) {
    return std::max(k_factor * dlr_mw, slr_mw);
}

}  // namespace linewear::net
