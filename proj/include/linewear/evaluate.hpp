#pragma once

// Post-hoc evaluation: exact conductor temperatures from realized flows via
// the heat balance, realized strength-loss depreciation dollars with
// intra-day sequential state accumulation, seasonal cost aggregation, and the
// correlation-risk diagnostics (generation shift factors, quadrant stats).

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "linewear/aging.hpp"
#include "linewear/network.hpp"
#include "linewear/scenario.hpp"

namespace linewear::evaluate {

using net::kHorizon;

struct VariantDayResult {
    double day_ahead_usd = 0.0;   // fuel + startup + shutdown + day-ahead shed
    double rt_adjust_usd = 0.0;   // quadratic adjustment term
    double reserve_usd = 0.0;     // real-time reserve activation
    double shed_usd = 0.0;        // real-time load shedding
    double dep_usd = 0.0;         // post-hoc realized depreciation
    double curtail_mwh = 0.0;
    double shed_mwh = 0.0;
    std::map<std::string, std::array<double, kHorizon>> line_temp_c;  // DLR lines
    std::map<std::string, double> line_dep_usd;
    std::map<std::string, std::array<double, kHorizon>> flow_mw;      // all lines

    double total_usd() const {
        return day_ahead_usd + rt_adjust_usd + reserve_usd + shed_usd + dep_usd;
    }
};

struct DayResult {
    std::string date;
    std::map<std::string, VariantDayResult> variants;  // slr | dlr | cha
};

// Exact temperatures and depreciation for one variant-day; mutates the health
// states by folding in realized above-onset temperatures hour by hour.
inline void posthoc_day(const net::Network& nw,
                        const std::map<std::string, thermal::WeatherSeries>& weather,
                        VariantDayResult& vr,
                        std::map<std::string, aging::LineHealthState>& states) {
    for (const auto& ln : nw.lines) {
        if (!ln.dlr) continue;
        const auto& cond = nw.conductor_of(ln);
        auto wit = weather.find(ln.id);
        if (wit == weather.end())
            throw ValidationError({"no weather for DLR line " + ln.id});
        auto& st = states.at(ln.id);
        auto& temps = vr.line_temp_c[ln.id];
        double dep = 0.0;
        const auto& flows = vr.flow_mw.at(ln.id);
        for (int t = 0; t < kHorizon; ++t) {
            const double amps = mw_to_amps(std::abs(flows[t]), cond.nominal_kv);
            const double tau = thermal::solve_temperature(cond, wit->second.actual[t], amps);
            temps[t] = tau;
            if (tau > aging::kAnnealOnsetTemp) {
                const double before = st.accumulated_lots;
                st.add_exposure(tau, 1.0, cond.strand_diameter_mm);
                dep += ln.econ.cost_per_mva_km * ln.econ.capacity_mva * ln.econ.length_km *
                       (st.accumulated_lots - before) / aging::kEndOfLifeLots;
            }
        }
        vr.line_dep_usd[ln.id] = dep;
        vr.dep_usd += dep;
    }
}

// ---------------------------------------------------------------------------
// Seasonal aggregation (Mar-May, Jun-Aug, Sep-Nov, Dec-Feb, plus annual).

inline std::string season_of(const std::string& date) {
    if (date.size() < 7) throw ValidationError({"bad date: " + date});
    const int month = std::stoi(date.substr(5, 2));
    if (month >= 3 && month <= 5) return "spring";
    if (month >= 6 && month <= 8) return "summer";
    if (month >= 9 && month <= 11) return "autumn";
    return "winter";
}

struct SeasonRow {
    std::string season;   // spring|summer|autumn|winter|annual
    std::string variant;
    int days = 0;
    double day_ahead_usd = 0.0;  // mean per day
    double rt_adjust_usd = 0.0;
    double reserve_usd = 0.0;
    double shed_usd = 0.0;
    double dep_usd = 0.0;
    double curtail_mwh = 0.0;
    double total_usd = 0.0;
};

inline std::vector<SeasonRow> season_report(const std::vector<DayResult>& days) {
    std::map<std::pair<std::string, std::string>, SeasonRow> acc;
    auto add = [&](const std::string& season, const std::string& variant,
                   const VariantDayResult& v) {
        auto& row = acc[{season, variant}];
        row.season = season;
        row.variant = variant;
        row.days += 1;
        row.day_ahead_usd += v.day_ahead_usd;
        row.rt_adjust_usd += v.rt_adjust_usd;
        row.reserve_usd += v.reserve_usd;
        row.shed_usd += v.shed_usd;
        row.dep_usd += v.dep_usd;
        row.curtail_mwh += v.curtail_mwh;
        row.total_usd += v.total_usd();
    };
    for (const auto& d : days)
        for (const auto& [variant, v] : d.variants) {
            add(season_of(d.date), variant, v);
            add("annual", variant, v);
        }
    std::vector<SeasonRow> out;
    const std::vector<std::string> order{"spring", "summer", "autumn", "winter", "annual"};
    for (const auto& season : order)
        for (auto& [key, row] : acc) {
            if (key.first != season) continue;
            SeasonRow r = row;
            r.day_ahead_usd /= r.days;
            r.rt_adjust_usd /= r.days;
            r.reserve_usd /= r.days;
            r.shed_usd /= r.days;
            r.dep_usd /= r.days;
            r.curtail_mwh /= r.days;
            r.total_usd /= r.days;
            out.push_back(r);
        }
    return out;
}

inline std::string season_report_csv(const std::vector<SeasonRow>& rows) {
    std::string s =
        "season,variant,days,day_ahead_usd,rt_adjust_usd,reserve_usd,shed_usd,dep_usd,"
        "curtail_mwh,total_usd\n";
    char buf[320];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                      r.season.c_str(), r.variant.c_str(), r.days, r.day_ahead_usd,
                      r.rt_adjust_usd, r.reserve_usd, r.shed_usd, r.dep_usd, r.curtail_mwh,
                      r.total_usd);
        s += buf;
    }
    return s;
}

// ---------------------------------------------------------------------------
// DC sensitivities.  Generation shift factor of an injection at `bus` (slack
// withdrawal) onto `line`, from the reduced nodal susceptance matrix.

namespace detail {

// Solve the dense SPD-ish system by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const size_t n = b.size();
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        for (size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        if (std::abs(a[k][k]) < 1e-12)
            throw ValidationError({"singular susceptance matrix (islanded network?)"});
        for (size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (size_t i = n; i-- > 0;) {
        double s = b[i];
        for (size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

}  // namespace detail

inline double generation_shift_factor(const net::Network& nw, const std::string& bus_id,
                                      const std::string& line_id) {
    const int nb = static_cast<int>(nw.buses.size());
    const int slack = nw.slack_bus();
    const int inj = nw.bus_index(bus_id);
    // reduced B matrix over non-slack buses, per-unit susceptances
    std::vector<int> red(nb, -1);
    int m = 0;
    for (int b = 0; b < nb; ++b)
        if (b != slack) red[b] = m++;
    std::vector<std::vector<double>> B(m, std::vector<double>(m, 0.0));
    for (const auto& l : nw.lines) {
        const int u = nw.bus_index(l.from);
        const int v = nw.bus_index(l.to);
        const double y = 1.0 / l.reactance_pu;
        if (red[u] >= 0) B[red[u]][red[u]] += y;
        if (red[v] >= 0) B[red[v]][red[v]] += y;
        if (red[u] >= 0 && red[v] >= 0) {
            B[red[u]][red[v]] -= y;
            B[red[v]][red[u]] -= y;
        }
    }
    std::vector<double> rhs(m, 0.0);
    if (red[inj] >= 0) rhs[red[inj]] = 1.0;  // injection at bus, withdrawal at slack
    const auto theta = detail::solve_dense(B, rhs);
    const net::Line* line = nullptr;
    for (const auto& l : nw.lines)
        if (l.id == line_id) line = &l;
    if (!line) throw ValidationError({"unknown line " + line_id});
    const double ts = red[nw.bus_index(line->from)] >= 0 ? theta[red[nw.bus_index(line->from)]] : 0.0;
    const double tr = red[nw.bus_index(line->to)] >= 0 ? theta[red[nw.bus_index(line->to)]] : 0.0;
    return (ts - tr) / line->reactance_pu;  // MW on line per MW injected
}

// ---------------------------------------------------------------------------
// Correlation-risk diagnostics for (wind farm, DLR line) pairs.

struct PairSample {
    double wp_err = 0.0;   // MW, forecast - actual
    double dlr_err = 0.0;  // MW
    double temp_c = 0.0;   // realized conductor temperature
    double flow_mw = 0.0;
};

struct QuadrantStat {
    // quadrants by (wp_err sign, dlr_err sign): pp, pn, np, nn
    std::array<int, 4> count{};
    std::array<double, 4> mean_temp{};
};

struct PairRisk {
    std::string wind_id;
    std::string line_id;
    double error_spearman = 0.0;
    double gsf = 0.0;
    double mean_flow_mw = 0.0;
    double mean_abs_flow_mw = 0.0;
    QuadrantStat quadrants;
};

inline PairRisk correlation_risk_report(const net::Network& nw, const std::string& wind_id,
                                        const std::string& line_id,
                                        const std::vector<PairSample>& samples) {
    PairRisk r;
    r.wind_id = wind_id;
    r.line_id = line_id;
    std::string wind_bus;
    for (const auto& w : nw.wind)
        if (w.id == wind_id) wind_bus = w.bus;
    if (wind_bus.empty()) throw ValidationError({"unknown wind farm " + wind_id});
    r.gsf = generation_shift_factor(nw, wind_bus, line_id);
    std::vector<double> x, y, w;
    for (const auto& s : samples) {
        x.push_back(s.wp_err);
        y.push_back(s.dlr_err);
        w.push_back(1.0);
        r.mean_flow_mw += s.flow_mw / samples.size();
        r.mean_abs_flow_mw += std::abs(s.flow_mw) / samples.size();
        const int q = (s.wp_err >= 0 ? 0 : 2) + (s.dlr_err >= 0 ? 0 : 1);
        r.quadrants.count[q] += 1;
        r.quadrants.mean_temp[q] += s.temp_c;
    }
    if (!samples.empty()) r.error_spearman = scenario::weighted_spearman(x, y, w);
    for (int q = 0; q < 4; ++q)
        if (r.quadrants.count[q] > 0) r.quadrants.mean_temp[q] /= r.quadrants.count[q];
    return r;
}

}  // namespace linewear::evaluate
