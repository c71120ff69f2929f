#pragma once

// Algebraic model builders for the four optimization problems: deterministic
// day-ahead unit commitment (SLR or DLR limits), its scenario-based
// health-aware extension, and the two real-time re-dispatch problems.
// Commitment logic follows the tight startup-segment formulation; fuel cost is
// a 3-tangent convex piecewise-linear underestimate of the quadratic so the
// day-ahead problems stay MILP.

#include <array>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "linewear/aging.hpp"
#include "linewear/network.hpp"
#include "linewear/scenario.hpp"
#include "linewear/solve.hpp"

namespace linewear::model {

using net::kHorizon;

enum class RatingMode { Slr, Dlr };

struct UcOptions {
    RatingMode mode = RatingMode::Dlr;
    double voll = 3500.0;            // $/MWh
    double reserve_req_mw = 0.0;     // system up-reserve requirement per hour
    double res_up_price_mult = 3.0;  // C^{r+} = mult * linear fuel coefficient
    double res_dn_price_mult = 0.5;
    int fuel_tangents = 3;
    double tau_extrap_temp = 600.0;  // trailing depreciation breakpoint
};

// Piecewise depreciation grid used inside models: a leading zero-cost anchor
// below any feasible proxy temperature, the curve's own breakpoints, and a
// trailing point extending the last slope.
inline std::vector<std::pair<double, double>> model_breakpoints(
    const aging::DepreciationCurve& curve, double extrap_temp) {
    std::vector<std::pair<double, double>> bp;
    bp.emplace_back(-100.0, 0.0);
    bp.insert(bp.end(), curve.breakpoints.begin(), curve.breakpoints.end());
    bp.emplace_back(extrap_temp, curve.eval(extrap_temp));
    return bp;
}

namespace detail {

struct Tangent { double slope, intercept; };

// Tangent lines to the quadratic fuel cost at n points across [g_min, g_max].
inline std::vector<Tangent> fuel_tangents(const net::Generator& g, int n) {
    std::vector<Tangent> out;
    for (int k = 0; k < n; ++k) {
        const double at = n == 1 ? g.g_min : g.g_min + (g.g_max - g.g_min) * k / (n - 1);
        const double slope = 2.0 * g.cost_quad * at + g.cost_lin;
        out.push_back({slope, g.fuel_cost(at) - slope * at});
    }
    return out;
}

inline double res_up_price(const net::Generator& g, const UcOptions& o) {
    return o.res_up_price_mult * g.cost_lin;
}
inline double res_dn_price(const net::Generator& g, const UcOptions& o) {
    return o.res_dn_price_mult * g.cost_lin;
}

// Flow limit applied to a line in the day-ahead problem.
inline double da_limit(const net::Line& l, const net::RatingsInput& ratings, int t,
                       RatingMode mode) {
    if (!l.dlr || mode == RatingMode::Slr) return l.slr_mw;
    return ratings.of(l.id)[t].limit_fc_mw;
}

}  // namespace detail

using Idx2 = std::vector<std::array<int, kHorizon>>;  // [entity][hour] -> column

struct DaIndex {
    Idx2 u, usu, usd, gpm, fuel, ravail;                  // per generator
    std::vector<std::vector<std::array<int, kHorizon>>> delta;  // [gen][segment][hour]
    Idx2 theta, shed;                                     // per bus
    Idx2 flow;                                            // per line
    Idx2 cur;                                             // per wind farm
    // scenario stage (CHA only): [scenario][entity][hour]
    std::vector<Idx2> s_rup, s_rdn, s_gadj;
    std::vector<Idx2> s_theta, s_shed, s_flow, s_cur, s_tau;
    std::vector<std::vector<std::vector<std::vector<int>>>> s_lambda;  // [s][dlr line][hour][bp]
};

struct BuiltDa {
    solve::Model m;
    DaIndex ix;
    const net::Network* net = nullptr;
    UcOptions opt;
    bool cha = false;
    std::vector<double> scen_prob;
    std::vector<int> dlr_line_rows;  // indices into net->lines of DLR lines
};

namespace detail {

// Shared deterministic day-ahead core: commitment logic, generation limits,
// ramps, fuel epigraph, network flow, reserve availability.
inline BuiltDa build_da_core(const net::Network& nw, const net::DayData& day,
                             const net::RatingsInput& ratings, const UcOptions& opt) {
    nw.validate();
    BuiltDa b;
    b.net = &nw;
    b.opt = opt;
    solve::Model& m = b.m;
    DaIndex& ix = b.ix;
    const int ng = static_cast<int>(nw.gens.size());
    const int nb = static_cast<int>(nw.buses.size());
    const int nl = static_cast<int>(nw.lines.size());
    const int nwf = static_cast<int>(nw.wind.size());

    auto grid = [&](Idx2& v, int n) { v.assign(n, {}); };
    grid(ix.u, ng); grid(ix.usu, ng); grid(ix.usd, ng); grid(ix.gpm, ng);
    grid(ix.fuel, ng); grid(ix.ravail, ng);
    grid(ix.theta, nb); grid(ix.shed, nb); grid(ix.flow, nl); grid(ix.cur, nwf);
    ix.delta.resize(ng);

    for (int i = 0; i < ng; ++i) {
        const auto& g = nw.gens[i];
        ix.delta[i].assign(g.startup.size(), {});
        for (int t = 0; t < kHorizon; ++t) {
            const std::string st = "_" + g.id + "_" + std::to_string(t);
            ix.u[i][t] = m.add_binary("u" + st);
            ix.usu[i][t] = m.add_binary("usu" + st);
            ix.usd[i][t] = m.add_binary("usd" + st);
            ix.gpm[i][t] = m.add_var(0.0, g.g_max - g.g_min, false, "gpm" + st);
            ix.fuel[i][t] = m.add_var(0.0, 1e30, false, "fuel" + st);
            ix.ravail[i][t] = m.add_var(0.0, 1e30, false, "rav" + st);
            for (size_t o = 0; o < g.startup.size(); ++o)
                ix.delta[i][o][t] = m.add_binary("dlt" + st + "_" + std::to_string(o));
        }
    }
    for (int bidx = 0; bidx < nb; ++bidx)
        for (int t = 0; t < kHorizon; ++t) {
            const std::string st = "_" + nw.buses[bidx].id + "_" + std::to_string(t);
            const bool slack = bidx == nw.slack_bus();
            ix.theta[bidx][t] = m.add_var(slack ? 0.0 : -10.0, slack ? 0.0 : 10.0, false, "th" + st);
            const double load = day.series(day.load, nw.buses[bidx].id)[t];
            ix.shed[bidx][t] = m.add_var(0.0, std::max(load, 0.0), false, "shed" + st);
        }
    for (int l = 0; l < nl; ++l)
        for (int t = 0; t < kHorizon; ++t) {
            const double lim = da_limit(nw.lines[l], ratings, t, opt.mode);
            ix.flow[l][t] = m.add_var(-lim, lim, false,
                                      "p_" + nw.lines[l].id + "_" + std::to_string(t));
        }
    for (int w = 0; w < nwf; ++w)
        for (int t = 0; t < kHorizon; ++t) {
            const double fc = day.series(day.wind_fc, nw.wind[w].id)[t];
            ix.cur[w][t] = m.add_var(0.0, std::max(fc, 0.0), false,
                                     "cur_" + nw.wind[w].id + "_" + std::to_string(t));
        }

    // Commitment logic and generation limits.
    for (int i = 0; i < ng; ++i) {
        const auto& g = nw.gens[i];
        const int n_seg = static_cast<int>(g.startup.size());
        // Virtual pre-horizon event: a unit off at t=0 for `init_hours` shut
        // down at hour -init_hours; a unit on started at -init_hours.
        const int virt_sd = g.init_on ? std::numeric_limits<int>::min() : -g.init_hours;
        const int virt_su = g.init_on ? -g.init_hours : std::numeric_limits<int>::min();

        for (int t = 0; t < kHorizon; ++t) {
            // startup segment windows (hot segments need a recent shutdown)
            for (int o = 0; o + 1 < n_seg; ++o) {
                const int k_lo = g.startup[o].off_hours;
                const int k_hi = g.startup[o + 1].off_hours - 1;
                std::vector<std::pair<int, double>> row{{ix.delta[i][o][t], 1.0}};
                double rhs = 0.0;
                for (int k = k_lo; k <= k_hi; ++k) {
                    const int tk = t - k;
                    if (tk >= 0) row.emplace_back(ix.usd[i][tk], -1.0);
                    else if (tk == virt_sd) rhs += 1.0;
                }
                m.add_row(row, -1e30, rhs, "seg_" + g.id + "_" + std::to_string(o) + "_" + std::to_string(t));
            }
            {   // segment selection sums to the startup indicator
                std::vector<std::pair<int, double>> row;
                for (int o = 0; o < n_seg; ++o) row.emplace_back(ix.delta[i][o][t], 1.0);
                row.emplace_back(ix.usu[i][t], -1.0);
                m.add_row(row, 0.0, 0.0, "segsum_" + g.id + "_" + std::to_string(t));
            }
            {   // minimum up time
                std::vector<std::pair<int, double>> row{{ix.u[i][t], -1.0}};
                double rhs = 0.0;
                for (int k = t - g.min_up + 1; k <= t; ++k) {
                    if (k >= 0) row.emplace_back(ix.usu[i][k], 1.0);
                    else if (k == virt_su && g.init_hours < g.min_up) rhs -= 1.0;
                }
                m.add_row(row, -1e30, rhs, "minup_" + g.id + "_" + std::to_string(t));
            }
            {   // minimum down time
                std::vector<std::pair<int, double>> row{{ix.u[i][t], 1.0}};
                double rhs = 1.0;
                for (int k = t - g.min_down + 1; k <= t; ++k) {
                    if (k >= 0) row.emplace_back(ix.usd[i][k], 1.0);
                    else if (k == virt_sd && g.init_hours < g.min_down) rhs -= 1.0;
                }
                m.add_row(row, -1e30, rhs, "mindn_" + g.id + "_" + std::to_string(t));
            }
            {   // state transition
                std::vector<std::pair<int, double>> row{{ix.u[i][t], 1.0},
                                                        {ix.usu[i][t], -1.0},
                                                        {ix.usd[i][t], 1.0}};
                double rhs = g.init_on ? 1.0 : 0.0;
                if (t > 0) { row.emplace_back(ix.u[i][t - 1], -1.0); rhs = 0.0; }
                m.add_row(row, rhs, rhs, "logic_" + g.id + "_" + std::to_string(t));
            }
            // generation limits on output-above-minimum; TU=1 units get the
            // split pair, others the combined row
            const double span = g.g_max - g.g_min;
            const double csu = g.g_max - g.startup_mw;
            const double csd = g.g_max - g.shutdown_mw;
            if (g.min_up == 1) {
                m.add_row({{ix.gpm[i][t], 1.0}, {ix.u[i][t], -span}, {ix.usu[i][t], csu}},
                          -1e30, 0.0, "glim1_" + g.id + "_" + std::to_string(t));
                std::vector<std::pair<int, double>> row{{ix.gpm[i][t], 1.0}, {ix.u[i][t], -span}};
                if (t + 1 < kHorizon) row.emplace_back(ix.usd[i][t + 1], csd);
                m.add_row(row, -1e30, 0.0, "glim2_" + g.id + "_" + std::to_string(t));
            } else {
                std::vector<std::pair<int, double>> row{{ix.gpm[i][t], 1.0},
                                                        {ix.u[i][t], -span},
                                                        {ix.usu[i][t], csu}};
                if (t + 1 < kHorizon) row.emplace_back(ix.usd[i][t + 1], csd);
                m.add_row(row, -1e30, 0.0, "glim_" + g.id + "_" + std::to_string(t));
            }
            {   // ramps on total output g = gpm + g_min*u
                std::vector<std::pair<int, double>> up{{ix.gpm[i][t], 1.0}, {ix.u[i][t], g.g_min}};
                std::vector<std::pair<int, double>> dn{{ix.gpm[i][t], -1.0}, {ix.u[i][t], -g.g_min}};
                double base = g.init_on ? g.init_g : 0.0;
                if (t > 0) {
                    up.emplace_back(ix.gpm[i][t - 1], -1.0);
                    up.emplace_back(ix.u[i][t - 1], -g.g_min);
                    dn.emplace_back(ix.gpm[i][t - 1], 1.0);
                    dn.emplace_back(ix.u[i][t - 1], g.g_min);
                    base = 0.0;
                }
                m.add_row(up, -1e30, g.ramp_up + base, "ru_" + g.id + "_" + std::to_string(t));
                m.add_row(dn, -1e30, g.ramp_down - base, "rd_" + g.id + "_" + std::to_string(t));
            }
            // fuel cost epigraph over the tangent underestimators
            for (const auto& tg : fuel_tangents(g, std::max(1, opt.fuel_tangents))) {
                m.add_row({{ix.fuel[i][t], 1.0},
                           {ix.gpm[i][t], -tg.slope},
                           {ix.u[i][t], -(tg.slope * g.g_min + tg.intercept)}},
                          0.0, 1e30, "fc_" + g.id + "_" + std::to_string(t));
            }
            // reserve availability: ramp-capability cap and headroom
            m.add_row({{ix.ravail[i][t], 1.0}, {ix.u[i][t], -g.res_up_cap}}, -1e30, 0.0,
                      "ravcap_" + g.id + "_" + std::to_string(t));
            m.add_row({{ix.ravail[i][t], 1.0}, {ix.gpm[i][t], 1.0}, {ix.u[i][t], g.g_min}},
                      -1e30, g.g_max, "ravhd_" + g.id + "_" + std::to_string(t));
        }
    }

    // System reserve requirement.
    for (int t = 0; t < kHorizon; ++t) {
        std::vector<std::pair<int, double>> row;
        for (int i = 0; i < ng; ++i) row.emplace_back(ix.ravail[i][t], 1.0);
        m.add_row(row, opt.reserve_req_mw, 1e30, "resreq_" + std::to_string(t));
    }

    // DC power flow, angle-difference limits, nodal balance.
    for (int l = 0; l < nl; ++l) {
        const auto& ln = nw.lines[l];
        const int bs = nw.bus_index(ln.from);
        const int br = nw.bus_index(ln.to);
        const double bcoef = nw.base_mva / ln.reactance_pu;
        for (int t = 0; t < kHorizon; ++t) {
            m.add_row({{ix.flow[l][t], 1.0}, {ix.theta[bs][t], -bcoef}, {ix.theta[br][t], bcoef}},
                      0.0, 0.0, "dc_" + ln.id + "_" + std::to_string(t));
            m.add_row({{ix.theta[bs][t], 1.0}, {ix.theta[br][t], -1.0}},
                      -ln.angle_limit_rad, ln.angle_limit_rad, "ang_" + ln.id + "_" + std::to_string(t));
        }
    }
    for (int bidx = 0; bidx < nb; ++bidx) {
        const auto& bus = nw.buses[bidx];
        const auto& load = day.series(day.load, bus.id);
        for (int t = 0; t < kHorizon; ++t) {
            // net export = generation + available wind - load + shed
            std::vector<std::pair<int, double>> row;
            double rhs = load[t];
            for (int l = 0; l < nl; ++l) {
                if (nw.lines[l].from == bus.id) row.emplace_back(ix.flow[l][t], -1.0);
                if (nw.lines[l].to == bus.id) row.emplace_back(ix.flow[l][t], 1.0);
            }
            for (int i = 0; i < ng; ++i)
                if (nw.gens[i].bus == bus.id) {
                    row.emplace_back(ix.gpm[i][t], 1.0);
                    row.emplace_back(ix.u[i][t], nw.gens[i].g_min);
                }
            for (int w = 0; w < nwf; ++w)
                if (nw.wind[w].bus == bus.id) {
                    rhs -= day.series(day.wind_fc, nw.wind[w].id)[t];
                    row.emplace_back(ix.cur[w][t], -1.0);
                }
            row.emplace_back(ix.shed[bidx][t], 1.0);
            m.add_row(row, rhs, rhs, "bal_" + bus.id + "_" + std::to_string(t));
        }
    }

    // Deterministic objective: fuel + startup + shutdown + day-ahead shedding.
    for (int i = 0; i < ng; ++i) {
        const auto& g = nw.gens[i];
        for (int t = 0; t < kHorizon; ++t) {
            m.obj_lin[ix.fuel[i][t]] += 1.0;
            m.obj_lin[ix.usd[i][t]] += g.shutdown_cost;
            for (size_t o = 0; o < g.startup.size(); ++o)
                m.obj_lin[ix.delta[i][o][t]] += g.startup[o].cost;
        }
    }
    for (int bidx = 0; bidx < nb; ++bidx)
        for (int t = 0; t < kHorizon; ++t) m.obj_lin[ix.shed[bidx][t]] += opt.voll;

    for (int l = 0; l < nl; ++l)
        if (nw.lines[l].dlr) b.dlr_line_rows.push_back(l);
    return b;
}

}  // namespace detail

// Deterministic day-ahead unit commitment with SLR or K-scaled DLR envelopes.
inline BuiltDa build_baseline_uc(const net::Network& nw, const net::DayData& day,
                                 const net::RatingsInput& ratings, const UcOptions& opt) {
    return detail::build_da_core(nw, day, ratings, opt);
}

// Scenario-based health-aware day-ahead problem: the deterministic core plus,
// per scenario, an operation surrogate (reserve-linked adjusted generation,
// DC flow and balance under wind errors) and the temperature-proxy /
// depreciation-cost machinery for DLR lines.
inline BuiltDa build_cha_uc(const net::Network& nw, const net::DayData& day,
                            const net::RatingsInput& ratings,
                            const scenario::ScenarioSet& scen,
                            const std::map<std::string, aging::DepreciationCurve>& curves,
                            const UcOptions& opt) {
    BuiltDa b = detail::build_da_core(nw, day, ratings, opt);
    b.cha = true;
    b.scen_prob = scen.probabilities;
    solve::Model& m = b.m;
    DaIndex& ix = b.ix;
    const int ng = static_cast<int>(nw.gens.size());
    const int nb = static_cast<int>(nw.buses.size());
    const int nl = static_cast<int>(nw.lines.size());
    const int nwf = static_cast<int>(nw.wind.size());
    const int ns = static_cast<int>(scen.scenarios.size());

    for (int l : b.dlr_line_rows)
        if (curves.find(nw.lines[l].id) == curves.end())
            throw CurveMissing("no depreciation curve for DLR line " + nw.lines[l].id);

    // scenario error lookup: asset id -> row in trajectory
    std::map<std::string, size_t> asset_row;
    for (size_t a = 0; a < scen.assets.size(); ++a) asset_row[scen.assets[a].id] = a;
    auto wp_err = [&](int s, const std::string& farm, int t) {
        auto it = asset_row.find(farm);
        return it == asset_row.end() ? 0.0 : scen.scenarios[s].errors[it->second][t];
    };
    auto dlr_err = [&](int s, const std::string& line, int t) {
        auto it = asset_row.find(line);
        return it == asset_row.end() ? 0.0 : scen.scenarios[s].errors[it->second][t];
    };

    ix.s_rup.resize(ns); ix.s_rdn.resize(ns); ix.s_gadj.resize(ns);
    ix.s_theta.resize(ns); ix.s_shed.resize(ns); ix.s_flow.resize(ns);
    ix.s_cur.resize(ns); ix.s_tau.resize(ns); ix.s_lambda.resize(ns);

    for (int s = 0; s < ns; ++s) {
        const double pr = scen.probabilities[s];
        auto& rup = ix.s_rup[s]; auto& rdn = ix.s_rdn[s]; auto& gadj = ix.s_gadj[s];
        rup.assign(ng, {}); rdn.assign(ng, {}); gadj.assign(ng, {});
        ix.s_theta[s].assign(nb, {}); ix.s_shed[s].assign(nb, {});
        ix.s_flow[s].assign(nl, {}); ix.s_cur[s].assign(nwf, {});
        ix.s_tau[s].assign(b.dlr_line_rows.size(), {});
        ix.s_lambda[s].resize(b.dlr_line_rows.size());
        const std::string ss = "_s" + std::to_string(s);

        for (int i = 0; i < ng; ++i) {
            const auto& g = nw.gens[i];
            for (int t = 0; t < kHorizon; ++t) {
                const std::string st = "_" + g.id + "_" + std::to_string(t) + ss;
                rup[i][t] = m.add_var(0.0, g.res_up_cap, false, "srup" + st);
                rdn[i][t] = m.add_var(0.0, g.res_dn_cap, false, "srdn" + st);
                gadj[i][t] = m.add_var(0.0, g.g_max, false, "sg" + st);
                // activation only while committed
                m.add_row({{rup[i][t], 1.0}, {ix.u[i][t], -g.res_up_cap}}, -1e30, 0.0, "srupg" + st);
                m.add_row({{rdn[i][t], 1.0}, {ix.u[i][t], -g.res_dn_cap}}, -1e30, 0.0, "srdng" + st);
                // adjusted generation links to the day-ahead dispatch
                m.add_row({{gadj[i][t], 1.0}, {ix.gpm[i][t], -1.0}, {ix.u[i][t], -g.g_min},
                           {rup[i][t], -1.0}, {rdn[i][t], 1.0}},
                          0.0, 0.0, "sglink" + st);
                // commitment-gated output window
                m.add_row({{gadj[i][t], 1.0}, {ix.u[i][t], -g.g_min}}, 0.0, 1e30, "sglo" + st);
                m.add_row({{gadj[i][t], 1.0}, {ix.u[i][t], -g.g_max}}, -1e30, 0.0, "sghi" + st);
                m.obj_lin[rup[i][t]] += pr * detail::res_up_price(g, opt);
                m.obj_lin[rdn[i][t]] += pr * detail::res_dn_price(g, opt);
            }
        }
        for (int bidx = 0; bidx < nb; ++bidx)
            for (int t = 0; t < kHorizon; ++t) {
                const std::string st = "_" + nw.buses[bidx].id + "_" + std::to_string(t) + ss;
                const bool slack = bidx == nw.slack_bus();
                ix.s_theta[s][bidx][t] =
                    m.add_var(slack ? 0.0 : -10.0, slack ? 0.0 : 10.0, false, "sth" + st);
                const double load = day.series(day.load, nw.buses[bidx].id)[t];
                ix.s_shed[s][bidx][t] = m.add_var(0.0, std::max(load, 0.0), false, "sshed" + st);
                m.obj_lin[ix.s_shed[s][bidx][t]] += pr * opt.voll;
            }
        for (int w = 0; w < nwf; ++w)
            for (int t = 0; t < kHorizon; ++t) {
                const double avail =
                    day.series(day.wind_fc, nw.wind[w].id)[t] - wp_err(s, nw.wind[w].id, t);
                ix.s_cur[s][w][t] = m.add_var(0.0, std::max(avail, 0.0), false,
                                              "scur_" + nw.wind[w].id + "_" + std::to_string(t) + ss);
            }
        for (int l = 0; l < nl; ++l) {
            const auto& ln = nw.lines[l];
            const int bs = nw.bus_index(ln.from);
            const int br = nw.bus_index(ln.to);
            const double bcoef = nw.base_mva / ln.reactance_pu;
            for (int t = 0; t < kHorizon; ++t) {
                const std::string st = "_" + ln.id + "_" + std::to_string(t) + ss;
                ix.s_flow[s][l][t] = m.add_var(-1e30, 1e30, false, "sp" + st);
                m.add_row({{ix.s_flow[s][l][t], 1.0},
                           {ix.s_theta[s][bs][t], -bcoef},
                           {ix.s_theta[s][br][t], bcoef}},
                          0.0, 0.0, "sdc" + st);
            }
        }
        for (int bidx = 0; bidx < nb; ++bidx) {
            const auto& bus = nw.buses[bidx];
            const auto& load = day.series(day.load, bus.id);
            for (int t = 0; t < kHorizon; ++t) {
                std::vector<std::pair<int, double>> row;
                double rhs = load[t];
                for (int l = 0; l < nl; ++l) {
                    if (nw.lines[l].from == bus.id) row.emplace_back(ix.s_flow[s][l][t], -1.0);
                    if (nw.lines[l].to == bus.id) row.emplace_back(ix.s_flow[s][l][t], 1.0);
                }
                for (int i = 0; i < ng; ++i)
                    if (nw.gens[i].bus == bus.id) row.emplace_back(ix.s_gadj[s][i][t], 1.0);
                for (int w = 0; w < nwf; ++w)
                    if (nw.wind[w].bus == bus.id) {
                        rhs -= day.series(day.wind_fc, nw.wind[w].id)[t] -
                               wp_err(s, nw.wind[w].id, t);
                        row.emplace_back(ix.s_cur[s][w][t], -1.0);
                    }
                row.emplace_back(ix.s_shed[s][bidx][t], 1.0);
                m.add_row(row, rhs, rhs, "sbal_" + bus.id + "_" + std::to_string(t) + ss);
            }
        }
        // temperature proxy and depreciation cost per DLR line
        for (size_t dl = 0; dl < b.dlr_line_rows.size(); ++dl) {
            const int l = b.dlr_line_rows[dl];
            const auto& ln = nw.lines[l];
            const auto& hours = ratings.of(ln.id);
            const auto bp = model_breakpoints(curves.at(ln.id), opt.tau_extrap_temp);
            ix.s_lambda[s][dl].resize(kHorizon);
            for (int t = 0; t < kHorizon; ++t) {
                const std::string st = "_" + ln.id + "_" + std::to_string(t) + ss;
                const auto& fit = hours[t].fit_fc;
                const double xi = dlr_err(s, ln.id, t);
                const int tau = m.add_var(bp.front().first, bp.back().first, false, "stau" + st);
                ix.s_tau[s][dl][t] = tau;
                m.add_row({{tau, 1.0}, {ix.s_flow[s][l][t], -fit.slope_a}},
                          fit.slope_a * xi + fit.intercept_b, 1e30, "stpa" + st);
                m.add_row({{tau, 1.0}, {ix.s_flow[s][l][t], fit.slope_a}},
                          fit.slope_a * xi + fit.intercept_b, 1e30, "stpb" + st);
                // lambda interpolation of the piecewise cost
                std::vector<int> lam;
                std::vector<std::pair<int, double>> conv, interp{{tau, -1.0}};
                for (size_t k = 0; k < bp.size(); ++k) {
                    const int v = m.add_var(0.0, 1.0, false,
                                            "slam" + st + "_" + std::to_string(k));
                    lam.push_back(v);
                    conv.emplace_back(v, 1.0);
                    interp.emplace_back(v, bp[k].first);
                    m.obj_lin[v] += pr * bp[k].second;
                }
                m.add_row(conv, 1.0, 1.0, "slamc" + st);
                m.add_row(interp, 0.0, 0.0, "slamt" + st);
                m.sos2.push_back(lam);
                ix.s_lambda[s][dl][t] = lam;
            }
        }
    }
    return b;
}

// --------------------------------------------------------------------------
// Real-time re-dispatch.  Commitment and day-ahead dispatch are fixed; reserve
// activations rebalance against realized wind, flows respect realized limits
// (SLR everywhere under the static variant, realized K-scaled DLR otherwise).
// The health-aware variant adds the temperature proxy and depreciation cost
// under realized weather fits; those terms are convex so the problem stays a
// continuous QP.

struct DaDispatch {
    // fixed first-stage results per generator and hour
    std::vector<std::array<double, kHorizon>> u;  // 0/1
    std::vector<std::array<double, kHorizon>> g;  // total MW
};

struct RtIndex {
    Idx2 rup, rdn, gadj;   // per generator
    Idx2 theta, shed;      // per bus
    Idx2 flow;             // per line
    Idx2 cur;              // per wind farm
    Idx2 tau;              // per DLR line (CHA only), [dlr index][hour]
    std::vector<std::vector<std::vector<int>>> lambda;  // [dlr line][hour][bp]
};

struct BuiltRt {
    solve::Model m;
    RtIndex ix;
    const net::Network* net = nullptr;
    UcOptions opt;
    bool cha = false;
    std::vector<int> dlr_line_rows;
};

inline BuiltRt build_rt_dispatch(const net::Network& nw, const net::DayData& day,
                                 const net::RatingsInput& ratings, const DaDispatch& fixed,
                                 const std::map<std::string, aging::DepreciationCurve>* curves,
                                 const UcOptions& opt) {
    nw.validate();
    const int ng = static_cast<int>(nw.gens.size());
    const int nb = static_cast<int>(nw.buses.size());
    const int nl = static_cast<int>(nw.lines.size());
    const int nwf = static_cast<int>(nw.wind.size());
    if (static_cast<int>(fixed.u.size()) != ng || static_cast<int>(fixed.g.size()) != ng)
        throw ValidationError({"day-ahead dispatch does not match the network's generators"});

    BuiltRt b;
    b.net = &nw;
    b.opt = opt;
    b.cha = curves != nullptr;
    solve::Model& m = b.m;
    RtIndex& ix = b.ix;
    ix.rup.assign(ng, {}); ix.rdn.assign(ng, {}); ix.gadj.assign(ng, {});
    ix.theta.assign(nb, {}); ix.shed.assign(nb, {});
    ix.flow.assign(nl, {}); ix.cur.assign(nwf, {});

    for (int l = 0; l < nl; ++l)
        if (nw.lines[l].dlr) b.dlr_line_rows.push_back(l);
    if (b.cha) {
        for (int l : b.dlr_line_rows)
            if (curves->find(nw.lines[l].id) == curves->end())
                throw CurveMissing("no depreciation curve for DLR line " + nw.lines[l].id);
        ix.tau.assign(b.dlr_line_rows.size(), {});
        ix.lambda.resize(b.dlr_line_rows.size());
    }

    for (int i = 0; i < ng; ++i) {
        const auto& g = nw.gens[i];
        for (int t = 0; t < kHorizon; ++t) {
            const bool on = fixed.u[i][t] > 0.5;
            const std::string st = "_" + g.id + "_" + std::to_string(t);
            ix.rup[i][t] = m.add_var(0.0, on ? g.res_up_cap : 0.0, false, "rup" + st);
            ix.rdn[i][t] = m.add_var(0.0, on ? g.res_dn_cap : 0.0, false, "rdn" + st);
            ix.gadj[i][t] = m.add_var(on ? g.g_min : 0.0, on ? g.g_max : 0.0, false, "ga" + st);
            m.add_row({{ix.gadj[i][t], 1.0}, {ix.rup[i][t], -1.0}, {ix.rdn[i][t], 1.0}},
                      fixed.g[i][t], fixed.g[i][t], "galink" + st);
            m.obj_quad[ix.gadj[i][t]] += g.cost_quad;
            m.obj_lin[ix.rup[i][t]] += detail::res_up_price(g, opt);
            m.obj_lin[ix.rdn[i][t]] += detail::res_dn_price(g, opt);
        }
    }
    for (int bidx = 0; bidx < nb; ++bidx)
        for (int t = 0; t < kHorizon; ++t) {
            const std::string st = "_" + nw.buses[bidx].id + "_" + std::to_string(t);
            const bool slack = bidx == nw.slack_bus();
            ix.theta[bidx][t] = m.add_var(slack ? 0.0 : -10.0, slack ? 0.0 : 10.0, false, "th" + st);
            const double load = day.series(day.load, nw.buses[bidx].id)[t];
            ix.shed[bidx][t] = m.add_var(0.0, std::max(load, 0.0), false, "shed" + st);
            m.obj_lin[ix.shed[bidx][t]] += opt.voll;
        }
    for (int w = 0; w < nwf; ++w)
        for (int t = 0; t < kHorizon; ++t) {
            const double act = day.series(day.wind_act, nw.wind[w].id)[t];
            ix.cur[w][t] = m.add_var(0.0, std::max(act, 0.0), false,
                                     "cur_" + nw.wind[w].id + "_" + std::to_string(t));
        }
    for (int l = 0; l < nl; ++l) {
        const auto& ln = nw.lines[l];
        const int bs = nw.bus_index(ln.from);
        const int br = nw.bus_index(ln.to);
        const double bcoef = nw.base_mva / ln.reactance_pu;
        for (int t = 0; t < kHorizon; ++t) {
            double lim = ln.slr_mw;
            if (ln.dlr && opt.mode == RatingMode::Dlr) lim = ratings.of(ln.id)[t].limit_act_mw;
            ix.flow[l][t] = m.add_var(-lim, lim, false, "p_" + ln.id + "_" + std::to_string(t));
            m.add_row({{ix.flow[l][t], 1.0}, {ix.theta[bs][t], -bcoef}, {ix.theta[br][t], bcoef}},
                      0.0, 0.0, "dc_" + ln.id + "_" + std::to_string(t));
            m.add_row({{ix.theta[bs][t], 1.0}, {ix.theta[br][t], -1.0}},
                      -ln.angle_limit_rad, ln.angle_limit_rad, "ang_" + ln.id + "_" + std::to_string(t));
        }
    }
    for (int bidx = 0; bidx < nb; ++bidx) {
        const auto& bus = nw.buses[bidx];
        const auto& load = day.series(day.load, bus.id);
        for (int t = 0; t < kHorizon; ++t) {
            std::vector<std::pair<int, double>> row;
            double rhs = load[t];
            for (int l = 0; l < nl; ++l) {
                if (nw.lines[l].from == bus.id) row.emplace_back(ix.flow[l][t], -1.0);
                if (nw.lines[l].to == bus.id) row.emplace_back(ix.flow[l][t], 1.0);
            }
            for (int i = 0; i < ng; ++i)
                if (nw.gens[i].bus == bus.id) row.emplace_back(ix.gadj[i][t], 1.0);
            for (int w = 0; w < nwf; ++w)
                if (nw.wind[w].bus == bus.id) {
                    rhs -= day.series(day.wind_act, nw.wind[w].id)[t];
                    row.emplace_back(ix.cur[w][t], -1.0);
                }
            row.emplace_back(ix.shed[bidx][t], 1.0);
            m.add_row(row, rhs, rhs, "bal_" + bus.id + "_" + std::to_string(t));
        }
    }
    if (b.cha) {
        for (size_t dl = 0; dl < b.dlr_line_rows.size(); ++dl) {
            const int l = b.dlr_line_rows[dl];
            const auto& ln = nw.lines[l];
            const auto& hours = ratings.of(ln.id);
            const auto bp = model_breakpoints(curves->at(ln.id), opt.tau_extrap_temp);
            ix.lambda[dl].resize(kHorizon);
            for (int t = 0; t < kHorizon; ++t) {
                const std::string st = "_" + ln.id + "_" + std::to_string(t);
                const auto& fit = hours[t].fit_act;
                const int tau = m.add_var(bp.front().first, bp.back().first, false, "tau" + st);
                ix.tau[dl][t] = tau;
                m.add_row({{tau, 1.0}, {ix.flow[l][t], -fit.slope_a}},
                          fit.intercept_b, 1e30, "tpa" + st);
                m.add_row({{tau, 1.0}, {ix.flow[l][t], fit.slope_a}},
                          fit.intercept_b, 1e30, "tpb" + st);
                std::vector<int> lam;
                std::vector<std::pair<int, double>> conv, interp{{tau, -1.0}};
                for (size_t k = 0; k < bp.size(); ++k) {
                    const int v = m.add_var(0.0, 1.0, false, "lam" + st + "_" + std::to_string(k));
                    lam.push_back(v);
                    conv.emplace_back(v, 1.0);
                    interp.emplace_back(v, bp[k].first);
                    m.obj_lin[v] += bp[k].second;
                }
                m.add_row(conv, 1.0, 1.0, "lamc" + st);
                m.add_row(interp, 0.0, 0.0, "lamt" + st);
                ix.lambda[dl][t] = lam;
                // no SOS2 group: the curve is convex and minimized, so the
                // relaxation is exact in this continuous problem
            }
        }
    }
    return b;
}

// --------------------------------------------------------------------------
// Solution extraction and cost breakdowns.

struct SolveReport {
    std::string problem;
    solve::Status status = solve::Status::Failed;
    double objective = 0.0;
    double gap = 0.0;
    double wall_s = 0.0;
    std::vector<std::pair<std::string, double>> terms;  // sums to objective

    double term(const std::string& name) const {
        for (const auto& [k, v] : terms) if (k == name) return v;
        return 0.0;
    }
};

inline DaDispatch extract_dispatch(const BuiltDa& b, const solve::Solution& sol) {
    const int ng = static_cast<int>(b.net->gens.size());
    DaDispatch d;
    d.u.assign(ng, {});
    d.g.assign(ng, {});
    for (int i = 0; i < ng; ++i)
        for (int t = 0; t < kHorizon; ++t) {
            d.u[i][t] = sol.x[b.ix.u[i][t]] > 0.5 ? 1.0 : 0.0;
            d.g[i][t] = sol.x[b.ix.gpm[i][t]] + b.net->gens[i].g_min * d.u[i][t];
        }
    return d;
}

inline SolveReport report_da(const BuiltDa& b, const solve::Solution& sol) {
    SolveReport r;
    r.problem = b.cha ? "cha_uc" : "baseline_uc";
    r.status = sol.status;
    r.objective = sol.objective;
    r.gap = sol.gap;
    r.wall_s = sol.wall_s;
    const auto& x = sol.x;
    const auto& nw = *b.net;
    double fuel = 0, startup = 0, shutdown = 0, shed = 0;
    for (size_t i = 0; i < nw.gens.size(); ++i)
        for (int t = 0; t < kHorizon; ++t) {
            fuel += x[b.ix.fuel[i][t]];
            shutdown += nw.gens[i].shutdown_cost * x[b.ix.usd[i][t]];
            for (size_t o = 0; o < nw.gens[i].startup.size(); ++o)
                startup += nw.gens[i].startup[o].cost * x[b.ix.delta[i][o][t]];
        }
    for (size_t bi = 0; bi < nw.buses.size(); ++bi)
        for (int t = 0; t < kHorizon; ++t) shed += b.opt.voll * x[b.ix.shed[bi][t]];
    r.terms = {{"fuel", fuel}, {"startup", startup}, {"shutdown", shutdown}, {"shed", shed}};
    if (b.cha) {
        double e_res = 0, e_shed = 0, e_dep = 0;
        for (size_t s = 0; s < b.scen_prob.size(); ++s) {
            const double pr = b.scen_prob[s];
            for (size_t i = 0; i < nw.gens.size(); ++i)
                for (int t = 0; t < kHorizon; ++t)
                    e_res += pr * (detail::res_up_price(nw.gens[i], b.opt) * x[b.ix.s_rup[s][i][t]] +
                                   detail::res_dn_price(nw.gens[i], b.opt) * x[b.ix.s_rdn[s][i][t]]);
            for (size_t bi = 0; bi < nw.buses.size(); ++bi)
                for (int t = 0; t < kHorizon; ++t)
                    e_shed += pr * b.opt.voll * x[b.ix.s_shed[s][bi][t]];
        }
        // depreciation term read back through the lambda objective coefficients
        for (size_t s = 0; s < b.scen_prob.size(); ++s)
            for (size_t dl = 0; dl < b.dlr_line_rows.size(); ++dl)
                for (int t = 0; t < kHorizon; ++t)
                    for (int v : b.ix.s_lambda[s][dl][t])
                        e_dep += b.m.obj_lin[v] * x[v];
        r.terms.emplace_back("expected_reserve", e_res);
        r.terms.emplace_back("expected_shed", e_shed);
        r.terms.emplace_back("expected_depreciation", e_dep);
    }
    return r;
}

inline SolveReport report_rt(const BuiltRt& b, const solve::Solution& sol) {
    SolveReport r;
    r.problem = b.cha ? "cha_rt" : "baseline_rt";
    r.status = sol.status;
    r.objective = sol.objective;
    r.gap = sol.gap;
    r.wall_s = sol.wall_s;
    const auto& x = sol.x;
    const auto& nw = *b.net;
    double quad = 0, res = 0, shed = 0, dep = 0;
    for (size_t i = 0; i < nw.gens.size(); ++i)
        for (int t = 0; t < kHorizon; ++t) {
            const double g = x[b.ix.gadj[i][t]];
            quad += nw.gens[i].cost_quad * g * g;
            res += detail::res_up_price(nw.gens[i], b.opt) * x[b.ix.rup[i][t]] +
                   detail::res_dn_price(nw.gens[i], b.opt) * x[b.ix.rdn[i][t]];
        }
    for (size_t bi = 0; bi < nw.buses.size(); ++bi)
        for (int t = 0; t < kHorizon; ++t) shed += b.opt.voll * x[b.ix.shed[bi][t]];
    if (b.cha)
        for (const auto& line_lams : b.ix.lambda)
            for (const auto& lam : line_lams)
                for (int v : lam) dep += b.m.obj_lin[v] * x[v];
    r.terms = {{"adjustment_quad", quad}, {"reserve", res}, {"shed", shed}};
    if (b.cha) r.terms.emplace_back("depreciation", dep);
    return r;
}

}  // namespace linewear::model
