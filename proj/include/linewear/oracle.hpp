#pragma once

// Exhaustive reference solver for small unit-commitment instances.  Feasible
// commitment patterns are enumerated per generator directly from min-up/down
// rules and initial conditions, startup segment costs are computed from actual
// off durations, and each joint pattern is priced by an independently written
// dispatch LP over total generation.  The minimum over all patterns is the
// exact optimum under the same piecewise-linear fuel representation as the
// MILP.

#include <array>
#include <cstdint>
#include <vector>

#include "linewear/model.hpp"

namespace linewear::oracle {

using net::kHorizon;

struct CommitPattern {
    std::array<int, kHorizon> u{}, usu{}, usd{};
    double commit_cost = 0.0;  // startup + shutdown cost of this pattern
};

namespace detail {

// Cheapest startup segment permitted for a startup at hour t: any segment
// whose off-window contains some shutdown (including the virtual pre-horizon
// one); the coldest segment is always permitted.
inline double startup_cost_at(const net::Generator& g, const CommitPattern& p, int t) {
    std::vector<int> shutdowns;
    if (!g.init_on) shutdowns.push_back(-g.init_hours);
    for (int k = 0; k < t; ++k)
        if (p.usd[k]) shutdowns.push_back(k);
    const int n_seg = static_cast<int>(g.startup.size());
    double best = g.startup.back().cost;
    for (int o = 0; o + 1 < n_seg; ++o) {
        for (int sd : shutdowns) {
            const int off = t - sd;
            if (off >= g.startup[o].off_hours && off < g.startup[o + 1].off_hours)
                best = std::min(best, g.startup[o].cost);
        }
    }
    return best;
}

inline void finish_pattern(const net::Generator& g, CommitPattern& p) {
    p.commit_cost = 0.0;
    for (int t = 0; t < kHorizon; ++t) {
        if (p.usu[t]) p.commit_cost += startup_cost_at(g, p, t);
        if (p.usd[t]) p.commit_cost += g.shutdown_cost;
    }
}

inline void enumerate_rec(const net::Generator& g, int t, bool on, int dur,
                          CommitPattern& cur, std::vector<CommitPattern>& out,
                          std::uint64_t cap) {
    if (t == kHorizon) {
        CommitPattern done = cur;
        finish_pattern(g, done);
        out.push_back(done);
        if (out.size() > cap)
            throw ValidationError({"generator " + g.id + ": too many commitment patterns"});
        return;
    }
    const bool may_stop = on && dur >= g.min_up;
    const bool may_start = !on && dur >= g.min_down;
    // stay in the current state
    cur.u[t] = on ? 1 : 0;
    cur.usu[t] = 0;
    cur.usd[t] = 0;
    enumerate_rec(g, t + 1, on, dur + 1, cur, out, cap);
    if (may_stop) {
        cur.u[t] = 0;
        cur.usd[t] = 1;
        enumerate_rec(g, t + 1, false, 1, cur, out, cap);
        cur.usd[t] = 0;
    }
    if (may_start) {
        cur.u[t] = 1;
        cur.usu[t] = 1;
        enumerate_rec(g, t + 1, true, 1, cur, out, cap);
        cur.usu[t] = 0;
    }
}

inline std::vector<CommitPattern> enumerate_patterns(const net::Generator& g,
                                                     std::uint64_t cap) {
    std::vector<CommitPattern> out;
    CommitPattern cur;
    enumerate_rec(g, 0, g.init_on, g.init_hours, cur, out, cap);
    return out;
}

// Hourly upper bound on total generation implied by startup/shutdown ramps.
inline double gen_ub(const net::Generator& g, const CommitPattern& p, int t) {
    if (!p.u[t]) return 0.0;
    const int usd_next = t + 1 < kHorizon ? p.usd[t + 1] : 0;
    if (g.min_up == 1)
        return std::min(g.g_max - (g.g_max - g.startup_mw) * p.usu[t],
                        g.g_max - (g.g_max - g.shutdown_mw) * usd_next);
    return g.g_max - (g.g_max - g.startup_mw) * p.usu[t] -
           (g.g_max - g.shutdown_mw) * usd_next;
}

// Dispatch LP for one joint commitment pattern.  Written over total
// generation (not output-above-minimum) so it does not share algebra with the
// MILP builder.
inline double dispatch_cost(const net::Network& nw, const net::DayData& day,
                            const net::RatingsInput& ratings, const model::UcOptions& opt,
                            const std::vector<const CommitPattern*>& pat) {
    solve::Model m;
    const int ng = static_cast<int>(nw.gens.size());
    const int nb = static_cast<int>(nw.buses.size());
    const int nl = static_cast<int>(nw.lines.size());
    const int nwf = static_cast<int>(nw.wind.size());
    std::vector<std::array<int, kHorizon>> vg(ng), vfuel(ng), vrav(ng);
    std::vector<std::array<int, kHorizon>> vth(nb), vshed(nb), vflow(nl), vcur(nwf);

    for (int i = 0; i < ng; ++i) {
        const auto& g = nw.gens[i];
        const auto& p = *pat[i];
        const auto tangents = model::detail::fuel_tangents(g, std::max(1, opt.fuel_tangents));
        for (int t = 0; t < kHorizon; ++t) {
            const double ub = gen_ub(g, p, t);
            const double lb = p.u[t] ? g.g_min : 0.0;
            if (ub < lb - 1e-9) return std::numeric_limits<double>::infinity();
            vg[i][t] = m.add_var(lb, ub, false, "g");
            vfuel[i][t] = m.add_var(0.0, 1e30, false, "f");
            vrav[i][t] = m.add_var(0.0, p.u[t] ? g.res_up_cap : 0.0, false, "r");
            m.obj_lin[vfuel[i][t]] = 1.0;
            for (const auto& tg : tangents)
                m.add_row({{vfuel[i][t], 1.0}, {vg[i][t], -tg.slope}},
                          tg.intercept * p.u[t], 1e30, "fc");
            m.add_row({{vrav[i][t], 1.0}, {vg[i][t], 1.0}}, -1e30, g.g_max, "rh");
            if (t == 0) {
                const double base = g.init_on ? g.init_g : 0.0;
                m.add_row({{vg[i][t], 1.0}}, base - g.ramp_down, base + g.ramp_up, "r0");
            } else {
                m.add_row({{vg[i][t], 1.0}, {vg[i][t - 1], -1.0}},
                          -g.ramp_down, g.ramp_up, "rr");
            }
        }
    }
    for (int bi = 0; bi < nb; ++bi)
        for (int t = 0; t < kHorizon; ++t) {
            const bool slack = bi == nw.slack_bus();
            vth[bi][t] = m.add_var(slack ? 0.0 : -10.0, slack ? 0.0 : 10.0, false, "th");
            const double load = day.series(day.load, nw.buses[bi].id)[t];
            vshed[bi][t] = m.add_var(0.0, std::max(load, 0.0), false, "sh");
            m.obj_lin[vshed[bi][t]] = opt.voll;
        }
    for (int w = 0; w < nwf; ++w)
        for (int t = 0; t < kHorizon; ++t) {
            const double fc = day.series(day.wind_fc, nw.wind[w].id)[t];
            vcur[w][t] = m.add_var(0.0, std::max(fc, 0.0), false, "c");
        }
    for (int l = 0; l < nl; ++l) {
        const auto& ln = nw.lines[l];
        const int bs = nw.bus_index(ln.from);
        const int br = nw.bus_index(ln.to);
        const double bc = nw.base_mva / ln.reactance_pu;
        for (int t = 0; t < kHorizon; ++t) {
            const double lim = model::detail::da_limit(ln, ratings, t, opt.mode);
            vflow[l][t] = m.add_var(-lim, lim, false, "p");
            m.add_row({{vflow[l][t], 1.0}, {vth[bs][t], -bc}, {vth[br][t], bc}}, 0.0, 0.0, "dc");
            m.add_row({{vth[bs][t], 1.0}, {vth[br][t], -1.0}},
                      -ln.angle_limit_rad, ln.angle_limit_rad, "an");
        }
    }
    for (int bi = 0; bi < nb; ++bi) {
        const auto& load = day.series(day.load, nw.buses[bi].id);
        for (int t = 0; t < kHorizon; ++t) {
            std::vector<std::pair<int, double>> row;
            double rhs = load[t];
            for (int l = 0; l < nl; ++l) {
                if (nw.lines[l].from == nw.buses[bi].id) row.emplace_back(vflow[l][t], -1.0);
                if (nw.lines[l].to == nw.buses[bi].id) row.emplace_back(vflow[l][t], 1.0);
            }
            for (int i = 0; i < ng; ++i)
                if (nw.gens[i].bus == nw.buses[bi].id) row.emplace_back(vg[i][t], 1.0);
            for (int w = 0; w < nwf; ++w)
                if (nw.wind[w].bus == nw.buses[bi].id) {
                    rhs -= day.series(day.wind_fc, nw.wind[w].id)[t];
                    row.emplace_back(vcur[w][t], -1.0);
                }
            row.emplace_back(vshed[bi][t], 1.0);
            m.add_row(row, rhs, rhs, "bl");
        }
    }
    for (int t = 0; t < kHorizon; ++t) {
        std::vector<std::pair<int, double>> row;
        for (int i = 0; i < ng; ++i) row.emplace_back(vrav[i][t], 1.0);
        m.add_row(row, opt.reserve_req_mw, 1e30, "rq");
    }

    solve::Options sopt;
    const solve::Solution sol = solve::solve_milp(m, sopt);
    if (sol.status != solve::Status::Optimal)
        return std::numeric_limits<double>::infinity();
    return sol.objective;
}

}  // namespace detail

struct BruteForceResult {
    double objective = std::numeric_limits<double>::infinity();
    std::uint64_t patterns_tried = 0;
};

inline BruteForceResult brute_force_uc(const net::Network& nw, const net::DayData& day,
                                       const net::RatingsInput& ratings,
                                       const model::UcOptions& opt,
                                       std::uint64_t max_combos = 100000) {
    nw.validate();
    const int ng = static_cast<int>(nw.gens.size());
    std::vector<std::vector<CommitPattern>> per_gen;
    std::uint64_t combos = 1;
    for (int i = 0; i < ng; ++i) {
        per_gen.push_back(detail::enumerate_patterns(nw.gens[i], max_combos));
        combos *= per_gen.back().size();
        if (combos > max_combos)
            throw ValidationError({"brute force: pattern space exceeds limit"});
    }
    BruteForceResult res;
    std::vector<size_t> odo(ng, 0);
    std::vector<const CommitPattern*> pick(ng);
    while (true) {
        double cc = 0.0;
        for (int i = 0; i < ng; ++i) {
            pick[i] = &per_gen[i][odo[i]];
            cc += pick[i]->commit_cost;
        }
        ++res.patterns_tried;
        if (cc < res.objective) {  // dispatch cost is nonnegative
            const double dc = detail::dispatch_cost(nw, day, ratings, opt, pick);
            res.objective = std::min(res.objective, cc + dc);
        }
        int i = 0;
        for (; i < ng; ++i) {
            if (++odo[i] < per_gen[i].size()) break;
            odo[i] = 0;
        }
        if (i == ng) break;
    }
    return res;
}

}  // namespace linewear::oracle
