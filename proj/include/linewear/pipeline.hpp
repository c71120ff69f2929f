#pragma once

// Daily simulation pipeline: hourly ratings and fits from weather, scenario
// reduction from history, the day-ahead solve per variant, the real-time
// solve against actuals, post-hoc temperature/aging evaluation, and state
// carry-over to the next day.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "linewear/evaluate.hpp"
#include "linewear/io.hpp"
#include "linewear/model.hpp"

namespace linewear::pipeline {

using net::kHorizon;

inline thermal::WeatherSample apply_solar_policy(thermal::WeatherSample s, bool worst_case) {
    if (worst_case) s.solar_flux = 1000.0;
    return s;
}

// Hourly DLR ratings, K-scaled limits, and forecast/realized linear fits for
// every DLR line.
inline net::RatingsInput compute_ratings(const net::Network& nw,
                                         const std::map<std::string, thermal::WeatherSeries>& weather,
                                         double k_factor, bool solar_worst_case) {
    net::RatingsInput out;
    for (const auto& ln : nw.lines) {
        if (!ln.dlr) continue;
        auto wit = weather.find(ln.id);
        if (wit == weather.end())
            throw ValidationError({"no weather series for DLR line " + ln.id});
        const auto& cond = nw.conductor_of(ln);
        std::vector<net::HourRating> hours(kHorizon);
        for (int t = 0; t < kHorizon; ++t) {
            const auto fc = apply_solar_policy(wit->second.forecast[t], solar_worst_case);
            const auto act = apply_solar_policy(wit->second.actual[t], solar_worst_case);
            net::HourRating& h = hours[t];
            h.dlr_fc_mw = thermal::solve_ampacity(cond, fc, cond.max_temp).rating_mw;
            h.dlr_act_mw = thermal::solve_ampacity(cond, act, cond.max_temp).rating_mw;
            h.limit_fc_mw = net::k_scaled_limit(h.dlr_fc_mw, ln.slr_mw, k_factor);
            h.limit_act_mw = net::k_scaled_limit(h.dlr_act_mw, ln.slr_mw, k_factor);
            h.fit_fc = linfit::fit_line_temperature(cond, fc, ln.slr_mw);
            h.fit_act = linfit::fit_line_temperature(cond, act, ln.slr_mw);
        }
        out.lines[ln.id] = std::move(hours);
    }
    return out;
}

inline std::string ratings_csv(const std::string& date, const net::RatingsInput& ratings) {
    std::string s =
        "date,line_id,hour,dlr_fc_mw,dlr_act_mw,limit_fc_mw,limit_act_mw,"
        "fit_fc_slope_c_per_mw,fit_fc_intercept_c,fit_act_slope_c_per_mw,fit_act_intercept_c\n";
    char buf[400];
    for (const auto& [line, hours] : ratings.lines)
        for (int t = 0; t < kHorizon; ++t) {
            const auto& h = hours[t];
            std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.6f,%.6f,%.6f,%.6f,%.9f,%.6f,%.9f,%.6f\n",
                          date.c_str(), line.c_str(), t, h.dlr_fc_mw, h.dlr_act_mw,
                          h.limit_fc_mw, h.limit_act_mw, h.fit_fc.slope_a, h.fit_fc.intercept_b,
                          h.fit_act.slope_a, h.fit_act.intercept_b);
            s += buf;
        }
    return s;
}

// ---------------------------------------------------------------------------
// Variant-day execution.

struct VariantRun {
    std::string variant;  // slr | dlr | cha
    model::SolveReport da_report;
    model::SolveReport rt_report;
    model::DaDispatch dispatch;
    std::map<std::string, std::array<double, kHorizon>> da_flow_mw;
    evaluate::VariantDayResult result;
};

inline model::UcOptions options_for(const io::RunConfig& cfg, const std::string& variant) {
    model::UcOptions opt;
    opt.mode = variant == "slr" ? model::RatingMode::Slr : model::RatingMode::Dlr;
    opt.voll = cfg.voll;
    opt.reserve_req_mw = cfg.reserve_req_mw;
    opt.res_up_price_mult = cfg.res_up_price_mult;
    opt.res_dn_price_mult = cfg.res_dn_price_mult;
    return opt;
}

inline solve::Options solver_options_for(const io::RunConfig& cfg) {
    solve::Options s;
    s.mip_gap = cfg.mip_gap;
    s.time_limit_s = cfg.time_limit_s;
    return s;
}

inline void require_solved(const solve::Solution& sol, const std::string& what) {
    if (sol.status == solve::Status::Infeasible)
        throw InfeasibleModel(what + " is infeasible (data error: shedding slack exists)");
    if (sol.status == solve::Status::Unbounded)
        throw SolverError(what + " is unbounded");
    if (sol.status == solve::Status::Failed)
        throw SolverError(what + " failed in the solver");
    if (sol.x.empty())
        throw SolverError(what + " returned no primal solution");
}

// Day-ahead plus real-time for one variant on one day.  `states` is read for
// curve building (CHA) and updated by the post-hoc step.
inline VariantRun run_variant_day(const net::Network& nw, const net::DayData& day,
                                  const net::RatingsInput& ratings,
                                  const scenario::ScenarioSet* scenarios,
                                  const std::map<std::string, thermal::WeatherSeries>& weather,
                                  std::map<std::string, aging::LineHealthState>& states,
                                  const io::RunConfig& cfg, const std::string& variant) {
    VariantRun run;
    run.variant = variant;
    const model::UcOptions opt = options_for(cfg, variant);
    const solve::Options sopt = solver_options_for(cfg);

    std::map<std::string, aging::DepreciationCurve> curves;
    if (variant == "cha") {
        if (!scenarios) throw ValidationError({"cha variant requires a scenario set"});
        for (const auto& ln : nw.lines)
            if (ln.dlr)
                curves[ln.id] = aging::build_depreciation_curve(states.at(ln.id),
                                                                nw.conductor_of(ln), ln.econ);
    }

    // day-ahead
    model::BuiltDa da = variant == "cha"
        ? model::build_cha_uc(nw, day, ratings, *scenarios, curves, opt)
        : model::build_baseline_uc(nw, day, ratings, opt);
    const solve::Solution da_sol = solve::solve_milp(da.m, sopt);
    require_solved(da_sol, "day-ahead " + variant + " problem (" + day.date + ")");
    run.da_report = model::report_da(da, da_sol);
    run.dispatch = model::extract_dispatch(da, da_sol);
    for (size_t l = 0; l < nw.lines.size(); ++l)
        for (int t = 0; t < kHorizon; ++t)
            run.da_flow_mw[nw.lines[l].id][t] = da_sol.x[da.ix.flow[l][t]];

    // real-time
    model::BuiltRt rt = model::build_rt_dispatch(nw, day, ratings, run.dispatch,
                                                 variant == "cha" ? &curves : nullptr, opt);
    const solve::Solution rt_sol = solve::solve_milp(rt.m, sopt);
    require_solved(rt_sol, "real-time " + variant + " problem (" + day.date + ")");
    run.rt_report = model::report_rt(rt, rt_sol);

    evaluate::VariantDayResult& vr = run.result;
    vr.day_ahead_usd = run.da_report.term("fuel") + run.da_report.term("startup") +
                       run.da_report.term("shutdown") + run.da_report.term("shed");
    vr.rt_adjust_usd = run.rt_report.term("adjustment_quad");
    vr.reserve_usd = run.rt_report.term("reserve");
    vr.shed_usd = run.rt_report.term("shed");
    for (size_t l = 0; l < nw.lines.size(); ++l)
        for (int t = 0; t < kHorizon; ++t)
            vr.flow_mw[nw.lines[l].id][t] = rt_sol.x[rt.ix.flow[l][t]];
    for (size_t w = 0; w < nw.wind.size(); ++w)
        for (int t = 0; t < kHorizon; ++t) vr.curtail_mwh += rt_sol.x[rt.ix.cur[w][t]];
    for (size_t b = 0; b < nw.buses.size(); ++b)
        for (int t = 0; t < kHorizon; ++t) vr.shed_mwh += rt_sol.x[rt.ix.shed[b][t]];

    evaluate::posthoc_day(nw, weather, vr, states);
    return run;
}

inline std::string day_results_header() {
    return "date,variant,day_ahead_usd,rt_adjust_usd,reserve_usd,shed_usd,dep_usd,"
           "curtail_mwh,shed_mwh,total_usd";
}

inline std::string day_result_row(const std::string& date, const std::string& variant,
                                  const evaluate::VariantDayResult& v) {
    char buf[400];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  date.c_str(), variant.c_str(), v.day_ahead_usd, v.rt_adjust_usd,
                  v.reserve_usd, v.shed_usd, v.dep_usd, v.curtail_mwh, v.shed_mwh,
                  v.total_usd());
    return buf;
}

inline std::vector<evaluate::DayResult> load_day_results(const std::string& path) {
    const auto rows = io::detail::read_csv(path, day_results_header());
    std::map<std::string, evaluate::DayResult> by_date;
    for (const auto& f : rows) {
        if (f.size() != 10) throw ValidationError({path + ": expected 10 columns"});
        auto& d = by_date[f[0]];
        d.date = f[0];
        evaluate::VariantDayResult v;
        v.day_ahead_usd = std::stod(f[2]);
        v.rt_adjust_usd = std::stod(f[3]);
        v.reserve_usd = std::stod(f[4]);
        v.shed_usd = std::stod(f[5]);
        v.dep_usd = std::stod(f[6]);
        v.curtail_mwh = std::stod(f[7]);
        v.shed_mwh = std::stod(f[8]);
        d.variants[f[1]] = v;
    }
    std::vector<evaluate::DayResult> out;
    for (auto& [date, d] : by_date) out.push_back(d);
    return out;
}

// Samples feeding the correlation-risk diagnostics, collected per day for
// every (wind farm, DLR line) pair under the chosen reference variant.
inline std::string pair_samples_header() {
    return "date,hour,wind_id,line_id,wp_err_mw,dlr_err_mw,temp_c,flow_mw";
}

inline std::string pair_sample_rows(const std::string& date, const net::Network& nw,
                                    const net::DayData& day, const net::RatingsInput& ratings,
                                    const evaluate::VariantDayResult& vr) {
    std::string s;
    char buf[320];
    for (const auto& w : nw.wind) {
        const auto& fc = day.series(day.wind_fc, w.id);
        const auto& act = day.series(day.wind_act, w.id);
        for (const auto& ln : nw.lines) {
            if (!ln.dlr) continue;
            const auto& hours = ratings.of(ln.id);
            const auto& temps = vr.line_temp_c.at(ln.id);
            const auto& flows = vr.flow_mw.at(ln.id);
            for (int t = 0; t < kHorizon; ++t) {
                std::snprintf(buf, sizeof(buf), "%s,%d,%s,%s,%.6f,%.6f,%.6f,%.6f\n",
                              date.c_str(), t, w.id.c_str(), ln.id.c_str(),
                              fc[t] - act[t], hours[t].dlr_fc_mw - hours[t].dlr_act_mw,
                              temps[t], flows[t]);
                s += buf;
            }
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Multi-day driver.

struct RunOutput {
    std::vector<evaluate::DayResult> days;
    std::map<std::string, std::map<std::string, aging::LineHealthState>> states;  // variant -> line
    std::string day_results_csv;
    std::string pair_samples_csv;
};

inline RunOutput run_days(const net::Network& nw, const io::RunConfig& cfg,
                          const io::WeatherByDay& weather,
                          const std::map<std::string, net::DayData>& series,
                          const scenario::ScenarioSet* scenarios,
                          const std::vector<std::string>& dates,
                          const std::vector<std::string>& variants) {
    RunOutput out;
    out.day_results_csv = day_results_header() + "\n";
    out.pair_samples_csv = pair_samples_header() + "\n";
    for (const auto& variant : variants) {
        auto st = cfg.states_dir.empty()
            ? std::map<std::string, aging::LineHealthState>{}
            : io::load_states(cfg.states_dir, nw);
        if (st.empty())
            for (const auto& ln : nw.lines)
                if (ln.dlr) st[ln.id] = {ln.id, {}, 0.0};
        out.states[variant] = std::move(st);
    }
    // reference variant for the diagnostics: dlr if present, else the first
    const std::string ref_variant =
        std::find(variants.begin(), variants.end(), "dlr") != variants.end() ? "dlr"
                                                                             : variants.front();
    for (const auto& date : dates) {
        auto wit = weather.find(date);
        auto sit = series.find(date);
        if (wit == weather.end()) throw ValidationError({"no weather for day " + date});
        if (sit == series.end()) throw ValidationError({"no load/wind series for day " + date});
        const auto ratings = compute_ratings(nw, wit->second, cfg.k_factor, cfg.solar_worst_case);
        evaluate::DayResult dr;
        dr.date = date;
        for (const auto& variant : variants) {
            auto run = run_variant_day(nw, sit->second, ratings, scenarios, wit->second,
                                       out.states[variant], cfg, variant);
            out.day_results_csv += day_result_row(date, variant, run.result);
            if (variant == ref_variant)
                out.pair_samples_csv +=
                    pair_sample_rows(date, nw, sit->second, ratings, run.result);
            dr.variants[variant] = std::move(run.result);
        }
        out.days.push_back(std::move(dr));
    }
    return out;
}

inline std::vector<evaluate::PairRisk> pair_risks_from_csv(const net::Network& nw,
                                                           const std::string& csv_path) {
    const auto rows = io::detail::read_csv(csv_path, pair_samples_header());
    std::map<std::pair<std::string, std::string>, std::vector<evaluate::PairSample>> samples;
    for (const auto& f : rows) {
        if (f.size() != 8) throw ValidationError({csv_path + ": expected 8 columns"});
        samples[{f[2], f[3]}].push_back(
            {std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7])});
    }
    std::vector<evaluate::PairRisk> out;
    for (const auto& [key, s] : samples)
        out.push_back(evaluate::correlation_risk_report(nw, key.first, key.second, s));
    return out;
}

inline std::string pair_risks_csv(const std::vector<evaluate::PairRisk>& risks) {
    std::string s =
        "wind_id,line_id,error_spearman,gsf,mean_flow_mw,mean_abs_flow_mw,"
        "n_pp,n_pn,n_np,n_nn,temp_pp,temp_pn,temp_np,temp_nn\n";
    char buf[400];
    for (const auto& r : risks) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%s,%.6f,%.6f,%.6f,%.6f,%d,%d,%d,%d,%.6f,%.6f,%.6f,%.6f\n",
                      r.wind_id.c_str(), r.line_id.c_str(), r.error_spearman, r.gsf,
                      r.mean_flow_mw, r.mean_abs_flow_mw, r.quadrants.count[0],
                      r.quadrants.count[1], r.quadrants.count[2], r.quadrants.count[3],
                      r.quadrants.mean_temp[0], r.quadrants.mean_temp[1],
                      r.quadrants.mean_temp[2], r.quadrants.mean_temp[3]);
        s += buf;
    }
    return s;
}

}  // namespace linewear::pipeline
