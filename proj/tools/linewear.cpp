// Command-line front end.  Subcommands follow the daily operating timeline:
//   rate   weather -> hourly DLR ratings and linear fits (CSV)
//   scen   error history -> reduced scenario set (JSON) + correlation report
//   uc     day-ahead unit commitment for one variant (JSON solution)
//   rt     real-time re-dispatch against actuals (JSON solution)
//   eval   post-hoc temperatures/aging from an rt solution (CSV + states)
//   run    multi-day driver chaining all of the above with state carry-over
//   report aggregate day results into seasonal tables + pair diagnostics
// Exit codes: 0 ok, 2 validation error, 3 solver failure, 4 infeasible.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "linewear/io.hpp"
#include "linewear/pipeline.hpp"

namespace lw = linewear;
using lw::io::RunConfig;
using nlohmann::json;

namespace {

struct Args {
    std::string config_path;
    uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> variants;
    std::string days;
    std::string out;
};

std::vector<std::string> pick_days(const RunConfig& cfg, const Args& args,
                                   const std::map<std::string, lw::net::DayData>& series) {
    std::vector<std::string> days;
    if (!args.days.empty() && args.days != "all") {
        std::string cur;
        for (char c : args.days + ",") {
            if (c == ',') {
                if (!cur.empty()) days.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
    } else if (!cfg.days.empty()) {
        days = cfg.days;
    } else {
        for (const auto& [date, d] : series) days.push_back(date);
    }
    for (const auto& d : days)
        if (!series.count(d)) throw lw::ValidationError({"no data for day " + d});
    return days;
}

RunConfig effective_config(const Args& args) {
    RunConfig cfg = lw::io::load_config(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.variants.empty()) cfg.variants = args.variants;
    if (!args.out.empty()) cfg.out_dir = args.out;
    return cfg;
}

json report_to_json(const lw::model::SolveReport& r) {
    json terms = json::object();
    for (const auto& [k, v] : r.terms) terms[k] = v;
    const char* status = "failed";
    switch (r.status) {
        case lw::solve::Status::Optimal: status = "optimal"; break;
        case lw::solve::Status::GapReached: status = "gap_reached"; break;
        case lw::solve::Status::TimeLimit: status = "time_limit"; break;
        case lw::solve::Status::Infeasible: status = "infeasible"; break;
        case lw::solve::Status::Unbounded: status = "unbounded"; break;
        default: break;
    }
    return {{"problem", r.problem}, {"status", status}, {"objective", r.objective},
            {"gap", r.gap}, {"terms", terms}};
}

// Scenario set for the cha variant, reduced once from the configured history.
lw::scenario::ScenarioSet make_scenarios(const RunConfig& cfg) {
    if (cfg.history_path.empty())
        throw lw::ValidationError({"cha variant requires a 'history' path in the config"});
    const auto history = lw::io::load_history(cfg.history_path);
    return lw::scenario::reduce(history, cfg.n_seed,
                                std::min(cfg.n_total, history.days.size()));
}

int cmd_rate(const Args& args) {
    const RunConfig cfg = effective_config(args);
    const auto nw = lw::io::load_network(cfg.network_path);
    const auto weather = lw::io::load_weather(cfg.weather_path, nw);
    const auto series = lw::io::load_series(cfg.series_path, nw);
    std::string csv;
    for (const auto& date : pick_days(cfg, args, series)) {
        auto wit = weather.find(date);
        if (wit == weather.end()) throw lw::ValidationError({"no weather for day " + date});
        const auto ratings =
            lw::pipeline::compute_ratings(nw, wit->second, cfg.k_factor, cfg.solar_worst_case);
        const std::string block = lw::pipeline::ratings_csv(date, ratings);
        csv += csv.empty() ? block : block.substr(block.find('\n') + 1);
    }
    lw::io::atomic_write(cfg.out_dir + "/ratings.csv", csv);
    std::printf("wrote %s/ratings.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_scen(const Args& args) {
    const RunConfig cfg = effective_config(args);
    const auto history = lw::io::load_history(cfg.history_path.empty()
                                                  ? throw lw::ValidationError({"config has no 'history' path"})
                                                  : cfg.history_path);
    const auto set = lw::scenario::reduce(history, cfg.n_seed,
                                          std::min(cfg.n_total, history.days.size()));
    lw::io::save_scenarios(set, cfg.out_dir + "/scenarios.json");
    const auto rep = lw::scenario::correlation_report(set, history);
    std::string csv = "wind_id,dlr_id,history_spearman,scenario_spearman\n";
    char buf[256];
    for (const auto& p : rep.pairs) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f\n", p.wind_id.c_str(),
                      p.dlr_id.c_str(), p.history_spearman, p.scenario_spearman);
        csv += buf;
    }
    lw::io::atomic_write(cfg.out_dir + "/correlation.csv", csv);
    std::string bins = "asset_type,bin_lo,bin_hi,history_freq,scenario_freq\n";
    for (const auto& b : rep.marginal_bins) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f\n", b.asset_type.c_str(),
                      b.lo, b.hi, b.history_freq, b.scenario_freq);
        bins += buf;
    }
    lw::io::atomic_write(cfg.out_dir + "/marginals.csv", bins);
    std::printf("wrote %s/{scenarios.json,correlation.csv,marginals.csv}\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_uc(const Args& args) {
    const RunConfig cfg = effective_config(args);
    if (cfg.variants.size() != 1)
        throw lw::ValidationError({"uc requires exactly one --variant"});
    const std::string variant = cfg.variants[0];
    const auto nw = lw::io::load_network(cfg.network_path);
    const auto weather = lw::io::load_weather(cfg.weather_path, nw);
    const auto series = lw::io::load_series(cfg.series_path, nw);
    lw::scenario::ScenarioSet scen;
    if (variant == "cha") scen = make_scenarios(cfg);
    auto states = cfg.states_dir.empty() ? std::map<std::string, lw::aging::LineHealthState>{}
                                         : lw::io::load_states(cfg.states_dir, nw);
    for (const auto& ln : nw.lines)
        if (ln.dlr && !states.count(ln.id)) states[ln.id] = {ln.id, {}, 0.0};

    for (const auto& date : pick_days(cfg, args, series)) {
        auto wit = weather.find(date);
        if (wit == weather.end()) throw lw::ValidationError({"no weather for day " + date});
        const auto ratings =
            lw::pipeline::compute_ratings(nw, wit->second, cfg.k_factor, cfg.solar_worst_case);
        const auto& day = series.at(date);
        const auto opt = lw::pipeline::options_for(cfg, variant);
        std::map<std::string, lw::aging::DepreciationCurve> curves;
        if (variant == "cha")
            for (const auto& ln : nw.lines)
                if (ln.dlr)
                    curves[ln.id] = lw::aging::build_depreciation_curve(
                        states.at(ln.id), nw.conductor_of(ln), ln.econ);
        auto built = variant == "cha"
            ? lw::model::build_cha_uc(nw, day, ratings, scen, curves, opt)
            : lw::model::build_baseline_uc(nw, day, ratings, opt);
        const auto sol = lw::solve::solve_milp(built.m, lw::pipeline::solver_options_for(cfg));
        lw::pipeline::require_solved(sol, "day-ahead " + variant + " problem (" + date + ")");
        const auto report = lw::model::report_da(built, sol);
        const auto disp = lw::model::extract_dispatch(built, sol);

        json doc;
        doc["date"] = date;
        doc["variant"] = variant;
        doc["report"] = report_to_json(report);
        doc["generators"] = json::array();
        for (size_t i = 0; i < nw.gens.size(); ++i)
            doc["generators"].push_back(
                {{"id", nw.gens[i].id},
                 {"u", std::vector<double>(disp.u[i].begin(), disp.u[i].end())},
                 {"g_mw", std::vector<double>(disp.g[i].begin(), disp.g[i].end())}});
        doc["flows_mw"] = json::object();
        for (size_t l = 0; l < nw.lines.size(); ++l) {
            std::vector<double> f(lw::net::kHorizon);
            for (int t = 0; t < lw::net::kHorizon; ++t) f[t] = sol.x[built.ix.flow[l][t]];
            doc["flows_mw"][nw.lines[l].id] = f;
        }
        const std::string path = cfg.out_dir + "/uc_" + variant + "_" + date + ".json";
        lw::io::atomic_write(path, doc.dump(2) + "\n");
        std::printf("wrote %s (objective %.2f)\n", path.c_str(), report.objective);
    }
    return 0;
}

lw::model::DaDispatch dispatch_from_json(const json& doc, const lw::net::Network& nw) {
    lw::model::DaDispatch d;
    d.u.assign(nw.gens.size(), {});
    d.g.assign(nw.gens.size(), {});
    for (const auto& g : doc.at("generators")) {
        const std::string id = g.at("id").get<std::string>();
        size_t idx = nw.gens.size();
        for (size_t i = 0; i < nw.gens.size(); ++i)
            if (nw.gens[i].id == id) idx = i;
        if (idx == nw.gens.size())
            throw lw::ValidationError({"day-ahead solution has unknown generator " + id});
        const auto u = g.at("u").get<std::vector<double>>();
        const auto gv = g.at("g_mw").get<std::vector<double>>();
        if (u.size() != lw::net::kHorizon || gv.size() != lw::net::kHorizon)
            throw lw::ValidationError({"day-ahead solution for " + id + " is not 24 hours"});
        std::copy(u.begin(), u.end(), d.u[idx].begin());
        std::copy(gv.begin(), gv.end(), d.g[idx].begin());
    }
    return d;
}

int cmd_rt(const Args& args) {
    const RunConfig cfg = effective_config(args);
    if (cfg.variants.size() != 1)
        throw lw::ValidationError({"rt requires exactly one --variant"});
    const std::string variant = cfg.variants[0];
    const auto nw = lw::io::load_network(cfg.network_path);
    const auto weather = lw::io::load_weather(cfg.weather_path, nw);
    const auto series = lw::io::load_series(cfg.series_path, nw);
    auto states = cfg.states_dir.empty() ? std::map<std::string, lw::aging::LineHealthState>{}
                                         : lw::io::load_states(cfg.states_dir, nw);
    for (const auto& ln : nw.lines)
        if (ln.dlr && !states.count(ln.id)) states[ln.id] = {ln.id, {}, 0.0};

    for (const auto& date : pick_days(cfg, args, series)) {
        const std::string uc_path = cfg.out_dir + "/uc_" + variant + "_" + date + ".json";
        json uc_doc;
        try {
            uc_doc = json::parse(lw::io::read_file(uc_path));
        } catch (const json::parse_error& e) {
            throw lw::ValidationError({uc_path + ": " + e.what()});
        }
        const auto fixed = dispatch_from_json(uc_doc, nw);
        auto wit = weather.find(date);
        if (wit == weather.end()) throw lw::ValidationError({"no weather for day " + date});
        const auto ratings =
            lw::pipeline::compute_ratings(nw, wit->second, cfg.k_factor, cfg.solar_worst_case);
        const auto opt = lw::pipeline::options_for(cfg, variant);
        std::map<std::string, lw::aging::DepreciationCurve> curves;
        if (variant == "cha")
            for (const auto& ln : nw.lines)
                if (ln.dlr)
                    curves[ln.id] = lw::aging::build_depreciation_curve(
                        states.at(ln.id), nw.conductor_of(ln), ln.econ);
        auto built = lw::model::build_rt_dispatch(nw, series.at(date), ratings, fixed,
                                                  variant == "cha" ? &curves : nullptr, opt);
        const auto sol = lw::solve::solve_milp(built.m, lw::pipeline::solver_options_for(cfg));
        lw::pipeline::require_solved(sol, "real-time " + variant + " problem (" + date + ")");
        const auto report = lw::model::report_rt(built, sol);

        json doc;
        doc["date"] = date;
        doc["variant"] = variant;
        doc["report"] = report_to_json(report);
        doc["flows_mw"] = json::object();
        for (size_t l = 0; l < nw.lines.size(); ++l) {
            std::vector<double> f(lw::net::kHorizon);
            for (int t = 0; t < lw::net::kHorizon; ++t) f[t] = sol.x[built.ix.flow[l][t]];
            doc["flows_mw"][nw.lines[l].id] = f;
        }
        double cur = 0, shed = 0;
        for (size_t w = 0; w < nw.wind.size(); ++w)
            for (int t = 0; t < lw::net::kHorizon; ++t) cur += sol.x[built.ix.cur[w][t]];
        for (size_t b = 0; b < nw.buses.size(); ++b)
            for (int t = 0; t < lw::net::kHorizon; ++t) shed += sol.x[built.ix.shed[b][t]];
        doc["curtail_mwh"] = cur;
        doc["shed_mwh"] = shed;
        const std::string path = cfg.out_dir + "/rt_" + variant + "_" + date + ".json";
        lw::io::atomic_write(path, doc.dump(2) + "\n");
        std::printf("wrote %s (objective %.2f)\n", path.c_str(), report.objective);
    }
    return 0;
}

int cmd_eval(const Args& args) {
    const RunConfig cfg = effective_config(args);
    if (cfg.variants.size() != 1)
        throw lw::ValidationError({"eval requires exactly one --variant"});
    const std::string variant = cfg.variants[0];
    const auto nw = lw::io::load_network(cfg.network_path);
    const auto weather = lw::io::load_weather(cfg.weather_path, nw);
    const auto series = lw::io::load_series(cfg.series_path, nw);
    auto states = cfg.states_dir.empty() ? std::map<std::string, lw::aging::LineHealthState>{}
                                         : lw::io::load_states(cfg.states_dir, nw);
    for (const auto& ln : nw.lines)
        if (ln.dlr && !states.count(ln.id)) states[ln.id] = {ln.id, {}, 0.0};

    std::string csv = lw::pipeline::day_results_header() + "\n";
    for (const auto& date : pick_days(cfg, args, series)) {
        const std::string rt_path = cfg.out_dir + "/rt_" + variant + "_" + date + ".json";
        json rt_doc;
        try {
            rt_doc = json::parse(lw::io::read_file(rt_path));
        } catch (const json::parse_error& e) {
            throw lw::ValidationError({rt_path + ": " + e.what()});
        }
        const std::string uc_path = cfg.out_dir + "/uc_" + variant + "_" + date + ".json";
        json uc_doc = json::parse(lw::io::read_file(uc_path));

        lw::evaluate::VariantDayResult vr;
        const auto& da_terms = uc_doc.at("report").at("terms");
        vr.day_ahead_usd = da_terms.value("fuel", 0.0) + da_terms.value("startup", 0.0) +
                           da_terms.value("shutdown", 0.0) + da_terms.value("shed", 0.0);
        const auto& rt_terms = rt_doc.at("report").at("terms");
        vr.rt_adjust_usd = rt_terms.value("adjustment_quad", 0.0);
        vr.reserve_usd = rt_terms.value("reserve", 0.0);
        vr.shed_usd = rt_terms.value("shed", 0.0);
        vr.curtail_mwh = rt_doc.value("curtail_mwh", 0.0);
        vr.shed_mwh = rt_doc.value("shed_mwh", 0.0);
        for (const auto& [line, flows] : rt_doc.at("flows_mw").items()) {
            const auto f = flows.get<std::vector<double>>();
            if (f.size() != lw::net::kHorizon)
                throw lw::ValidationError({rt_path + ": flows for " + line + " not 24 hours"});
            std::copy(f.begin(), f.end(), vr.flow_mw[line].begin());
        }
        auto wit = weather.find(date);
        if (wit == weather.end()) throw lw::ValidationError({"no weather for day " + date});
        lw::evaluate::posthoc_day(nw, wit->second, vr, states);
        csv += lw::pipeline::day_result_row(date, variant, vr);
    }
    lw::io::atomic_write(cfg.out_dir + "/eval_" + variant + ".csv", csv);
    lw::io::save_states(states, cfg.out_dir + "/states/" + variant);
    std::printf("wrote %s/eval_%s.csv\n", cfg.out_dir.c_str(), variant.c_str());
    return 0;
}

int cmd_run(const Args& args) {
    const RunConfig cfg = effective_config(args);
    const auto nw = lw::io::load_network(cfg.network_path);
    const auto weather = lw::io::load_weather(cfg.weather_path, nw);
    const auto series = lw::io::load_series(cfg.series_path, nw);
    const auto days = pick_days(cfg, args, series);
    lw::scenario::ScenarioSet scen;
    const bool needs_scen =
        std::find(cfg.variants.begin(), cfg.variants.end(), "cha") != cfg.variants.end();
    if (needs_scen) {
        scen = make_scenarios(cfg);
        lw::io::save_scenarios(scen, cfg.out_dir + "/scenarios.json");
    }
    const auto out = lw::pipeline::run_days(nw, cfg, weather, series,
                                            needs_scen ? &scen : nullptr, days, cfg.variants);
    lw::io::atomic_write(cfg.out_dir + "/day_results.csv", out.day_results_csv);
    lw::io::atomic_write(cfg.out_dir + "/pair_samples.csv", out.pair_samples_csv);
    lw::io::atomic_write(cfg.out_dir + "/report.csv",
                         lw::evaluate::season_report_csv(lw::evaluate::season_report(out.days)));
    const auto risks = lw::pipeline::pair_risks_from_csv(nw, cfg.out_dir + "/pair_samples.csv");
    lw::io::atomic_write(cfg.out_dir + "/quadrants.csv", lw::pipeline::pair_risks_csv(risks));
    for (const auto& [variant, st] : out.states)
        lw::io::save_states(st, cfg.out_dir + "/states/" + variant);
    std::printf("wrote %s/{day_results,report,pair_samples,quadrants}.csv over %zu days\n",
                cfg.out_dir.c_str(), days.size());
    return 0;
}

int cmd_report(const Args& args) {
    const RunConfig cfg = effective_config(args);
    const auto days = lw::pipeline::load_day_results(cfg.out_dir + "/day_results.csv");
    lw::io::atomic_write(cfg.out_dir + "/report.csv",
                         lw::evaluate::season_report_csv(lw::evaluate::season_report(days)));
    const std::string samples = cfg.out_dir + "/pair_samples.csv";
    if (std::filesystem::exists(samples)) {
        const auto nw = lw::io::load_network(cfg.network_path);
        lw::io::atomic_write(cfg.out_dir + "/quadrants.csv",
                             lw::pipeline::pair_risks_csv(
                                 lw::pipeline::pair_risks_from_csv(nw, samples)));
    }
    std::printf("wrote %s/report.csv\n", cfg.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic line rating and conductor-health-aware unit commitment"};
    app.require_subcommand(1);
    Args args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "run configuration JSON")
            ->required()
            ->envname("LINEWEAR_CONFIG");
        sub->add_option("--seed", args.seed, "override the config RNG seed")
            ->envname("LINEWEAR_SEED")
            ->each([&](const std::string&) { args.seed_set = true; });
        sub->add_option("--variant", args.variants, "model variant (slr|dlr|cha), repeatable")
            ->envname("LINEWEAR_VARIANT");
        sub->add_option("--days", args.days, "comma-separated dates or 'all'")
            ->envname("LINEWEAR_DAYS");
        sub->add_option("--out", args.out, "output directory")->envname("LINEWEAR_OUT");
    };

    std::map<std::string, int (*)(const Args&)> handlers{
        {"rate", cmd_rate}, {"scen", cmd_scen}, {"uc", cmd_uc},   {"rt", cmd_rt},
        {"eval", cmd_eval}, {"run", cmd_run},   {"report", cmd_report}};
    for (const auto& [name, fn] : handlers) add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(sub)(args);
    } catch (const lw::InfeasibleModel& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 4;
    } catch (const lw::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const lw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
