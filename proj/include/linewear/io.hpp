#pragma once

// File formats and ingestion.  All loaders validate fully and report every
// problem found, not just the first.  See docs/formats.md for the schemas.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "linewear/aging.hpp"
#include "linewear/network.hpp"
#include "linewear/scenario.hpp"

namespace linewear::io {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError({"cannot open " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write via a temp file in the same directory, then rename into place.
inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError({"cannot write " + tmp.string()});
        out << content;
    }
    fs::rename(tmp, target);
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else if (c != '\r') cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                                      const std::string& expect_header) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        if (first) {
            first = false;
            std::string got = line;
            if (!got.empty() && got.back() == '\r') got.pop_back();
            if (got != expect_header)
                throw ValidationError({path + ": expected header '" + expect_header +
                                       "', got '" + got + "'"});
            continue;
        }
        rows.push_back(split_csv(line));
    }
    if (first) throw ValidationError({path + ": empty file"});
    return rows;
}

inline double num(const json& j, const std::string& key, std::vector<std::string>& bad,
                  const std::string& ctx, double fallback = 0.0, bool required = true) {
    if (!j.contains(key)) {
        if (required) bad.push_back(ctx + ": missing field '" + key + "'");
        return fallback;
    }
    if (!j[key].is_number()) {
        bad.push_back(ctx + ": field '" + key + "' must be a number");
        return fallback;
    }
    return j[key].get<double>();
}

inline std::string str(const json& j, const std::string& key, std::vector<std::string>& bad,
                       const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string()) {
        bad.push_back(ctx + ": missing string field '" + key + "'");
        return "";
    }
    return j[key].get<std::string>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Network JSON.

inline net::Network parse_network(const json& doc) {
    std::vector<std::string> bad;
    net::Network nw;
    using detail::num;
    using detail::str;
    if (doc.contains("base_mva")) nw.base_mva = doc["base_mva"].get<double>();

    if (doc.contains("conductors") && doc["conductors"].is_object()) {
        for (const auto& [name, c] : doc["conductors"].items()) {
            const std::string ctx = "conductor " + name;
            thermal::ConductorModel m;
            m.name = name;
            m.diameter_mm = num(c, "diameter_mm", bad, ctx);
            m.strand_diameter_mm = num(c, "strand_diameter_mm", bad, ctx);
            m.resistance_low = num(c, "resistance_ohm_per_m_low", bad, ctx);
            m.resistance_high = num(c, "resistance_ohm_per_m_high", bad, ctx);
            m.t_low = num(c, "resistance_ref_low_c", bad, ctx, 25.0, false);
            m.t_high = num(c, "resistance_ref_high_c", bad, ctx, 75.0, false);
            m.emissivity = num(c, "emissivity", bad, ctx);
            m.absorptivity = num(c, "absorptivity", bad, ctx);
            m.max_temp = num(c, "max_temp_c", bad, ctx, 95.0, false);
            m.nominal_kv = num(c, "nominal_kv", bad, ctx);
            nw.conductors[name] = m;
        }
    } else {
        bad.push_back("missing 'conductors' object");
    }
    if (doc.contains("buses") && doc["buses"].is_array()) {
        for (const auto& b : doc["buses"]) nw.buses.push_back({str(b, "id", bad, "bus")});
    } else {
        bad.push_back("missing 'buses' array");
    }
    if (doc.contains("lines") && doc["lines"].is_array()) {
        for (const auto& l : doc["lines"]) {
            net::Line ln;
            ln.id = str(l, "id", bad, "line");
            const std::string ctx = "line " + ln.id;
            ln.from = str(l, "from", bad, ctx);
            ln.to = str(l, "to", bad, ctx);
            ln.reactance_pu = num(l, "reactance_pu", bad, ctx);
            ln.slr_mw = num(l, "slr_mw", bad, ctx);
            ln.conductor = str(l, "conductor", bad, ctx);
            ln.angle_limit_rad = num(l, "angle_limit_rad", bad, ctx, 0.6, false);
            const std::string rating = l.contains("rating") ? l["rating"].get<std::string>() : "slr";
            if (rating != "slr" && rating != "dlr")
                bad.push_back(ctx + ": rating must be 'slr' or 'dlr'");
            ln.dlr = rating == "dlr";
            ln.econ.cost_per_mva_km = num(l, "cost_per_mva_km_usd", bad, ctx, 936.0, false);
            ln.econ.capacity_mva = num(l, "capacity_mva", bad, ctx, 0.0, ln.dlr);
            ln.econ.length_km = num(l, "length_km", bad, ctx, 0.0, ln.dlr);
            nw.lines.push_back(ln);
        }
    }
    if (doc.contains("generators") && doc["generators"].is_array()) {
        for (const auto& g : doc["generators"]) {
            net::Generator gen;
            gen.id = str(g, "id", bad, "generator");
            const std::string ctx = "generator " + gen.id;
            gen.bus = str(g, "bus", bad, ctx);
            gen.cost_quad = num(g, "cost_quad_usd_per_mw2h", bad, ctx);
            gen.cost_lin = num(g, "cost_lin_usd_per_mwh", bad, ctx);
            gen.cost_const = num(g, "cost_const_usd_per_h", bad, ctx, 0.0, false);
            gen.shutdown_cost = num(g, "shutdown_cost_usd", bad, ctx, 0.0, false);
            gen.g_min = num(g, "g_min_mw", bad, ctx);
            gen.g_max = num(g, "g_max_mw", bad, ctx);
            gen.startup_mw = num(g, "startup_mw", bad, ctx, gen.g_min, false);
            gen.shutdown_mw = num(g, "shutdown_mw", bad, ctx, gen.g_min, false);
            gen.ramp_up = num(g, "ramp_up_mw_per_h", bad, ctx);
            gen.ramp_down = num(g, "ramp_down_mw_per_h", bad, ctx);
            gen.res_up_cap = num(g, "res_up_cap_mw", bad, ctx, 0.0, false);
            gen.res_dn_cap = num(g, "res_dn_cap_mw", bad, ctx, 0.0, false);
            gen.min_up = static_cast<int>(num(g, "min_up_h", bad, ctx, 1.0, false));
            gen.min_down = static_cast<int>(num(g, "min_down_h", bad, ctx, 1.0, false));
            gen.init_on = g.contains("init_on") && g["init_on"].get<bool>();
            gen.init_hours = static_cast<int>(num(g, "init_hours", bad, ctx, 24.0, false));
            gen.init_g = num(g, "init_mw", bad, ctx, 0.0, false);
            if (g.contains("startup_segments") && g["startup_segments"].is_array()) {
                for (const auto& s : g["startup_segments"]) {
                    net::StartupSegment seg;
                    seg.off_hours = static_cast<int>(num(s, "off_hours", bad, ctx));
                    seg.cost = num(s, "cost_usd", bad, ctx);
                    gen.startup.push_back(seg);
                }
            } else {
                bad.push_back(ctx + ": missing 'startup_segments' array");
            }
            nw.gens.push_back(gen);
        }
    }
    if (doc.contains("wind_farms") && doc["wind_farms"].is_array())
        for (const auto& w : doc["wind_farms"])
            nw.wind.push_back({str(w, "id", bad, "wind farm"),
                               str(w, "bus", bad, "wind farm")});
    if (!bad.empty()) throw ValidationError(bad);

    // Structural invariants, collected the same way.
    std::vector<std::string> bad2;
    for (const auto& [name, c] : nw.conductors) {
        try { c.validate(); }
        catch (const ValidationError& e) {
            bad2.insert(bad2.end(), e.issues.begin(), e.issues.end());
        }
    }
    try { nw.validate(); }
    catch (const ValidationError& e) {
        bad2.insert(bad2.end(), e.issues.begin(), e.issues.end());
    }
    if (!bad2.empty()) throw ValidationError(bad2);
    return nw;
}

inline net::Network load_network(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    return parse_network(doc);
}

inline json network_to_json(const net::Network& nw) {
    json doc;
    doc["base_mva"] = nw.base_mva;
    for (const auto& [name, c] : nw.conductors)
        doc["conductors"][name] = {
            {"diameter_mm", c.diameter_mm},
            {"strand_diameter_mm", c.strand_diameter_mm},
            {"resistance_ohm_per_m_low", c.resistance_low},
            {"resistance_ohm_per_m_high", c.resistance_high},
            {"resistance_ref_low_c", c.t_low},
            {"resistance_ref_high_c", c.t_high},
            {"emissivity", c.emissivity},
            {"absorptivity", c.absorptivity},
            {"max_temp_c", c.max_temp},
            {"nominal_kv", c.nominal_kv}};
    doc["buses"] = json::array();
    for (const auto& b : nw.buses) doc["buses"].push_back({{"id", b.id}});
    doc["lines"] = json::array();
    for (const auto& l : nw.lines)
        doc["lines"].push_back({{"id", l.id}, {"from", l.from}, {"to", l.to},
                                {"reactance_pu", l.reactance_pu}, {"slr_mw", l.slr_mw},
                                {"rating", l.dlr ? "dlr" : "slr"}, {"conductor", l.conductor},
                                {"angle_limit_rad", l.angle_limit_rad},
                                {"cost_per_mva_km_usd", l.econ.cost_per_mva_km},
                                {"capacity_mva", l.econ.capacity_mva},
                                {"length_km", l.econ.length_km}});
    doc["generators"] = json::array();
    for (const auto& g : nw.gens) {
        json segs = json::array();
        for (const auto& s : g.startup) segs.push_back({{"off_hours", s.off_hours}, {"cost_usd", s.cost}});
        doc["generators"].push_back({{"id", g.id}, {"bus", g.bus},
                                     {"cost_quad_usd_per_mw2h", g.cost_quad},
                                     {"cost_lin_usd_per_mwh", g.cost_lin},
                                     {"cost_const_usd_per_h", g.cost_const},
                                     {"startup_segments", segs},
                                     {"shutdown_cost_usd", g.shutdown_cost},
                                     {"g_min_mw", g.g_min}, {"g_max_mw", g.g_max},
                                     {"startup_mw", g.startup_mw}, {"shutdown_mw", g.shutdown_mw},
                                     {"ramp_up_mw_per_h", g.ramp_up}, {"ramp_down_mw_per_h", g.ramp_down},
                                     {"res_up_cap_mw", g.res_up_cap}, {"res_dn_cap_mw", g.res_dn_cap},
                                     {"min_up_h", g.min_up}, {"min_down_h", g.min_down},
                                     {"init_on", g.init_on}, {"init_hours", g.init_hours},
                                     {"init_mw", g.init_g}});
    }
    doc["wind_farms"] = json::array();
    for (const auto& w : nw.wind) doc["wind_farms"].push_back({{"id", w.id}, {"bus", w.bus}});
    return doc;
}

inline void save_network(const net::Network& nw, const std::string& path) {
    atomic_write(path, network_to_json(nw).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Weather CSV: one row per (date, line, kind, hour).

using WeatherByDay = std::map<std::string, std::map<std::string, thermal::WeatherSeries>>;

inline WeatherByDay load_weather(const std::string& path, const net::Network& nw) {
    static const std::string header =
        "date,line_id,kind,hour,wind_speed_ms,wind_angle_deg,ambient_c,solar_wm2";
    const auto rows = detail::read_csv(path, header);
    std::vector<std::string> bad;
    std::set<std::string> known;
    for (const auto& l : nw.lines) known.insert(l.id);
    WeatherByDay out;
    std::set<std::string> seen;  // duplicate (date,line,kind,hour) guard
    for (size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r];
        const std::string where = path + " row " + std::to_string(r + 2);
        if (f.size() != 8) { bad.push_back(where + ": expected 8 columns"); continue; }
        const std::string& date = f[0];
        const std::string& line = f[1];
        const std::string& kind = f[2];
        if (known.find(line) == known.end()) { bad.push_back(where + ": unknown line " + line); continue; }
        if (kind != "forecast" && kind != "actual") {
            bad.push_back(where + ": kind must be forecast|actual");
            continue;
        }
        int hour = -1;
        thermal::WeatherSample s;
        try {
            hour = std::stoi(f[3]);
            s.wind_speed = std::stod(f[4]);
            s.wind_angle = std::stod(f[5]);
            s.ambient_temp = std::stod(f[6]);
            s.solar_flux = std::stod(f[7]);
        } catch (const std::exception&) {
            bad.push_back(where + ": non-numeric field");
            continue;
        }
        if (hour < 0 || hour >= net::kHorizon) { bad.push_back(where + ": hour outside 0..23"); continue; }
        try { s.validate(); }
        catch (const ValidationError& e) {
            for (const auto& i : e.issues) bad.push_back(where + ": " + i);
            continue;
        }
        const std::string key = date + "|" + line + "|" + kind + "|" + f[3];
        if (!seen.insert(key).second) { bad.push_back(where + ": duplicate hour"); continue; }
        auto& series = out[date][line];
        series.line_id = line;
        series.horizon = net::kHorizon;
        auto& vec = kind == "forecast" ? series.forecast : series.actual;
        if (vec.size() < net::kHorizon) vec.resize(net::kHorizon);
        vec[hour] = s;
    }
    for (const auto& [date, lines] : out)
        for (const auto& [line, series] : lines) {
            for (const std::string kind : {"forecast", "actual"}) {
                const auto& vec = kind == std::string("forecast") ? series.forecast : series.actual;
                int have = 0;
                for (int h = 0; h < net::kHorizon; ++h) {
                    const std::string key = date + "|" + line + "|" + kind + "|" + std::to_string(h);
                    if (seen.count(key)) ++have;
                }
                (void)vec;
                if (have != net::kHorizon)
                    bad.push_back(path + ": " + date + " " + line + " " + kind + " has " +
                                  std::to_string(have) + " of 24 hours");
            }
        }
    if (!bad.empty()) throw ValidationError(bad);
    return out;
}

// ---------------------------------------------------------------------------
// Load / wind series CSV: date,entity_id,kind,h0..h23.

inline std::string series_header() {
    std::string h = "date,entity_id,kind";
    for (int i = 0; i < net::kHorizon; ++i) h += ",h" + std::to_string(i);
    return h;
}

inline std::map<std::string, net::DayData> load_series(const std::string& path,
                                                       const net::Network& nw) {
    const auto rows = detail::read_csv(path, series_header());
    std::vector<std::string> bad;
    std::set<std::string> buses, farms;
    for (const auto& b : nw.buses) buses.insert(b.id);
    for (const auto& w : nw.wind) farms.insert(w.id);
    std::map<std::string, net::DayData> out;
    for (size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r];
        const std::string where = path + " row " + std::to_string(r + 2);
        if (f.size() != 3 + net::kHorizon) { bad.push_back(where + ": expected 27 columns"); continue; }
        const std::string& date = f[0];
        const std::string& ent = f[1];
        const std::string& kind = f[2];
        std::vector<double> vals;
        try {
            for (int h = 0; h < net::kHorizon; ++h) vals.push_back(std::stod(f[3 + h]));
        } catch (const std::exception&) {
            bad.push_back(where + ": non-numeric value");
            continue;
        }
        auto& day = out[date];
        day.date = date;
        if (kind == "load") {
            if (!buses.count(ent)) { bad.push_back(where + ": unknown bus " + ent); continue; }
            if (!day.load.emplace(ent, vals).second) bad.push_back(where + ": duplicate load row");
        } else if (kind == "wind_fc" || kind == "wind_act") {
            if (!farms.count(ent)) { bad.push_back(where + ": unknown wind farm " + ent); continue; }
            auto& m = kind == "wind_fc" ? day.wind_fc : day.wind_act;
            if (!m.emplace(ent, vals).second) bad.push_back(where + ": duplicate wind row");
        } else {
            bad.push_back(where + ": kind must be load|wind_fc|wind_act");
        }
    }
    for (const auto& [date, day] : out) {
        for (const auto& b : nw.buses)
            if (!day.load.count(b.id)) bad.push_back(path + ": " + date + " missing load for " + b.id);
        for (const auto& w : nw.wind) {
            if (!day.wind_fc.count(w.id)) bad.push_back(path + ": " + date + " missing wind_fc for " + w.id);
            if (!day.wind_act.count(w.id)) bad.push_back(path + ": " + date + " missing wind_act for " + w.id);
        }
    }
    if (!bad.empty()) throw ValidationError(bad);
    return out;
}

// ---------------------------------------------------------------------------
// Forecast-error history CSV: date,asset_id,asset_type,h0..h23.

inline std::string history_header() {
    std::string h = "date,asset_id,asset_type";
    for (int i = 0; i < net::kHorizon; ++i) h += ",h" + std::to_string(i);
    return h;
}

inline scenario::HistorySet load_history(const std::string& path) {
    const auto rows = detail::read_csv(path, history_header());
    std::vector<std::string> bad;
    scenario::HistorySet hs;
    std::map<std::string, size_t> asset_index;
    std::map<std::string, size_t> day_index;
    for (size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r];
        const std::string where = path + " row " + std::to_string(r + 2);
        if (f.size() != 3 + net::kHorizon) { bad.push_back(where + ": expected 27 columns"); continue; }
        const std::string& date = f[0];
        const std::string& asset = f[1];
        const std::string& type = f[2];
        if (type != "wind" && type != "dlr") { bad.push_back(where + ": asset_type must be wind|dlr"); continue; }
        auto ai = asset_index.find(asset);
        if (ai == asset_index.end()) {
            ai = asset_index.emplace(asset, hs.assets.size()).first;
            hs.assets.push_back({asset, type == "wind" ? scenario::AssetType::Wind
                                                       : scenario::AssetType::Dlr});
        } else if ((hs.assets[ai->second].type == scenario::AssetType::Wind) != (type == "wind")) {
            bad.push_back(where + ": asset " + asset + " changes type");
            continue;
        }
        auto di = day_index.find(date);
        if (di == day_index.end()) {
            di = day_index.emplace(date, hs.days.size()).first;
            hs.days.push_back({date, {}});
        }
        std::vector<double> vals;
        try {
            for (int h = 0; h < net::kHorizon; ++h) vals.push_back(std::stod(f[3 + h]));
        } catch (const std::exception&) {
            bad.push_back(where + ": non-numeric error value");
            continue;
        }
        auto& day = hs.days[di->second];
        if (day.errors.size() < hs.assets.size()) day.errors.resize(hs.assets.size());
        if (!day.errors[ai->second].empty()) { bad.push_back(where + ": duplicate (date, asset) row"); continue; }
        day.errors[ai->second] = vals;
    }
    for (auto& d : hs.days) {
        d.errors.resize(hs.assets.size());
        for (size_t a = 0; a < hs.assets.size(); ++a)
            if (d.errors[a].empty())
                bad.push_back(path + ": " + d.date + " missing asset " + hs.assets[a].id);
    }
    if (!bad.empty()) throw ValidationError(bad);
    std::sort(hs.days.begin(), hs.days.end(),
              [](const auto& a, const auto& b) { return a.date < b.date; });
    return hs;
}

// ---------------------------------------------------------------------------
// ScenarioSet JSON.

inline json scenarios_to_json(const scenario::ScenarioSet& set) {
    json doc;
    doc["assets"] = json::array();
    for (const auto& a : set.assets)
        doc["assets"].push_back({{"id", a.id},
                                 {"type", a.type == scenario::AssetType::Wind ? "wind" : "dlr"}});
    doc["scenarios"] = json::array();
    for (const auto& s : set.scenarios)
        doc["scenarios"].push_back({{"date", s.date}, {"errors", s.errors}});
    doc["probabilities"] = set.probabilities;
    return doc;
}

inline void save_scenarios(const scenario::ScenarioSet& set, const std::string& path) {
    atomic_write(path, scenarios_to_json(set).dump(2) + "\n");
}

inline scenario::ScenarioSet load_scenarios(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    scenario::ScenarioSet set;
    std::vector<std::string> bad;
    try {
        for (const auto& a : doc.at("assets"))
            set.assets.push_back({a.at("id").get<std::string>(),
                                  a.at("type").get<std::string>() == "wind"
                                      ? scenario::AssetType::Wind : scenario::AssetType::Dlr});
        for (const auto& s : doc.at("scenarios")) {
            scenario::ErrorTrajectory t;
            t.date = s.at("date").get<std::string>();
            t.errors = s.at("errors").get<std::vector<std::vector<double>>>();
            set.scenarios.push_back(t);
        }
        set.probabilities = doc.at("probabilities").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    if (set.probabilities.size() != set.scenarios.size())
        bad.push_back(path + ": probabilities/scenarios length mismatch");
    double total = 0.0;
    for (double p : set.probabilities) {
        if (p < 0) bad.push_back(path + ": negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) bad.push_back(path + ": probabilities do not sum to 1");
    for (const auto& s : set.scenarios) {
        if (s.errors.size() != set.assets.size())
            bad.push_back(path + ": scenario " + s.date + " asset count mismatch");
        else
            for (const auto& row : s.errors)
                if (row.size() != net::kHorizon)
                    bad.push_back(path + ": scenario " + s.date + " needs 24 hourly errors");
    }
    if (!bad.empty()) throw ValidationError(bad);
    return set;
}

// ---------------------------------------------------------------------------
// Per-line health state JSON.

inline void save_state(const aging::LineHealthState& st, const std::string& path) {
    json doc;
    doc["line_id"] = st.line_id;
    doc["accumulated_lots_pct"] = st.accumulated_lots;
    doc["exposures"] = json::array();
    for (const auto& e : st.exposures)
        doc["exposures"].push_back({{"temp_c", e.temp_c}, {"hours", e.hours}});
    atomic_write(path, doc.dump(2) + "\n");
}

inline aging::LineHealthState load_state(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    aging::LineHealthState st;
    try {
        st.line_id = doc.at("line_id").get<std::string>();
        st.accumulated_lots = doc.at("accumulated_lots_pct").get<double>();
        for (const auto& e : doc.at("exposures"))
            st.exposures.push_back({e.at("temp_c").get<double>(), e.at("hours").get<double>()});
    } catch (const json::exception& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    return st;
}

// States live one file per line under a directory; missing files mean a fresh
// conductor.
inline std::map<std::string, aging::LineHealthState> load_states(const std::string& dir,
                                                                 const net::Network& nw) {
    std::map<std::string, aging::LineHealthState> out;
    for (const auto& l : nw.lines) {
        if (!l.dlr) continue;
        const std::string path = dir + "/" + l.id + ".json";
        if (std::filesystem::exists(path)) {
            out[l.id] = load_state(path);
            if (out[l.id].line_id != l.id)
                throw ValidationError({path + ": line_id mismatch"});
        } else {
            out[l.id] = {l.id, {}, 0.0};
        }
    }
    return out;
}

inline void save_states(const std::map<std::string, aging::LineHealthState>& states,
                        const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [id, st] : states) save_state(st, dir + "/" + id + ".json");
}

// ---------------------------------------------------------------------------
// Run configuration.

struct RunConfig {
    std::string mode = "custom";  // case-study-1 | case-study-2 | custom
    size_t n_seed = 4;
    size_t n_total = 20;
    double k_factor = 0.8;
    double voll = 3500.0;
    double reserve_req_mw = 0.0;
    double res_up_price_mult = 3.0;
    double res_dn_price_mult = 0.5;
    double mip_gap = 1e-3;
    double time_limit_s = 600.0;
    bool solar_worst_case = false;
    uint64_t seed = 0;
    std::vector<std::string> variants{"slr", "dlr", "cha"};
    std::vector<std::string> days;  // empty: every date in the series file
    std::string network_path, weather_path, series_path, history_path;
    std::string states_dir, out_dir = "out";
};

inline RunConfig load_config(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    RunConfig c;
    std::vector<std::string> bad;
    auto base = std::filesystem::path(path).parent_path();
    auto rel = [&](const std::string& p) {
        if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
        return (base / p).string();
    };
    try {
        if (doc.contains("mode")) c.mode = doc["mode"].get<std::string>();
        if (doc.contains("n_seed")) c.n_seed = doc["n_seed"].get<size_t>();
        if (doc.contains("n_total")) c.n_total = doc["n_total"].get<size_t>();
        if (doc.contains("k_factor")) c.k_factor = doc["k_factor"].get<double>();
        if (doc.contains("voll_usd_per_mwh")) c.voll = doc["voll_usd_per_mwh"].get<double>();
        if (doc.contains("reserve_req_mw")) c.reserve_req_mw = doc["reserve_req_mw"].get<double>();
        if (doc.contains("res_up_price_mult")) c.res_up_price_mult = doc["res_up_price_mult"].get<double>();
        if (doc.contains("res_dn_price_mult")) c.res_dn_price_mult = doc["res_dn_price_mult"].get<double>();
        if (doc.contains("mip_gap")) c.mip_gap = doc["mip_gap"].get<double>();
        if (doc.contains("time_limit_s")) c.time_limit_s = doc["time_limit_s"].get<double>();
        if (doc.contains("solar_worst_case")) c.solar_worst_case = doc["solar_worst_case"].get<bool>();
        if (doc.contains("seed")) c.seed = doc["seed"].get<uint64_t>();
        if (doc.contains("variants")) c.variants = doc["variants"].get<std::vector<std::string>>();
        if (doc.contains("days")) c.days = doc["days"].get<std::vector<std::string>>();
        c.network_path = rel(doc.at("network").get<std::string>());
        c.weather_path = rel(doc.at("weather").get<std::string>());
        c.series_path = rel(doc.at("series").get<std::string>());
        if (doc.contains("history")) c.history_path = rel(doc["history"].get<std::string>());
        if (doc.contains("states_dir")) c.states_dir = rel(doc["states_dir"].get<std::string>());
        if (doc.contains("out_dir")) c.out_dir = rel(doc["out_dir"].get<std::string>());
    } catch (const json::exception& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    if (c.mode != "case-study-1" && c.mode != "case-study-2" && c.mode != "custom")
        bad.push_back(path + ": mode must be case-study-1|case-study-2|custom");
    for (const auto& v : c.variants)
        if (v != "slr" && v != "dlr" && v != "cha")
            bad.push_back(path + ": unknown variant " + v);
    for (const std::string* p : {&c.network_path, &c.weather_path, &c.series_path})
        if (!std::filesystem::exists(*p)) bad.push_back("missing input file " + *p);
    if (!c.history_path.empty() && !std::filesystem::exists(c.history_path))
        bad.push_back("missing input file " + c.history_path);
    if (!bad.empty()) throw ValidationError(bad);
    return c;
}

// ---------------------------------------------------------------------------
// Wind utilities.

struct TurbineParams {
    double cut_in_ms = 3.0;
    double rated_ms = 12.0;
    double cut_out_ms = 25.0;
    double rated_mw = 0.0;
};

// Standard power curve: zero outside [cut_in, cut_out], rated above rated
// speed, cubic interpolation between cut-in and rated.
inline double wind_power_from_speed(double speed_ms, const TurbineParams& p) {
    if (speed_ms < p.cut_in_ms || speed_ms > p.cut_out_ms) return 0.0;
    if (speed_ms >= p.rated_ms) return p.rated_mw;
    const double c3 = speed_ms * speed_ms * speed_ms;
    const double ci3 = p.cut_in_ms * p.cut_in_ms * p.cut_in_ms;
    const double r3 = p.rated_ms * p.rated_ms * p.rated_ms;
    return p.rated_mw * (c3 - ci3) / (r3 - ci3);
}

// Log-law vertical extrapolation of wind speed.
inline double hub_height_wind(double speed_ref_ms, double h_ref_m, double h_hub_m,
                              double roughness_m) {
    return speed_ref_ms * std::log(h_hub_m / roughness_m) / std::log(h_ref_m / roughness_m);
}

}  // namespace linewear::io
