#pragma once

// Forecast-error scenario construction: seed historical extremes, grow the set
// by greedy max-min distance, then weight each pick by the share of history
// mapped to it by nearest-neighbor assignment.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "linewear/common.hpp"

namespace linewear::scenario {

enum class AssetType { Wind, Dlr };

struct AssetId {
    std::string id;
    AssetType type = AssetType::Wind;
};

// One historical day: 24 hourly forecast errors per asset [MW].
struct ErrorTrajectory {
    std::string date;
    std::vector<std::vector<double>> errors;  // [asset][hour], aligned with HistorySet::assets
};

struct HistorySet {
    std::vector<AssetId> assets;
    std::vector<ErrorTrajectory> days;

    void validate() const {
        for (const auto& d : days) {
            if (d.errors.size() != assets.size())
                throw ValidationError({"trajectory " + d.date + ": asset count mismatch"});
            for (const auto& row : d.errors)
                if (row.size() != 24)
                    throw ValidationError({"trajectory " + d.date + ": expected 24 hourly errors"});
        }
    }
};

struct ScenarioSet {
    std::vector<AssetId> assets;
    std::vector<ErrorTrajectory> scenarios;
    std::vector<double> probabilities;
};

namespace detail {

// Per-asset z-scored flattening; a constant asset is left at zero.
inline std::vector<std::vector<double>> standardize(const HistorySet& h) {
    const size_t na = h.assets.size();
    std::vector<double> mean(na, 0.0), var(na, 0.0);
    const double n = static_cast<double>(h.days.size()) * 24.0;
    for (const auto& d : h.days)
        for (size_t a = 0; a < na; ++a)
            for (double v : d.errors[a]) mean[a] += v;
    for (auto& m : mean) m /= n;
    for (const auto& d : h.days)
        for (size_t a = 0; a < na; ++a)
            for (double v : d.errors[a]) var[a] += (v - mean[a]) * (v - mean[a]);
    std::vector<double> sd(na);
    for (size_t a = 0; a < na; ++a) sd[a] = var[a] / n > 1e-24 ? std::sqrt(var[a] / n) : 1.0;

    std::vector<std::vector<double>> out(h.days.size());
    for (size_t i = 0; i < h.days.size(); ++i) {
        out[i].reserve(na * 24);
        for (size_t a = 0; a < na; ++a)
            for (double v : h.days[i].errors[a]) out[i].push_back((v - mean[a]) / sd[a]);
    }
    return out;
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

// Date-ascending tie rule used everywhere a choice between days is made.
inline bool date_before(const HistorySet& h, size_t i, size_t j) {
    return h.days[i].date < h.days[j].date;
}

}  // namespace detail

// Indices of the n_seed/2 days with largest and n_seed/2 with smallest total
// signed error.  Ties broken by date ascending.
inline std::vector<size_t> seed_extremes(const HistorySet& history, size_t n_seed) {
    if (n_seed % 2 != 0 || n_seed > history.days.size())
        throw ValidationError({"n_seed must be even and <= |history|"});
    std::vector<double> total(history.days.size(), 0.0);
    for (size_t i = 0; i < history.days.size(); ++i)
        for (const auto& row : history.days[i].errors)
            total[i] = std::accumulate(row.begin(), row.end(), total[i]);

    std::vector<size_t> order(history.days.size());
    std::iota(order.begin(), order.end(), 0);
    auto by_total = [&](bool descending) {
        auto ord = order;
        std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) {
            if (total[a] != total[b]) return descending ? total[a] > total[b] : total[a] < total[b];
            return detail::date_before(history, a, b);
        });
        return ord;
    };
    const auto hi = by_total(true);
    const auto lo = by_total(false);
    std::vector<size_t> picked;
    for (size_t k = 0; k < n_seed / 2; ++k) picked.push_back(hi[k]);
    for (size_t k = 0; k < n_seed / 2 && picked.size() < n_seed; ++k)
        if (std::find(picked.begin(), picked.end(), lo[k]) == picked.end()) picked.push_back(lo[k]);
    // Overlap between the two tails (tiny histories): fill by date.
    for (size_t i = 0; picked.size() < n_seed && i < order.size(); ++i)
        if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    return picked;
}

// Grow `seeded` to n_total by repeatedly adding the day with the largest
// minimum standardized Euclidean distance to the current selection.
inline std::vector<size_t> greedy_maxmin(const HistorySet& history,
                                         std::vector<size_t> selected, size_t n_total) {
    if (selected.size() > n_total || n_total > history.days.size())
        throw ValidationError({"need |seeded| <= n_total <= |history|"});
    const auto z = detail::standardize(history);
    std::vector<double> min_d2(history.days.size(), std::numeric_limits<double>::infinity());
    std::vector<char> in_set(history.days.size(), 0);
    for (size_t s : selected) in_set[s] = 1;
    for (size_t i = 0; i < history.days.size(); ++i)
        for (size_t s : selected) min_d2[i] = std::min(min_d2[i], detail::sq_dist(z[i], z[s]));

    while (selected.size() < n_total) {
        size_t best = history.days.size();
        for (size_t i = 0; i < history.days.size(); ++i) {
            if (in_set[i]) continue;
            if (best == history.days.size() || min_d2[i] > min_d2[best] ||
                (min_d2[i] == min_d2[best] && detail::date_before(history, i, best)))
                best = i;
        }
        in_set[best] = 1;
        selected.push_back(best);
        for (size_t i = 0; i < history.days.size(); ++i)
            min_d2[i] = std::min(min_d2[i], detail::sq_dist(z[i], z[best]));
    }
    return selected;
}

// Nearest-neighbor probability weighting over the selected days.
inline ScenarioSet assign_probabilities(const HistorySet& history,
                                        const std::vector<size_t>& selected) {
    if (selected.empty()) throw ValidationError({"selected scenario set is empty"});
    const auto z = detail::standardize(history);
    std::vector<size_t> count(selected.size(), 0);
    for (size_t i = 0; i < history.days.size(); ++i) {
        size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < selected.size(); ++k) {
            const double d2 = detail::sq_dist(z[i], z[selected[k]]);
            if (d2 < best_d2 ||
                (d2 == best_d2 && detail::date_before(history, selected[k], selected[best])))
                { best = k; best_d2 = d2; }
        }
        ++count[best];
    }
    ScenarioSet out;
    out.assets = history.assets;
    for (size_t k = 0; k < selected.size(); ++k) {
        out.scenarios.push_back(history.days[selected[k]]);
        out.probabilities.push_back(static_cast<double>(count[k]) /
                                    static_cast<double>(history.days.size()));
    }
    return out;
}

inline ScenarioSet reduce(const HistorySet& history, size_t n_seed, size_t n_total) {
    history.validate();
    n_seed = std::min(n_seed, n_total);
    return assign_probabilities(history, greedy_maxmin(history, seed_extremes(history, n_seed), n_total));
}

// Weighted Spearman rank correlation.  Ranks are weighted mid-ranks; tied
// values share a rank.
inline double weighted_spearman(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& w) {
    const size_t n = x.size();
    auto ranks = [&](const std::vector<double>& v) {
        std::vector<size_t> ord(n);
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        double cum = 0.0;
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            double wsum = 0.0;
            while (j < n && v[ord[j]] == v[ord[i]]) wsum += w[ord[j++]];
            const double rank = cum + wsum / 2.0;
            for (size_t k = i; k < j; ++k) r[ord[k]] = rank;
            cum += wsum;
            i = j;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += w[i] * rx[i]; my += w[i] * ry[i]; }
    mx /= wsum; my /= wsum;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += w[i] * (rx[i] - mx) * (ry[i] - my);
        sxx += w[i] * (rx[i] - mx) * (rx[i] - mx);
        syy += w[i] * (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

struct PairCorrelation {
    std::string wind_id;
    std::string dlr_id;
    double history_spearman = 0.0;
    double scenario_spearman = 0.0;
};

struct HistogramBin {
    std::string asset_type;
    double lo = 0, hi = 0;
    double history_freq = 0, scenario_freq = 0;
};

struct CorrelationReport {
    std::vector<PairCorrelation> pairs;
    double mean_history_spearman = 0.0;
    double mean_scenario_spearman = 0.0;
    std::vector<HistogramBin> marginal_bins;
};

// Spearman correlation per (wind, dlr) asset pair, pooled over (day, hour)
// samples: history unweighted against probability-weighted scenarios, plus a
// marginal histogram comparison per asset type.
inline CorrelationReport correlation_report(const ScenarioSet& set, const HistorySet& history,
                                            int n_bins = 20) {
    CorrelationReport rep;
    auto pooled = [](const std::vector<ErrorTrajectory>& days, size_t a,
                     const std::vector<double>* prob, std::vector<double>& v,
                     std::vector<double>& w) {
        for (size_t i = 0; i < days.size(); ++i)
            for (int h = 0; h < 24; ++h) {
                v.push_back(days[i].errors[a][h]);
                w.push_back(prob ? (*prob)[i] : 1.0);
            }
    };
    for (size_t aw = 0; aw < history.assets.size(); ++aw) {
        if (history.assets[aw].type != AssetType::Wind) continue;
        for (size_t ad = 0; ad < history.assets.size(); ++ad) {
            if (history.assets[ad].type != AssetType::Dlr) continue;
            PairCorrelation pc;
            pc.wind_id = history.assets[aw].id;
            pc.dlr_id = history.assets[ad].id;
            {
                std::vector<double> x, y, w;
                pooled(history.days, aw, nullptr, x, w);
                w.clear();
                pooled(history.days, ad, nullptr, y, w);
                pc.history_spearman = weighted_spearman(x, y, w);
            }
            {
                std::vector<double> x, y, w;
                pooled(set.scenarios, aw, &set.probabilities, x, w);
                w.clear();
                pooled(set.scenarios, ad, &set.probabilities, y, w);
                pc.scenario_spearman = weighted_spearman(x, y, w);
            }
            rep.pairs.push_back(pc);
        }
    }
    for (const auto& pc : rep.pairs) {
        rep.mean_history_spearman += pc.history_spearman / rep.pairs.size();
        rep.mean_scenario_spearman += pc.scenario_spearman / rep.pairs.size();
    }

    for (int type = 0; type < 2; ++type) {
        const auto at = type == 0 ? AssetType::Wind : AssetType::Dlr;
        double lo = 1e300, hi = -1e300;
        for (size_t a = 0; a < history.assets.size(); ++a) {
            if (history.assets[a].type != at) continue;
            for (const auto& d : history.days)
                for (double v : d.errors[a]) { lo = std::min(lo, v); hi = std::max(hi, v); }
        }
        if (lo > hi) continue;
        if (hi == lo) hi = lo + 1.0;
        std::vector<HistogramBin> bins(n_bins);
        for (int b = 0; b < n_bins; ++b) {
            bins[b].asset_type = at == AssetType::Wind ? "wind" : "dlr";
            bins[b].lo = lo + (hi - lo) * b / n_bins;
            bins[b].hi = lo + (hi - lo) * (b + 1) / n_bins;
        }
        auto fill = [&](const std::vector<ErrorTrajectory>& days, const std::vector<double>* prob,
                        bool hist_side) {
            double wtot = 0.0;
            for (size_t i = 0; i < days.size(); ++i)
                for (size_t a = 0; a < history.assets.size(); ++a) {
                    if (history.assets[a].type != at) continue;
                    for (double v : days[i].errors[a]) {
                        const double w = prob ? (*prob)[i] : 1.0;
                        int b = static_cast<int>((v - lo) / (hi - lo) * n_bins);
                        b = std::clamp(b, 0, n_bins - 1);
                        (hist_side ? bins[b].history_freq : bins[b].scenario_freq) += w;
                        wtot += w;
                    }
                }
            if (wtot > 0)
                for (auto& b : bins) (hist_side ? b.history_freq : b.scenario_freq) /= wtot;
        };
        fill(history.days, nullptr, true);
        fill(set.scenarios, &set.probabilities, false);
        rep.marginal_bins.insert(rep.marginal_bins.end(), bins.begin(), bins.end());
    }
    return rep;
}

// Independently permute one asset's error rows across scenarios, breaking its
// correlation with the other assets while keeping the marginal (weights stay
// attached to the scenario, not the row).
inline ScenarioSet scramble_asset(const ScenarioSet& set, const std::string& asset_id,
                                  uint64_t seed) {
    ScenarioSet out = set;
    size_t idx = set.assets.size();
    for (size_t a = 0; a < set.assets.size(); ++a)
        if (set.assets[a].id == asset_id) idx = a;
    if (idx == set.assets.size())
        throw ValidationError({"scramble_asset: unknown asset " + asset_id});
    std::vector<size_t> perm(set.scenarios.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (size_t s = 0; s < perm.size(); ++s)
        out.scenarios[s].errors[idx] = set.scenarios[perm[s]].errors[idx];
    return out;
}

}  // namespace linewear::scenario
