#pragma once

// Solver-agnostic algebraic model description and the HiGHS adapter.  Models
// are plain data: variables with bounds, linear rows, a linear + diagonal
// quadratic objective, and SOS2 groups.  SOS2 is lowered to a logarithmic
// binary encoding (HiGHS has no native SOS support) or dropped when the caller
// knows the piecewise term is convex and minimized.

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "Highs.h"

#include "linewear/common.hpp"

namespace linewear::solve {

struct Var {
    double lb = 0.0;
    double ub = 0.0;
    bool integer = false;
    std::string name;
};

struct Row {
    std::vector<std::pair<int, double>> terms;
    double lb = 0.0;
    double ub = 0.0;
    std::string name;
};

struct Model {
    std::vector<Var> vars;
    std::vector<double> obj_lin;
    std::vector<double> obj_quad;  // coefficient c in c*x^2
    double obj_offset = 0.0;
    std::vector<Row> rows;
    std::vector<std::vector<int>> sos2;  // ordered interpolation-weight groups

    int add_var(double lb, double ub, bool integer, std::string name) {
        vars.push_back({lb, ub, integer, std::move(name)});
        obj_lin.push_back(0.0);
        obj_quad.push_back(0.0);
        return static_cast<int>(vars.size()) - 1;
    }
    int add_binary(std::string name) { return add_var(0.0, 1.0, true, std::move(name)); }
    int add_row(std::vector<std::pair<int, double>> terms, double lb, double ub,
                std::string name) {
        rows.push_back({std::move(terms), lb, ub, std::move(name)});
        return static_cast<int>(rows.size()) - 1;
    }
    bool is_mip() const {
        for (const auto& v : vars) if (v.integer) return true;
        return false;
    }
    bool is_qp() const {
        for (double q : obj_quad) if (q != 0.0) return true;
        return false;
    }
};

enum class Sos2Mode {
    LogBinary,    // lower each group to ceil(log2 K) binaries (Gray-code scheme)
    ConvexRelax,  // drop the groups; valid for convex costs under minimization
};

enum class Status { Optimal, GapReached, TimeLimit, Infeasible, Unbounded, Failed };

struct Options {
    double mip_gap = 1e-3;
    double time_limit_s = 600.0;
    Sos2Mode sos2_mode = Sos2Mode::LogBinary;
    bool log_to_console = false;
    std::string log_file;
};

struct Solution {
    Status status = Status::Failed;
    double objective = 0.0;
    std::vector<double> x;
    double gap = 0.0;
    double wall_s = 0.0;
};

namespace detail {

inline unsigned gray_code(unsigned k) { return k ^ (k >> 1); }

// Vielma-Nemhauser logarithmic SOS2 encoding.  Segments 1..K are labeled with
// Gray codes; weight i may be nonzero only if the chosen segment is incident
// to breakpoint i.
inline void encode_sos2_log(Model& m, const std::vector<int>& group, size_t group_no) {
    const int n = static_cast<int>(group.size());
    if (n <= 2) return;  // one segment, always "adjacent"
    const int segs = n - 1;
    int nbits = 0;
    while ((1 << nbits) < segs) ++nbits;
    std::vector<int> bits(nbits);
    const std::string tag = "sos2_" + std::to_string(group_no);
    for (int j = 0; j < nbits; ++j) bits[j] = m.add_binary(tag + "_y" + std::to_string(j));
    for (int j = 0; j < nbits; ++j) {
        std::vector<std::pair<int, double>> up{{bits[j], -1.0}};
        std::vector<std::pair<int, double>> dn{{bits[j], 1.0}};
        for (int i = 0; i < n; ++i) {
            // segments incident to breakpoint i (1-based segment s covers [s-1, s])
            bool all_set = true, all_clear = true;
            for (int s : {i, i + 1}) {
                if (s < 1 || s > segs) continue;
                const unsigned g = gray_code(static_cast<unsigned>(s - 1));
                if (g & (1u << j)) all_clear = false; else all_set = false;
            }
            if (all_set) up.emplace_back(group[i], 1.0);
            if (all_clear) dn.emplace_back(group[i], 1.0);
        }
        if (up.size() > 1) m.add_row(up, -1e30, 0.0, tag + "_u" + std::to_string(j));
        if (dn.size() > 1) m.add_row(dn, -1e30, 1.0, tag + "_d" + std::to_string(j));
    }
}

inline Model lowered(const Model& in, Sos2Mode mode) {
    Model m = in;
    if (mode == Sos2Mode::LogBinary)
        for (size_t g = 0; g < in.sos2.size(); ++g) encode_sos2_log(m, in.sos2[g], g);
    m.sos2.clear();
    return m;
}

inline void to_highs(const Model& m, Highs& h, const Options& opt) {
    HighsModel hm;
    HighsLp& lp = hm.lp_;
    lp.num_col_ = static_cast<HighsInt>(m.vars.size());
    lp.num_row_ = static_cast<HighsInt>(m.rows.size());
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = m.obj_offset;
    lp.col_cost_ = m.obj_lin;
    bool any_int = false;
    for (const auto& v : m.vars) {
        lp.col_lower_.push_back(v.lb);
        lp.col_upper_.push_back(v.ub);
        any_int |= v.integer;
    }
    if (any_int) {
        for (const auto& v : m.vars)
            lp.integrality_.push_back(v.integer ? HighsVarType::kInteger : HighsVarType::kContinuous);
    }
    lp.a_matrix_.format_ = MatrixFormat::kRowwise;
    lp.a_matrix_.start_.assign(1, 0);
    for (const auto& r : m.rows) {
        lp.row_lower_.push_back(r.lb);
        lp.row_upper_.push_back(r.ub);
        for (const auto& [col, coef] : r.terms) {
            lp.a_matrix_.index_.push_back(col);
            lp.a_matrix_.value_.push_back(coef);
        }
        lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    }
    if (m.is_qp()) {
        if (any_int) throw SolverError("MIQP is not supported by the HiGHS backend");
        HighsHessian& q = hm.hessian_;
        q.dim_ = lp.num_col_;
        q.format_ = HessianFormat::kTriangular;
        q.start_.assign(1, 0);
        for (int c = 0; c < lp.num_col_; ++c) {
            if (m.obj_quad[c] != 0.0) {
                q.index_.push_back(c);
                q.value_.push_back(2.0 * m.obj_quad[c]);  // HiGHS minimizes c'x + x'Qx/2
            }
            q.start_.push_back(static_cast<HighsInt>(q.index_.size()));
        }
    }
    h.setOptionValue("output_flag", opt.log_to_console);
    if (!opt.log_file.empty()) h.setOptionValue("log_file", opt.log_file);
    h.setOptionValue("threads", 1);
    h.setOptionValue("mip_rel_gap", opt.mip_gap);
    h.setOptionValue("time_limit", opt.time_limit_s);
    h.setOptionValue("random_seed", 0);
    if (h.passModel(hm) != HighsStatus::kOk)
        throw SolverError("HiGHS rejected the model");
}

}  // namespace detail

// Solve a MILP / LP / convex QP.  SOS2 groups are lowered per options.
inline Solution solve_milp(const Model& model, const Options& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Model m = detail::lowered(model, opt.sos2_mode);
    Highs h;
    detail::to_highs(m, h, opt);
    const HighsStatus rc = h.run();
    Solution sol;
    sol.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rc == HighsStatus::kError) throw SolverError("HiGHS run() failed");
    const HighsModelStatus st = h.getModelStatus();
    switch (st) {
        case HighsModelStatus::kOptimal: sol.status = Status::Optimal; break;
        case HighsModelStatus::kInfeasible: sol.status = Status::Infeasible; break;
        case HighsModelStatus::kUnbounded:
        case HighsModelStatus::kUnboundedOrInfeasible: sol.status = Status::Unbounded; break;
        case HighsModelStatus::kTimeLimit: sol.status = Status::TimeLimit; break;
        default: sol.status = Status::Failed; break;
    }
    if (sol.status == Status::Optimal || sol.status == Status::TimeLimit) {
        const HighsSolution& hs = h.getSolution();
        if (hs.value_valid) {
            sol.x.assign(hs.col_value.begin(),
                         hs.col_value.begin() + static_cast<long>(model.vars.size()));
            sol.objective = h.getInfo().objective_function_value;
            if (m.is_mip()) {
                sol.gap = h.getInfo().mip_gap;
                if (sol.status == Status::Optimal && sol.gap > 1e-9) sol.status = Status::GapReached;
            }
        } else if (sol.status == Status::TimeLimit) {
            throw SolverError("time limit reached with no feasible solution");
        }
    }
    return sol;
}

// Export the (lowered) model as LP-format text for debugging.
inline void write_lp(const Model& model, const std::string& path,
                     Sos2Mode mode = Sos2Mode::LogBinary) {
    const Model m = detail::lowered(model, mode);
    Highs h;
    Options opt;
    detail::to_highs(m, h, opt);
    if (h.writeModel(path) == HighsStatus::kError)
        throw SolverError("failed to write LP file " + path);
}

}  // namespace linewear::solve
