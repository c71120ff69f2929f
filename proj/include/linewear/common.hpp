#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace linewear {

// Base class for all structured errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data failed schema or invariant validation.
struct ValidationError : Error {
    explicit ValidationError(const std::vector<std::string>& issues)
        : Error(join(issues)), issues(issues) {}
    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "validation failed:";
        for (const auto& e : v) { s += "\n  - "; s += e; }
        return s;
    }
};

// Root finder could not bracket a sign change (non-physical inputs).
struct NoBracket : Error {
    explicit NoBracket(const std::string& msg) : Error(msg) {}
};

// Conductor exceeds the temperature limit even at zero current.
struct InfeasibleLimit : Error {
    explicit InfeasibleLimit(const std::string& msg) : Error(msg) {}
};

// Loading-temperature curve is not convex on the requested range.
struct NotConvex : Error {
    explicit NotConvex(const std::string& msg) : Error(msg) {}
};

// Accumulated strength loss reached the end-of-life threshold.
struct EndOfLife : Error {
    explicit EndOfLife(const std::string& msg) : Error(msg) {}
};

struct SolverError : Error {
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

struct InfeasibleModel : Error {
    explicit InfeasibleModel(const std::string& msg) : Error(msg) {}
};

struct CurveMissing : Error {
    explicit CurveMissing(const std::string& msg) : Error(msg) {}
};

constexpr double kSqrt3 = 1.7320508075688772;

// MW <-> A conversion at a fixed nominal line-to-line voltage [kV].
inline double amps_to_mw(double amps, double kv) { return kSqrt3 * kv * amps / 1000.0; }
inline double mw_to_amps(double mw, double kv) { return mw * 1000.0 / (kSqrt3 * kv); }

}  // namespace linewear
