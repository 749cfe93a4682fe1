#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcf/qcore.hpp"

namespace qcf {

using ParamList = std::vector<std::pair<std::string, cplx>>;

// One verified identity instance. rel_diff = abs_diff / max(|lhs|,|rhs|,tiny)
// and pass <=> rel_diff <= tolerance.
struct VerificationReport {
    std::string identity;
    ParamList params;
    cplx lhs{};
    cplx rhs{};
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
};

VerificationReport make_report(std::string identity, ParamList params, cplx lhs, cplx rhs,
                               double tolerance, std::string notes = {});

struct ScanRow {
    double q = 0.0;
    cplx lhs{};
    cplx rhs{};
    double abs_diff = 0.0;
    double rel_diff = 0.0;
};

// A scan passes when the difference sequence strictly decreases and the
// terminal relative difference is below tolerance.
struct ScanTrend {
    bool decreasing = false;
    double terminal_rel_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ScanTable {
    std::string scan;
    ParamList params;
    std::vector<ScanRow> rows;
    ScanTrend trend{};
};

ScanRow make_scan_row(double q, cplx lhs, cplx rhs);
ScanTable finish_scan(std::string name, ParamList params, std::vector<ScanRow> rows,
                      double tolerance);

// Deterministic serialization: floats at 17 significant digits, complex
// values as {re, im} pairs (two columns per complex field in CSV).
std::string to_json(const VerificationReport& r);
std::string to_json(const std::vector<VerificationReport>& rs);
std::string to_json(const ScanTable& t);
std::string to_csv(const std::vector<VerificationReport>& rs);
std::string to_csv(const ScanTable& t);

} // namespace qcf
