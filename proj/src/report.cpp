#include "qcf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qcf {

VerificationReport make_report(std::string identity, ParamList params, cplx lhs, cplx rhs,
                               double tolerance, std::string notes) {
    VerificationReport r;
    r.identity = std::move(identity);
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_diff = std::abs(lhs - rhs);
    r.rel_diff = r.abs_diff / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    r.tolerance = tolerance;
    r.pass = r.rel_diff <= tolerance;
    r.notes = std::move(notes);
    return r;
}

ScanRow make_scan_row(double q, cplx lhs, cplx rhs) {
    ScanRow row;
    row.q = q;
    row.lhs = lhs;
    row.rhs = rhs;
    row.abs_diff = std::abs(lhs - rhs);
    row.rel_diff = row.abs_diff / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return row;
}

ScanTable finish_scan(std::string name, ParamList params, std::vector<ScanRow> rows,
                      double tolerance) {
    ScanTable t;
    t.scan = std::move(name);
    t.params = std::move(params);
    t.rows = std::move(rows);
    t.trend.tolerance = tolerance;
    t.trend.decreasing = t.rows.size() >= 2;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        // a row already at the rounding floor counts as converged
        bool ok = t.rows[i].rel_diff < t.rows[i - 1].rel_diff || t.rows[i].rel_diff <= 1e-13;
        if (!ok) t.trend.decreasing = false;
    }
    t.trend.terminal_rel_diff = t.rows.empty() ? 0.0 : t.rows.back().rel_diff;
    t.trend.pass = t.trend.decreasing && t.trend.terminal_rel_diff <= tolerance;
    return t;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(cplx z) {
    return "{\"re\":" + fmt(z.real()) + ",\"im\":" + fmt(z.imag()) + "}";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string params_json(const ParamList& params) {
    std::string out = "{";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ",";
        out += "\"" + json_escape(params[i].first) + "\":" + fmt(params[i].second);
    }
    return out + "}";
}

} // namespace

std::string to_json(const VerificationReport& r) {
    std::string out = "{";
    out += "\"identity\":\"" + json_escape(r.identity) + "\",";
    out += "\"params\":" + params_json(r.params) + ",";
    out += "\"lhs\":" + fmt(r.lhs) + ",";
    out += "\"rhs\":" + fmt(r.rhs) + ",";
    out += "\"abs_diff\":" + fmt(r.abs_diff) + ",";
    out += "\"rel_diff\":" + fmt(r.rel_diff) + ",";
    out += "\"tolerance\":" + fmt(r.tolerance) + ",";
    out += std::string("\"pass\":") + (r.pass ? "true" : "false") + ",";
    out += "\"notes\":\"" + json_escape(r.notes) + "\"}";
    return out;
}

std::string to_json(const std::vector<VerificationReport>& rs) {
    std::string out = "[";
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) out += ",";
        out += "\n" + to_json(rs[i]);
    }
    return out + "\n]\n";
}

std::string to_json(const ScanTable& t) {
    std::string out = "{";
    out += "\"scan\":\"" + json_escape(t.scan) + "\",";
    out += "\"params\":" + params_json(t.params) + ",";
    out += "\"rows\":[";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const ScanRow& row = t.rows[i];
        if (i) out += ",";
        out += "\n{\"q\":" + fmt(row.q) + ",\"lhs\":" + fmt(row.lhs) + ",\"rhs\":" + fmt(row.rhs)
             + ",\"abs_diff\":" + fmt(row.abs_diff) + ",\"rel_diff\":" + fmt(row.rel_diff) + "}";
    }
    out += "\n],";
    out += "\"trend\":{\"decreasing\":" + std::string(t.trend.decreasing ? "true" : "false")
         + ",\"terminal_rel_diff\":" + fmt(t.trend.terminal_rel_diff)
         + ",\"tolerance\":" + fmt(t.trend.tolerance)
         + ",\"pass\":" + (t.trend.pass ? "true" : "false") + "}}\n";
    return out;
}

std::string to_csv(const std::vector<VerificationReport>& rs) {
    std::string out = "identity";
    if (!rs.empty())
        for (const auto& kv : rs.front().params)
            out += "," + kv.first + "_re," + kv.first + "_im";
    out += ",lhs_re,lhs_im,rhs_re,rhs_im,abs_diff,rel_diff,tolerance,pass,notes\n";
    for (const auto& r : rs) {
        out += r.identity;
        for (const auto& kv : r.params)
            out += "," + fmt(kv.second.real()) + "," + fmt(kv.second.imag());
        out += "," + fmt(r.lhs.real()) + "," + fmt(r.lhs.imag());
        out += "," + fmt(r.rhs.real()) + "," + fmt(r.rhs.imag());
        out += "," + fmt(r.abs_diff) + "," + fmt(r.rel_diff) + "," + fmt(r.tolerance);
        out += std::string(",") + (r.pass ? "true" : "false");
        out += ",\"" + r.notes + "\"\n";
    }
    return out;
}

std::string to_csv(const ScanTable& t) {
    std::string out = "q,lhs_re,lhs_im,rhs_re,rhs_im,abs_diff,rel_diff\n";
    for (const ScanRow& row : t.rows) {
        out += fmt(row.q);
        out += "," + fmt(row.lhs.real()) + "," + fmt(row.lhs.imag());
        out += "," + fmt(row.rhs.real()) + "," + fmt(row.rhs.imag());
        out += "," + fmt(row.abs_diff) + "," + fmt(row.rel_diff) + "\n";
    }
    out += std::string("trend,") + (t.trend.decreasing ? "decreasing" : "not_decreasing") + ","
         + fmt(t.trend.terminal_rel_diff) + "," + fmt(t.trend.tolerance) + ","
         + (t.trend.pass ? "pass" : "fail") + "\n";
    return out;
}

} // namespace qcf
