#include "qcf/classical_limit.hpp"

#include <algorithm>
#include <cmath>

namespace qcf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool near_nonpositive_integer(cplx x) {
    double r = std::round(x.real());
    return r <= 0.0 && std::abs(x - cplx(r)) < kDefaultGuard * std::max(1.0, std::abs(x));
}

} // namespace

cplx gamma_classical(cplx x) {
    if (near_nonpositive_integer(x))
        throw pole_error("gamma: pole at nonpositive integer");
    if (x.real() < 0.5)
        return kPi / (std::sin(kPi * x) * gamma_classical(cplx(1.0) - x));
    cplx z = x - cplx(1.0);
    cplx acc(kLanczos[0]);
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + cplx(static_cast<double>(i)));
    cplx t = z + cplx(7.5);
    return std::sqrt(2.0 * kPi) * std::pow(t, z + cplx(0.5)) * std::exp(-t) * acc;
}

cplx hyp1f1(cplx alpha, cplx gamma_p, cplx z) {
    if (near_nonpositive_integer(gamma_p))
        throw pole_error("1F1: lower parameter at nonpositive integer");
    if (z.real() < 0.0)  // Kummer transformation keeps all terms same-signed
        return std::exp(z) * hyp1f1(gamma_p - alpha, gamma_p, -z);
    cplx sum(1.0), term(1.0);
    for (int n = 0; n < 100000; ++n) {
        term *= (alpha + cplx(static_cast<double>(n)))
              / ((gamma_p + cplx(static_cast<double>(n))) * cplx(static_cast<double>(n + 1))) * z;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && n > 4) return sum;
    }
    throw convergence_error("1F1: term cap reached");
}

Asymptotic2F0 hyp2f0_asymptotic(cplx alpha, cplx beta, cplx z) {
    if (z == cplx(0.0)) return {cplx(1.0), 0.0, 1};
    cplx sum(0.0), term(1.0);
    double prev = std::abs(term);
    int n = 0;
    for (;; ++n) {
        sum += term;
        cplx next = term * (alpha + cplx(static_cast<double>(n)))
                  * (beta + cplx(static_cast<double>(n))) / cplx(static_cast<double>(n + 1)) * z;
        double mag = std::abs(next);
        if (mag >= prev || n > 10000) {
            if (prev >= 1e-6)
                throw domain_error("2F0: outside asymptotic regime, no term below 1e-6");
            return {sum, mag, n + 1};
        }
        term = next;
        prev = mag;
    }
}

void LimitScanConfig::validate() const {
    if (q_sequence.empty())
        throw parameter_error("scan: empty q_sequence");
    double prev = 0.0;
    for (double q : q_sequence) {
        if (!(q > prev && q < 1.0))
            throw parameter_error("scan: q_sequence must increase inside (0,1)");
        prev = q;
    }
}

void LimitScanConfig::validate_exponents() const {
    cplx d = alpha - beta;
    if (std::abs(d.imag()) < kDefaultGuard
        && std::abs(d.real() - std::round(d.real())) < kDefaultGuard)
        throw degeneracy_error("scan: alpha - beta in Z");
}

ScanTable theta_ratio_limit_scan(cplx gamma_exp, cplx u, const LimitScanConfig& cfg) {
    cfg.validate();
    if (u == cplx(0.0) || (u.imag() == 0.0 && u.real() < 0.0))
        throw domain_error("theta_ratio_limit: u on the cut (-inf, 0]");
    cplx target = std::exp(-gamma_exp * std::log(u));
    std::vector<ScanRow> rows;
    for (double q : cfg.q_sequence) {
        QParam qp = cfg.qparam(q);
        cplx big = u / (1.0 - q);
        cplx lhs = std::exp(log_theta(qp, qp.pow_q(gamma_exp) * big) - log_theta(qp, big)
                            - gamma_exp * std::log(1.0 - q));
        rows.push_back(make_scan_row(q, lhs, target));
    }
    return finish_scan("theta_ratio_limit",
                       {{"gamma", gamma_exp}, {"u", u}}, std::move(rows), cfg.tolerance);
}

ScanTable limit_scan_gamma_q(cplx x, const LimitScanConfig& cfg) {
    cfg.validate();
    cplx target = gamma_classical(x);
    std::vector<ScanRow> rows;
    for (double q : cfg.q_sequence)
        rows.push_back(make_scan_row(q, q_gamma(cfg.qparam(q), x), target));
    return finish_scan("gamma_q_limit", {{"x", x}}, std::move(rows), cfg.tolerance);
}

ScanTable limit_scan_q_exp(cplx z, const LimitScanConfig& cfg) {
    cfg.validate();
    cplx target = std::exp(z);
    std::vector<ScanRow> rows;
    for (double q : cfg.q_sequence)
        rows.push_back(make_scan_row(q, q_exp_E(cfg.qparam(q), z * (1.0 - q)), target));
    return finish_scan("q_exp_limit", {{"z", z}}, std::move(rows), cfg.tolerance);
}

ScanTable limit_scan_zhang(const LimitScanConfig& cfg) {
    cfg.validate();
    cfg.validate_exponents();
    if (cfg.z == cplx(0.0) || (cfg.z.imag() == 0.0 && cfg.z.real() < 0.0))
        throw domain_error("zhang limit scan: z on the cut (-inf, 0]");
    cplx al = cfg.alpha, be = cfg.beta, z = cfg.z;
    cplx rhs = gamma_classical(be - al) / gamma_classical(be) * std::pow(z, -al)
                   * hyp1f1(al, al - be + cplx(1.0), cplx(1.0) / z)
             + gamma_classical(al - be) / gamma_classical(al) * std::pow(z, -be)
                   * hyp1f1(be, be - al + cplx(1.0), cplx(1.0) / z);
    std::vector<ScanRow> rows;
    for (double q : cfg.q_sequence) {
        QParam qp = cfg.qparam(q);
        cplx lhs = f20(qp.pow_q(al), qp.pow_q(be), cfg.lambda, qp, z / (1.0 - q));
        rows.push_back(make_scan_row(q, lhs, rhs));
    }
    return finish_scan("zhang_limit",
                       {{"alpha", al}, {"beta", be}, {"lambda", cfg.lambda}, {"z", z}},
                       std::move(rows), cfg.tolerance);
}

Thm33Scan limit_scan_thm33(const LimitScanConfig& cfg) {
    cfg.validate();
    cfg.validate_exponents();
    cplx al = cfg.alpha, be = cfg.beta, z = cfg.z;
    if (z.imag() != 0.0 || z.real() == 0.0)
        throw domain_error("thm33 scan: z must be real and nonzero");
    cplx minus_z = -z;
    if (minus_z.real() < 0.0)
        throw domain_error("thm33 scan: -z on the cut (-inf, 0]; take z < 0");

    // classical sides. The 1F1 pair is the recessive combination: its two
    // O(1) terms cancel down to the e^{1/z} scale, so the reachable double
    // precision is limited by that cancellation; the estimate is folded into
    // the consistency tolerance below.
    cplx t1 = gamma_classical(be - al) / gamma_classical(cplx(1.0) - al)
            * std::pow(minus_z, -al) * hyp1f1(al, al + cplx(1.0) - be, cplx(1.0) / z);
    cplx t2 = gamma_classical(al - be) / gamma_classical(cplx(1.0) - be)
            * std::pow(minus_z, -be) * hyp1f1(be, be + cplx(1.0) - al, cplx(1.0) / z);
    cplx rhs_1f1 = t1 + t2;
    double cancel_est = 5e-16 * (std::abs(t1) + std::abs(t2))
                      / std::max(std::abs(rhs_1f1), 1e-300);
    Asymptotic2F0 f2 = hyp2f0_asymptotic(cplx(1.0) - al, cplx(1.0) - be, z);
    cplx rhs_2f0 = std::exp(cplx(1.0) / z)
                 * std::pow(minus_z, cplx(1.0) - al - be) * f2.value;
    double rel_2f0_err =
        f2.error_estimate * std::abs(std::exp(cplx(1.0) / z)
                                     * std::pow(minus_z, cplx(1.0) - al - be))
        / std::max(std::abs(rhs_2f0), 1e-300);

    std::vector<ScanRow> rows35, rows34;
    for (double q : cfg.q_sequence) {
        QParam qp = cfg.qparam(q);
        cplx x = z / (1.0 - q);
        cplx w = std::exp(log_qpoch_inf(qp.q(), qp)
                          + (cplx(1.0) - al - be) * std::log(1.0 - q));

        // first route: w times the closed-form local solution
        cplx lhs35 = w * u2_solution(qp.pow_q(al), qp.pow_q(be), qp, x);
        rows35.push_back(make_scan_row(q, lhs35, rhs_1f1));

        // second route: the rewritten form through theta ratio and E_q
        cplx qx = qp.q() * x;
        cplx theta_part = std::exp(log_theta(qp, qp.pow_q(al + be - cplx(1.0)) * (-qx))
                                   - log_theta(qp, -qx)
                                   + (cplx(1.0) - al - be) * std::log(1.0 - q));
        cplx eq_arg = -(1.0 - q) / (qp.pow_q(al + be - cplx(1.0)) * z);
        cplx phi = phi21_c0_continued(qp.pow_q(cplx(1.0) - al), qp.pow_q(cplx(1.0) - be), qp,
                                      qp.pow_q(al + be) * x);
        cplx lhs34 = theta_part / q_exp_E(qp, eq_arg) * phi;
        rows34.push_back(make_scan_row(q, lhs34, rhs_2f0));
    }

    Thm33Scan out;
    ParamList params{{"alpha", al}, {"beta", be}, {"z", z}};
    out.lemma35 = finish_scan("thm33_lemma35", params, std::move(rows35), cfg.tolerance);
    double tol34 = std::max(cfg.tolerance, rel_2f0_err);
    out.lemma34 = finish_scan("thm33_lemma34", params, std::move(rows34), tol34);
    out.rhs_consistency = make_report(
        "thm33_rhs_consistency", params, rhs_1f1, rhs_2f0,
        std::max({1e-9, 3.0 * rel_2f0_err, 3.0 * cancel_est}),
        "Gamma-weighted 1F1 pair against the optimally truncated 2F0 side; "
        "tolerance folds the 2F0 truncation and 1F1 cancellation estimates");
    return out;
}

} // namespace qcf
