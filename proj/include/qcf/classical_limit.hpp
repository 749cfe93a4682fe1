#pragma once

#include "qcf/connection.hpp"
#include "qcf/report.hpp"

namespace qcf {

// Classical Gamma function (Lanczos approximation, reflection for Re x < 1/2).
cplx gamma_classical(cplx x);

// Kummer confluent hypergeometric 1F1(alpha; gamma; z); arguments with
// negative real part go through the Kummer transformation to avoid
// cancellation.
cplx hyp1f1(cplx alpha, cplx gamma_p, cplx z);

struct Asymptotic2F0 {
    cplx value;
    double error_estimate;  // magnitude of the first omitted term
    int terms_used = 0;
};

// Optimal truncation of the divergent 2F0(alpha,beta;-;z): sum until the
// terms stop decreasing. Outside the asymptotic regime (no term below 1e-6)
// this refuses to produce a number.
Asymptotic2F0 hyp2f0_asymptotic(cplx alpha, cplx beta, cplx z);

struct LimitScanConfig {
    std::vector<double> q_sequence{0.5, 0.9, 0.95, 0.99};
    cplx alpha{0.3, 0.0};
    cplx beta{0.7, 0.0};
    cplx z{2.0, 0.0};
    cplx lambda{1.0, 0.0};
    double tolerance = 0.05;   // terminal relative difference
    double eps = kDefaultEps;
    int max_terms = kDefaultMaxTerms;

    void validate() const;       // q_sequence increasing inside (0,1)
    void validate_exponents() const;  // alpha - beta off Z
    QParam qparam(double q) const { return QParam(cplx(q), eps, max_terms); }
};

// lim_{q->1-0} (theta(q^gamma u/(1-q)) / theta(u/(1-q))) (1-q)^{-gamma} = u^{-gamma}
// for u off the cut (-inf, 0].
ScanTable theta_ratio_limit_scan(cplx gamma_exp, cplx u, const LimitScanConfig& cfg);

// Gamma_q(x) -> Gamma(x) and E_q(z(1-q)) -> e^z.
ScanTable limit_scan_gamma_q(cplx x, const LimitScanConfig& cfg);
ScanTable limit_scan_q_exp(cplx z, const LimitScanConfig& cfg);

// 2f0(q^alpha, q^beta; lambda, q, z/(1-q)) against the Gamma-weighted 1F1
// combination.
ScanTable limit_scan_zhang(const LimitScanConfig& cfg);

struct Thm33Scan {
    ScanTable lemma35;               // w * 2f1 vs Gamma-weighted 1F1 pair
    ScanTable lemma34;               // w * (rewritten u2 form) vs e^{1/z}(-z)^{1-a-b} 2F0
    VerificationReport rhs_consistency;  // the two classical sides agree
};

// Both halves of the asymptotic connection statement, as q -> 1-0 trends.
// cfg.z must be real, nonzero, with -z off the cut for the (-z)^{...}
// factors (z < 0), and |z| small enough for the 2F0 regime.
Thm33Scan limit_scan_thm33(const LimitScanConfig& cfg);

} // namespace qcf
