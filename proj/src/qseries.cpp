#include "qcf/qseries.hpp"

#include <algorithm>
#include <cmath>

namespace qcf {

FormalSeries FormalSeries::shifted(const QParam& qp, long long l) const {
    FormalSeries out;
    out.coeffs.reserve(coeffs.size());
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        out.coeffs.push_back(coeffs[n] * qp.qn(l * static_cast<long long>(n)));
    return out;
}

FormalSeries FormalSeries::mul_monomial(int m) const {
    FormalSeries out;
    out.coeffs.assign(static_cast<std::size_t>(m), cplx(0.0));
    out.coeffs.insert(out.coeffs.end(), coeffs.begin(), coeffs.end());
    return out;
}

cplx FormalSeries::eval(cplx x) const {
    cplx acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

bool terminating_upper(const QParam& qp, cplx a, long long* m_out) {
    long long m = 0;
    if (near_q_power(qp, a, kDefaultGuard, &m) && m <= 0) {
        if (m_out) *m_out = -m;
        return true;
    }
    return false;
}

void HypParams::validate(const QParam& qp) const {
    for (cplx b : lower) {
        long long m = 0;
        if (b != cplx(0.0) && near_q_power(qp, b, kDefaultGuard, &m) && m <= 0)
            throw parameter_error("HypParams: lower parameter lies on q^{-N}");
    }
}

cplx phi_rs(const HypParams& p, const QParam& qp, cplx x) {
    p.validate(qp);
    if (x == cplx(0.0)) return cplx(1.0);

    long long n_stop = -1;  // inclusive last index for terminating series
    for (cplx a : p.upper) {
        long long m = 0;
        if (terminating_upper(qp, a, &m)) n_stop = (n_stop < 0) ? m : std::min(n_stop, m);
    }

    int e = 1 + static_cast<int>(p.lower.size()) - static_cast<int>(p.upper.size());
    if (n_stop < 0) {
        if (e < 0)
            throw divergence_error("phi_rs: series diverges for r > s+1; use a resummation");
        if (e == 0 && std::abs(x) >= 1.0)
            throw divergence_error("phi_rs: |x| >= 1 with r = s+1; use analytic continuation");
    }

    cplx sum(0.0), term(1.0);
    cplx qn(1.0);  // q^n
    detail::StopRule rule(qp.eps(), qp.max_terms(), "phi_rs");
    for (long long n = 0;; ++n) {
        sum += term;
        if (n_stop >= 0 && n == n_stop) break;
        cplx ratio(1.0);
        for (cplx a : p.upper) ratio *= cplx(1.0) - a * qn;
        for (cplx b : p.lower) ratio /= cplx(1.0) - b * qn;
        ratio /= cplx(1.0) - qn * qp.q();
        if (e != 0) ratio *= ipow(-qn, e);
        term *= ratio * x;
        qn *= qp.q();
        if (n_stop < 0 && rule.done(std::abs(term), std::abs(sum))) break;
    }
    return sum;
}

FormalSeries phi20_formal_coeffs(cplx a, cplx b, const QParam& qp, int n_terms) {
    FormalSeries f;
    f.coeffs.reserve(static_cast<std::size_t>(n_terms));
    cplx c(1.0);
    cplx qn(1.0);
    for (int n = 0; n < n_terms; ++n) {
        f.coeffs.push_back(c);
        // c_{n+1}/c_n = (1-aq^n)(1-bq^n)/(1-q^{n+1}) * (-1) * q^{-n}
        c *= (cplx(1.0) - a * qn) * (cplx(1.0) - b * qn)
           / (cplx(1.0) - qn * qp.q()) * cplx(-1.0) / qn;
        qn *= qp.q();
    }
    return f;
}

namespace {

// Heine series for 2phi1(a,b;c;q,y); caller ensures convergence or
// termination. c = 0 is legal ((0;q)_n = 1).
cplx heine_phi21(cplx a, cplx b, cplx c, const QParam& qp, cplx y) {
    if (y == cplx(0.0)) return cplx(1.0);
    long long n_stop = -1;
    long long m = 0;
    if (terminating_upper(qp, a, &m)) n_stop = m;
    if (terminating_upper(qp, b, &m)) n_stop = (n_stop < 0) ? m : std::min(n_stop, m);
    if (n_stop < 0 && std::abs(y) >= 1.0)
        throw divergence_error("2phi1 series: |y| >= 1");

    cplx sum(0.0), term(1.0), qn(1.0);
    detail::StopRule rule(qp.eps(), qp.max_terms(), "2phi1");
    for (long long n = 0;; ++n) {
        sum += term;
        if (n_stop >= 0 && n == n_stop) break;
        term *= (cplx(1.0) - a * qn) * (cplx(1.0) - b * qn)
              / ((cplx(1.0) - c * qn) * (cplx(1.0) - qn * qp.q())) * y;
        qn *= qp.q();
        if (n_stop < 0 && rule.done(std::abs(term), std::abs(sum))) break;
    }
    return sum;
}

void check_phi21_params(const QParam& qp, cplx c) {
    long long m = 0;
    if (c != cplx(0.0) && near_q_power(qp, c, kDefaultGuard, &m) && m <= 0)
        throw parameter_error("2phi1: lower parameter lies on q^{-N}");
}

// One upward step of the contiguous recurrence in the argument:
// u(x) = [{c+q-(a+b)qx} u(qx) - (c-abqx) u(q^2x)] / (q(1-x)).
cplx phi21_step(cplx a, cplx b, cplx c, const QParam& qp, cplx x, cplx u_qx, cplx u_qqx) {
    cplx q = qp.q();
    return ((c + q - (a + b) * q * x) * u_qx - (c - a * b * q * x) * u_qqx)
         / (q * (cplx(1.0) - x));
}

long long disk_steps(const QParam& qp, cplx y) {
    // smallest k >= 0 with |q^k y| <= 0.5
    double ay = std::abs(y);
    if (ay <= 0.5) return 0;
    return static_cast<long long>(
        std::ceil(std::log(0.5 / ay) / std::log(qp.abs_q())));
}

} // namespace

cplx phi21_continued(cplx a, cplx b, cplx c, const QParam& qp, cplx y) {
    check_phi21_params(qp, c);
    if (y == cplx(0.0)) return cplx(1.0);

    long long m = 0;
    if (terminating_upper(qp, a, &m) || terminating_upper(qp, b, &m))
        return heine_phi21(a, b, c, qp, y);

    SpiralSet unit{{cplx(1.0)}, kDefaultGuard};
    if (unit.contains(qp, y))
        throw spiral_error("2phi1 continuation: argument on [1;q]");
    if (std::abs(y) <= 0.5) return heine_phi21(a, b, c, qp, y);

    long long k = disk_steps(qp, y);
    cplx u_qqx = heine_phi21(a, b, c, qp, qp.qn(k + 1) * y);
    cplx u_qx = heine_phi21(a, b, c, qp, qp.qn(k) * y);
    for (long long j = k - 1; j >= 0; --j) {
        cplx xj = qp.qn(j) * y;
        cplx u = phi21_step(a, b, c, qp, xj, u_qx, u_qqx);
        u_qqx = u_qx;
        u_qx = u;
    }
    return u_qx;
}

cplx phi21_c0_continued(cplx a, cplx b, const QParam& qp, cplx y) {
    return phi21_continued(a, b, cplx(0.0), qp, y);
}

Phi21Ladder::Phi21Ladder(cplx a, cplx b, cplx c, const QParam& qp, cplx base)
    : a_(a), b_(b), c_(c), qp_(qp), base_(base) {
    check_phi21_params(qp_, c_);
    if (base_ == cplx(0.0))
        throw domain_error("Phi21Ladder: base argument must be nonzero");
    long long m = 0;
    terminating_ = terminating_upper(qp_, a_, &m) || terminating_upper(qp_, b_, &m);
    if (!terminating_) {
        SpiralSet unit{{cplx(1.0)}, kDefaultGuard};
        if (unit.contains(qp_, base_))
            throw spiral_error("2phi1 ladder: argument spiral meets [1;q]");
    }
    j_seed_ = disk_steps(qp_, base_);
}

cplx Phi21Ladder::series_at(long long j) const {
    return heine_phi21(a_, b_, c_, qp_, qp_.qn(j) * base_);
}

cplx Phi21Ladder::at(long long j) {
    if (terminating_ || j >= j_seed_) {
        if (terminating_) return series_at(j);
        auto idx = static_cast<std::size_t>(j - j_seed_);
        while (down_.size() <= idx)
            down_.push_back(series_at(j_seed_ + static_cast<long long>(down_.size())));
        return down_[idx];
    }
    auto idx = static_cast<std::size_t>(j_seed_ - 1 - j);
    while (up_.size() <= idx) {
        long long jj = j_seed_ - 1 - static_cast<long long>(up_.size());
        cplx u_qx = (jj + 1 >= j_seed_) ? at(jj + 1) : up_[static_cast<std::size_t>(j_seed_ - 2 - jj)];
        cplx u_qqx = (jj + 2 >= j_seed_) ? at(jj + 2) : up_[static_cast<std::size_t>(j_seed_ - 3 - jj)];
        up_.push_back(phi21_step(a_, b_, c_, qp_, qp_.qn(jj) * base_, u_qx, u_qqx));
    }
    return up_[idx];
}

cplx u2_solution(cplx a, cplx b, const QParam& qp, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("u2: x must be nonzero");
    SpiralSet unit{{cplx(1.0)}, kDefaultGuard};
    if (unit.contains(qp, x))
        throw spiral_error("u2: x on [1;q] (theta(-qx) vanishes)");
    cplx abx = a * b * x;
    cplx phi = phi21_c0_continued(qp.q() / a, qp.q() / b, qp, abx);
    return std::exp(log_qpoch_inf(abx, qp) - log_theta(qp, -qp.q() * x)) * phi;
}

cplx v_solution(cplx a, cplx b, cplx mu, const QParam& qp, cplx x) {
    if (x == cplx(0.0) || mu == cplx(0.0))
        throw domain_error("v_solution: x and mu must be nonzero");
    if (near_theta_zero(qp, mu * x))
        throw spiral_error("v_solution: theta(mu x) vanishes (x on [-1/mu;q])");
    cplx y = qp.q() / (a * b * x);
    cplx phi = phi21_continued(a, cplx(0.0), a * qp.q() / b, qp, y);
    return std::exp(log_theta(qp, a * mu * x) - log_theta(qp, mu * x)) * phi;
}

bool u1_is_divergent_diagnostic(cplx a, cplx b, const QParam& qp) {
    if (terminating_upper(qp, a) || terminating_upper(qp, b)) return false;
    const int N = 48;
    FormalSeries f = phi20_formal_coeffs(a, b, qp, N + 2);
    auto ratio = [&](int n) {
        return std::abs(f.coeffs[static_cast<std::size_t>(n + 1)])
             / std::abs(f.coeffs[static_cast<std::size_t>(n)]);
    };
    double g_lo = ratio(16), g_hi = ratio(40);
    if (!(g_lo > 0.0)) return false;
    double growth = std::pow(g_hi / g_lo, 1.0 / 24.0);
    // super-geometric growth means the term ratio itself grows ~ |q|^{-1}
    return growth > std::pow(qp.abs_q(), -0.5);
}

} // namespace qcf
