#include "qcf/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcf {

QParam::QParam(cplx q, double eps, int max_terms)
    : q_(q), eps_(eps), max_terms_(max_terms) {
    abs_q_ = std::abs(q);
    if (!(abs_q_ > 0.0) || !(abs_q_ < 1.0) || !std::isfinite(abs_q_))
        throw parameter_error("QParam: q must satisfy 0 < |q| < 1");
    if (!(eps > 0.0))
        throw parameter_error("QParam: eps must be positive");
    if (max_terms < 16)
        throw parameter_error("QParam: max_terms must be at least 16");
    log_q_ = std::log(q);
}

cplx QParam::pow_q(cplx alpha) const {
    return std::exp(alpha * log_q_);
}

cplx QParam::qn(long long n) const {
    if (n == 0) return cplx(1.0);
    return std::exp(static_cast<double>(n) * log_q_);
}

cplx ipow(cplx z, long long n) {
    if (n == 0) return cplx(1.0);
    bool inv = n < 0;
    unsigned long long e = inv ? static_cast<unsigned long long>(-n)
                               : static_cast<unsigned long long>(n);
    cplx base = z, acc(1.0);
    while (e) {
        if (e & 1ull) acc *= base;
        base *= base;
        e >>= 1;
    }
    return inv ? cplx(1.0) / acc : acc;
}

namespace detail {

bool StopRule::done(double term_mag, double sum_mag) {
    ++count_;
    if (term_mag < eps_ * std::max(sum_mag, 1e-300))
        ++run_;
    else
        run_ = 0;
    if (run_ >= 3) return true;
    if (count_ >= cap_)
        throw convergence_error(std::string(what_) + ": term cap reached before convergence");
    return false;
}

} // namespace detail

double SpiralSet::distance(const QParam& qp, cplx x) const {
    double ax = std::abs(x);
    if (ax == 0.0) return std::numeric_limits<double>::infinity();
    double lq = std::log(qp.abs_q());
    double best = std::numeric_limits<double>::infinity();
    for (cplx lam : anchors) {
        double al = std::abs(lam);
        if (al == 0.0) continue;
        // only rings whose modulus is within one q-step of |x| can be close
        long long k0 = std::llround(std::log(ax / al) / lq);
        for (long long k = k0 - 1; k <= k0 + 1; ++k) {
            double d = std::abs(x - lam * qp.qn(k)) / ax;
            best = std::min(best, d);
        }
    }
    return best;
}

bool SpiralSet::contains(const QParam& qp, cplx x) const {
    return distance(qp, x) < guard;
}

bool spiral_guard(const SpiralSet& s, const QParam& qp, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("spiral_guard: x must be nonzero");
    return s.contains(qp, x);
}

bool near_q_power(const QParam& qp, cplx w, double guard, long long* m_out) {
    double aw = std::abs(w);
    if (aw == 0.0) return false;
    long long m0 = std::llround(std::log(aw) / std::log(qp.abs_q()));
    for (long long m = m0 - 1; m <= m0 + 1; ++m) {
        if (std::abs(w - qp.qn(m)) / aw < guard) {
            if (m_out) *m_out = m;
            return true;
        }
    }
    return false;
}

bool near_theta_zero(const QParam& qp, cplx x, double guard) {
    SpiralSet zeros{{cplx(-1.0)}, guard};
    return zeros.contains(qp, x);
}

cplx qpoch_n(cplx a, const QParam& qp, long long n) {
    cplx prod(1.0);
    cplx aqk = a;
    for (long long k = 0; k < n; ++k) {
        prod *= (cplx(1.0) - aqk);
        aqk *= qp.q();
    }
    return prod;
}

namespace {

// Shared core of qpoch_inf / log_qpoch_inf. Returns true and sets log_sum
// unless some factor is exactly zero.
bool qpoch_inf_log(cplx a, const QParam& qp, cplx& log_sum) {
    log_sum = cplx(0.0);
    if (a == cplx(0.0)) return true;
    double cutoff = qp.eps() * (1.0 - qp.abs_q());
    cplx aqk = a;
    for (int k = 0; k < qp.max_terms(); ++k) {
        cplx factor = cplx(1.0) - aqk;
        if (factor == cplx(0.0)) return false;
        log_sum += std::log(factor);
        aqk *= qp.q();
        if (std::abs(aqk) < cutoff) return true;
    }
    throw convergence_error("qpoch_inf: term cap reached");
}

} // namespace

cplx qpoch_inf(cplx a, const QParam& qp) {
    cplx s;
    if (!qpoch_inf_log(a, qp, s)) return cplx(0.0);
    return std::exp(s);
}

cplx log_qpoch_inf(cplx a, const QParam& qp) {
    cplx s;
    if (!qpoch_inf_log(a, qp, s))
        throw pole_error("log_qpoch_inf: exact zero factor, a lies on q^{-N}");
    return s;
}

cplx qpoch_multi(const std::vector<cplx>& as, const QParam& qp) {
    cplx prod(1.0);
    for (cplx a : as) prod *= qpoch_inf(a, qp);
    return prod;
}

namespace {

struct ThetaReduced {
    cplx log_prefactor;  // theta(x) = exp(log_prefactor) * sum
    cplx sum;            // bilateral series at the reduced argument
    double max_term;
};

// theta(x) = q^{m(m-1)/2} x^m theta(q^m x); pick m so the reduced argument
// lies in |q|^{1/2} <= |x'| <= |q|^{-1/2}, where the bilateral series
// converges fastest. When the sum cancels far below its largest term
// (arguments near the negative axis, most visibly for q close to 1) the
// value is recomputed from the triple product (q,-x',-q/x';q)_inf, whose
// factors carry no cancellation.
ThetaReduced theta_reduced(const QParam& qp, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("theta: x must be nonzero");
    double t = std::log(std::abs(x)) / std::log(qp.abs_q());
    long long m = std::llround(-t);
    cplx xr = qp.qn(m) * x;

    cplx log_pre_base = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1) * qp.log_q()
                      + static_cast<double>(m) * std::log(x);

    cplx sum(1.0);  // n = 0 term
    double max_term = 1.0;
    // forward direction: term_{n+1} = term_n * q^n * xr
    {
        detail::StopRule rule(qp.eps(), qp.max_terms(), "theta");
        cplx term(1.0);
        cplx qn(1.0);  // q^n
        while (true) {
            term *= qn * xr;
            qn *= qp.q();
            double tm = std::abs(term);
            max_term = std::max(max_term, tm);
            sum += term;
            if (rule.done(tm, std::abs(sum))) break;
        }
    }
    // backward direction: term_{n-1} = term_n * q^{1-n} / xr, starting n = 0
    {
        detail::StopRule rule(qp.eps(), qp.max_terms(), "theta");
        cplx term(1.0);
        cplx qpow = qp.q();  // q^{1-n} at n = 0
        while (true) {
            term *= qpow / xr;
            qpow *= qp.q();
            double tm = std::abs(term);
            max_term = std::max(max_term, tm);
            sum += term;
            if (rule.done(tm, std::abs(sum))) break;
        }
    }

    if (std::abs(sum) < 1e-2 * max_term) {
        sum = qpoch_inf(qp.q(), qp) * qpoch_inf(-xr, qp) * qpoch_inf(-qp.q() / xr, qp);
    }
    return {log_pre_base, sum, max_term};
}

} // namespace

cplx theta(const QParam& qp, cplx x) {
    ThetaReduced r = theta_reduced(qp, x);
    if (r.sum == cplx(0.0)) return cplx(0.0);
    return std::exp(r.log_prefactor) * r.sum;
}

cplx log_theta(const QParam& qp, cplx x) {
    ThetaReduced r = theta_reduced(qp, x);
    if (r.sum == cplx(0.0))
        throw pole_error("log_theta: theta vanishes (x on [-1;q])");
    return r.log_prefactor + std::log(r.sum);
}

cplx theta_ratio(const QParam& qp, cplx a, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("theta_ratio: x must be nonzero");
    if (near_theta_zero(qp, x))
        throw pole_error("theta_ratio: theta(x) zero within guard, x on [-1;q]");
    return std::exp(log_theta(qp, a * x) - log_theta(qp, x));
}

cplx q_gamma(const QParam& qp, cplx x) {
    if (qp.q().imag() != 0.0 || qp.q().real() <= 0.0)
        throw domain_error("q_gamma: q must be real in (0,1)");
    cplx qx = qp.pow_q(x);
    long long m = 0;
    if (near_q_power(qp, qx, kDefaultGuard, &m) && m <= 0)
        throw pole_error("q_gamma: pole, q^x lies on q^{-N}");
    double one_minus_q = 1.0 - qp.q().real();
    cplx val = log_qpoch_inf(qp.q(), qp) - log_qpoch_inf(qx, qp)
             + (cplx(1.0) - x) * std::log(one_minus_q);
    return std::exp(val);
}

cplx q_exp_E(const QParam& qp, cplx z) {
    return qpoch_inf(-z, qp);
}

cplx q_derivative(const std::function<cplx(cplx)>& f, const QParam& qp, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("q_derivative: x must be nonzero");
    return (f(x) - f(qp.q() * x)) / ((cplx(1.0) - qp.q()) * x);
}

} // namespace qcf
