#pragma once

#include "qcf/qcore.hpp"

namespace qcf {

// Truncated formal power series: coeffs[n] multiplies x^n. Values are
// immutable; operations return new series.
struct FormalSeries {
    std::vector<cplx> coeffs;

    // sigma_q^l action on coefficients: a_n -> q^{l n} a_n
    FormalSeries shifted(const QParam& qp, long long l) const;
    // multiply by x^m: indices shift up by m
    FormalSeries mul_monomial(int m) const;
    // plain truncated sum (oracle/test use; divergent series must not be summed)
    cplx eval(cplx x) const;
};

// Parameters of rphi_s. Lower parameters on q^{-N} are rejected: they zero a
// denominator factor (b;q)_n.
struct HypParams {
    std::vector<cplx> upper;
    std::vector<cplx> lower;

    void validate(const QParam& qp) const;
};

// true iff a lies within guard of q^{-m} for some m >= 0, so (a;q)_n
// terminates at n = m. *m_out receives the degree.
bool terminating_upper(const QParam& qp, cplx a, long long* m_out = nullptr);

// Basic hypergeometric series rphi_s(a_1..a_r; b_1..b_s; q, x) with the
// [(-1)^n q^{n(n-1)/2}]^{1+s-r} normalization.
cplx phi_rs(const HypParams& p, const QParam& qp, cplx x);

// Coefficients of the formal (divergent) series 2phi0(a,b;-;q,x).
FormalSeries phi20_formal_coeffs(cplx a, cplx b, const QParam& qp, int n_terms);

// Analytic continuation of 2phi1(a,b;c;q,.) beyond its unit disk via the
// three-term q-difference recurrence in the argument; c = 0 is allowed.
// Throws spiral_error when y (equivalently, any recurrence denominator)
// lies within guard of [1;q].
cplx phi21_continued(cplx a, cplx b, cplx c, const QParam& qp, cplx y);
cplx phi21_c0_continued(cplx a, cplx b, const QParam& qp, cplx y);

// Values of 2phi1(a,b;c;q, base q^j) along a q-ladder. Rungs with small
// argument are direct series; rungs with growing argument are produced by
// single recurrence steps, each reusing the previous two rungs.
class Phi21Ladder {
public:
    Phi21Ladder(cplx a, cplx b, cplx c, const QParam& qp, cplx base);

    cplx at(long long j);

private:
    cplx series_at(long long j) const;

    cplx a_, b_, c_;
    QParam qp_;
    cplx base_;
    bool terminating_ = false;
    long long j_seed_ = 0;
    std::vector<cplx> up_;    // rungs j_seed_-1, j_seed_-2, ... (growing |arg|)
    std::vector<cplx> down_;  // rungs j_seed_, j_seed_+1, ...   (shrinking |arg|)
};

// Local solution u2 of the q-confluent equation around the origin:
// u2(x) = ((abx;q)_inf / theta(-qx)) 2phi1(q/a, q/b; 0; q, abx).
cplx u2_solution(cplx a, cplx b, const QParam& qp, cplx x);

// Local solution around infinity,
// S_mu(a,b;q,x) = (theta(a mu x)/theta(mu x)) 2phi1(a, 0; aq/b; q, q/(abx));
// v1 is this function, v2 the a<->b swap.
cplx v_solution(cplx a, cplx b, cplx mu, const QParam& qp, cplx x);

// Ratio test on the 2phi0 coefficients: true iff they grow
// super-geometrically (the generic divergent case).
bool u1_is_divergent_diagnostic(cplx a, cplx b, const QParam& qp);

} // namespace qcf
