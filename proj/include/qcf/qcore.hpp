#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qcf/errors.hpp"

namespace qcf {

using cplx = std::complex<double>;

inline constexpr double kDefaultEps = 1e-14;
inline constexpr int kDefaultMaxTerms = 20000;
inline constexpr double kDefaultGuard = 1e-6;

// Base q with 0 < |q| < 1 plus the truncation policy shared by every series
// and infinite product in the library. Validated once, immutable.
class QParam {
public:
    explicit QParam(cplx q, double eps = kDefaultEps, int max_terms = kDefaultMaxTerms);

    cplx q() const { return q_; }
    double eps() const { return eps_; }
    int max_terms() const { return max_terms_; }
    cplx log_q() const { return log_q_; }   // principal logarithm
    double abs_q() const { return abs_q_; }

    cplx pow_q(cplx alpha) const;            // q^alpha, principal branch
    cplx qn(long long n) const;              // q^n for integer n

private:
    cplx q_;
    double eps_;
    int max_terms_;
    cplx log_q_;
    double abs_q_;
};

// z^n for integer n, single-valued (no branch involved).
cplx ipow(cplx z, long long n);

// Finite union of q-spirals [lambda;q] = {lambda q^k : k in Z} used as
// exclusion zones. Membership is judged by relative distance and is
// scale-covariant: x in [lambda;q] iff qx in [lambda;q].
struct SpiralSet {
    std::vector<cplx> anchors;
    double guard = kDefaultGuard;

    double distance(const QParam& qp, cplx x) const;  // min_k |x - lambda q^k| / |x|
    bool contains(const QParam& qp, cplx x) const;
};

bool spiral_guard(const SpiralSet& s, const QParam& qp, cplx x);

// true iff w is within relative `guard` of q^m for some integer m.
// When it is, *m_out receives the matching exponent.
bool near_q_power(const QParam& qp, cplx w, double guard, long long* m_out = nullptr);

// true iff x is within guard of the zero spiral of theta, i.e. x in [-1;q].
bool near_theta_zero(const QParam& qp, cplx x, double guard = kDefaultGuard);

// q-shifted factorials (a;q)_n and (a;q)_inf.
cplx qpoch_n(cplx a, const QParam& qp, long long n);
cplx qpoch_inf(cplx a, const QParam& qp);

// log (a;q)_inf as a sum of log(1 - a q^k). Throws pole_error if a factor
// vanishes exactly (a on q^{-N}); exp of the result reproduces qpoch_inf.
cplx log_qpoch_inf(cplx a, const QParam& qp);

cplx qpoch_multi(const std::vector<cplx>& as, const QParam& qp);

// Jacobi theta function, bilateral series after argument reduction into the
// annulus |q|^{1/2} <= |x| <= |q|^{-1/2}.
cplx theta(const QParam& qp, cplx x);

// log theta(x); the value is assembled as reduction prefactor in log space
// plus log of the reduced series, so ratios of huge thetas stay finite.
cplx log_theta(const QParam& qp, cplx x);

// theta(a x) / theta(x) with shared reduction. Throws pole_error if
// theta(x) vanishes within guard distance.
cplx theta_ratio(const QParam& qp, cplx a, cplx x);

// Gamma_q(x) = ((q;q)_inf / (q^x;q)_inf) (1-q)^{1-x}, q real in (0,1).
cplx q_gamma(const QParam& qp, cplx x);

// E_q(z) = (-z;q)_inf.
cplx q_exp_E(const QParam& qp, cplx z);

// D_q f(x) = (f(x) - f(qx)) / ((1-q) x).
cplx q_derivative(const std::function<cplx(cplx)>& f, const QParam& qp, cplx x);

namespace detail {

// Shared adaptive stopping rule: a sum terminates once three consecutive
// terms fall below eps * |partial sum|; the cap throws convergence_error.
class StopRule {
public:
    StopRule(double eps, int cap, const char* what)
        : eps_(eps), cap_(cap), what_(what) {}

    // Returns true when summation may stop. Call after adding each term.
    bool done(double term_mag, double sum_mag);

private:
    double eps_;
    int cap_;
    const char* what_;
    int count_ = 0;
    int run_ = 0;
};

} // namespace detail

} // namespace qcf
