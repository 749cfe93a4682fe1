#pragma once

#include "qcf/qseries.hpp"
#include "qcf/report.hpp"

namespace qcf {

// Coefficient image of a formal series under a q-Borel map.
// first kind:  a_n -> a_n q^{+n(n-1)/2}   (divergent -> convergent)
// second kind: a_n -> a_n q^{-n(n-1)/2}
struct BorelImage {
    enum class Kind { first, second };
    Kind kind;
    FormalSeries series;
};

// Circle |xi| = r for the q-Laplace transform of the second kind. The radius
// must keep every pole of the integrand strictly outside.
struct ContourSpec {
    double radius = 0.0;
    int min_nodes = 64;
    int max_nodes = 1 << 16;
};

// r = 0.4 min(1/|aq|, 1/|bq|, 1): all poles of g strictly outside the circle.
ContourSpec default_contour_for_g(cplx a, cplx b, const QParam& qp);

BorelImage qborel_plus(const FormalSeries& f, const QParam& qp);
BorelImage qborel_minus(const FormalSeries& f, const QParam& qp);

// q-Laplace transform of the first kind:
// (L^+_{q,lambda} phi)(x) = sum_{n in Z} phi(q^n lambda) / theta(q^n lambda / x),
// a bilateral sum over the spiral [lambda;q], truncated adaptively in both
// directions starting from the dominant rung.
cplx qlaplace_plus(const std::function<cplx(cplx)>& phi, cplx lambda, const QParam& qp, cplx x);

// Resummation of the divergent 2phi0: f20 = L^+_{q,lambda} o B^+_q 2phi0.
// The Borel image is the c = 0 Heine series at argument -xi, evaluated along
// the spiral by ladder continuation.
cplx f20(cplx a, cplx b, cplx lambda, const QParam& qp, cplx x);

// Closed form of the second-kind Borel image of the solution series:
// g(xi) = (-q^2 xi;q)_inf / ((-qa xi;q)_inf (-qb xi;q)_inf),
// simple poles at xi = -1/(a q^{k+1}), -1/(b q^{k+1}).
cplx g_closed_form(cplx a, cplx b, const QParam& qp, cplx xi);

// q-Laplace transform of the second kind:
// (L^-_q g)(x) = (1/2 pi i) oint_{|xi|=r} g(xi) theta(x/xi) dxi/xi,
// computed by trapezoid quadrature with node doubling.
cplx qlaplace_minus_quadrature(const std::function<cplx(cplx)>& g, const ContourSpec& c,
                               const QParam& qp, cplx x);

// L^- o B^- f = f on a truncated series; radius <= 0 picks one automatically
// from the size of the transformed coefficients.
VerificationReport borel_laplace_roundtrip_check(const FormalSeries& f, const QParam& qp, cplx x,
                                                 double radius = 0.0);

// B^-(x^m sigma_q^l) = q^{-m(m-1)/2} xi^m sigma_q^{l-m} B^-, compared as
// coefficient lists; deviation is normalized per coefficient.
VerificationReport operational_relation_check(const FormalSeries& f, int m, int l,
                                              const QParam& qp);

// res{ 1/((xi/lambda;q)_inf xi) : xi = lambda q^{-k} }
//   = (-1)^{k+1} q^{k(k+1)/2} / ((q;q)_k (q;q)_inf).
cplx residue_at_spiral_pole(cplx lambda, int k, const QParam& qp);

// 1/(lambda q^{-k};q)_inf = (-lambda)^{-k} q^{k(k+1)/2} / ((lambda;q)_inf (q/lambda;q)_k),
// valid for lambda off q^Z.
VerificationReport shifted_poch_identity_check(cplx lambda, int k, const QParam& qp);

// Residue summation of L^- g divided by theta(-qx): the two-term
// theta-weighted expression equal to u2(x),
//   ((q/a;q)_inf/((b/a,q;q)_inf)) (theta(-aqx)/theta(-qx)) 2phi1(a,0;aq/b;q,q/abx)
//   + the same with a and b exchanged.
cplx f21_residue_sum(cplx a, cplx b, const QParam& qp, cplx x);

} // namespace qcf
