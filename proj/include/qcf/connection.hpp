#pragma once

#include "qcf/resummation.hpp"

namespace qcf {

// Connection-problem parameters with the derived exclusion zones. The
// exclusion set collects the zero spirals of every theta denominator
// appearing in the matrix identity (written here with the anchors of the
// actual zero sets: theta(mu x) vanishes on x in [-1/mu;q], and the series
// argument q/(abx) meets [1;q] on x in [1/(ab);q]).
struct ConnectionContext {
    cplx a;
    cplx b;
    cplx lambda;
    cplx mu;
    QParam qp;
    SpiralSet exclusions;

    ConnectionContext(cplx a_, cplx b_, cplx lambda_, cplx mu_, const QParam& qp_);

    bool admissible(cplx x, double clearance) const;
};

// Relative residual of (1-abqx) u(q^2x) - {1-(a+b)qx} u(qx) - qx u(x) = 0,
// normalized by the largest of the three terms. The ground-truth test for
// everything claiming to solve the equation.
double chge_residual(const std::function<cplx(cplx)>& u, const ConnectionContext& ctx, cplx x);

// S_mu(a,b;q,x); swap exchanges a and b (giving v2 instead of v1).
cplx S_mu(const ConnectionContext& ctx, bool swap, cplx x);

// C_mu^lambda(a,b;q,x) = ((b;q)_inf/(b/a;q)_inf) (theta(a lambda)/theta(lambda))
//   (theta(qax/lambda)/theta(qx/lambda)) (theta(mu x)/theta(a mu x))
// Single-valuedness under x -> e^{2 pi i} x is structural: the coefficients
// are functions of the point x, never of a branch of log x.
cplx C_mu_lambda(const ConnectionContext& ctx, bool swap, cplx x);

// C_mu(a,b;q,x) = ((q/a;q)_inf/((b/a,q;q)_inf)) (theta(-aqx)/theta(-qx))
//   (theta(mu x)/theta(a mu x))
cplx C_mu(const ConnectionContext& ctx, bool swap, cplx x);

struct ConnectionMatrixResult {
    cplx c_lam_ab, c_lam_ba;  // first row
    cplx c_mu_ab, c_mu_ba;    // second row
    cplx s_ab, s_ba;          // solution pair at infinity
    VerificationReport row1;  // f20 = C^lam(a,b) S(a,b) + C^lam(b,a) S(b,a)
    VerificationReport row2;  // f21 = C(a,b) S(a,b) + C(b,a) S(b,a)
};

ConnectionMatrixResult connection_matrix(const ConnectionContext& ctx, cplx x);

// f20 through the Borel-Laplace pipeline against the theta-weighted
// two-term connection expression.
VerificationReport verify_zhang(const ConnectionContext& ctx, cplx x);

} // namespace qcf
