#include "qcf/connection.hpp"

#include <algorithm>
#include <cmath>

namespace qcf {

ConnectionContext::ConnectionContext(cplx a_, cplx b_, cplx lambda_, cplx mu_, const QParam& qp_)
    : a(a_), b(b_), lambda(lambda_), mu(mu_), qp(qp_) {
    if (a == cplx(0.0) || b == cplx(0.0) || lambda == cplx(0.0) || mu == cplx(0.0))
        throw parameter_error("ConnectionContext: a, b, lambda, mu must be nonzero");
    if (near_q_power(qp, b / a, kDefaultGuard))
        throw degeneracy_error("ConnectionContext: alpha - beta in Z (b/a on q^Z)");
    long long m = 0;
    if ((near_q_power(qp, a, kDefaultGuard, &m) && m <= 0)
        || (near_q_power(qp, b, kDefaultGuard, &m) && m <= 0))
        throw degeneracy_error("ConnectionContext: a or b on q^{-N} (terminating degeneracy)");
    exclusions.anchors = {cplx(1.0),          cplx(1.0) / (a * b), -lambda,
                          -cplx(1.0) / mu,    -cplx(1.0) / (a * mu),
                          -cplx(1.0) / (b * mu)};
}

bool ConnectionContext::admissible(cplx x, double clearance) const {
    SpiralSet s = exclusions;
    s.guard = clearance;
    return x != cplx(0.0) && !s.contains(qp, x);
}

double chge_residual(const std::function<cplx(cplx)>& u, const ConnectionContext& ctx, cplx x) {
    cplx q = ctx.qp.q();
    cplx t1 = (cplx(1.0) - ctx.a * ctx.b * q * x) * u(q * q * x);
    cplx t2 = (cplx(1.0) - (ctx.a + ctx.b) * q * x) * u(q * x);
    cplx t3 = q * x * u(x);
    return std::abs(t1 - t2 - t3)
         / std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
}

cplx S_mu(const ConnectionContext& ctx, bool swap, cplx x) {
    return swap ? v_solution(ctx.b, ctx.a, ctx.mu, ctx.qp, x)
                : v_solution(ctx.a, ctx.b, ctx.mu, ctx.qp, x);
}

namespace {

void check_mu_spiral(const ConnectionContext& ctx, cplx u, cplx x) {
    if (near_theta_zero(ctx.qp, u * ctx.mu * x))
        throw spiral_error("connection: theta(a mu x) vanishes (x on [-1/(a mu);q])");
    if (near_theta_zero(ctx.qp, ctx.mu * x))
        throw spiral_error("connection: theta(mu x) vanishes (x on [-1/mu;q])");
}

} // namespace

cplx C_mu_lambda(const ConnectionContext& ctx, bool swap, cplx x) {
    const QParam& qp = ctx.qp;
    cplx q = qp.q();
    cplx u = swap ? ctx.b : ctx.a;
    cplx v = swap ? ctx.a : ctx.b;
    if (x == cplx(0.0))
        throw domain_error("C_mu_lambda: x must be nonzero");
    if (near_theta_zero(qp, ctx.lambda))
        throw pole_error("C_mu_lambda: theta(lambda) vanishes (lambda on [-1;q])");
    if (near_theta_zero(qp, q * x / ctx.lambda))
        throw spiral_error("C_mu_lambda: theta(qx/lambda) vanishes (x on [-lambda;q])");
    check_mu_spiral(ctx, u, x);
    return std::exp(log_qpoch_inf(v, qp) - log_qpoch_inf(v / u, qp)
                    + log_theta(qp, u * ctx.lambda) - log_theta(qp, ctx.lambda)
                    + log_theta(qp, q * u * x / ctx.lambda) - log_theta(qp, q * x / ctx.lambda)
                    + log_theta(qp, ctx.mu * x) - log_theta(qp, u * ctx.mu * x));
}

cplx C_mu(const ConnectionContext& ctx, bool swap, cplx x) {
    const QParam& qp = ctx.qp;
    cplx q = qp.q();
    cplx u = swap ? ctx.b : ctx.a;
    cplx v = swap ? ctx.a : ctx.b;
    if (x == cplx(0.0))
        throw domain_error("C_mu: x must be nonzero");
    SpiralSet unit{{cplx(1.0)}};
    if (unit.contains(qp, x))
        throw spiral_error("C_mu: theta(-qx) vanishes (x on [1;q])");
    check_mu_spiral(ctx, u, x);
    return std::exp(log_qpoch_inf(q / u, qp) - log_qpoch_inf(v / u, qp) - log_qpoch_inf(q, qp)
                    + log_theta(qp, -u * q * x) - log_theta(qp, -q * x)
                    + log_theta(qp, ctx.mu * x) - log_theta(qp, u * ctx.mu * x));
}

ConnectionMatrixResult connection_matrix(const ConnectionContext& ctx, cplx x) {
    ConnectionMatrixResult r;
    r.c_lam_ab = C_mu_lambda(ctx, false, x);
    r.c_lam_ba = C_mu_lambda(ctx, true, x);
    r.c_mu_ab = C_mu(ctx, false, x);
    r.c_mu_ba = C_mu(ctx, true, x);
    r.s_ab = S_mu(ctx, false, x);
    r.s_ba = S_mu(ctx, true, x);

    ParamList params{{"q", ctx.qp.q()}, {"a", ctx.a},   {"b", ctx.b},
                     {"lambda", ctx.lambda}, {"mu", ctx.mu}, {"x", x}};
    cplx lhs1 = f20(ctx.a, ctx.b, ctx.lambda, ctx.qp, x);
    r.row1 = make_report("matrix_row1", params, lhs1,
                         r.c_lam_ab * r.s_ab + r.c_lam_ba * r.s_ba, 1e-8);
    cplx lhs2 = u2_solution(ctx.a, ctx.b, ctx.qp, x);
    r.row2 = make_report("matrix_row2", params, lhs2,
                         r.c_mu_ab * r.s_ab + r.c_mu_ba * r.s_ba, 1e-9);
    return r;
}

VerificationReport verify_zhang(const ConnectionContext& ctx, cplx x) {
    const QParam& qp = ctx.qp;
    cplx q = qp.q();
    cplx lhs = f20(ctx.a, ctx.b, ctx.lambda, qp, x);
    auto half = [&](cplx u, cplx v) {
        cplx y = q / (u * v * x);
        cplx phi = phi21_continued(u, cplx(0.0), u * q / v, qp, y);
        return std::exp(log_qpoch_inf(v, qp) - log_qpoch_inf(v / u, qp)
                        + log_theta(qp, u * ctx.lambda) - log_theta(qp, ctx.lambda)
                        + log_theta(qp, q * u * x / ctx.lambda)
                        - log_theta(qp, q * x / ctx.lambda))
             * phi;
    };
    cplx rhs = half(ctx.a, ctx.b) + half(ctx.b, ctx.a);
    return make_report("zhang_cz",
                       {{"q", q}, {"a", ctx.a}, {"b", ctx.b}, {"lambda", ctx.lambda}, {"x", x}},
                       lhs, rhs, 1e-8);
}

} // namespace qcf
