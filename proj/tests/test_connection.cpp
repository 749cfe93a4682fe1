#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qcf/connection.hpp"

using qcf::cplx;
using qcf::QParam;

namespace {

double rel(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

qcf::ConnectionContext default_ctx(double qv) {
    QParam qp{cplx(qv)};
    return qcf::ConnectionContext(qp.pow_q(cplx(0.3)), qp.pow_q(cplx(0.7)), cplx(1.1),
                                  cplx(1.3), qp);
}

cplx rand_annulus(std::mt19937& rng, double rlo, double rhi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = rlo * std::pow(rhi / rlo, u(rng));
    double phi = 2.0 * M_PI * u(rng);
    return std::polar(r, phi);
}

} // namespace

TEST_CASE("ConnectionContext validation") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3));
    CHECK_THROWS_AS(qcf::ConnectionContext(a, a, cplx(1.1), cplx(1.3), qp),
                    qcf::degeneracy_error);
    CHECK_THROWS_AS(qcf::ConnectionContext(a, a * qp.qn(2) * (1.0 + 1e-8), cplx(1.1), cplx(1.3), qp),
                    qcf::degeneracy_error);
    CHECK_THROWS_AS(qcf::ConnectionContext(qp.qn(-3), a, cplx(1.1), cplx(1.3), qp),
                    qcf::degeneracy_error);
    CHECK_THROWS_AS(qcf::ConnectionContext(a, cplx(0.0), cplx(1.1), cplx(1.3), qp),
                    qcf::parameter_error);
}

TEST_CASE("chge_residual grounds") {
    qcf::ConnectionContext ctx = default_ctx(0.5);
    CHECK(qcf::chge_residual([](cplx) { return cplx(0.0); }, ctx, cplx(0.7)) == 0.0);
    CHECK(qcf::chge_residual([&](cplx t) { return qcf::u2_solution(ctx.a, ctx.b, ctx.qp, t); },
                             ctx, cplx(0.35)) < 1e-10);
    // constants are not solutions: residual = |qx(1-a)(1-b)| / max-term
    CHECK(qcf::chge_residual([](cplx) { return cplx(1.0); }, ctx, cplx(1.0, 0.1)) > 0.01);
}

TEST_CASE("S_mu solves the equation; swap exchanges roles; prefactor shift") {
    qcf::ConnectionContext ctx = default_ctx(0.5);
    CHECK(qcf::chge_residual([&](cplx t) { return qcf::S_mu(ctx, false, t); }, ctx, cplx(3.7))
          < 1e-10);
    CHECK(rel(qcf::S_mu(ctx, true, cplx(2.4, 0.5)),
              qcf::v_solution(ctx.b, ctx.a, ctx.mu, ctx.qp, cplx(2.4, 0.5))) == 0.0);

    // theta prefactor satisfies u(qx) = u(x)/a
    cplx x(1.9, 0.4);
    cplx r0 = qcf::theta_ratio(ctx.qp, ctx.a, ctx.mu * x);
    cplx r1 = qcf::theta_ratio(ctx.qp, ctx.a, ctx.mu * ctx.qp.q() * x);
    CHECK(rel(r1, r0 / ctx.a) < 1e-12);
}

TEST_CASE("connection coefficients are q-elliptic and mu-gauge") {
    qcf::ConnectionContext ctx = default_ctx(0.5);
    std::mt19937 rng(41);
    int done = 0;
    while (done < 12) {
        cplx x = rand_annulus(rng, 0.3, 4.0);
        if (!ctx.admissible(x, 1e-3)) continue;
        ++done;
        for (bool swap : {false, true}) {
            cplx c1 = qcf::C_mu_lambda(ctx, swap, x);
            CHECK(rel(qcf::C_mu_lambda(ctx, swap, ctx.qp.q() * x), c1) < 1e-10);
            cplx c2 = qcf::C_mu(ctx, swap, x);
            CHECK(rel(qcf::C_mu(ctx, swap, ctx.qp.q() * x), c2) < 1e-10);
        }

        // C_mu(a,b) S_mu(a,b) is independent of mu (pure gauge)
        qcf::ConnectionContext ctx2(ctx.a, ctx.b, ctx.lambda, 2.0 * ctx.mu, ctx.qp);
        if (!ctx2.admissible(x, 1e-3)) continue;
        cplx p1 = qcf::C_mu(ctx, false, x) * qcf::S_mu(ctx, false, x);
        cplx p2 = qcf::C_mu(ctx2, false, x) * qcf::S_mu(ctx2, false, x);
        CHECK(rel(p1, p2) < 1e-10);
    }
}

TEST_CASE("connection matrix rows") {
    qcf::ConnectionContext ctx = default_ctx(0.5);

    qcf::ConnectionMatrixResult m = qcf::connection_matrix(ctx, cplx(2.6));
    CHECK(m.row2.pass);
    CHECK(m.row2.rel_diff < 1e-9);
    CHECK(m.row1.pass);
    CHECK(m.row1.rel_diff < 1e-8);

    // mu -> 0.9 mu leaves both row combinations unchanged
    qcf::ConnectionContext ctx2(ctx.a, ctx.b, ctx.lambda, 0.9 * ctx.mu, ctx.qp);
    qcf::ConnectionMatrixResult m2 = qcf::connection_matrix(ctx2, cplx(2.6));
    CHECK(rel(m.row1.rhs, m2.row1.rhs) < 1e-9);
    CHECK(rel(m.row2.rhs, m2.row2.rhs) < 1e-9);
}

TEST_CASE("matrix rows hold on admissible samples across q") {
    std::mt19937 rng(43);
    for (double qv : {0.3, 0.5, 0.7}) {
        qcf::ConnectionContext ctx = default_ctx(qv);
        int done = 0;
        while (done < 8) {
            cplx x = rand_annulus(rng, 0.2, 5.0);
            if (!ctx.admissible(x, 5e-3)) continue;
            ++done;
            qcf::ConnectionMatrixResult m = qcf::connection_matrix(ctx, x);
            CHECK(m.row1.rel_diff < 1e-8);
            CHECK(m.row2.rel_diff < 1e-8);
        }
    }
}

TEST_CASE("verify_zhang") {
    qcf::ConnectionContext ctx = default_ctx(0.5);
    qcf::VerificationReport rep = qcf::verify_zhang(ctx, cplx(0.8));
    CHECK(rep.pass);
    CHECK(rep.rel_diff < 1e-8);

    // both sides really solve the equation
    CHECK(qcf::chge_residual(
              [&](cplx t) { return qcf::f20(ctx.a, ctx.b, ctx.lambda, ctx.qp, t); }, ctx,
              cplx(0.8)) < 1e-9);

    // approaching [-lambda;q]: still accurate at 10x guard distance, refused
    // inside the guard band
    cplx near10 = -ctx.lambda * (1.0 + 10.0 * qcf::kDefaultGuard);
    qcf::VerificationReport rep10 = qcf::verify_zhang(ctx, near10);
    CHECK(rep10.rel_diff < 1e-8);
    cplx inside = -ctx.lambda * (1.0 + 0.5 * qcf::kDefaultGuard);
    CHECK_THROWS_AS(qcf::verify_zhang(ctx, inside), qcf::spiral_error);
}

TEST_CASE("Wronskian-style independence of the S pair") {
    std::mt19937 rng(47);
    for (double qv : {0.3, 0.5, 0.7}) {
        qcf::ConnectionContext ctx = default_ctx(qv);
        int done = 0;
        while (done < 6) {
            cplx x = rand_annulus(rng, 0.3, 4.0);
            if (!ctx.admissible(x, 1e-2) || !ctx.admissible(ctx.qp.q() * x, 1e-2)) continue;
            ++done;
            cplx s00 = qcf::S_mu(ctx, false, x), s01 = qcf::S_mu(ctx, true, x);
            cplx s10 = qcf::S_mu(ctx, false, ctx.qp.q() * x),
                 s11 = qcf::S_mu(ctx, true, ctx.qp.q() * x);
            double det = std::abs(s00 * s11 - s01 * s10);
            double scale = std::max(std::abs(s00), std::abs(s10))
                         * std::max(std::abs(s01), std::abs(s11));
            CHECK(det / scale > 1e-3);
        }
    }
}
