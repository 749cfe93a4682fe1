#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "qcf/resummation.hpp"

using qcf::cplx;
using qcf::QParam;

namespace {

double rel(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double chge_res(const std::function<cplx(cplx)>& u, const QParam& qp, cplx a, cplx b, cplx x) {
    cplx q = qp.q();
    cplx t1 = (cplx(1.0) - a * b * q * x) * u(q * q * x);
    cplx t2 = (cplx(1.0) - (a + b) * q * x) * u(q * x);
    cplx t3 = q * x * u(x);
    return std::abs(t1 - t2 - t3)
         / std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
}

// Zhang's connection formula RHS, assembled from primitives.
cplx zhang_rhs(cplx a, cplx b, cplx lam, const QParam& qp, cplx x) {
    cplx q = qp.q();
    auto half = [&](cplx u, cplx v) {
        cplx y = q / (u * v * x);
        cplx phi = qcf::phi21_continued(u, cplx(0.0), u * q / v, qp, y);
        return std::exp(qcf::log_qpoch_inf(v, qp) - qcf::log_qpoch_inf(v / u, qp)
                        + qcf::log_theta(qp, u * lam) - qcf::log_theta(qp, lam)
                        + qcf::log_theta(qp, q * u * x / lam)
                        - qcf::log_theta(qp, q * x / lam))
             * phi;
    };
    return half(a, b) + half(b, a);
}

// Coefficients of the solution series of the transformed equation, from its
// own three-term recurrence: a_n = [((a+b)q^n - q^{2n}) a_{n-1}
// + a b q^{2n-1} a_{n-2}] / (q^n - 1), a_0 = 1.
std::vector<cplx> transformed_eq_series_coeffs(cplx a, cplx b, const QParam& qp, int n_terms) {
    std::vector<cplx> c(static_cast<std::size_t>(n_terms));
    cplx q = qp.q();
    c[0] = cplx(1.0);
    if (n_terms > 1) c[1] = ((a + b) * q - q * q) / (q - cplx(1.0));
    for (int n = 2; n < n_terms; ++n) {
        cplx qn = qp.qn(n);
        c[static_cast<std::size_t>(n)] =
            (((a + b) * qn - qn * qn) * c[static_cast<std::size_t>(n - 1)]
             + a * b * qn * qn / q * c[static_cast<std::size_t>(n - 2)])
            / (qn - cplx(1.0));
    }
    return c;
}

// Taylor coefficients of g's product form by convolving the three factor
// series: (w;q)_inf = sum (-1)^k q^{k(k-1)/2} w^k/(q;q)_k and
// 1/(w;q)_inf = sum w^k/(q;q)_k.
std::vector<cplx> g_taylor_oracle(cplx a, cplx b, const QParam& qp, int n_terms) {
    auto poch_series = [&](cplx w0) {  // (w0 xi;q)_inf expanded in xi
        std::vector<cplx> c(static_cast<std::size_t>(n_terms), cplx(0.0));
        cplx term(1.0);
        for (int k = 0; k < n_terms; ++k) {
            c[static_cast<std::size_t>(k)] = term;
            term *= -qp.qn(k) * w0 / (cplx(1.0) - qp.qn(k + 1));
        }
        return c;
    };
    auto inv_poch_series = [&](cplx w0) {  // 1/(w0 xi;q)_inf
        std::vector<cplx> c(static_cast<std::size_t>(n_terms), cplx(0.0));
        cplx term(1.0);
        for (int k = 0; k < n_terms; ++k) {
            c[static_cast<std::size_t>(k)] = term;
            term *= w0 / (cplx(1.0) - qp.qn(k + 1));
        }
        return c;
    };
    auto conv = [&](const std::vector<cplx>& u, const std::vector<cplx>& v) {
        std::vector<cplx> c(static_cast<std::size_t>(n_terms), cplx(0.0));
        for (int i = 0; i < n_terms; ++i)
            for (int j = 0; i + j < n_terms; ++j)
                c[static_cast<std::size_t>(i + j)] += u[static_cast<std::size_t>(i)]
                                                    * v[static_cast<std::size_t>(j)];
        return c;
    };
    cplx q = qp.q();
    return conv(poch_series(-q * q), conv(inv_poch_series(-q * a), inv_poch_series(-q * b)));
}

cplx rand_annulus(std::mt19937& rng, double rlo, double rhi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = rlo * std::pow(rhi / rlo, u(rng));
    double phi = 2.0 * M_PI * u(rng);
    return std::polar(r, phi);
}

} // namespace

TEST_CASE("qborel_plus rescales coefficients") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));

    qcf::FormalSeries ones{{cplx(1.0)}};
    CHECK(qcf::qborel_plus(ones, qp).series.coeffs[0] == cplx(1.0));

    qcf::FormalSeries f = qcf::phi20_formal_coeffs(a, b, qp, 12);
    qcf::BorelImage img = qcf::qborel_plus(f, qp);
    CHECK(img.kind == qcf::BorelImage::Kind::first);
    // image coefficients are (a,b;q)_n/(q;q)_n (-1)^n
    for (int n = 0; n < 12; ++n) {
        cplx expect = qcf::qpoch_n(a, qp, n) * qcf::qpoch_n(b, qp, n)
                    / qcf::qpoch_n(qp.q(), qp, n) * qcf::ipow(cplx(-1.0), n);
        CHECK(rel(img.series.coeffs[static_cast<std::size_t>(n)], expect) < 1e-13);
    }
    // n = 2 scaling factor is q
    CHECK(rel(img.series.coeffs[2] / f.coeffs[2], cplx(qp.q())) < 1e-14);

    // the two Borel maps are mutually inverse coefficient scalings
    qcf::FormalSeries back = qcf::qborel_minus(img.series, qp).series;
    for (std::size_t n = 0; n < f.coeffs.size(); ++n)
        CHECK(rel(back.coeffs[n], f.coeffs[n]) < 1e-15);
}

TEST_CASE("qlaplace_plus: bilateral sum behaviour") {
    QParam qp{cplx(0.5)};
    cplx lam(1.1, 0.0);
    auto one = [](cplx) { return cplx(1.0); };

    // independent summation with a fixed wide window
    auto oracle = [&](cplx x) {
        cplx s(0.0);
        for (int n = -60; n <= 60; ++n)
            s += cplx(1.0) / qcf::theta(qp, qp.qn(n) * lam / x);
        return s;
    };
    for (cplx x : {cplx(0.7, 0.1), cplx(3.0, -0.4)}) {
        cplx v = qcf::qlaplace_plus(one, lam, qp, x);
        CHECK(rel(v, oracle(x)) < 1e-12);
        CHECK(rel(qcf::qlaplace_plus(one, lam, qp, qp.q() * x), oracle(qp.q() * x)) < 1e-12);
    }

    // stability against a tighter truncation policy
    QParam tight{cplx(0.5), 1e-16, 40000};
    cplx v1 = qcf::qlaplace_plus(one, lam, qp, cplx(0.7, 0.1));
    cplx v2 = qcf::qlaplace_plus(one, lam, tight, cplx(0.7, 0.1));
    CHECK(rel(v1, v2) < 1e-12);

    CHECK_THROWS_AS(qcf::qlaplace_plus(one, lam, qp, -lam * qp.qn(3)), qcf::spiral_error);
}

TEST_CASE("f20 is a resummed solution and matches Zhang's formula") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));
    cplx lam(1.1, 0.0);

    auto u = [&](cplx x) { return qcf::f20(a, b, lam, qp, x); };
    CHECK(chge_res(u, qp, a, b, cplx(0.4)) < 1e-9);
    CHECK(rel(qcf::f20(a, b, lam, qp, cplx(0.4)), zhang_rhs(a, b, lam, qp, cplx(0.4))) < 1e-8);

    // lambda -> q lambda leaves the spiral (and the sum) unchanged
    CHECK(rel(qcf::f20(a, b, lam, qp, cplx(0.9, 0.2)),
              qcf::f20(a, b, lam * qp.q(), qp, cplx(0.9, 0.2))) < 1e-12);

    CHECK_THROWS_AS(qcf::f20(a, b, lam, qp, -lam), qcf::spiral_error);
}

TEST_CASE("q-Stokes witness: distinct lambda give distinct resummations") {
    QParam qp{cplx(0.3)};
    cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));
    cplx lam(1.1, 0.0);
    cplx lam2 = lam * qp.pow_q(cplx(0.5));
    cplx x(0.45, -0.6);

    cplx f1 = qcf::f20(a, b, lam, qp, x);
    cplx f2 = qcf::f20(a, b, lam2, qp, x);
    CHECK(std::abs(f1 - f2) > 1e-6 * std::abs(f1));

    auto u1 = [&](cplx t) { return qcf::f20(a, b, lam, qp, t); };
    auto u2 = [&](cplx t) { return qcf::f20(a, b, lam2, qp, t); };
    CHECK(chge_res(u1, qp, a, b, x) < 1e-9);
    CHECK(chge_res(u2, qp, a, b, x) < 1e-9);
}

TEST_CASE("qborel_minus and the closed-form image g") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));

    qcf::FormalSeries ones{{cplx(1.0), cplx(1.0), cplx(1.0)}};
    qcf::BorelImage img = qcf::qborel_minus(ones, qp);
    CHECK(img.kind == qcf::BorelImage::Kind::second);
    CHECK(img.series.coeffs[0] == cplx(1.0));
    CHECK(rel(img.series.coeffs[2], cplx(1.0) / qp.q()) < 1e-14);

    // B^- of the transformed-equation solution series matches g's Taylor
    // coefficients from the product form
    const int N = 41;
    std::vector<cplx> f_coeffs = transformed_eq_series_coeffs(a, b, qp, N);
    qcf::FormalSeries fs{f_coeffs};
    qcf::FormalSeries bm = qcf::qborel_minus(fs, qp).series;
    std::vector<cplx> g_taylor = g_taylor_oracle(a, b, qp, N);
    for (int n = 0; n < N; ++n)
        CHECK(rel(bm.coeffs[static_cast<std::size_t>(n)],
                  g_taylor[static_cast<std::size_t>(n)]) < 1e-11);
}

TEST_CASE("g_closed_form: value, functional equation, poles") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));
    cplx q = qp.q();

    CHECK(rel(qcf::g_closed_form(a, b, qp, cplx(0.0)), cplx(1.0)) < 1e-14);

    std::mt19937 rng(29);
    int checked = 0;
    while (checked < 100) {
        cplx xi = rand_annulus(rng, 0.05, 20.0);
        cplx g0, g1;
        try {
            g0 = qcf::g_closed_form(a, b, qp, xi);
            g1 = qcf::g_closed_form(a, b, qp, q * xi);
        } catch (const qcf::pole_error&) {
            continue;
        }
        ++checked;
        cplx lhs = g1 * (cplx(1.0) + q * q * xi);
        cplx rhs = (cplx(1.0) + a * q * xi) * (cplx(1.0) + b * q * xi) * g0;
        CHECK(rel(lhs, rhs) < 1e-12);
    }

    CHECK_THROWS_AS(qcf::g_closed_form(a, b, qp, -1.0 / (a * q)), qcf::pole_error);
}

TEST_CASE("qlaplace_minus_quadrature: elementary images") {
    QParam qp{cplx(0.5)};
    qcf::ContourSpec c{0.6};
    auto one = [](cplx) { return cplx(1.0); };
    auto id = [](cplx xi) { return xi; };
    for (cplx x : {cplx(0.3), cplx(0.9, 0.4), cplx(2.0, -1.0)}) {
        CHECK(rel(qcf::qlaplace_minus_quadrature(one, c, qp, x), cplx(1.0)) < 1e-12);
        // L^-(xi)(x) = q^{T(1)} x = x
        CHECK(rel(qcf::qlaplace_minus_quadrature(id, c, qp, x), x) < 1e-12);
    }
    CHECK_THROWS_AS(qcf::qlaplace_minus_quadrature(one, qcf::ContourSpec{-1.0}, qp, cplx(1.0)),
                    qcf::parameter_error);
}

TEST_CASE("main connection identity: u2, residue sum and quadrature agree") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));
    cplx x(0.6, 0.0);

    cplx u2 = qcf::u2_solution(a, b, qp, x);
    cplx rsum = qcf::f21_residue_sum(a, b, qp, x);
    CHECK(rel(u2, rsum) < 1e-10);

    double r = 0.4 * std::min(1.0 / std::abs(a * qp.q()), 1.0 / std::abs(b * qp.q()));
    cplx quad = qcf::qlaplace_minus_quadrature(
        [&](cplx xi) { return qcf::g_closed_form(a, b, qp, xi); }, qcf::ContourSpec{r}, qp, x);
    // the contour integral produces the entire solution of the transformed
    // equation, i.e. u2(x) theta(-qx)
    cplx via_quad = quad / qcf::theta(qp, -qp.q() * x);
    CHECK(rel(via_quad, rsum) < 1e-9);
    CHECK(rel(via_quad, u2) < 1e-9);

    CHECK_THROWS_AS(qcf::f21_residue_sum(a, b, qp, qp.qn(-2)), qcf::spiral_error);
}

TEST_CASE("three-way agreement on admissible random points") {
    std::mt19937 rng(31);
    for (double qv : {0.3, 0.5, 0.7}) {
        QParam qp{cplx(qv)};
        cplx a = qp.pow_q(cplx(0.3)), b = qp.pow_q(cplx(0.7));
        qcf::SpiralSet excl{{cplx(1.0), cplx(1.0) / (a * b)}, 5e-3};
        qcf::ContourSpec c = qcf::default_contour_for_g(a, b, qp);
        int done = 0;
        while (done < 10) {
            cplx x = rand_annulus(rng, 0.2, 5.0);
            if (excl.contains(qp, x)) continue;
            ++done;
            cplx u2 = qcf::u2_solution(a, b, qp, x);
            cplx rsum = qcf::f21_residue_sum(a, b, qp, x);
            cplx quad = qcf::qlaplace_minus_quadrature(
                [&](cplx xi) { return qcf::g_closed_form(a, b, qp, xi); }, c, qp, x);
            cplx via_quad = quad / qcf::theta(qp, -qp.q() * x);
            CHECK(rel(u2, rsum) < 1e-9);
            CHECK(rel(u2, via_quad) < 1e-9);
        }
    }
}

TEST_CASE("Borel-Laplace round trip") {
    QParam qp{cplx(0.5)};

    // truncated geometric series
    qcf::FormalSeries geo{std::vector<cplx>(13, cplx(1.0))};
    qcf::VerificationReport r1 = qcf::borel_laplace_roundtrip_check(geo, qp, cplx(0.3));
    CHECK(r1.pass);
    CHECK(r1.rel_diff < 1e-10);

    // constant
    qcf::FormalSeries cst{{cplx(2.0, -1.0)}};
    qcf::VerificationReport r2 = qcf::borel_laplace_roundtrip_check(cst, qp, cplx(0.8, 0.1));
    CHECK(r2.rel_diff < 1e-13);

    // E_q series: coefficients q^{n(n-1)/2}/(q;q)_n
    qcf::FormalSeries eq;
    for (int n = 0; n < 40; ++n)
        eq.coeffs.push_back(qp.qn(static_cast<long long>(n) * (n - 1) / 2)
                            / qcf::qpoch_n(qp.q(), qp, n));
    qcf::VerificationReport r3 = qcf::borel_laplace_roundtrip_check(eq, qp, cplx(0.2));
    CHECK(r3.pass);
    CHECK(r3.rel_diff < 1e-10);
    // and its truncated sum agrees with the product form
    CHECK(rel(r3.lhs, qcf::q_exp_E(qp, cplx(0.2))) < 1e-12);
}

TEST_CASE("operational relation: exact coefficient equality") {
    QParam qp{cplx(0.5)};

    qcf::FormalSeries f3{{cplx(1.0), cplx(1.0), cplx(1.0)}};
    CHECK(qcf::operational_relation_check(f3, 0, 1, qp).pass);
    CHECK(qcf::operational_relation_check(f3, 1, 0, qp).pass);

    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int m = 0; m <= 4; ++m) {
        for (int l = 0; l <= 4; ++l) {
            qcf::FormalSeries f;
            for (int n = 0; n < 8; ++n) f.coeffs.emplace_back(u(rng), u(rng));
            qcf::VerificationReport rep = qcf::operational_relation_check(f, m, l, qp);
            CHECK(rep.pass);
            CHECK(rep.rel_diff <= 1e-14);
        }
    }
}

TEST_CASE("spiral-pole residues and the shifted Pochhammer identity") {
    QParam qp{cplx(0.5)};
    cplx lam(0.7, 0.0);

    CHECK(rel(qcf::residue_at_spiral_pole(lam, 0, qp),
              cplx(-1.0) / qcf::qpoch_inf(qp.q(), qp)) < 1e-14);
    CHECK(rel(qcf::residue_at_spiral_pole(lam, 1, qp),
              qp.q() / ((cplx(1.0) - qp.q()) * qcf::qpoch_inf(qp.q(), qp))) < 1e-14);

    // small-circle contour oracle around xi = lambda q^{-k}
    for (int k = 0; k <= 3; ++k) {
        cplx center = lam * qp.qn(-k);
        double rho = 0.05 * std::abs(center);
        int N = 512;
        cplx acc(0.0);
        for (int j = 0; j < N; ++j) {
            double th = 2.0 * M_PI * j / N;
            cplx xi = center + std::polar(rho, th);
            acc += std::polar(rho, th)
                 / (qcf::qpoch_inf(xi / lam, qp) * xi);
        }
        cplx oracle = acc / static_cast<double>(N);
        CHECK(rel(qcf::residue_at_spiral_pole(lam, k, qp), oracle) < 1e-10);
    }

    CHECK(qcf::shifted_poch_identity_check(lam, 0, qp).abs_diff == 0.0);
    qcf::VerificationReport rep = qcf::shifted_poch_identity_check(lam, 2, qp);
    CHECK(rep.pass);
    CHECK(rep.rel_diff < 1e-12);
    CHECK_THROWS_AS(qcf::shifted_poch_identity_check(qp.qn(2), 1, qp), qcf::degeneracy_error);
}

TEST_CASE("f21_residue_sum degeneracy guard") {
    QParam qp{cplx(0.5)};
    cplx a = qp.pow_q(cplx(0.3));
    CHECK_THROWS_AS(qcf::f21_residue_sum(a, a * qp.q(), qp, cplx(0.6)), qcf::degeneracy_error);
}
