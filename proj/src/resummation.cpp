#include "qcf/resummation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcf {

namespace {

long long tri(long long n) { return n * (n - 1) / 2; }

FormalSeries borel_scale(const FormalSeries& f, const QParam& qp, int sign) {
    FormalSeries out;
    out.coeffs.reserve(f.coeffs.size());
    for (std::size_t n = 0; n < f.coeffs.size(); ++n)
        out.coeffs.push_back(f.coeffs[n] * qp.qn(sign * tri(static_cast<long long>(n))));
    return out;
}

} // namespace

ContourSpec default_contour_for_g(cplx a, cplx b, const QParam& qp) {
    double r = 0.4 * std::min({1.0 / std::abs(a * qp.q()), 1.0 / std::abs(b * qp.q()), 1.0});
    return ContourSpec{r};
}

BorelImage qborel_plus(const FormalSeries& f, const QParam& qp) {
    return {BorelImage::Kind::first, borel_scale(f, qp, +1)};
}

BorelImage qborel_minus(const FormalSeries& f, const QParam& qp) {
    return {BorelImage::Kind::second, borel_scale(f, qp, -1)};
}

namespace {

// Bilateral sum over the spiral rungs, indexed so the caller can cache
// whatever phi(q^n lambda) costs. Starts at the rung nearest |x| where the
// theta weight is smallest, then expands in both directions.
cplx laplace_plus_indexed(const std::function<cplx(long long)>& phi_at, cplx lambda,
                          const QParam& qp, cplx x) {
    if (x == cplx(0.0) || lambda == cplx(0.0))
        throw domain_error("qlaplace_plus: x and lambda must be nonzero");
    SpiralSet excl{{-lambda}};
    if (excl.contains(qp, x))
        throw spiral_error("qlaplace_plus: x on [-lambda;q] (theta weight vanishes)");

    auto term = [&](long long n) {
        cplx xi = qp.qn(n) * lambda;
        return phi_at(n) * std::exp(-log_theta(qp, xi / x));
    };

    long long n0 = std::llround(std::log(std::abs(x) / std::abs(lambda)) / std::log(qp.abs_q()));
    cplx sum = term(n0);
    for (int dir : {+1, -1}) {
        int run = 0;
        for (int steps = 1;; ++steps) {
            if (steps > qp.max_terms())
                throw convergence_error("qlaplace_plus: term cap reached");
            cplx t = term(n0 + dir * steps);
            sum += t;
            if (std::abs(t) < qp.eps() * std::max(std::abs(sum), 1e-300))
                ++run;
            else
                run = 0;
            if (run >= 3 && steps >= 8) break;
        }
    }
    return sum;
}

} // namespace

cplx qlaplace_plus(const std::function<cplx(cplx)>& phi, cplx lambda, const QParam& qp, cplx x) {
    return laplace_plus_indexed([&](long long n) { return phi(qp.qn(n) * lambda); }, lambda, qp,
                                x);
}

cplx f20(cplx a, cplx b, cplx lambda, const QParam& qp, cplx x) {
    // B^+ 2phi0(a,b;-;q,.) has coefficients (a,b;q)_n/(q;q)_n (-1)^n, i.e. it
    // is 2phi1(a,b;0;q,-xi); the ladder continues it along [lambda;q].
    Phi21Ladder ladder(a, b, cplx(0.0), qp, -lambda);
    return laplace_plus_indexed([&](long long n) { return ladder.at(n); }, lambda, qp, x);
}

cplx g_closed_form(cplx a, cplx b, const QParam& qp, cplx xi) {
    long long m = 0;
    if (near_q_power(qp, -qp.q() * a * xi, kDefaultGuard, &m) && m <= 0)
        throw pole_error("g: xi within guard of a pole -1/(a q^{k+1})");
    if (near_q_power(qp, -qp.q() * b * xi, kDefaultGuard, &m) && m <= 0)
        throw pole_error("g: xi within guard of a pole -1/(b q^{k+1})");
    cplx q = qp.q();
    return std::exp(log_qpoch_inf(-q * q * xi, qp) - log_qpoch_inf(-q * a * xi, qp)
                    - log_qpoch_inf(-q * b * xi, qp));
}

cplx qlaplace_minus_quadrature(const std::function<cplx(cplx)>& g, const ContourSpec& c,
                               const QParam& qp, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("qlaplace_minus: x must be nonzero");
    if (!(c.radius > 0.0))
        throw parameter_error("qlaplace_minus: contour radius must be positive");
    int n = std::max(c.min_nodes, 64);

    // (1/2 pi i) oint h(xi) dxi/xi over |xi| = r is the average of h over
    // equispaced nodes; node doubling keeps previous evaluations.
    auto h = [&](double angle) {
        cplx xi = std::polar(c.radius, angle);
        return g(xi) * theta(qp, x / xi);
    };
    cplx acc(0.0);
    for (int j = 0; j < n; ++j) acc += h(2.0 * M_PI * j / n);
    cplx estimate = acc / static_cast<double>(n);

    double tol = std::max(10.0 * qp.eps(), 1e-13);
    double prev_diff = std::numeric_limits<double>::infinity();
    while (true) {
        cplx odd(0.0);
        for (int j = 0; j < n; ++j) odd += h(2.0 * M_PI * (j + 0.5) / n);
        cplx refined = 0.5 * (estimate + odd / static_cast<double>(n));
        n *= 2;
        double diff = std::abs(refined - estimate);
        double scale = std::max(std::abs(refined), 1e-300);
        estimate = refined;
        if (diff <= tol * scale) return estimate;
        // rounding floor: doubling stopped helping while already well below
        // any tolerance this transform is used at
        if (diff >= 0.25 * prev_diff && diff <= 1e-10 * scale) return estimate;
        prev_diff = diff;
        if (n > c.max_nodes)
            throw convergence_error("qlaplace_minus: node cap reached before convergence");
    }
}

VerificationReport borel_laplace_roundtrip_check(const FormalSeries& f, const QParam& qp, cplx x,
                                                 double radius) {
    FormalSeries g = qborel_minus(f, qp).series;
    double r = radius;
    if (!(r > 0.0)) {
        // keep the polynomial's top term O(1) on the circle
        double top = std::abs(g.coeffs.back());
        double n = static_cast<double>(g.coeffs.size() - 1);
        r = (top > 1.0 && n > 0) ? std::pow(top, -1.0 / n) : 0.5;
        r = std::min(r, 0.5);
    }
    cplx lhs = f.eval(x);
    cplx rhs = qlaplace_minus_quadrature([&](cplx xi) { return g.eval(xi); },
                                         ContourSpec{r}, qp, x);
    return make_report("lemma2_6_roundtrip",
                       {{"q", qp.q()}, {"x", x}, {"r", cplx(r)},
                        {"n_terms", cplx(static_cast<double>(f.coeffs.size()))}},
                       lhs, rhs, 1e-10);
}

VerificationReport operational_relation_check(const FormalSeries& f, int m, int l,
                                              const QParam& qp) {
    // lhs: B^- (x^m sigma_q^l f)
    FormalSeries lhs = qborel_minus(f.shifted(qp, l).mul_monomial(m), qp).series;
    // rhs: q^{-m(m-1)/2} xi^m sigma_q^{l-m} (B^- f)
    FormalSeries rhs = qborel_minus(f, qp).series.shifted(qp, l - m).mul_monomial(m);
    cplx scale = qp.qn(-tri(m));
    for (cplx& c : rhs.coeffs) c *= scale;

    double worst = 0.0;
    cplx worst_l(0.0), worst_r(0.0);
    for (std::size_t n = 0; n < lhs.coeffs.size(); ++n) {
        cplx L = lhs.coeffs[n], R = rhs.coeffs[n];
        double dev = std::abs(L - R) / std::max({1.0, std::abs(L), std::abs(R)});
        if (dev >= worst) {
            worst = dev;
            worst_l = L;
            worst_r = R;
        }
    }
    VerificationReport rep = make_report(
        "lemma2_7_operational",
        {{"q", qp.q()}, {"m", cplx(static_cast<double>(m))}, {"l", cplx(static_cast<double>(l))}},
        worst_l, worst_r, 1e-14, "max normalized coefficient deviation");
    rep.abs_diff = worst;
    rep.rel_diff = worst;
    rep.pass = worst <= rep.tolerance;
    return rep;
}

cplx residue_at_spiral_pole(cplx /*lambda*/, int k, const QParam& qp) {
    // the residue does not depend on the anchor
    return ipow(cplx(-1.0), k + 1) * qp.qn(static_cast<long long>(k) * (k + 1) / 2)
         / (qpoch_n(qp.q(), qp, k) * qpoch_inf(qp.q(), qp));
}

VerificationReport shifted_poch_identity_check(cplx lambda, int k, const QParam& qp) {
    if (near_q_power(qp, lambda, kDefaultGuard))
        throw degeneracy_error("shifted_poch_identity: lambda on q^Z");
    cplx lhs = cplx(1.0) / qpoch_inf(lambda * qp.qn(-k), qp);
    cplx rhs = ipow(-lambda, -k) * qp.qn(static_cast<long long>(k) * (k + 1) / 2)
             / (qpoch_inf(lambda, qp) * qpoch_n(qp.q() / lambda, qp, k));
    return make_report("lemma2_8_shifted_poch",
                       {{"q", qp.q()}, {"lambda", lambda}, {"k", cplx(static_cast<double>(k))}},
                       lhs, rhs, 1e-12);
}

cplx f21_residue_sum(cplx a, cplx b, const QParam& qp, cplx x) {
    if (x == cplx(0.0))
        throw domain_error("f21_residue_sum: x must be nonzero");
    SpiralSet unit{{cplx(1.0)}};
    if (unit.contains(qp, x))
        throw spiral_error("f21_residue_sum: x on [1;q] (theta(-qx) vanishes)");
    if (near_q_power(qp, b / a, kDefaultGuard))
        throw degeneracy_error("f21_residue_sum: b/a on q^Z, connection constants blow up");

    cplx q = qp.q();
    cplx y = q / (a * b * x);
    auto half = [&](cplx u, cplx v) {
        cplx phi = phi21_continued(u, cplx(0.0), u * q / v, qp, y);
        return std::exp(log_qpoch_inf(q / u, qp) - log_qpoch_inf(v / u, qp)
                        - log_qpoch_inf(q, qp) + log_theta(qp, -u * q * x)
                        - log_theta(qp, -q * x))
             * phi;
    };
    return half(a, b) + half(b, a);
}

} // namespace qcf
