#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lpsemi/contspace.hpp"
#include "lpsemi/report.hpp"
#include "lpsemi/seqspace.hpp"
#include "lpsemi/specfun.hpp"

namespace lpsemi {

// The Poisson transform pair
//   P(f)(n)  = integral_0^inf f(t) e^{-t} t^n/n! dt
//   P*(a)(t) = e^{-t} sum_n a(n) t^n/n!
// On the closed-form family both directions are exact.

namespace detail {

// P of one term, c (s-a)^k e^{-lambda(s-a)} 1[s>=a]:
//   c e^{-a}/n! sum_{j<=n} binom(n,j) a^{n-j} (k+j)!/(1+lambda)^{k+j+1}
// built by a downward product recurrence (all factors stay in range).
inline cplx poisson_term(const Term& t, std::size_t n)
{
    const cplx z = 1.0 + t.lambda;
    // T_n = (k+n)!/n! / z^{k+n+1}
    cplx top = std::exp(-log_gamma(cplx(static_cast<double>(n) + 1.0)) +
                        log_gamma(cplx(static_cast<double>(t.k + n) + 1.0)) -
                        (static_cast<double>(t.k + n) + 1.0) * std::log(z));
    if (t.a == 0.0) return t.c * top;
    cplx sum = top;
    for (std::size_t j = n; j-- > 0;) {
        // T_{j} = T_{j+1} * (j+1)/(n-j) * a * z / (k+j+1)
        top *= (static_cast<double>(j) + 1.0) / static_cast<double>(n - j) * t.a * z /
               (static_cast<double>(t.k + j) + 1.0);
        sum += top;
    }
    return t.c * std::exp(cplx(-t.a)) * sum;
}

} // namespace detail

/// Closed-form Poisson transform of a family member, as a truncated sequence
/// with a geometric tail certificate fitted from the entry bounds.
inline TruncatedSequence poisson_forward(const TestFunction& f, std::size_t N)
{
    validate(f);
    TruncatedSequence out = TruncatedSequence::zeros(N);
    // sound entry bound: the same transform of |c| (s-a)^k e^{-Re lambda (s-a)}
    std::vector<double> bound(N + 8, 0.0);
    for (const Term& t : f.terms) {
        Term abs_term{std::abs(t.c), t.k, cplx(t.lambda.real()), t.a};
        for (std::size_t n = 0; n < N + 8; ++n) {
            const cplx v = detail::poisson_term(t, n);
            if (n < N) out.values[n] += v;
            bound[n] += detail::poisson_term(abs_term, n).real();
        }
    }
    out.valid_len = N;
    if (f.terms.empty()) return out;
    double rate = inf;
    for (const Term& t : f.terms) rate = std::min(rate, 1.0 + t.lambda.real());
    double ratio = 1.0 / rate;
    for (std::size_t n = N; n + 1 < N + 8; ++n)
        if (bound[n] > 0.0) ratio = std::max(ratio, bound[n + 1] / bound[n]);
    out.tail = TailModel::Geometric;
    out.tail_ratio = std::min(ratio, 1.0 - 1e-9);
    out.tail_coeff = bound[N];
    out.tail_note = "entrywise transform bound of the absolute-value function";
    return out;
}

/// Independent Gauss-Laguerre route for P(f)(n): per term, after u = s - a
/// and x = (1 + Re lambda) u the integrand against x^k e^{-x} is polynomial
/// (times a unimodular phase when lambda has an imaginary part).
inline cplx poisson_forward_quadrature(const TestFunction& f, std::size_t n, int order = 96)
{
    validate(f);
    cplx sum = 0.0;
    for (const Term& t : f.terms) {
        const double g = 1.0 + t.lambda.real();
        const quad::Rule& r = quad::laguerre(order, static_cast<double>(t.k));
        cplx acc = 0.0;
        const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
        for (int i = 0; i < r.order(); ++i) {
            const double u = r.nodes[i] / g;
            const cplx osc = std::exp(cplx(0.0, -t.lambda.imag() * u));
            const double poly = n == 0 ? 0.0 : static_cast<double>(n) * std::log(u + t.a);
            acc += r.weights[i] * osc * std::exp(poly - lg_n);
        }
        sum += t.c * std::exp(-t.a) * acc / std::pow(g, static_cast<double>(t.k) + 1.0);
    }
    return sum;
}

/// P of the power t^{alpha-1}/Gamma(alpha) (the non-integer-power route,
/// handled only inside the quadrature path): equals k^alpha(n).
inline double poisson_forward_power(double alpha, std::size_t n, int order = 96)
{
    if (!(alpha > 0.0)) throw DomainError("poisson_forward_power: requires alpha > 0");
    // integral t^(alpha-1+n) e^{-t} dt / (Gamma(alpha) n!) on Laguerre nodes
    // with weight t^(alpha-1) e^{-t}
    const quad::Rule& r = quad::laguerre(order, alpha - 1.0);
    double acc = 0.0;
    const double lg = std::lgamma(alpha) + std::lgamma(static_cast<double>(n) + 1.0);
    for (int i = 0; i < r.order(); ++i)
        acc += r.weights[i] * std::exp(static_cast<double>(n) * std::log(r.nodes[i]) - lg);
    return acc;
}

/// P*(a) of a truncated sequence is exactly the family member
///   sum_n a(n)/n! t^n e^{-t}.
inline TestFunction poisson_adjoint_function(const TruncatedSequence& a)
{
    std::vector<Term> terms;
    double inv_fact = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (n > 0) inv_fact /= static_cast<double>(n);
        if (a.values[n] != cplx(0.0))
            terms.push_back(Term{a.values[n] * inv_fact, static_cast<unsigned>(n), cplx(1.0), 0.0});
    }
    return TestFunction(std::move(terms));
}

/// P*(a)(t) by the series, with the truncation gate: the first omitted
/// Poisson weight times the last trusted entry must be below `gate`.
inline std::vector<cplx> poisson_adjoint(const TruncatedSequence& a, const std::vector<double>& t_samples,
                                         double gate = 1e-14)
{
    std::vector<cplx> out;
    out.reserve(t_samples.size());
    for (double t : t_samples) {
        if (!(t >= 0.0)) throw DomainError("poisson_adjoint: requires t >= 0");
        if (a.tail != TailModel::Zero) {
            const double omitted = poisson_kernel(a.size(), t) * a.tail_coeff;
            if (omitted > gate)
                throw ConvergenceError("poisson_adjoint: truncation gate not met at t = " +
                                       std::to_string(t));
        }
        cplx s = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) s += a.values[n] * poisson_kernel(n, t);
        out.push_back(s);
    }
    return out;
}

/// P(P*(a))(m) = 2^{-(m+1)} sum_n k^{m+1}(n) 2^{-n} a(n), with the geometric
/// tail certificate of the weights folded against the sequence tail.
inline TruncatedSequence pp_star(const TruncatedSequence& a, std::size_t m_max)
{
    TruncatedSequence out = TruncatedSequence::zeros(m_max);
    for (std::size_t m = 0; m < m_max; ++m) {
        cplx sum = 0.0;
        double w = 1.0; // k^{m+1}(n) 2^{-n}
        for (std::size_t n = 0; n < a.size(); ++n) {
            if (n > 0) w *= 0.5 * (static_cast<double>(m) + static_cast<double>(n)) / static_cast<double>(n);
            sum += w * a.values[n];
        }
        out.values[m] = sum * std::pow(0.5, static_cast<double>(m) + 1.0);
    }
    out.valid_len = m_max;
    if (a.tail != TailModel::Zero) {
        // tail ratio of the weight is (m+n+1)/(2(n+1)) -> 1/2
        const std::size_t n0 = a.size();
        for (std::size_t m = 0; m < m_max; ++m) {
            const double rho = 0.5 * a.tail_ratio * (static_cast<double>(m + n0) + 1.0) /
                               (static_cast<double>(n0) + 1.0);
            if (rho >= 1.0) {
                out.valid_len = std::min(out.valid_len, m);
                continue;
            }
            const double w0 = cesaro_number(static_cast<double>(m) + 1.0, n0) *
                              std::pow(0.5, static_cast<double>(n0 + m) + 1.0);
            const double tail = w0 * a.tail_coeff / (1.0 - rho);
            if (tail > 1e-12) out.valid_len = std::min(out.valid_len, m);
        }
    }
    return out;
}

/// P*(P(f))(t) by the Bessel-kernel integral e^{-t} integral f(s) e^{-s}
/// I0(2 sqrt(ts)) ds, cross-checked against the series route
/// sum_n p_n(t) P(f)(n). Both values are returned.
struct PStarPResult {
    std::vector<cplx> bessel_route;
    std::vector<cplx> series_route;
    double max_disagreement = 0.0;
};

inline PStarPResult p_star_p(const TestFunction& f, const std::vector<double>& t_samples,
                             double tol = 1e-8)
{
    validate(f);
    PStarPResult res;
    for (double t : t_samples) {
        if (!(t >= 0.0)) throw DomainError("p_star_p: requires t >= 0");
        // Bessel route; I0(2 sqrt(ts)) e^{-s-t} decays like e^{-(sqrt s - sqrt t)^2}
        const double cut = detail::integration_cutoff(f, 1.0) + 4.0 * t + 20.0;
        auto integrand = [&](double s) -> cplx {
            return evaluate(f, s) * std::exp(-s) * bessel_i0(2.0 * std::sqrt(t * s));
        };
        std::vector<double> breaks;
        for (const Term& tm : f.terms)
            if (tm.a > 0.0 && tm.a < cut) breaks.push_back(tm.a);
        quad::Estimate est = quad::integrate_split(integrand, 0.0, cut, breaks, 1e-13);
        const cplx bessel = std::exp(-t) * est.value;

        // series route with the factorial tail of p_n(t) and geometric decay of P(f)(n)
        cplx series = 0.0;
        std::size_t n = 0;
        double kern = std::exp(-t);
        int quiet = 0;
        for (; n < 4096; ++n) {
            if (n > 0) kern *= t / static_cast<double>(n);
            const cplx pf = [&] {
                cplx v = 0.0;
                for (const Term& tm : f.terms) v += detail::poisson_term(tm, n);
                return v;
            }();
            series += kern * pf;
            if (std::abs(kern * pf) < 1e-16 * (1.0 + std::abs(series))) {
                if (++quiet > 3 && static_cast<double>(n) > t) break;
            } else {
                quiet = 0;
            }
        }
        res.bessel_route.push_back(bessel);
        res.series_route.push_back(series);
        res.max_disagreement = std::max(res.max_disagreement, std::abs(bessel - series));
    }
    if (res.max_disagreement > tol)
        throw QuadratureError("p_star_p: Bessel and series routes disagree beyond tolerance");
    return res;
}

/// Closed-form convolution of two single-exponential family members:
///   e_lam * e_mu = (e_mu - e_lam)/(lam - mu),   e_lam * e_lam = t e_lam.
inline TestFunction convolve_exponentials(const TestFunction& f, const TestFunction& g)
{
    std::vector<Term> out;
    for (const Term& x : f.terms) {
        for (const Term& y : g.terms) {
            if (x.k != 0 || y.k != 0 || x.a != 0.0 || y.a != 0.0)
                throw DomainError("convolve_exponentials: supports pure exponential terms only");
            if (std::abs(x.lambda - y.lambda) < 1e-12) {
                out.push_back(Term{x.c * y.c, 1, x.lambda, 0.0});
            } else {
                const cplx d = x.lambda - y.lambda;
                out.push_back(Term{x.c * y.c / d, 0, y.lambda, 0.0});
                out.push_back(Term{-x.c * y.c / d, 0, x.lambda, 0.0});
            }
        }
    }
    return canonicalize(TestFunction(std::move(out)));
}

/// Convolution homomorphism checks:
///   P(f * g) = P(f) * P(g)           (function side)
///   P*(delta_1 * (a * b)) = P*(a) * P*(b)   (sequence side)
inline std::vector<VerificationReport> check_convolution_homomorphisms(
    const TestFunction& f, const TestFunction& g, const TruncatedSequence& a,
    const TruncatedSequence& b, std::size_t N, const std::vector<double>& t_samples, double tol)
{
    std::vector<VerificationReport> out;
    {
        const TestFunction fg = convolve_exponentials(f, g);
        const TruncatedSequence lhs = poisson_forward(fg, N);
        const TruncatedSequence rhs = convolve(poisson_forward(f, N), poisson_forward(g, N));
        out.push_back(make_report("poisson.convolution.forward", {{"n", std::to_string(N)}},
                                  max_abs_diff(lhs, rhs), tol));
    }
    {
        // left side: shift the convolution by one, then P*
        const TruncatedSequence ab = convolve(a, b, true);
        TruncatedSequence shifted = TruncatedSequence::zeros(ab.size() + 1);
        for (std::size_t n = 0; n < ab.size(); ++n) shifted.values[n + 1] = ab.values[n];
        const TestFunction lhs = poisson_adjoint_function(shifted);
        // P*(a) * P*(b) is the L^1 convolution of the two family members,
        // which is closed form term by term:
        //   (t^n e^{-t}) * (t^m e^{-t}) = n! m!/(n+m+1)! t^{n+m+1} e^{-t}
        std::vector<Term> conv_terms;
        for (std::size_t n = 0; n < a.size(); ++n) {
            for (std::size_t m = 0; m < b.size(); ++m) {
                const cplx c = a.values[n] * b.values[m];
                if (c == cplx(0.0)) continue;
                const double lg = std::lgamma(static_cast<double>(n + m) + 2.0);
                conv_terms.push_back(Term{c * std::exp(-lg), static_cast<unsigned>(n + m + 1), cplx(1.0), 0.0});
            }
        }
        const TestFunction rhs_exact = canonicalize(TestFunction(std::move(conv_terms)));
        double resid = 0.0;
        for (double t : t_samples)
            resid = std::max(resid, std::abs(evaluate(lhs, t) - evaluate(rhs_exact, t)));
        out.push_back(make_report("poisson.convolution.adjoint", {}, resid, tol));
    }
    return out;
}

/// Transform conjugation checks:
///   Zeta(P(f))(z) = L f(1 - z)            for |z| < 1
///   L(P*(a))(z)  = Zeta(a)(1/(1+z))/(1+z) for Re z > 0
inline std::vector<VerificationReport> check_transform_conjugation(const TestFunction& f,
                                                                   const TruncatedSequence& a,
                                                                   const std::vector<cplx>& z_samples,
                                                                   std::size_t N, double tol)
{
    std::vector<VerificationReport> out;
    const TruncatedSequence pf = poisson_forward(f, N);
    double r1 = 0.0, r2 = 0.0;
    for (const cplx& z : z_samples) {
        if (std::abs(z) < 1.0) {
            double tail = 0.0;
            const cplx lhs = zeta_transform(pf, z, &tail);
            const cplx rhs = laplace(f, 1.0 - z);
            r1 = std::max(r1, std::abs(lhs - rhs) - tail);
        }
        if (z.real() > 0.0) {
            const cplx lhs = laplace(poisson_adjoint_function(a), z);
            const cplx rhs = zeta_transform(a, 1.0 / (1.0 + z)) / (1.0 + z);
            r2 = std::max(r2, std::abs(lhs - rhs));
        }
    }
    out.push_back(make_report("poisson.conjugation.zeta_laplace", {{"n", std::to_string(N)}}, r1, tol));
    out.push_back(make_report("poisson.conjugation.laplace_zeta", {}, r2, tol));
    return out;
}

/// Bilinear adjoint pairing <P f, b> vs <f, P* b>, both sides closed form.
inline double adjoint_pairing_residual(const TestFunction& f, const TruncatedSequence& b)
{
    const TruncatedSequence pf = poisson_forward(f, b.size());
    const cplx lhs = pairing(pf, b);
    const TestFunction product = multiply(f, poisson_adjoint_function(b));
    const cplx rhs = laplace(product, cplx(0.0));
    return std::abs(lhs - rhs);
}

} // namespace lpsemi
