#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lpsemi/core.hpp"
#include "lpsemi/quadrature.hpp"

namespace lpsemi {

/// Stopping policy for the power series in this header: stop once
/// |term| < eps * |partial sum| holds for `run` consecutive terms.
struct SeriesPolicy {
    double eps = 1e-15;
    int max_terms = 10000;
    int run = 3;
};

namespace detail {

template <class Term>
inline cplx sum_series(cplx first_term, Term&& next, const SeriesPolicy& pol, const char* what,
                       int* terms_used = nullptr, double* tail_estimate = nullptr)
{
    cplx term = first_term;
    cplx sum = term;
    int quiet = 0;
    for (int n = 0; n < pol.max_terms; ++n) {
        term = next(term, n);
        sum += term;
        if (std::abs(term) < pol.eps * std::abs(sum)) {
            if (++quiet >= pol.run) {
                if (terms_used) *terms_used = n + 2;
                if (tail_estimate) *tail_estimate = std::abs(term);
                return sum;
            }
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError(std::string(what) + ": series tail bound not met within max terms");
}

} // namespace detail

/// log Gamma via the Lanczos approximation (g = 7, 9 coefficients) with the
/// reflection formula for Re z < 1/2. The imaginary part is on an arbitrary
/// branch; every use here exponentiates differences, where branches cancel.
inline cplx log_gamma(cplx z)
{
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    const cplx zz = z - 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (zz + static_cast<double>(i));
    const cplx t = zz + 7.5;
    return 0.5 * std::log(2.0 * pi) + (zz + 0.5) * std::log(t) - t + std::log(x);
}

/// Euler Gamma. Exact std::tgamma on the real axis, Lanczos elsewhere.
inline cplx gamma(cplx z)
{
    if (is_nonpositive_integer(z)) throw PoleError("gamma: pole at non-positive integer");
    if (z.imag() == 0.0) {
        const double g = std::tgamma(z.real());
        if (std::isfinite(g)) return cplx(g, 0.0);
    }
    return std::exp(log_gamma(z));
}

/// Euler Beta, B(u, v) = Gamma(u) Gamma(v) / Gamma(u + v), Re u, Re v > 0.
inline cplx beta(cplx u, cplx v)
{
    if (!(u.real() > 0.0 && v.real() > 0.0)) throw DomainError("beta: requires Re u > 0 and Re v > 0");
    return std::exp(log_gamma(u) + log_gamma(v) - log_gamma(u + v));
}

/// Kummer confluent hypergeometric 1F1(a; c; z) by its power series.
inline cplx kummer_1f1(cplx a, cplx c, cplx z, const SeriesPolicy& pol = {})
{
    if (is_nonpositive_integer(c)) throw PoleError("kummer_1f1: c is a non-positive integer");
    if (z == 0.0) return cplx(1.0, 0.0);
    auto next = [&](cplx term, int n) {
        const double dn = static_cast<double>(n);
        return term * (a + dn) / (c + dn) * z / (dn + 1.0);
    };
    return detail::sum_series(cplx(1.0, 0.0), next, pol, "kummer_1f1");
}

enum class Beta1Method { Quadrature, KummerSeries, BetaSeries };

/// Result of a modified-Beta evaluation, with the route actually used and
/// the size of the first neglected contribution.
struct Beta1Result {
    cplx value{0.0, 0.0};
    Beta1Method method = Beta1Method::BetaSeries;
    int terms = 0;
    double tail_estimate = 0.0;
};

namespace detail {

// Taylor coefficients of (1-t)^(u-1) e^(sign * t) around t = 0.
inline std::vector<cplx> beta1_cap_coeffs(cplx u, double sign, int count)
{
    std::vector<cplx> binom(count), expc(count), out(count, cplx(0.0));
    binom[0] = 1.0;
    for (int j = 1; j < count; ++j) binom[j] = binom[j - 1] * (static_cast<double>(j) - u) / static_cast<double>(j);
    expc[0] = 1.0;
    for (int i = 1; i < count; ++i) expc[i] = expc[i - 1] * sign / static_cast<double>(i);
    for (int m = 0; m < count; ++m)
        for (int j = 0; j <= m; ++j) out[m] += binom[j] * expc[m - j];
    return out;
}

// integral_0^eps (1-t)^(u-1) t^(v-1) e^(sign t) dt via the Taylor expansion
// of the analytic factor; the singular power integrates in closed form.
inline cplx beta1_endcap(cplx u, cplx v, double eps, double sign)
{
    constexpr int M = 48;
    const std::vector<cplx> c = beta1_cap_coeffs(u, sign, M);
    cplx sum = 0.0;
    const cplx eps_v = std::exp(v * std::log(eps));
    double eps_m = 1.0;
    for (int m = 0; m < M; ++m) {
        sum += c[m] * eps_v * eps_m / (v + static_cast<double>(m));
        eps_m *= eps;
    }
    return sum;
}

inline cplx beta1_quadrature(cplx u, cplx v, int order, double* err)
{
    if (u.imag() == 0.0 && v.imag() == 0.0) {
        // Real exponents match the Gauss-Jacobi weight exactly; the e^{-t}
        // remainder is entire, so convergence is spectral.
        auto run = [&](int n) {
            const quad::Rule& r = quad::jacobi01(n, u.real() - 1.0, v.real() - 1.0);
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::exp(-r.nodes[i]);
            return s;
        };
        const double lo = run(order), hi = run(order + order / 2);
        if (err) *err = std::abs(hi - lo);
        return cplx(hi, 0.0);
    }
    // Complex exponents oscillate at the endpoints, which no fixed real
    // Jacobi weight captures; integrate the caps by endpoint power series
    // and the analytic core by Gauss-Legendre.
    const double eps = 0.25;
    auto core = [&](int n) {
        const quad::Rule& r = quad::legendre(n);
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = 0.5 + 0.25 * r.nodes[i]; // map to [eps, 1-eps]
            s += r.weights[i] * std::exp((u - 1.0) * std::log1p(-t) + (v - 1.0) * std::log(t) - t);
        }
        return 0.25 * s;
    };
    const cplx caps = beta1_endcap(u, v, eps, -1.0) + std::exp(-1.0) * beta1_endcap(v, u, eps, 1.0);
    const cplx lo = core(order), hi = core(order + order / 2);
    if (err) *err = std::abs(hi - lo);
    return caps + hi;
}

} // namespace detail

/// Modified Beta function B1(u, v) = integral_0^1 (1-t)^(u-1) t^(v-1) e^{-t} dt
/// on Re u > 0, Re v > 0, by the requested route.
inline Beta1Result beta1_ex(cplx u, cplx v, Beta1Method method = Beta1Method::BetaSeries,
                            const SeriesPolicy& pol = {}, int quad_order = 64)
{
    if (!(u.real() > 0.0 && v.real() > 0.0)) throw DomainError("beta1: requires Re u > 0 and Re v > 0");
    Beta1Result res;
    res.method = method;
    switch (method) {
    case Beta1Method::Quadrature: {
        res.value = detail::beta1_quadrature(u, v, quad_order, &res.tail_estimate);
        res.terms = quad_order;
        break;
    }
    case Beta1Method::KummerSeries: {
        res.value = std::exp(-1.0) * beta(u, v) * kummer_1f1(u, u + v, cplx(1.0, 0.0), pol);
        break;
    }
    case Beta1Method::BetaSeries: {
        // e^{-1} sum_n B(u+n, v) / n!, with B-ratio recurrence between terms.
        auto next = [&](cplx term, int n) {
            const double dn = static_cast<double>(n);
            return term * (u + dn) / ((u + v + dn) * (dn + 1.0));
        };
        res.value = std::exp(-1.0) *
                    detail::sum_series(beta(u, v), next, pol, "beta1", &res.terms, &res.tail_estimate);
        break;
    }
    }
    return res;
}

inline cplx beta1(cplx u, cplx v, Beta1Method method = Beta1Method::BetaSeries)
{
    return beta1_ex(u, v, method).value;
}

/// Cesaro number k^alpha(n) = Gamma(n + alpha) / (Gamma(alpha) n!) by the
/// stable product recurrence; valid for every real alpha, including the
/// poles of Gamma(alpha), where the recurrence yields the correct zeros.
inline double cesaro_number(double alpha, std::size_t n)
{
    double k = 1.0;
    for (std::size_t j = 1; j <= n; ++j) k *= (alpha + static_cast<double>(j) - 1.0) / static_cast<double>(j);
    return k;
}

inline std::vector<double> cesaro_numbers(double alpha, std::size_t count)
{
    std::vector<double> out(count);
    double k = 1.0;
    for (std::size_t j = 0; j < count; ++j) {
        if (j > 0) k *= (alpha + static_cast<double>(j) - 1.0) / static_cast<double>(j);
        out[j] = k;
    }
    return out;
}

/// k^z(n) with complex order z (same product recurrence).
inline std::vector<cplx> cesaro_numbers_c(cplx z, std::size_t count)
{
    std::vector<cplx> out(count);
    cplx k = 1.0;
    for (std::size_t j = 0; j < count; ++j) {
        if (j > 0) k *= (z + (static_cast<double>(j) - 1.0)) / static_cast<double>(j);
        out[j] = k;
    }
    return out;
}

/// Prabhakar (three-parameter Mittag-Leffler) function
///   E^gamma_{alpha,beta}(z) = sum_n k^gamma(n) z^n / Gamma(alpha n + beta),
/// alpha, beta > 0.
inline cplx prabhakar(double gamma_, double alpha, double beta_, cplx z, const SeriesPolicy& pol = {})
{
    if (!(alpha > 0.0 && beta_ > 0.0)) throw DomainError("prabhakar: requires alpha > 0 and beta > 0");
    double lg_prev = std::lgamma(beta_);
    auto next = [&, lg_prev](cplx term, int n) mutable {
        const double dn = static_cast<double>(n);
        const double lg_next = std::lgamma(alpha * (dn + 1.0) + beta_);
        term *= (gamma_ + dn) / (dn + 1.0) * z * std::exp(lg_prev - lg_next);
        lg_prev = lg_next;
        return term;
    };
    return detail::sum_series(cplx(std::exp(-lg_prev), 0.0), next, pol, "prabhakar");
}

/// Modified Bessel I0 by its (all-positive) power series.
inline double bessel_i0(double z)
{
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 1000; ++n) {
        term *= q / (static_cast<double>(n) * n);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

/// Poisson kernel p_n(t) = e^{-t} t^n / n!, evaluated in log form so large n
/// and t stay in range.
inline double poisson_kernel(std::size_t n, double t)
{
    if (t < 0.0) throw DomainError("poisson_kernel: requires t >= 0");
    if (t == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-t + static_cast<double>(n) * std::log(t) - std::lgamma(static_cast<double>(n) + 1.0));
}

/// Lower incomplete gamma, s > 0, x >= 0. Series for x < s + 1, Lentz
/// continued fraction for the upper tail otherwise.
inline double lower_incomplete_gamma(double s, double x)
{
    if (!(s > 0.0)) throw DomainError("lower_incomplete_gamma: requires s > 0");
    if (x < 0.0) throw DomainError("lower_incomplete_gamma: requires x >= 0");
    if (x == 0.0) return 0.0;
    const double lgs = std::lgamma(s);
    if (x < s + 1.0) {
        double ap = s, term = 1.0 / s, sum = term;
        for (int n = 0; n < 10000; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16)
                return sum * std::exp(-x + s * std::log(x));
        }
        throw ConvergenceError("lower_incomplete_gamma: series did not converge");
    }
    // Upper tail Gamma(s, x) via modified Lentz continued fraction.
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            const double upper = std::exp(-x + s * std::log(x)) * h;
            return std::exp(lgs) - upper;
        }
    }
    throw ConvergenceError("lower_incomplete_gamma: continued fraction did not converge");
}

} // namespace lpsemi
