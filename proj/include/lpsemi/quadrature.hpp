#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "lpsemi/core.hpp"

namespace lpsemi::quad {

/// Nodes and weights of a Gauss rule, sorted by node.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// QL with implicit shifts on a symmetric tridiagonal matrix, tracking only
// the first row of the accumulated eigenvector matrix (all that Golub-Welsch
// needs). d: diagonal, e: subdiagonal (e[i] couples i and i+1, e[n-1] is
// workspace), z: first-row components, initialised to (1, 0, ..., 0).
inline void ql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z)
{
    const int n = static_cast<int>(d.size());
    if (n <= 1) return;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 4.0 * std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m == l) break;
            if (++iter > 80) throw ConvergenceError("tridiagonal QL iteration did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                const double zi = z[i], zi1 = z[i + 1];
                z[i + 1] = s * zi + c * zi1;
                z[i] = c * zi - s * zi1;
            }
            if (r == 0.0 && i >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// Gauss rule from the orthogonal-polynomial recurrence
//   p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1},   mu0 = integral of the weight.
inline Rule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta, double mu0)
{
    const int n = static_cast<int>(alpha.size());
    std::vector<double> d = alpha;
    std::vector<double> e(n, 0.0);
    for (int k = 0; k + 1 < n; ++k) e[k] = std::sqrt(beta[k + 1]);
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    ql_first_row(d, e, z);

    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });

    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = d[idx[k]];
        rule.weights[k] = mu0 * z[idx[k]] * z[idx[k]];
    }
    return rule;
}

inline double lg(double x) { return std::lgamma(x); }

} // namespace detail

/// Gauss-Legendre on [-1, 1], weight 1.
inline Rule gauss_legendre(int n)
{
    std::vector<double> alpha(n, 0.0), beta(n, 0.0);
    beta[0] = 2.0;
    for (int k = 1; k < n; ++k) beta[k] = 1.0 / (4.0 - 1.0 / (static_cast<double>(k) * k));
    return detail::golub_welsch(alpha, beta, 2.0);
}

/// Gauss-Jacobi on [0, 1] with weight (1-x)^a x^b, a, b > -1.
inline Rule gauss_jacobi01(int n, double a, double b)
{
    if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi weight exponents must exceed -1");
    // Recurrence coefficients for weight (1-x)^a (1+x)^b on [-1, 1].
    std::vector<double> alpha(n, 0.0), beta(n, 0.0);
    const double ab = a + b;
    alpha[0] = (b - a) / (ab + 2.0);
    beta[0] = std::exp((ab + 1.0) * std::log(2.0) + detail::lg(a + 1.0) + detail::lg(b + 1.0) - detail::lg(ab + 2.0));
    for (int k = 1; k < n; ++k) {
        const double k2ab = 2.0 * k + ab;
        alpha[k] = (b * b - a * a) / (k2ab * (k2ab + 2.0));
        if (k == 1)
            beta[k] = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        else
            beta[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) /
                      (k2ab * k2ab * (k2ab + 1.0) * (k2ab - 1.0));
    }
    Rule r = detail::golub_welsch(alpha, beta, beta[0]);
    // Map xi in [-1,1] to x = (1+xi)/2; the weight picks up 2^-(a+b+1).
    const double scale = std::exp(-(ab + 1.0) * std::log(2.0));
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = 0.5 * (1.0 + r.nodes[k]);
        r.weights[k] *= scale;
    }
    return r;
}

/// Generalized Gauss-Laguerre on [0, inf) with weight x^a e^{-x}, a > -1.
inline Rule gauss_laguerre(int n, double a = 0.0)
{
    if (!(a > -1.0)) throw DomainError("Laguerre weight exponent must exceed -1");
    std::vector<double> alpha(n, 0.0), beta(n, 0.0);
    beta[0] = std::exp(detail::lg(a + 1.0));
    for (int k = 0; k < n; ++k) {
        alpha[k] = 2.0 * k + a + 1.0;
        if (k > 0) beta[k] = k * (k + a);
    }
    return detail::golub_welsch(alpha, beta, beta[0]);
}

namespace detail {

struct RuleKey {
    int kind;
    int n;
    std::uint64_t a_bits;
    std::uint64_t b_bits;
    bool operator<(const RuleKey& o) const
    {
        return std::tie(kind, n, a_bits, b_bits) < std::tie(o.kind, o.n, o.a_bits, o.b_bits);
    }
};

inline std::uint64_t bits(double x)
{
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

inline const Rule& cached(int kind, int n, double a, double b)
{
    static std::map<RuleKey, Rule> cache;
    static std::mutex mtx;
    const RuleKey key{kind, n, bits(a), bits(b)};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Rule r = kind == 0   ? gauss_legendre(n)
                 : kind == 1 ? gauss_jacobi01(n, a, b)
                             : gauss_laguerre(n, a);
        it = cache.emplace(key, std::move(r)).first;
    }
    return it->second;
}

} // namespace detail

/// Cached rule accessors; tables are computed once and shared read-only.
inline const Rule& legendre(int n) { return detail::cached(0, n, 0.0, 0.0); }
inline const Rule& jacobi01(int n, double a, double b) { return detail::cached(1, n, a, b); }
inline const Rule& laguerre(int n, double a = 0.0) { return detail::cached(2, n, a, 0.0); }

/// Value plus an error estimate, as returned by the adaptive integrator.
struct Estimate {
    cplx value{0.0, 0.0};
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 abscissae/weights on [-1, 1] (positive half).
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, cplx& value, double& error)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx kron = wgk[7] * f(c);
    cplx gauss = wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const cplx fl = f(c - h * xgk[i]);
        const cplx fr = f(c + h * xgk[i]);
        kron += wgk[i] * (fl + fr);
        if (i % 2 == 1) gauss += wg[i / 2] * (fl + fr);
    }
    value = kron * h;
    error = std::abs(kron - gauss) * std::abs(h);
}

template <class F>
inline void adapt(F&& f, double a, double b, double tol, int depth, Estimate& out)
{
    cplx v;
    double e;
    gk15(f, a, b, v, e);
    out.evaluations += 15;
    if (e <= tol || depth <= 0 || b - a < 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b) + 1.0)) {
        out.value += v;
        out.error += e;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1, out);
    adapt(f, m, b, 0.5 * tol, depth - 1, out);
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of a complex-valued integrand over [a, b].
/// The returned error is an estimate only; callers enforce their own tolerance.
template <class F>
inline Estimate integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48)
{
    Estimate out;
    if (a == b) return out;
    detail::adapt(f, a, b, abs_tol, max_depth, out);
    return out;
}

/// Adaptive integration over [a, inf) via x = a + u/(1-u).
template <class F>
inline Estimate integrate_to_inf(F&& f, double a, double abs_tol = 1e-12, int max_depth = 48)
{
    auto g = [&](double u) -> cplx {
        const double om = 1.0 - u;
        const double x = a + u / om;
        if (!std::isfinite(x)) return cplx(0.0, 0.0);
        const cplx fx = f(x);
        return fx / (om * om);
    };
    Estimate out;
    detail::adapt(g, 0.0, 1.0 - 1e-14, abs_tol, max_depth, out);
    return out;
}

/// Integration over a finite interval split at interior break points
/// (integrand kinks); each piece is handled adaptively.
template <class F>
inline Estimate integrate_split(F&& f, double a, double b, std::vector<double> breaks,
                                double abs_tol = 1e-12, int max_depth = 48)
{
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    Estimate out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::max(a, breaks[i]);
        const double hi = std::min(b, breaks[i + 1]);
        if (hi - lo <= 0.0) continue;
        Estimate piece = integrate(f, lo, hi, abs_tol / static_cast<double>(breaks.size()), max_depth);
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
    }
    return out;
}

} // namespace lpsemi::quad
