#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lpsemi/core.hpp"
#include "lpsemi/quadrature.hpp"
#include "lpsemi/specfun.hpp"

namespace lpsemi {

/// One closed-form piece c (s-a)^k e^{-lambda (s-a)} 1[s >= a].
struct Term {
    cplx c{0.0, 0.0};
    unsigned k = 0;
    cplx lambda{1.0, 0.0};
    double a = 0.0;
};

/// Finite sum of Term pieces. The family is closed under differentiation,
/// dilation s -> e^{+-t} s, translation (with binomial re-expansion when a
/// knot would cross the origin), multiplication by s, and products, so every
/// semigroup in this header acts on it in closed form.
struct TestFunction {
    std::vector<Term> terms;

    TestFunction() = default;
    explicit TestFunction(std::vector<Term> t) : terms(std::move(t)) {}

    static TestFunction exponential(cplx lambda, cplx c = 1.0)
    {
        return TestFunction({Term{c, 0, lambda, 0.0}});
    }
    static TestFunction monomial(unsigned k, cplx lambda, cplx c = 1.0)
    {
        return TestFunction({Term{c, k, lambda, 0.0}});
    }

    bool empty() const { return terms.empty(); }
};

inline void validate(const TestFunction& f)
{
    for (const Term& t : f.terms) {
        if (!(t.lambda.real() >= 0.0)) throw DomainError("TestFunction: requires Re lambda >= 0");
        if (!(t.a >= 0.0)) throw DomainError("TestFunction: requires knot a >= 0");
        if (!is_finite(t.c) || !is_finite(t.lambda)) throw DomainError("TestFunction: non-finite term");
    }
}

/// Smallest decay rate min Re lambda over nonzero terms (inf when empty).
inline double min_decay(const TestFunction& f)
{
    double m = inf;
    for (const Term& t : f.terms)
        if (std::abs(t.c) > 0.0) m = std::min(m, t.lambda.real());
    return m;
}

inline double max_knot(const TestFunction& f)
{
    double m = 0.0;
    for (const Term& t : f.terms) m = std::max(m, t.a);
    return m;
}

inline unsigned max_power(const TestFunction& f)
{
    unsigned m = 0;
    for (const Term& t : f.terms) m = std::max(m, t.k);
    return m;
}

inline cplx evaluate_term(const Term& t, double s)
{
    const double u = s - t.a;
    if (u < 0.0) return cplx(0.0);
    if (u == 0.0) return t.k == 0 ? t.c : cplx(0.0);
    // log form keeps large powers in range
    return t.c * std::exp(static_cast<double>(t.k) * std::log(u) - t.lambda * u);
}

inline cplx evaluate(const TestFunction& f, double s)
{
    cplx v = 0.0;
    for (const Term& t : f.terms) v += evaluate_term(t, s);
    return v;
}

/// Merge terms sharing (k, lambda, a) and drop exact zeros.
inline TestFunction canonicalize(const TestFunction& f, double tol = 1e-13)
{
    std::vector<Term> terms = f.terms;
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.k != y.k) return x.k < y.k;
        if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
        return x.lambda.imag() < y.lambda.imag();
    });
    std::vector<Term> out;
    for (const Term& t : terms) {
        if (!out.empty()) {
            Term& b = out.back();
            const bool same = b.k == t.k && std::abs(b.a - t.a) <= tol * (1.0 + std::abs(t.a)) &&
                              std::abs(b.lambda - t.lambda) <= tol * (1.0 + std::abs(t.lambda));
            if (same) {
                b.c += t.c;
                continue;
            }
        }
        out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.c == cplx(0.0); });
    return TestFunction(std::move(out));
}

inline TestFunction scale(const TestFunction& f, cplx factor)
{
    TestFunction g = f;
    for (Term& t : g.terms) t.c *= factor;
    return g;
}

inline TestFunction add(const TestFunction& f, const TestFunction& g)
{
    TestFunction h = f;
    h.terms.insert(h.terms.end(), g.terms.begin(), g.terms.end());
    return canonicalize(h);
}

inline TestFunction subtract(const TestFunction& f, const TestFunction& g)
{
    return add(f, scale(g, cplx(-1.0)));
}

namespace detail {

// Re-expand c (s-b)^k e^{-lambda (s-b)} with b < 0 into knot-zero terms:
// (s-b)^k = sum_j binom(k,j) (-b)^{k-j} s^j and e^{-lambda(s-b)} = e^{lambda b} e^{-lambda s}.
inline void reexpand_negative_knot(std::vector<Term>& out, cplx c, unsigned k, cplx lambda, double b)
{
    const cplx damp = std::exp(lambda * b);
    std::vector<double> pw(k + 1, 1.0);
    for (unsigned i = 1; i <= k; ++i) pw[i] = pw[i - 1] * (-b);
    double binom = 1.0;
    for (unsigned j = 0; j <= k; ++j) {
        if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
        out.push_back(Term{c * damp * binom * pw[k - j], j, lambda, 0.0});
    }
}

inline void push_shifted(std::vector<Term>& out, cplx c, unsigned k, cplx lambda, double b)
{
    if (b >= 0.0)
        out.push_back(Term{c, k, lambda, b});
    else
        reexpand_negative_knot(out, c, k, lambda, b);
}

} // namespace detail

/// A jump discontinuity of a family member: location and height.
struct Jump {
    double at = 0.0;
    cplx height{0.0, 0.0};
};

/// Knot locations where some term has k = 0 (the jumps of f), with heights.
inline std::vector<Jump> jumps(const TestFunction& f)
{
    std::vector<Jump> out;
    for (const Term& t : canonicalize(f).terms)
        if (t.k == 0 && t.c != cplx(0.0)) out.push_back(Jump{t.a, t.c});
    return out;
}

/// Termwise derivative inside the family. Jumps (k = 0 knots) are recorded
/// in *jump_list when provided; the distributional part is not added.
inline TestFunction derivative(const TestFunction& f, std::vector<Jump>* jump_list = nullptr)
{
    std::vector<Term> out;
    for (const Term& t : f.terms) {
        if (t.k > 0) out.push_back(Term{t.c * static_cast<double>(t.k), t.k - 1, t.lambda, t.a});
        out.push_back(Term{-t.c * t.lambda, t.k, t.lambda, t.a});
    }
    if (jump_list) *jump_list = jumps(f);
    return canonicalize(TestFunction(std::move(out)));
}

/// Laplace transform: each term gives c e^{-z a} k! / (z + lambda)^{k+1}.
inline cplx laplace(const TestFunction& f, cplx z)
{
    if (!f.empty() && !(z.real() > -min_decay(f)))
        throw DomainError("laplace: Re z too small for this function");
    cplx sum = 0.0;
    for (const Term& t : f.terms) {
        const cplx pole = z + t.lambda;
        if (std::abs(pole) == 0.0) throw DomainError("laplace: evaluation at a pole");
        double kfact = 1.0;
        for (unsigned i = 2; i <= t.k; ++i) kfact *= static_cast<double>(i);
        sum += t.c * std::exp(-z * t.a) * kfact / std::pow(pole, static_cast<double>(t.k) + 1.0);
    }
    return sum;
}

/// Multiplication by the coordinate: s f(s) stays in the family since
/// s = (s - a) + a termwise.
inline TestFunction multiply_by_s(const TestFunction& f)
{
    std::vector<Term> out;
    for (const Term& t : f.terms) {
        out.push_back(Term{t.c, t.k + 1, t.lambda, t.a});
        if (t.a != 0.0) out.push_back(Term{t.c * t.a, t.k, t.lambda, t.a});
    }
    return canonicalize(TestFunction(std::move(out)));
}

/// Closed-form product of two family members (used for exact pairings).
inline TestFunction multiply(const TestFunction& f, const TestFunction& g)
{
    std::vector<Term> out;
    for (const Term& x : f.terms) {
        for (const Term& y : g.terms) {
            const double am = std::max(x.a, y.a);
            const double d1 = am - x.a, d2 = am - y.a;
            const cplx damp = std::exp(-x.lambda * d1 - y.lambda * d2);
            std::vector<cplx> poly1(x.k + 1), poly2(y.k + 1);
            double b = 1.0;
            for (unsigned i = 0; i <= x.k; ++i) {
                if (i > 0) b = b * static_cast<double>(x.k - i + 1) / static_cast<double>(i);
                poly1[i] = b * std::pow(d1, static_cast<double>(x.k - i));
            }
            b = 1.0;
            for (unsigned i = 0; i <= y.k; ++i) {
                if (i > 0) b = b * static_cast<double>(y.k - i + 1) / static_cast<double>(i);
                poly2[i] = b * std::pow(d2, static_cast<double>(y.k - i));
            }
            for (unsigned i = 0; i <= x.k; ++i)
                for (unsigned j = 0; j <= y.k; ++j)
                    out.push_back(Term{x.c * y.c * damp * poly1[i] * poly2[j], i + j,
                                       x.lambda + y.lambda, am});
        }
    }
    return canonicalize(TestFunction(std::move(out)));
}

// ---------------------------------------------------------------------------
// The L^p(R+) semigroups and their generators.
// ---------------------------------------------------------------------------

enum class ContSemigroup { TLeft, TRight, TpPlus, TpMinus, Sp, Rp };

struct ContOp {
    ContSemigroup kind;
    double p = 2.0; // ignored by TLeft/TRight
    double t = 0.0;
};

/// Closed-form image of a family member under one of
///   T_left(t) f(s)  = f(s + t)
///   T_right(t) f(s) = f(s - t) 1[s > t]
///   T_p^+(t) f(s)   = e^{-t/p} f(e^{-t} s)
///   T_p^-(t) f(s)   = e^{ t/p} f(e^{ t} s)
///   S_p(t) f(s)     = e^{-t/p} f(e^{-t} s + 1 - e^{-t})
///   R_p(t) f(s)     = e^{ t/p} f(e^{ t} s + 1 - e^{ t}) 1[s > 1 - e^{-t}]
inline TestFunction apply(const ContOp& op, const TestFunction& f)
{
    if (!(op.t >= 0.0)) throw DomainError("continuous semigroup: requires t >= 0");
    const double invp = inv_exponent(op.p);
    std::vector<Term> out;
    switch (op.kind) {
    case ContSemigroup::TLeft:
        for (const Term& t : f.terms) detail::push_shifted(out, t.c, t.k, t.lambda, t.a - op.t);
        break;
    case ContSemigroup::TRight:
        for (const Term& t : f.terms) out.push_back(Term{t.c, t.k, t.lambda, t.a + op.t});
        break;
    case ContSemigroup::TpPlus: {
        const double sigma = std::exp(-op.t);
        const double pref = std::exp(-op.t * invp);
        for (const Term& t : f.terms)
            out.push_back(Term{t.c * pref * std::pow(sigma, static_cast<double>(t.k)), t.k,
                               t.lambda * sigma, t.a / sigma});
        break;
    }
    case ContSemigroup::TpMinus: {
        const double tau = std::exp(op.t);
        const double pref = std::exp(op.t * invp);
        for (const Term& t : f.terms)
            out.push_back(Term{t.c * pref * std::pow(tau, static_cast<double>(t.k)), t.k,
                               t.lambda * tau, t.a / tau});
        break;
    }
    case ContSemigroup::Sp: {
        const double sigma = std::exp(-op.t);
        const double pref = std::exp(-op.t * invp);
        for (const Term& t : f.terms) {
            const double b = (t.a - (1.0 - sigma)) / sigma;
            detail::push_shifted(out, t.c * pref * std::pow(sigma, static_cast<double>(t.k)), t.k,
                                 t.lambda * sigma, b);
        }
        break;
    }
    case ContSemigroup::Rp: {
        const double tau = std::exp(op.t);
        const double theta = 1.0 - std::exp(-op.t);
        const double pref = std::exp(op.t * invp);
        for (const Term& t : f.terms) {
            const double b = theta + t.a / tau; // >= theta, the support cut is built in
            out.push_back(Term{t.c * pref * std::pow(tau, static_cast<double>(t.k)), t.k,
                               t.lambda * tau, b});
        }
        break;
    }
    }
    return canonicalize(TestFunction(std::move(out)));
}

enum class ContGenerator { DLeft, DRight0, LambdaP, Ap, Bp };

/// Closed-form generator images:
///   DLeft f = f',  DRight0 f = -f',  LambdaP f = -s f' - f/p,
///   Ap f = (1-s) f' - f/p,  Bp f = (s-1) f' + f/p.
inline TestFunction apply_generator(ContGenerator g, double p, const TestFunction& f)
{
    const double invp = inv_exponent(p);
    const TestFunction df = derivative(f);
    switch (g) {
    case ContGenerator::DLeft:
        return df;
    case ContGenerator::DRight0:
        return scale(df, cplx(-1.0));
    case ContGenerator::LambdaP:
        return subtract(scale(multiply_by_s(df), cplx(-1.0)), scale(f, cplx(invp)));
    case ContGenerator::Ap:
        return subtract(subtract(df, multiply_by_s(df)), scale(f, cplx(invp)));
    case ContGenerator::Bp:
        return add(subtract(multiply_by_s(df), df), scale(f, cplx(invp)));
    }
    throw DomainError("apply_generator: unknown generator");
}

// ---------------------------------------------------------------------------
// Quadrature-backed functionals on the family.
// ---------------------------------------------------------------------------

namespace detail {

// Crude upper envelope for |f(s)|, for cutoff selection and tail bounds.
inline double envelope(const TestFunction& f, double s)
{
    double v = 0.0;
    for (const Term& t : f.terms) {
        const double u = s - t.a;
        if (u < 0.0) continue;
        const double lg = static_cast<double>(t.k) * (u > 0.0 ? std::log(u) : 0.0) - t.lambda.real() * u;
        v += std::abs(t.c) * std::exp(lg);
    }
    return v;
}

inline double integration_cutoff(const TestFunction& f, double rate)
{
    const double base = max_knot(f) + 1.0;
    const unsigned k = max_power(f);
    return base + (45.0 + 8.0 * static_cast<double>(k)) / std::max(rate, 1e-3);
}

// integral_{x0}^{1} (1-x)^{w} g(x) dx, Jacobi rule absorbing the right end.
template <class G>
inline cplx right_weighted(G&& g, double x0, double w, int order)
{
    const quad::Rule& r = quad::jacobi01(order, w, 0.0);
    const double len = 1.0 - x0;
    cplx s = 0.0;
    for (int i = 0; i < r.order(); ++i) s += r.weights[i] * g(x0 + len * r.nodes[i]);
    return s * std::pow(len, w + 1.0);
}

// integral_{0}^{x1} x^{w} g(x) dx, Jacobi rule absorbing the left end.
template <class G>
inline cplx left_weighted(G&& g, double x1, double w, int order)
{
    const quad::Rule& r = quad::jacobi01(order, 0.0, w);
    cplx s = 0.0;
    for (int i = 0; i < r.order(); ++i) s += r.weights[i] * g(x1 * r.nodes[i]);
    return s * std::pow(x1, w + 1.0);
}

template <class G>
inline cplx legendre_on(G&& g, double a, double b, int order)
{
    if (!(b > a)) return cplx(0.0);
    const quad::Rule& r = quad::legendre(order);
    cplx s = 0.0;
    for (int i = 0; i < r.order(); ++i)
        s += r.weights[i] * g(0.5 * (a + b) + 0.5 * (b - a) * r.nodes[i]);
    return s * 0.5 * (b - a);
}

// integral_lo^hi x^{bw} (1-x)^{aw} g(x) dx split at interior break points;
// the singular ends (x = 0 when lo == 0, x = 1 when hi == 1) go to Jacobi
// rules, interior pieces to Legendre. g carries everything but the two
// real-exponent weights.
template <class G>
inline cplx weighted_split(G&& g, double lo, double hi, double aw, double bw,
                           std::vector<double> breaks, int order)
{
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double x) { return !(x > lo && x < hi); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> pts;
    pts.push_back(lo);
    for (double b : breaks) pts.push_back(b);
    pts.push_back(hi);
    cplx sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const bool left_singular = (i == 0 && lo == 0.0 && bw != 0.0);
        const bool right_singular = (i + 2 == pts.size() && hi == 1.0 && aw != 0.0);
        if (left_singular && right_singular) {
            // single Jacobi rule with both weights
            const quad::Rule& r = quad::jacobi01(order, aw, bw);
            cplx s = 0.0;
            for (int j = 0; j < r.order(); ++j) s += r.weights[j] * g(r.nodes[j]);
            sum += s;
        } else if (left_singular) {
            sum += left_weighted([&](double x) { return std::pow(1.0 - x, aw) * g(x); }, b, bw, order);
        } else if (right_singular) {
            sum += right_weighted([&](double x) { return std::pow(x, bw) * g(x); }, a, aw, order);
        } else {
            sum += legendre_on(
                [&](double x) { return std::pow(x, bw) * std::pow(1.0 - x, aw) * g(x); }, a, b, order);
        }
    }
    return sum;
}

} // namespace detail

/// L^p norm by adaptive quadrature split at the knots, with an explicit tail
/// bound folded into the error estimate. Throws QuadratureError when the
/// estimate exceeds `tol` relative to the value.
inline double lp_norm_fn(const TestFunction& f, double p, double tol = 1e-9)
{
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("lp_norm_fn: requires 1 <= p < inf");
    validate(f);
    if (f.empty()) return 0.0;
    const double rate = min_decay(f);
    if (!(rate > 0.0)) throw DomainError("lp_norm_fn: needs Re lambda > 0 in every term");
    const double cut = detail::integration_cutoff(f, rate * p);
    std::vector<double> breaks;
    for (const Term& t : f.terms)
        if (t.a > 0.0 && t.a < cut) breaks.push_back(t.a);
    auto integrand = [&](double s) -> cplx { return std::pow(std::abs(evaluate(f, s)), p); };
    quad::Estimate est = quad::integrate_split(integrand, 0.0, cut, breaks, 1e-14);
    const double tail = std::pow(detail::envelope(f, cut), p) / (p * rate) * 2.0;
    const double total = est.value.real();
    if (est.error + tail > tol * (1.0 + total))
        throw QuadratureError("lp_norm_fn: error estimate exceeds tolerance");
    return std::pow(total, 1.0 / p);
}

/// Values of two computation routes of a checked operator, with the worst
/// disagreement over the sample points.
struct TwoRouteValues {
    std::vector<cplx> primary;
    std::vector<cplx> cross_check;
    double max_disagreement = 0.0;
};

/// Cesaro-Hardy operator of order alpha (dual = adjoint variant) on a family
/// member, per sample point by two routes: the direct kernel integral and
/// the time subordination of the dilation group, the latter evaluated
/// through the semigroup machinery. Routes must agree within `tol`.
inline TwoRouteValues cesaro_hardy(double alpha, double p, const TestFunction& f, bool dual,
                                   const std::vector<double>& s_samples, int order = 64,
                                   double tol = 1e-8)
{
    if (!(alpha > 0.0)) throw DomainError("cesaro_hardy: requires alpha > 0");
    validate(f);
    const double invp = inv_exponent(p);
    TwoRouteValues out;
    for (double s : s_samples) {
        if (!(s > 0.0)) throw DomainError("cesaro_hardy: requires positive sample points");
        cplx direct = 0.0, subord = 0.0;
        if (!dual) {
            // direct: alpha integral_0^1 (1-x)^(alpha-1) f(s x) dx
            std::vector<double> br;
            for (const Term& t : f.terms)
                if (t.a > 0.0 && t.a < s) br.push_back(t.a / s);
            direct = alpha * detail::weighted_split([&](double x) { return evaluate(f, s * x); },
                                                    0.0, 1.0, alpha - 1.0, 0.0, br, order);

            // subordination: alpha integral_0^1 r^(alpha-1) E(r) dr,
            // E(r) = e^{-t(1-1/p)} (T_p^+(t) f)(s) / (1-r), t = -log(1-r)
            auto E = [&](double r) -> cplx {
                const double t = -std::log1p(-r);
                const TestFunction g = apply(ContOp{ContSemigroup::TpPlus, p, t}, f);
                return std::exp(-t * (1.0 - invp)) * evaluate(g, s) / (1.0 - r);
            };
            std::vector<double> brr;
            for (const Term& t : f.terms)
                if (t.a > 0.0 && t.a < s) brr.push_back(1.0 - t.a / s);
            subord = alpha * detail::weighted_split(E, 0.0, 1.0, 0.0, alpha - 1.0, brr, order);
        } else {
            // direct: alpha integral_0^inf w^(alpha-1) (s+w)^(-alpha) f(s+w) dw
            auto g = [&](double w) -> cplx { return std::pow(s + w, -alpha) * evaluate(f, s + w); };
            const double rate = std::max(min_decay(f), 1e-3);
            const double cut = detail::integration_cutoff(f, rate) + s;
            std::vector<double> br{1.0};
            for (const Term& t : f.terms)
                if (t.a > s && t.a - s < cut) br.push_back(t.a - s);
            std::sort(br.begin(), br.end());
            direct = detail::left_weighted(g, br.front(), alpha - 1.0, order);
            quad::Estimate rest = quad::integrate_split(
                [&](double w) { return std::pow(w, alpha - 1.0) * g(w); }, br.front(), cut, br, 1e-14);
            direct += rest.value;
            direct *= alpha;

            // subordination: alpha integral_0^1 r^(alpha-1) E(r) dr,
            // E(r) = e^{-t/p} (T_p^-(t) f)(s) / (1-r)
            auto E = [&](double r) -> cplx {
                const double t = -std::log1p(-r);
                const TestFunction h = apply(ContOp{ContSemigroup::TpMinus, p, t}, f);
                return std::exp(-t * invp) * evaluate(h, s) / (1.0 - r);
            };
            const double r_hi = std::clamp(1.0 - s / cut, 1e-6, 1.0 - 1e-12);
            const double split = std::min(0.5, r_hi);
            subord = detail::left_weighted(E, split, alpha - 1.0, order);
            if (r_hi > split) {
                quad::Estimate rest2 = quad::integrate(
                    [&](double r) { return std::pow(r, alpha - 1.0) * E(r); }, split, r_hi, 1e-14);
                subord += rest2.value;
            }
            subord *= alpha;
        }
        out.primary.push_back(direct);
        out.cross_check.push_back(subord);
        out.max_disagreement = std::max(out.max_disagreement, std::abs(direct - subord));
    }
    if (out.max_disagreement > tol)
        throw QuadratureError("cesaro_hardy: the two routes disagree beyond tolerance");
    return out;
}

enum class ChenKind { Sp, Rp };

namespace detail {

// phase factor of x^{i Im nu} (1-x)^{i Im mu} for complex subordination weights
inline cplx endpoint_phases(cplx mu, cplx nu, double x)
{
    return std::exp(cplx(0.0, nu.imag()) * std::log(x) + cplx(0.0, mu.imag()) * std::log1p(-x));
}

} // namespace detail

/// Chen fractional integrals: the subordination
///   C^T_{mu,nu} f = integral_0^inf e^{-mu t} (1-e^{-t})^{nu-1} T(t) f dt
/// for T = S_p (kind Sp) or T = R_p (kind Rp), evaluated per sample point by
/// the semigroup route (primary) and the closed kernel integral in the space
/// variable (cross-check). The routes must agree within `tol`.
inline TwoRouteValues chen_integral(cplx mu, cplx nu, double p, ChenKind which, const TestFunction& f,
                                    const std::vector<double>& r_samples, int order = 64,
                                    double tol = 1e-8)
{
    if (!(mu.real() > 0.0 && nu.real() > 0.0)) throw DomainError("chen_integral: requires Re mu, Re nu > 0");
    validate(f);
    const double invp = inv_exponent(p);
    const double rate = std::max(min_decay(f), 1e-3);
    const double cut = detail::integration_cutoff(f, rate);
    TwoRouteValues out;

    for (double r : r_samples) {
        if (!(r > 0.0)) throw DomainError("chen_integral: requires positive sample points");
        cplx primary = 0.0, kernel = 0.0;

        if (which == ChenKind::Sp) {
            // primary: with x = 1-e^{-t} the integrand is
            //   x^{nu-1} (1-x)^{mu + 1/p - 1} [e^{t/p} S_p(t) f](r)  (phases folded)
            auto g = [&](double x) -> cplx {
                const double t = -std::log1p(-x);
                const TestFunction h = apply(ContOp{ContSemigroup::Sp, p, t}, f);
                return evaluate(h, r) * std::exp(t * invp) * detail::endpoint_phases(mu, nu, x);
            };
            std::vector<double> br;
            if (r != 1.0)
                for (const Term& t : f.terms) {
                    const double x = (t.a - r) / (1.0 - r);
                    if (x > 0.0 && x < 1.0) br.push_back(x);
                }
            primary = detail::weighted_split(g, 0.0, 1.0, mu.real() + invp - 1.0, nu.real() - 1.0, br, order);

            // kernel: |r-1|^{-(mu+1/p+nu-1)} integral over the segment (1, r)
            // of |s-1|^{mu+1/p-1} |r-s|^{nu-1} f(s) ds
            if (std::abs(r - 1.0) < 1e-12) {
                // degenerate segment; the limit is f(1) B(nu, mu + 1/p)
                kernel = evaluate(f, 1.0) *
                         std::exp(log_gamma(nu) + log_gamma(mu + invp) - log_gamma(nu + mu + invp));
            } else {
                const double lo = std::min(r, 1.0), hi = std::max(r, 1.0);
                const cplx em = mu + invp - 1.0; // exponent on |s-1|
                const cplx en = nu - 1.0;        // exponent on |r-s|
                auto ker = [&](double y) -> cplx {
                    const double s = lo + (hi - lo) * y;
                    const double ds1 = std::abs(s - 1.0), dsr = std::abs(r - s);
                    // real parts of the two weights are carried by the rule
                    return evaluate(f, s) *
                           std::exp(cplx(0.0, em.imag()) * std::log(ds1) +
                                    cplx(0.0, en.imag()) * std::log(dsr));
                };
                std::vector<double> brk;
                for (const Term& t : f.terms) {
                    const double y = (t.a - lo) / (hi - lo);
                    if (y > 0.0 && y < 1.0) brk.push_back(y);
                }
                // y = 0 is s = lo, y = 1 is s = hi; which weight sits at which
                // end depends on the side of 1
                const double wl = r < 1.0 ? en.real() : em.real();
                const double wr = r < 1.0 ? em.real() : en.real();
                cplx seg = detail::weighted_split(ker, 0.0, 1.0, wr, wl, brk, order);
                const double len = hi - lo;
                seg *= std::pow(len, em.real() + en.real() + 1.0);
                kernel = seg * std::exp(-(mu + invp + nu - 1.0) * std::log(std::abs(r - 1.0)));
            }
        } else { // Rp
            // primary: x-integral of x^{nu-1} (1-x)^{mu - 1/p - 1} f((r-x)/(1-x))
            // over (0, min(1, r)), via the semigroup machinery
            auto g = [&](double x) -> cplx {
                const double t = -std::log1p(-x);
                const TestFunction h = apply(ContOp{ContSemigroup::Rp, p, t}, f);
                return evaluate(h, r) * std::exp(-t * invp) * detail::endpoint_phases(mu, nu, x);
            };
            auto knot_x = [&](double a) { return (r - a) / (1.0 - a); };
            auto full = [&](double x) {
                return std::pow(x, nu.real() - 1.0) * std::pow(1.0 - x, mu.real() - invp - 1.0) * g(x);
            };
            auto folded = [&](double x) { return std::pow(1.0 - x, mu.real() - invp - 1.0) * g(x); };
            if (r < 1.0) {
                // integrate x over (0, r); the upper end is regular here
                std::vector<double> pts{0.0, r};
                for (const Term& t : f.terms) {
                    const double x = knot_x(t.a);
                    if (x > 0.0 && x < r) pts.push_back(x);
                }
                std::sort(pts.begin(), pts.end());
                primary = detail::left_weighted(folded, pts[1], nu.real() - 1.0, order);
                for (std::size_t i = 1; i + 1 < pts.size(); ++i)
                    primary += detail::legendre_on(full, pts[i], pts[i + 1], order);
            } else {
                // integrate x over (0, 1); the integrand flattens to 0 at x -> 1
                std::vector<double> br{0.5};
                for (const Term& t : f.terms) {
                    const double x = knot_x(t.a);
                    if (x > 0.0 && x < 1.0) br.push_back(x);
                }
                std::sort(br.begin(), br.end());
                const double x_hi =
                    std::min(1.0 - 1e-12, 1.0 - std::max(r - 1.0, 1e-300) / cut);
                const double first = std::min(br.front(), x_hi);
                primary = detail::left_weighted(folded, first, nu.real() - 1.0, order);
                if (x_hi > first) {
                    quad::Estimate rest = quad::integrate_split(full, first, x_hi, br, 1e-14);
                    primary += rest.value;
                }
            }

            // kernel route
            const cplx expo = -(mu - invp + nu); // exponent on |s-1|
            if (r < 1.0) {
                // (1-r)^{mu-1/p} integral_0^r (r-s)^{nu-1} (1-s)^{-(mu-1/p+nu)} f(s) ds
                auto ker = [&](double u) -> cplx {
                    const double s = r * u;
                    return evaluate(f, s) * std::exp(expo * std::log1p(-s)) *
                           std::exp(cplx(0.0, nu.imag()) * std::log(r * (1.0 - u)));
                };
                std::vector<double> brk;
                for (const Term& t : f.terms)
                    if (t.a > 0.0 && t.a < r) brk.push_back(t.a / r);
                kernel = detail::weighted_split(ker, 0.0, 1.0, nu.real() - 1.0, 0.0, brk, order);
                kernel *= std::pow(r, nu.real()) * std::exp((mu - invp) * std::log1p(-r));
            } else {
                // (r-1)^{mu-1/p} integral_r^inf (s-r)^{nu-1} (s-1)^{-(mu-1/p+nu)} f(s) ds
                auto ker = [&](double w) -> cplx {
                    const double s = r + w;
                    return evaluate(f, s) * std::exp(expo * std::log(s - 1.0)) *
                           std::exp(cplx(0.0, nu.imag()) * std::log(w));
                };
                std::vector<double> brk{1.0};
                for (const Term& t : f.terms)
                    if (t.a > r && t.a < r + cut) brk.push_back(t.a - r);
                std::sort(brk.begin(), brk.end());
                kernel = detail::left_weighted(ker, brk.front(), nu.real() - 1.0, order);
                quad::Estimate rest = quad::integrate_split(
                    [&](double w) { return std::pow(w, nu.real() - 1.0) * ker(w); }, brk.front(),
                    cut, brk, 1e-14);
                kernel += rest.value;
                kernel *= std::exp((mu - invp) * std::log(r - 1.0));
            }
        }
        out.primary.push_back(primary);
        out.cross_check.push_back(kernel);
        out.max_disagreement = std::max(out.max_disagreement, std::abs(primary - kernel));
    }
    if (out.max_disagreement > tol)
        throw QuadratureError("chen_integral: the two routes disagree beyond tolerance");
    return out;
}

} // namespace lpsemi
