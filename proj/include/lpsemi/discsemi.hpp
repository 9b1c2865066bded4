#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lpsemi/charlier.hpp"
#include "lpsemi/contspace.hpp"
#include "lpsemi/poisson.hpp"
#include "lpsemi/report.hpp"
#include "lpsemi/seqspace.hpp"
#include "lpsemi/specfun.hpp"

namespace lpsemi {

// The six C0-semigroups on l^p, with x = 1 - e^{-t}:
//   e^{t Delta} a(n) = e^{-t} sum_{j>=0} a(n+j) t^j/j!
//   e^{t nabla} a(n) = e^{-t} sum_{j<=n} a(j) t^{n-j}/(n-j)!
//   T_p(t) a(n) = e^{-t/p} sum_{j<=n} C(n,j) e^{-tj} x^{n-j} a(j)
//   S_p(t) a(n) = e^{-t(1-1/p)} e^{-tn} sum_{j>=n} C(j,n) x^{j-n} a(j)
//   T_{Delta,p}(t) a(l) = e^{-(t/p+x)} sum_{j<=l} C(l,j) x^{l-j} e^{-tj}
//                         sum_{n>=j} x^{n-j}/(n-j)! a(n)
//   S_{nabla,p}(t) a(l) = e^{-(t(1-1/p)+x)} sum_{j<=l} x^{l-j}/(l-j)! e^{-tj}
//                         sum_{n>=j} C(n,j) x^{n-j} a(n)

enum class DiscSemigroup { ExpDelta, ExpNabla, KoopmanT, KoopmanS, PerturbedT, PerturbedS };

struct DiscOp {
    DiscSemigroup kind;
    double p = 2.0; // unused by ExpDelta/ExpNabla
    double t = 0.0;
};

namespace detail {

inline double binom(std::size_t n, std::size_t k)
{
    if (k > n) return 0.0;
    if (k == 0 || k == n) return 1.0;
    return std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                    std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0));
}

// e^{t/p}-style prefactor exponent c in T(t) = e^{-c t} (bounded rest)
inline double time_decay_exponent(DiscSemigroup kind, double p)
{
    const double invp = inv_exponent(p);
    switch (kind) {
    case DiscSemigroup::ExpDelta:
    case DiscSemigroup::ExpNabla:
        return 1.0;
    case DiscSemigroup::KoopmanT:
    case DiscSemigroup::PerturbedT:
        return invp;
    case DiscSemigroup::KoopmanS:
    case DiscSemigroup::PerturbedS:
        return 1.0 - invp;
    }
    return 0.0;
}

// sup-norm bound of T(t) (row-sum bound of the nonnegative kernel)
inline double row_sum_bound(DiscSemigroup kind, double p, double t)
{
    const double invp = inv_exponent(p);
    switch (kind) {
    case DiscSemigroup::KoopmanS:
    case DiscSemigroup::PerturbedS:
        return std::exp(t * invp);
    default:
        return 1.0;
    }
}

} // namespace detail

/// Kernel entry K(row, col) of the matrix acting as (T a)(row) = sum K a(col).
/// All kernels are nonnegative, which the norm computations rely on.
inline double kernel_entry(const DiscOp& op, std::size_t row, std::size_t col)
{
    if (op.t == 0.0) return row == col ? 1.0 : 0.0;
    const double invp = inv_exponent(op.p);
    const double et = std::exp(-op.t);
    const double x = 1.0 - et;
    switch (op.kind) {
    case DiscSemigroup::ExpDelta: {
        if (col < row) return 0.0;
        const std::size_t j = col - row;
        return std::exp(-op.t + static_cast<double>(j) * std::log(op.t) -
                        std::lgamma(static_cast<double>(j) + 1.0));
    }
    case DiscSemigroup::ExpNabla: {
        if (col > row) return 0.0;
        return poisson_kernel(row - col, op.t);
    }
    case DiscSemigroup::KoopmanT: {
        if (col > row) return 0.0;
        return std::exp(-op.t * invp) * detail::binom(row, col) *
               std::exp(-op.t * static_cast<double>(col)) *
               std::pow(x, static_cast<double>(row - col));
    }
    case DiscSemigroup::KoopmanS: {
        if (col < row) return 0.0;
        return std::exp(-op.t * (1.0 - invp)) * std::exp(-op.t * static_cast<double>(row)) *
               detail::binom(col, row) * std::pow(x, static_cast<double>(col - row));
    }
    case DiscSemigroup::PerturbedT: {
        const std::size_t jmax = std::min(row, col);
        double s = 0.0;
        for (std::size_t j = 0; j <= jmax; ++j) {
            s += detail::binom(row, j) * std::pow(x, static_cast<double>(row - j)) *
                 std::exp(-op.t * static_cast<double>(j)) *
                 std::pow(x, static_cast<double>(col - j)) /
                 std::tgamma(static_cast<double>(col - j) + 1.0);
        }
        return std::exp(-(op.t * invp + x)) * s;
    }
    case DiscSemigroup::PerturbedS: {
        const std::size_t jmax = std::min(row, col);
        double s = 0.0;
        for (std::size_t j = 0; j <= jmax; ++j) {
            s += std::pow(x, static_cast<double>(row - j)) /
                 std::tgamma(static_cast<double>(row - j) + 1.0) *
                 std::exp(-op.t * static_cast<double>(j)) * detail::binom(col, j) *
                 std::pow(x, static_cast<double>(col - j));
        }
        return std::exp(-(op.t * (1.0 - invp) + x)) * s;
    }
    }
    return 0.0;
}

/// Apply a discrete semigroup to a truncated sequence. Rows whose truncation
/// certificate (the bound on the neglected kernel tail against the sequence
/// tail model) exceeds `cert_tol` are marked invalid rather than zero-padded.
inline TruncatedSequence apply(const DiscOp& op, const TruncatedSequence& a, double cert_tol = 1e-12)
{
    if (!(op.t >= 0.0)) throw DomainError("discrete semigroup: requires t >= 0");
    const std::size_t N = a.size();
    TruncatedSequence out = TruncatedSequence::zeros(N);
    if (op.t == 0.0) {
        out = a;
        return out;
    }
    const double invp = inv_exponent(op.p);
    const double et = std::exp(-op.t);
    const double x = 1.0 - et;
    const double tail_c = a.tail == TailModel::Zero ? 0.0 : a.tail_coeff;
    const double rho = a.tail == TailModel::Zero ? 0.0 : a.tail_ratio;
    std::size_t first_invalid = N;

    std::vector<double> pow_x(2 * N + 2, 1.0), inv_fact(2 * N + 2, 1.0), etj(N + 1, 1.0);
    for (std::size_t i = 1; i < pow_x.size(); ++i) pow_x[i] = pow_x[i - 1] * x;
    for (std::size_t i = 1; i < inv_fact.size(); ++i) inv_fact[i] = inv_fact[i - 1] / static_cast<double>(i);
    for (std::size_t i = 1; i < etj.size(); ++i) etj[i] = etj[i - 1] * et;

    switch (op.kind) {
    case DiscSemigroup::ExpDelta: {
        std::vector<double> tj(N + 1, 1.0);
        for (std::size_t i = 1; i <= N; ++i) tj[i] = tj[i - 1] * op.t / static_cast<double>(i);
        for (std::size_t n = 0; n < N; ++n) {
            cplx s = 0.0;
            for (std::size_t j = 0; n + j < N; ++j) s += a.values[n + j] * tj[j];
            out.values[n] = et * s;
            if (tail_c > 0.0) {
                // sum_{j >= N-n} t^j/j! rho^{j-(N-n)} <= t^{N-n}/(N-n)! e^{t rho}
                const double bound = et * tail_c * tj[N - n] * std::exp(op.t * rho);
                if (bound > cert_tol) first_invalid = std::min(first_invalid, n);
            }
        }
        break;
    }
    case DiscSemigroup::ExpNabla: {
        std::vector<double> tj(N + 1, 1.0);
        for (std::size_t i = 1; i <= N; ++i) tj[i] = tj[i - 1] * op.t / static_cast<double>(i);
        for (std::size_t n = 0; n < N; ++n) {
            cplx s = 0.0;
            for (std::size_t j = 0; j <= n; ++j) s += a.values[j] * tj[n - j];
            out.values[n] = et * s;
        }
        break;
    }
    case DiscSemigroup::KoopmanT: {
        for (std::size_t n = 0; n < N; ++n) {
            cplx s = 0.0;
            double b = 1.0; // C(n,j) via multiplicative update over j
            for (std::size_t j = 0; j <= n; ++j) {
                if (j > 0) b = b * static_cast<double>(n - j + 1) / static_cast<double>(j);
                s += b * etj[j] * pow_x[n - j] * a.values[j];
            }
            out.values[n] = std::exp(-op.t * invp) * s;
        }
        break;
    }
    case DiscSemigroup::KoopmanS: {
        const double pref = std::exp(-op.t * (1.0 - invp));
        for (std::size_t n = 0; n < N; ++n) {
            cplx s = 0.0;
            double b = 1.0; // C(j,n) over j >= n
            for (std::size_t j = n; j < N; ++j) {
                if (j > n) b = b * static_cast<double>(j) / static_cast<double>(j - n);
                s += b * pow_x[j - n] * a.values[j];
            }
            out.values[n] = pref * etj[n] * s;
            if (tail_c > 0.0) {
                const double bN = detail::binom(N, n);
                const double r = x * rho * static_cast<double>(N + 1) / static_cast<double>(N + 1 - n);
                const double bound = r < 1.0
                                         ? pref * etj[n] * bN * pow_x[N - n] * tail_c / (1.0 - r)
                                         : inf;
                if (bound > cert_tol) first_invalid = std::min(first_invalid, n);
            }
        }
        break;
    }
    case DiscSemigroup::PerturbedT: {
        const double pref = std::exp(-(op.t * invp + x));
        std::vector<cplx> inner(N, 0.0);
        std::vector<double> inner_tail(N, 0.0);
        for (std::size_t j = 0; j < N; ++j) {
            cplx s = 0.0;
            for (std::size_t n = j; n < N; ++n) s += a.values[n] * pow_x[n - j] * inv_fact[n - j];
            inner[j] = s;
            if (tail_c > 0.0)
                inner_tail[j] = tail_c * pow_x[N - j] * inv_fact[N - j] * std::exp(x * rho);
        }
        for (std::size_t l = 0; l < N; ++l) {
            cplx s = 0.0;
            double tail = 0.0;
            double b = 1.0;
            for (std::size_t j = 0; j <= l; ++j) {
                if (j > 0) b = b * static_cast<double>(l - j + 1) / static_cast<double>(j);
                const double w = b * pow_x[l - j] * etj[j];
                s += w * inner[j];
                tail += w * inner_tail[j];
            }
            out.values[l] = pref * s;
            if (pref * tail > cert_tol) first_invalid = std::min(first_invalid, l);
        }
        break;
    }
    case DiscSemigroup::PerturbedS: {
        const double pref = std::exp(-(op.t * (1.0 - invp) + x));
        std::vector<cplx> inner(N, 0.0);
        std::vector<double> inner_tail(N, 0.0);
        for (std::size_t j = 0; j < N; ++j) {
            cplx s = 0.0;
            double b = 1.0; // C(n,j) over n >= j
            for (std::size_t n = j; n < N; ++n) {
                if (n > j) b = b * static_cast<double>(n) / static_cast<double>(n - j);
                s += b * pow_x[n - j] * a.values[n];
            }
            inner[j] = s;
            if (tail_c > 0.0) {
                const double r = x * rho * static_cast<double>(N + 1) / static_cast<double>(N + 1 - j);
                inner_tail[j] = r < 1.0 ? detail::binom(N, j) * pow_x[N - j] * tail_c / (1.0 - r) : inf;
            }
        }
        for (std::size_t l = 0; l < N; ++l) {
            cplx s = 0.0;
            double tail = 0.0;
            for (std::size_t j = 0; j <= l; ++j) {
                const double w = pow_x[l - j] * inv_fact[l - j] * etj[j];
                s += w * inner[j];
                tail += w * inner_tail[j];
            }
            out.values[l] = pref * s;
            if (pref * tail > cert_tol) first_invalid = std::min(first_invalid, l);
        }
        break;
    }
    }

    out.valid_len = std::min(first_invalid, std::min(a.valid_len, N));
    if (a.tail == TailModel::Zero && op.kind == DiscSemigroup::ExpDelta) {
        // rows n >= N of e^{t Delta} read only entries beyond the support
        out.tail = TailModel::Zero;
    } else {
        // every kernel here is sup-norm bounded, so the image tail is too
        out.tail = TailModel::Geometric;
        out.tail_coeff = detail::row_sum_bound(op.kind, op.p, op.t) * std::max(a.max_abs(), tail_c);
        out.tail_ratio = 1.0;
        out.tail_note = "bounded through the sup-norm bound of the kernel";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators and resolvents.
// ---------------------------------------------------------------------------

enum class DiscGenerator { Delta, Nabla, Ap, Bp, ApDelta, BpNabla };

/// Entrywise generator formulas:
///   Delta a(n) = a(n+1) - a(n)
///   nabla a(n) = a(n-1) - a(n), nabla a(0) = -a(0)
///   A_p a(n) = n (a(n-1) - a(n)) - a(n)/p
///   B_p a(n) = (n+1) a(n+1) - n a(n) - (1 - 1/p) a(n)
///   A_{Delta,p} = A_p + Delta,   B_{nabla,p} = B_p + nabla
inline TruncatedSequence apply_generator(DiscGenerator g, double p, const TruncatedSequence& a)
{
    const double invp = inv_exponent(p);
    const std::size_t N = a.size();
    const bool zero_tail = a.tail == TailModel::Zero;
    const std::size_t n_out = zero_tail ? N + 1 : N;
    TruncatedSequence out = TruncatedSequence::zeros(n_out);
    auto get = [&](std::size_t n) { return n < N ? a.values[n] : cplx(0.0); };
    for (std::size_t n = 0; n < n_out; ++n) {
        const cplx prev = n == 0 ? cplx(0.0) : get(n - 1);
        const cplx cur = get(n);
        const cplx next = get(n + 1);
        const double dn = static_cast<double>(n);
        cplx v = 0.0;
        switch (g) {
        case DiscGenerator::Delta:
            v = next - cur;
            break;
        case DiscGenerator::Nabla:
            v = prev - cur;
            break;
        case DiscGenerator::Ap:
            v = dn * (prev - cur) - invp * cur;
            break;
        case DiscGenerator::Bp:
            v = (dn + 1.0) * next - dn * cur - (1.0 - invp) * cur;
            break;
        case DiscGenerator::ApDelta:
            v = dn * (prev - cur) - invp * cur + next - cur;
            break;
        case DiscGenerator::BpNabla:
            v = (dn + 1.0) * next - dn * cur - (1.0 - invp) * cur + prev - cur;
            break;
        }
        out.values[n] = v;
    }
    const bool needs_next = g == DiscGenerator::Delta || g == DiscGenerator::Bp ||
                            g == DiscGenerator::ApDelta || g == DiscGenerator::BpNabla;
    if (zero_tail) {
        out.valid_len = a.valid_len == N ? n_out
                        : needs_next     ? (a.valid_len > 0 ? a.valid_len - 1 : 0)
                                         : a.valid_len;
        out.tail = TailModel::Zero;
        return out;
    }
    out.valid_len = std::min(a.valid_len, needs_next && N > 0 ? N - 1 : N);
    // |G a(j)| grows at most linearly against the tail bound
    if (a.tail_ratio < 0.8) {
        out.tail = TailModel::Geometric;
        out.tail_coeff = 4.0 * static_cast<double>(N + 1) * a.tail_coeff;
        out.tail_ratio = std::sqrt(a.tail_ratio);
    } else {
        out.tail = TailModel::Geometric;
        out.tail_coeff = inf;
        out.tail_ratio = 1.0;
        out.tail_note = "tail bound lost: generator output may grow";
    }
    return out;
}

/// Closed-form resolvents (lambda - G)^{-1} for the four semigroup
/// generators, Re lambda > 0:
///   A_p:          n! Gamma(lambda+1/p+j) / (j! Gamma(n+lambda+1/p+1)),  j <= n
///   B_p:          Gamma(n+lambda+1-1/p) j! / (n! Gamma(lambda+2-1/p+j)), j >= n
///   A_{Delta,p}:  sum_j C(l,j) sum_n a(n)/(n-j)! B1(lambda+1/p+j, n+l-2j+1)
///   B_{nabla,p}:  sum_j 1/(l-j)! sum_n C(n,j) a(n) B1(lambda+1-1/p+j, n+l-2j+1)
inline TruncatedSequence resolvent(DiscGenerator g, double p, cplx lambda,
                                   const TruncatedSequence& a, double cert_tol = 1e-12)
{
    if (!(lambda.real() > 0.0)) throw DomainError("resolvent: requires Re lambda > 0");
    const double invp = inv_exponent(p);
    const std::size_t N = a.size();
    TruncatedSequence out = TruncatedSequence::zeros(N);
    const double tail_c = a.tail == TailModel::Zero ? 0.0 : a.tail_coeff;
    const double rho = a.tail == TailModel::Zero ? 0.0 : a.tail_ratio;
    std::size_t first_invalid = N;

    switch (g) {
    case DiscGenerator::Ap: {
        const cplx c = lambda + invp;
        cplx row0 = 1.0 / c; // K(n, 0)
        for (std::size_t n = 0; n < N; ++n) {
            if (n > 0) row0 *= static_cast<double>(n) / (static_cast<double>(n) + c);
            cplx k = row0;
            cplx s = k * a.values[0];
            for (std::size_t j = 1; j <= n; ++j) {
                k *= (c + static_cast<double>(j) - 1.0) / static_cast<double>(j);
                s += k * a.values[j];
            }
            out.values[n] = s;
        }
        break;
    }
    case DiscGenerator::Bp: {
        const cplx d = lambda + 1.0 - invp;
        for (std::size_t n = 0; n < N; ++n) {
            cplx k = 1.0 / (d + static_cast<double>(n)); // K(n, n)
            cplx s = k * a.values[n];
            for (std::size_t j = n + 1; j < N; ++j) {
                k *= static_cast<double>(j) / (d + static_cast<double>(j));
                s += k * a.values[j];
            }
            out.values[n] = s;
            if (tail_c > 0.0) {
                const cplx kN = k * static_cast<double>(N) / (d + static_cast<double>(N));
                const double r = rho * (static_cast<double>(N) + 1.0) /
                                 std::abs(d + static_cast<double>(N) + 1.0);
                const double bound = r < 1.0 ? std::abs(kN) * tail_c / (1.0 - r) : inf;
                if (bound > cert_tol) first_invalid = std::min(first_invalid, n);
            }
        }
        break;
    }
    case DiscGenerator::ApDelta:
    case DiscGenerator::BpNabla: {
        const bool delta_side = g == DiscGenerator::ApDelta;
        const cplx base = delta_side ? lambda + invp : lambda + 1.0 - invp;
        // B1(base + j, v) tables over the needed integer offsets v
        const std::size_t vmax = 2 * N + 2;
        std::vector<std::vector<cplx>> b1(N, std::vector<cplx>(vmax, cplx(0.0)));
        std::vector<std::vector<double>> b1_abs(N, std::vector<double>(vmax, 0.0));
        for (std::size_t j = 0; j < N; ++j) {
            const cplx u = base + static_cast<double>(j);
            for (std::size_t v = 1; v < vmax; ++v) {
                b1[j][v] = beta1(u, cplx(static_cast<double>(v)));
                b1_abs[j][v] = beta(cplx(u.real()), cplx(static_cast<double>(v))).real();
            }
        }
        std::vector<double> inv_fact(N + 1, 1.0);
        for (std::size_t i = 1; i <= N; ++i) inv_fact[i] = inv_fact[i - 1] / static_cast<double>(i);
        for (std::size_t l = 0; l < N; ++l) {
            cplx s = 0.0;
            double tail = 0.0;
            double bl = 1.0; // C(l,j) for the Delta side
            for (std::size_t j = 0; j <= l; ++j) {
                if (j > 0) bl = bl * static_cast<double>(l - j + 1) / static_cast<double>(j);
                cplx inner = 0.0;
                double bn = 1.0; // C(n,j) for the nabla side
                for (std::size_t n = j; n < N; ++n) {
                    const std::size_t v = n + l - 2 * j + 1;
                    if (delta_side) {
                        inner += a.values[n] * inv_fact[n - j] * b1[j][v];
                    } else {
                        if (n > j) bn = bn * static_cast<double>(n) / static_cast<double>(n - j);
                        inner += bn * a.values[n] * b1[j][v];
                    }
                }
                const double w = delta_side ? bl : inv_fact[l - j];
                s += w * inner;
                if (tail_c > 0.0) {
                    const std::size_t vN = N + l - 2 * j + 1;
                    if (delta_side) {
                        tail += w * tail_c * inv_fact[N - j] * std::exp(rho) * b1_abs[j][std::min(vN, vmax - 1)];
                    } else {
                        const double r = rho * (static_cast<double>(N) + 1.0) /
                                         (static_cast<double>(N) + 1.0 - static_cast<double>(j));
                        const double bNj = detail::binom(N, j);
                        tail += r < 1.0 ? w * tail_c * bNj * b1_abs[j][std::min(vN, vmax - 1)] / (1.0 - r)
                                        : inf;
                    }
                }
            }
            out.values[l] = s;
            if (tail > cert_tol) first_invalid = std::min(first_invalid, l);
        }
        break;
    }
    default:
        throw DomainError("resolvent: closed form available for Ap, Bp, ApDelta, BpNabla only");
    }
    out.valid_len = std::min(first_invalid, std::min(a.valid_len, N));
    out.tail = a.tail;
    out.tail_coeff = tail_c / std::max(lambda.real(), 1e-12); // |R(lambda)| <= 1/Re lambda
    out.tail_ratio = 1.0;
    return out;
}

/// Laplace-quadrature route for the resolvent: after r = 1 - e^{-t} the
/// integrand against the Jacobi weight (1-r)^{Re lambda + c - 1} is smooth
/// (c is the semigroup's time-decay exponent, divided back out of T(t)).
inline TruncatedSequence resolvent_by_laplace(DiscSemigroup kind, double p, cplx lambda,
                                              const TruncatedSequence& a, int order = 96)
{
    if (!(lambda.real() > 0.0)) throw DomainError("resolvent_by_laplace: requires Re lambda > 0");
    const double c = detail::time_decay_exponent(kind, p);
    const quad::Rule& rule = quad::jacobi01(order, lambda.real() + c - 1.0, 0.0);
    const std::size_t N = a.size();
    TruncatedSequence out = TruncatedSequence::zeros(N);
    std::size_t valid = N;
    for (int i = 0; i < rule.order(); ++i) {
        const double r = rule.nodes[i];
        const double t = -std::log1p(-r);
        const TruncatedSequence v = apply(DiscOp{kind, p, t}, a);
        valid = std::min(valid, v.valid_len);
        const cplx w = rule.weights[i] * std::exp(cplx(0.0, -lambda.imag() * t)) *
                       std::exp(c * t); // divide the e^{-ct} prefactor back out
        for (std::size_t n = 0; n < N; ++n) out.values[n] += w * v.values[n];
    }
    out.valid_len = valid;
    out.tail = a.tail;
    out.tail_coeff = a.tail_coeff / std::max(lambda.real(), 1e-12);
    out.tail_ratio = 1.0;
    return out;
}

/// Candidate eigen-sequence of B_{nabla,p}: b(n) = q_n(lambda + 1 - 1/p),
/// which satisfies B_{nabla,p} b = lambda b entrywise.
inline TruncatedSequence eigen_sequence_B(double p, cplx lambda, std::size_t N)
{
    if (N < 2) throw DomainError("eigen_sequence_B: requires N >= 2");
    const cplx z = lambda + 1.0 - inv_exponent(p);
    TruncatedSequence out = TruncatedSequence::zeros(N);
    const std::vector<cplx> q = charlier_q_prefix(z, N);
    for (std::size_t n = 0; n < N; ++n) out.values[n] = q[n];
    out.valid_len = N;
    out.tail = TailModel::Geometric;
    out.tail_coeff = out.max_abs();
    out.tail_ratio = 1.0;
    out.tail_note = "polynomially growing/decaying eigen candidate";
    return out;
}

/// Truncated operator norm of a discrete semigroup for p in {1, 2, inf}.
/// p = 1 and p = inf are exact column/row sums of the nonnegative kernel;
/// p = 2 is the largest singular value by power iteration.
inline double operator_norm(const DiscOp& op, std::size_t N, double p_norm)
{
    std::vector<std::vector<double>> K(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) K[i][j] = kernel_entry(op, i, j);
    if (p_norm == 1.0) {
        double best = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) s += K[i][j];
            best = std::max(best, s);
        }
        return best;
    }
    if (std::isinf(p_norm)) {
        double best = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += K[i][j];
            best = std::max(best, s);
        }
        return best;
    }
    if (p_norm == 2.0) {
        std::vector<double> v(N, 1.0 / std::sqrt(static_cast<double>(N)));
        double sigma2 = 0.0;
        for (int it = 0; it < 400; ++it) {
            std::vector<double> w(N, 0.0), u(N, 0.0);
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j) w[i] += K[i][j] * v[j];
            for (std::size_t j = 0; j < N; ++j)
                for (std::size_t i = 0; i < N; ++i) u[j] += K[i][j] * w[i];
            double nrm = 0.0;
            for (double y : u) nrm += y * y;
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) return 0.0;
            for (std::size_t j = 0; j < N; ++j) v[j] = u[j] / nrm;
            sigma2 = nrm;
        }
        return std::sqrt(sigma2);
    }
    throw DomainError("operator_norm: supports p in {1, 2, inf}");
}

// ---------------------------------------------------------------------------
// Identity checks.
// ---------------------------------------------------------------------------

/// T_{Delta,p}(t) = T_p(t) o e^{(1-e^{-t}) Delta} and
/// S_{nabla,p}(t) = e^{(1-e^{-t}) nabla} o S_p(t), entrywise on valid rows.
inline std::vector<VerificationReport> check_factorizations(double p, double t,
                                                            const TruncatedSequence& a, double tol)
{
    const double x = 1.0 - std::exp(-t);
    std::vector<VerificationReport> out;
    std::map<std::string, std::string> params{{"p", std::to_string(p)}, {"t", std::to_string(t)}};
    {
        const TruncatedSequence lhs = apply(DiscOp{DiscSemigroup::PerturbedT, p, t}, a);
        const TruncatedSequence rhs =
            apply(DiscOp{DiscSemigroup::KoopmanT, p, t}, apply(DiscOp{DiscSemigroup::ExpDelta, p, x}, a));
        out.push_back(make_report("factorization.perturbed_t", params, max_abs_diff(lhs, rhs), tol));
    }
    {
        const TruncatedSequence lhs = apply(DiscOp{DiscSemigroup::PerturbedS, p, t}, a);
        const TruncatedSequence rhs =
            apply(DiscOp{DiscSemigroup::ExpNabla, p, x}, apply(DiscOp{DiscSemigroup::KoopmanS, p, t}, a));
        out.push_back(make_report("factorization.perturbed_s", params, max_abs_diff(lhs, rhs), tol));
    }
    return out;
}

/// Options for the intertwining checks: `inner_len` is the length at which
/// function transforms are materialized before a discrete operator consumes
/// them; `certified` restricts comparisons to certificate-valid rows (the raw
/// mode measures plain truncation error instead).
struct IntertwiningOptions {
    std::size_t out_len = 64;
    std::size_t inner_len = 192;
    bool certified = true;
    std::vector<double> s_samples{0.5, 1.0, 2.0};
    double tol = 1e-8;
};

namespace detail {

inline double seq_residual(const TruncatedSequence& lhs, const TruncatedSequence& rhs,
                           std::size_t out_len, bool certified)
{
    std::size_t n = std::min({lhs.size(), rhs.size(), out_len});
    if (certified) n = std::min({n, lhs.valid_len, rhs.valid_len});
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(lhs[i] - rhs[i]));
    return m;
}

inline double fn_residual(const std::vector<cplx>& lhs, const TestFunction& rhs,
                          const std::vector<double>& ss)
{
    double m = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) m = std::max(m, std::abs(lhs[i] - evaluate(rhs, ss[i])));
    return m;
}

} // namespace detail

/// The ten intertwining identities through P and P*. `f` must lie in the
/// family with f(0) = 0 where the right-translation generator needs it.
inline std::vector<VerificationReport> check_intertwinings(double p, double t, const TestFunction& f,
                                                           const TruncatedSequence& a,
                                                           const IntertwiningOptions& opt = {})
{
    std::vector<VerificationReport> out;
    const std::size_t N = opt.out_len, M = std::max(opt.inner_len, N);
    std::map<std::string, std::string> params{
        {"p", std::to_string(p)}, {"t", std::to_string(t)}, {"n", std::to_string(N)}};
    const TruncatedSequence pf = poisson_forward(f, M);
    const TestFunction adj = poisson_adjoint_function(a);
    auto seq_report = [&](const char* id, const TruncatedSequence& lhs, const TruncatedSequence& rhs) {
        out.push_back(make_report(id, params, detail::seq_residual(lhs, rhs, N, opt.certified), opt.tol));
    };
    auto fn_report = [&](const char* id, const TruncatedSequence& lhs_seq, const TestFunction& rhs) {
        std::vector<cplx> lhs = poisson_adjoint(lhs_seq, opt.s_samples);
        out.push_back(make_report(id, params, detail::fn_residual(lhs, rhs, opt.s_samples), opt.tol));
    };

    // nabla P f = -P f'
    seq_report("intertwine.eliz.i", backward_diff(pf),
               scale_seq(poisson_forward(derivative(f), M), cplx(-1.0)));
    // e^{t nabla} P f = P T_right(t) f
    seq_report("intertwine.eliz.ii", apply(DiscOp{DiscSemigroup::ExpNabla, p, t}, pf),
               poisson_forward(apply(ContOp{ContSemigroup::TRight, p, t}, f), M));
    // P* Delta a = (P* a)'
    fn_report("intertwine.eliz.iii", forward_diff(a), derivative(adj));
    // P* e^{t Delta} a = T_left(t) P* a
    fn_report("intertwine.eliz.iv", apply(DiscOp{DiscSemigroup::ExpDelta, p, t}, a),
              apply(ContOp{ContSemigroup::TLeft, p, t}, adj));
    // B_p P f = -P Lambda_p f
    seq_report("intertwine.intert2.i", apply_generator(DiscGenerator::Bp, p, pf),
               scale_seq(poisson_forward(apply_generator(ContGenerator::LambdaP, p, f), M), cplx(-1.0)));
    // S_p(t) P f = P T_p^-(t) f
    seq_report("intertwine.intert2.ii", apply(DiscOp{DiscSemigroup::KoopmanS, p, t}, pf),
               poisson_forward(apply(ContOp{ContSemigroup::TpMinus, p, t}, f), M));
    // P* A_p a = Lambda_p P* a
    fn_report("intertwine.intert2.iii", apply_generator(DiscGenerator::Ap, p, a),
              apply_generator(ContGenerator::LambdaP, p, adj));
    // P* T_p(t) a = T_p^+(t) P* a
    fn_report("intertwine.intert2.iv", apply(DiscOp{DiscSemigroup::KoopmanT, p, t}, a),
              apply(ContOp{ContSemigroup::TpPlus, p, t}, adj));
    // S_{nabla,p}(t) P f = P R_p(t) f
    seq_report("intertwine.conmutante.i", apply(DiscOp{DiscSemigroup::PerturbedS, p, t}, pf),
               poisson_forward(apply(ContOp{ContSemigroup::Rp, p, t}, f), M));
    // P* T_{Delta,p}(t) a = S_p(t) P* a
    fn_report("intertwine.conmutante.ii", apply(DiscOp{DiscSemigroup::PerturbedT, p, t}, a),
              apply(ContOp{ContSemigroup::Sp, p, t}, adj));
    return out;
}

/// Variation-of-parameters formula for the perturbed semigroups:
///   T_{Delta,p}(t) a = T_p(t) a + integral_0^t T_p(t-s) Delta T_{Delta,p}(s) a ds
/// and the nabla twin (whose n = 0 row carries the -a(0) convention).
inline std::vector<VerificationReport> check_variation_of_parameters(double p, double t,
                                                                     const TruncatedSequence& a,
                                                                     std::size_t n_max, double tol,
                                                                     int order = 32)
{
    if (!(t > 0.0)) throw DomainError("check_variation_of_parameters: requires t > 0");
    std::vector<VerificationReport> out;
    std::map<std::string, std::string> params{{"p", std::to_string(p)}, {"t", std::to_string(t)}};
    const quad::Rule& rule = quad::legendre(order);
    struct Variant {
        const char* id;
        DiscSemigroup pert;
        DiscSemigroup base;
        DiscGenerator diff;
    };
    const Variant variants[] = {
        {"variation_of_parameters.t", DiscSemigroup::PerturbedT, DiscSemigroup::KoopmanT,
         DiscGenerator::Delta},
        {"variation_of_parameters.s", DiscSemigroup::PerturbedS, DiscSemigroup::KoopmanS,
         DiscGenerator::Nabla},
    };
    for (const Variant& var : variants) {
        const TruncatedSequence target = apply(DiscOp{var.pert, p, t}, a);
        const TruncatedSequence base = apply(DiscOp{var.base, p, t}, a);
        std::vector<cplx> integral(a.size(), 0.0);
        std::size_t valid = std::min(target.valid_len, base.valid_len);
        for (int i = 0; i < rule.order(); ++i) {
            const double s = 0.5 * t * (1.0 + rule.nodes[i]);
            const double w = 0.5 * t * rule.weights[i];
            const TruncatedSequence inner =
                apply_generator(var.diff, p, apply(DiscOp{var.pert, p, s}, a));
            const TruncatedSequence moved = apply(DiscOp{var.base, p, t - s}, inner);
            valid = std::min(valid, moved.valid_len);
            for (std::size_t n = 0; n < a.size() && n < moved.size(); ++n)
                integral[n] += w * moved.values[n];
        }
        double resid = 0.0;
        for (std::size_t n = 0; n < std::min({n_max, valid, a.size()}); ++n)
            resid = std::max(resid, std::abs(target.values[n] - base.values[n] - integral[n]));
        out.push_back(make_report(var.id, params, resid, tol));
    }
    return out;
}

} // namespace lpsemi
