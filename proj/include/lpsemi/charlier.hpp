#pragma once

#include <cstdint>
#include <vector>

#include "lpsemi/core.hpp"
#include "lpsemi/specfun.hpp"

namespace lpsemi {

/// Poisson-Charlier polynomial p_n(z) by the three-term recurrence
///   p_{n+1}(z) = (z + n + 1) p_n(z) - n p_{n-1}(z),   p_0 = 1, p_1 = z + 1.
/// Monic of degree n with p_n(0) = 1.
inline cplx charlier_p(std::size_t n, cplx z)
{
    cplx prev = 1.0;
    if (n == 0) return prev;
    cplx cur = z + 1.0;
    for (std::size_t m = 1; m < n; ++m) {
        const cplx next = (z + static_cast<double>(m) + 1.0) * cur - static_cast<double>(m) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Exact-integer evaluation of p_n(z) for integer z. Products stay inside
/// 128 bits for n <= 24 and |z| <= 16, which covers every exact check here.
inline __int128 charlier_p_exact(std::size_t n, long long z)
{
    if (n > 24) throw DomainError("charlier_p_exact: exact path supports n <= 24");
    __int128 prev = 1;
    if (n == 0) return prev;
    __int128 cur = z + 1;
    for (std::size_t m = 1; m < n; ++m) {
        const __int128 next = (static_cast<__int128>(z) + static_cast<__int128>(m) + 1) * cur -
                              static_cast<__int128>(m) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Direct-sum evaluation p_n(z) = n! sum_{j<=n} k^z(j) / (n-j)!.
inline cplx charlier_p_direct(std::size_t n, cplx z)
{
    const std::vector<cplx> kz = cesaro_numbers_c(z, n + 1);
    // n!/(n-j)! accumulated as a falling product keeps every factor finite.
    cplx sum = 0.0;
    double falling = 1.0;
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > 0) falling *= static_cast<double>(n - j + 1);
        sum += kz[j] * falling;
    }
    return sum;
}

/// Normalized polynomial q_n(z) = p_n(z)/n! by its own recurrence
///   (n+1) q_{n+1}(z) = (z + n + 1) q_n(z) - q_{n-1}(z),
/// which avoids the factorial overflow of forming p_n first.
inline cplx charlier_q(std::size_t n, cplx z)
{
    cplx prev = 1.0;
    if (n == 0) return prev;
    cplx cur = z + 1.0;
    for (std::size_t m = 1; m < n; ++m) {
        const cplx next = ((z + static_cast<double>(m) + 1.0) * cur - prev) / (static_cast<double>(m) + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Prefix (q_0(z), ..., q_{count-1}(z)).
inline std::vector<cplx> charlier_q_prefix(cplx z, std::size_t count)
{
    std::vector<cplx> out(count);
    for (std::size_t n = 0; n < count; ++n) {
        if (n == 0)
            out[n] = 1.0;
        else if (n == 1)
            out[n] = z + 1.0;
        else
            out[n] = ((z + static_cast<double>(n)) * out[n - 1] - out[n - 2]) / static_cast<double>(n);
    }
    return out;
}

/// Partial sum sum_{n<=N} p_n(z) w^n / n!, which converges to e^w (1-w)^{-z}
/// for |w| < 1. Reports the magnitude of the last term taken.
inline cplx charlier_generating_partial(cplx z, cplx w, std::size_t N, double* last_term_mag = nullptr)
{
    if (!(std::abs(w) < 1.0)) throw DomainError("charlier_generating_partial: requires |w| < 1");
    cplx sum = 0.0, wn = 1.0, last = 1.0;
    std::vector<cplx> q = charlier_q_prefix(z, N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        last = q[n] * wn;
        sum += last;
        wn *= w;
    }
    if (last_term_mag) *last_term_mag = std::abs(last);
    return sum;
}

/// Backward difference in the polynomial argument, (del f)(z) = f(z) - f(z-1);
/// for p_n it satisfies (del p_n)(z) = n p_{n-1}(z).
inline cplx charlier_backward_diff(std::size_t n, cplx z)
{
    return charlier_p(n, z) - charlier_p(n, z - 1.0);
}

} // namespace lpsemi
