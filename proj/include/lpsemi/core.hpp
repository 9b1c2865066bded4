#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "lpsemi/errors.hpp"

namespace lpsemi {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// True if z sits (exactly) on {0, -1, -2, ...}.
inline bool is_nonpositive_integer(cplx z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

/// 1/p with the convention 1/inf = 0. Rejects p < 1.
inline double inv_exponent(double p)
{
    if (std::isinf(p)) return 0.0;
    if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must satisfy p >= 1");
    return 1.0 / p;
}

/// max(|re|, |im|)-style magnitude used for mixed absolute/relative residuals.
inline double residual_scale(cplx a, cplx b)
{
    return 1.0 + std::max(std::abs(a), std::abs(b));
}

} // namespace lpsemi
