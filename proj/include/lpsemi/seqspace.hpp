#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "lpsemi/core.hpp"
#include "lpsemi/specfun.hpp"

namespace lpsemi {

/// What is known about the entries beyond the stored prefix.
///   Zero:      a(j) = 0 exactly for j >= size().
///   Geometric: |a(j)| <= tail_coeff * tail_ratio^(j - size()) for j >= size().
/// A bounded-but-not-decaying tail is Geometric with ratio 1.
enum class TailModel { Zero, Geometric };

/// Finite prefix of a complex sequence standing in for an l^p element.
/// Entries [0, valid_len) are trustworthy; later stored entries were touched
/// by a truncation edge (or a failed tail certificate) and identity suites
/// must not compare them.
struct TruncatedSequence {
    std::vector<cplx> values;
    std::size_t valid_len = 0;
    TailModel tail = TailModel::Zero;
    double tail_coeff = 0.0;
    double tail_ratio = 0.0;
    std::string tail_note;

    TruncatedSequence() = default;
    explicit TruncatedSequence(std::vector<cplx> v) : values(std::move(v)), valid_len(values.size()) {}

    std::size_t size() const { return values.size(); }
    cplx operator[](std::size_t n) const { return n < values.size() ? values[n] : cplx(0.0); }
    cplx& at(std::size_t n) { return values.at(n); }

    double max_abs() const
    {
        double m = 0.0;
        for (const cplx& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    /// Bound on |a(j)| for j >= size() under the tail model.
    double tail_entry_bound(std::size_t j) const
    {
        if (tail == TailModel::Zero) return 0.0;
        if (j < size()) return max_abs();
        double b = tail_coeff;
        // anchored at size(); ratio^192 underflow is harmless here
        for (std::size_t m = size(); m < j && b > 0.0; ++m) b *= tail_ratio;
        return b;
    }

    static TruncatedSequence zeros(std::size_t n)
    {
        TruncatedSequence s(std::vector<cplx>(n, cplx(0.0)));
        return s;
    }
    static TruncatedSequence delta(std::size_t k, std::size_t n)
    {
        TruncatedSequence s = zeros(n);
        if (k < n) s.values[k] = 1.0;
        return s;
    }
    static TruncatedSequence ones(std::size_t n)
    {
        TruncatedSequence s(std::vector<cplx>(n, cplx(1.0)));
        s.tail = TailModel::Geometric;
        s.tail_coeff = 1.0;
        s.tail_ratio = 1.0;
        s.tail_note = "constant sequence, tail bounded by 1";
        return s;
    }
    /// (r^n) prefix with its exact geometric tail.
    static TruncatedSequence geometric(cplx r, std::size_t n)
    {
        TruncatedSequence s = zeros(n);
        cplx v = 1.0;
        for (std::size_t j = 0; j < n; ++j, v *= r) s.values[j] = v;
        s.tail = TailModel::Geometric;
        s.tail_coeff = std::pow(std::abs(r), static_cast<double>(n));
        s.tail_ratio = std::abs(r);
        s.tail_note = "geometric sequence";
        return s;
    }
    /// Cesaro kernel prefix (k^alpha(n)) with a sound geometric tail bound.
    static TruncatedSequence cesaro(double alpha, std::size_t n)
    {
        TruncatedSequence s = zeros(n);
        const std::vector<double> k = cesaro_numbers(alpha, n + 1);
        for (std::size_t j = 0; j < n; ++j) s.values[j] = k[j];
        s.tail = TailModel::Geometric;
        // |k(j+1)/k(j)| = |alpha+j|/(j+1) is below this for every j >= n
        const double ratio = std::max(1.0, std::abs(alpha + static_cast<double>(n)) / (static_cast<double>(n) + 1.0));
        s.tail_coeff = std::abs(k[n]);
        s.tail_ratio = ratio;
        s.tail_note = "cesaro kernel prefix";
        return s;
    }
};

/// l^p norm of the stored truncation; p >= 1 or p = inf.
inline double lp_norm(const TruncatedSequence& a, double p)
{
    if (std::isinf(p)) {
        return a.max_abs();
    }
    if (!(p >= 1.0)) throw DomainError("lp_norm: requires p >= 1");
    double s = 0.0;
    for (const cplx& v : a.values) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

inline TruncatedSequence scale_seq(TruncatedSequence a, cplx factor)
{
    for (cplx& v : a.values) v *= factor;
    a.tail_coeff *= std::abs(factor);
    return a;
}

/// Bilinear pairing sum a(n) b(n) over the common stored prefix.
inline cplx pairing(const TruncatedSequence& a, const TruncatedSequence& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a.values[j] * b.values[j];
    return s;
}

/// Cauchy product prefix (a * b)(n) = sum_{j<=n} a(n-j) b(j). Output length
/// is max(len a, len b) unless full = true, which returns the complete
/// support of two zero-tail factors.
inline TruncatedSequence convolve(const TruncatedSequence& a, const TruncatedSequence& b, bool full = false)
{
    const std::size_t n = full && a.tail == TailModel::Zero && b.tail == TailModel::Zero
                              ? a.size() + b.size() - 1
                              : std::max(a.size(), b.size());
    TruncatedSequence out = TruncatedSequence::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            if (i - j < a.size() && j < b.size()) s += a.values[i - j] * b.values[j];
        }
        out.values[i] = s;
    }
    if (a.tail == TailModel::Zero && b.tail == TailModel::Zero) {
        out.valid_len = out.size();
        if (!full && a.size() + b.size() - 1 > n) {
            out.tail = TailModel::Geometric;
            out.tail_coeff = lp_norm(a, 1.0) * b.max_abs();
            out.tail_ratio = 1.0;
            out.tail_note = "truncated convolution of finitely supported factors";
        }
    } else {
        out.valid_len = std::min(a.valid_len, b.valid_len);
        out.tail = TailModel::Geometric;
        out.tail_coeff = lp_norm(a, 1.0) * std::max(b.max_abs(), b.tail_coeff) +
                         lp_norm(b, 1.0) * std::max(a.max_abs(), a.tail_coeff);
        out.tail_ratio = 1.0;
        out.tail_note = "convolution tail bounded via Young";
    }
    return out;
}

/// Forward difference (Delta a)(n) = a(n+1) - a(n). Reading a(size) is exact
/// for a zero tail; otherwise the last stored entry is flagged invalid.
inline TruncatedSequence forward_diff(const TruncatedSequence& a)
{
    TruncatedSequence out = TruncatedSequence::zeros(a.size());
    for (std::size_t n = 0; n + 1 < a.size(); ++n) out.values[n] = a.values[n + 1] - a.values[n];
    if (a.tail == TailModel::Zero) {
        if (!a.values.empty()) out.values[a.size() - 1] = -a.values[a.size() - 1];
        out.valid_len = a.valid_len == a.size() ? a.size() : (a.valid_len == 0 ? 0 : a.valid_len - 1);
        out.tail = TailModel::Zero;
    } else {
        out.valid_len = std::min(a.valid_len, a.size() - 1);
        out.tail = TailModel::Geometric;
        out.tail_coeff = a.tail_coeff * (1.0 + a.tail_ratio);
        out.tail_ratio = a.tail_ratio;
    }
    return out;
}

/// Backward difference (nabla a)(n) = a(n-1) - a(n), with (nabla a)(0) = -a(0).
/// For a zero tail the output grows by one entry so it stays exactly supported.
inline TruncatedSequence backward_diff(const TruncatedSequence& a)
{
    const bool zero_tail = a.tail == TailModel::Zero;
    const std::size_t n_out = zero_tail ? a.size() + 1 : a.size();
    TruncatedSequence out = TruncatedSequence::zeros(n_out);
    for (std::size_t n = 0; n < n_out; ++n) {
        const cplx prev = n == 0 ? cplx(0.0) : a[n - 1];
        out.values[n] = prev - a[n];
    }
    if (zero_tail) {
        out.valid_len = a.valid_len == a.size() ? n_out : a.valid_len;
        out.tail = TailModel::Zero;
    } else {
        out.valid_len = a.valid_len;
        out.tail = TailModel::Geometric;
        out.tail_coeff = a.tail_coeff * (1.0 + 1.0 / std::max(a.tail_ratio, 1e-300));
        out.tail_ratio = a.tail_ratio;
    }
    return out;
}

/// Truncated Zeta transform sum_n a(n) z^n, |z| < 1, with the geometric tail
/// estimate implied by the tail model (written to *tail_estimate if given).
inline cplx zeta_transform(const TruncatedSequence& a, cplx z, double* tail_estimate = nullptr)
{
    if (!(std::abs(z) < 1.0)) throw DomainError("zeta_transform: requires |z| < 1");
    cplx sum = 0.0, zn = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        sum += a.values[n] * zn;
        zn *= z;
    }
    if (tail_estimate) {
        const double az = std::abs(z);
        if (a.tail == TailModel::Zero) {
            *tail_estimate = 0.0;
        } else {
            const double q = a.tail_ratio * az;
            *tail_estimate = q < 1.0 ? a.tail_coeff * std::pow(az, static_cast<double>(a.size())) / (1.0 - q)
                                     : inf;
        }
    }
    return sum;
}

/// Largest n with both entries valid, clamped for identity comparisons.
inline std::size_t common_valid(const TruncatedSequence& a, const TruncatedSequence& b)
{
    return std::min(a.valid_len, b.valid_len);
}

/// sup norm of (a - b) over the common valid prefix.
inline double max_abs_diff(const TruncatedSequence& a, const TruncatedSequence& b)
{
    const std::size_t n = common_valid(a, b);
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

} // namespace lpsemi
