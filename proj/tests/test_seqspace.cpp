#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lpsemi/seqspace.hpp"

using namespace lpsemi;

namespace {

std::vector<TruncatedSequence> random_pairs_pool(std::uint64_t seed, std::size_t count, std::size_t n)
{
    std::mt19937_64 rng(seed);
    auto u = [&]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    std::vector<TruncatedSequence> out;
    for (std::size_t i = 0; i < count; ++i) {
        TruncatedSequence s = TruncatedSequence::zeros(n);
        for (std::size_t j = 0; j < n; ++j) s.values[j] = cplx(u(), u());
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("lp_norm basics")
{
    const std::size_t N = 16;
    REQUIRE(lp_norm(TruncatedSequence::delta(0, N), 1.0) == 1.0);
    REQUIRE(lp_norm(TruncatedSequence::delta(0, N), 2.0) == 1.0);
    REQUIRE(lp_norm(TruncatedSequence::delta(0, N), inf) == 1.0);
    REQUIRE(lp_norm(TruncatedSequence::ones(N), 1.0) == Catch::Approx(static_cast<double>(N)));
    REQUIRE_THROWS_AS(lp_norm(TruncatedSequence::ones(N), 0.5), DomainError);
    // geometric 2^-n, p = 2, N = 64: sum 4^-n = 4/3
    const TruncatedSequence g = TruncatedSequence::geometric(cplx(0.5), 64);
    REQUIRE(lp_norm(g, 2.0) == Catch::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("convolution basics and identities")
{
    const std::size_t N = 24;
    const TruncatedSequence d1 = TruncatedSequence::delta(1, N);
    const TruncatedSequence d2 = TruncatedSequence::delta(2, N);
    const TruncatedSequence c = convolve(d1, d2);
    for (std::size_t n = 0; n < N; ++n) REQUIRE(c[n] == (n == 3 ? cplx(1.0) : cplx(0.0)));

    // k^a * k^b = k^(a+b)
    const TruncatedSequence ka = TruncatedSequence::cesaro(0.8, N);
    const TruncatedSequence kb = TruncatedSequence::cesaro(1.7, N);
    const TruncatedSequence kc = convolve(ka, kb);
    const std::vector<double> kab = cesaro_numbers(0.8 + 1.7, N);
    for (std::size_t n = 0; n < common_valid(kc, kc); ++n)
        REQUIRE(std::abs(kc[n] - kab[n]) < 1e-12 * (1.0 + std::abs(kab[n])));
}

TEST_CASE("convolution is a module action: |a*b|_p <= |a|_p |b|_1 on prefixes")
{
    auto pool = random_pairs_pool(12345, 8, 32);
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
        const TruncatedSequence c = convolve(pool[i], pool[i + 1]);
        for (double p : {1.0, 2.0, 4.0, inf}) {
            REQUIRE(lp_norm(c, p) <= lp_norm(pool[i], p) * lp_norm(pool[i + 1], 1.0) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("forward difference")
{
    const std::size_t N = 10;
    const TruncatedSequence d0 = TruncatedSequence::delta(0, N);
    const TruncatedSequence fd = forward_diff(d0);
    REQUIRE(fd[0] == cplx(-1.0)); // delta_0 -> -delta_0 prefix
    for (std::size_t n = 1; n < N; ++n) REQUIRE(fd[n] == cplx(0.0));

    TruncatedSequence ramp = TruncatedSequence::zeros(N);
    for (std::size_t n = 0; n < N; ++n) ramp.values[n] = static_cast<double>(n);
    ramp.tail = TailModel::Geometric; // unknown growth; last entry must be flagged
    ramp.tail_coeff = static_cast<double>(N);
    ramp.tail_ratio = 1.0;
    const TruncatedSequence dr = forward_diff(ramp);
    REQUIRE(dr.valid_len == N - 1);
    for (std::size_t n = 0; n < dr.valid_len; ++n) REQUIRE(dr[n] == cplx(1.0));

    const TruncatedSequence dc = forward_diff(TruncatedSequence::ones(N));
    for (std::size_t n = 0; n + 1 < N; ++n) REQUIRE(dc[n] == cplx(0.0));
}

TEST_CASE("backward difference with the n = 0 convention")
{
    const std::size_t N = 10;
    const TruncatedSequence d0 = TruncatedSequence::delta(0, N);
    const TruncatedSequence bd = backward_diff(d0);
    REQUIRE(bd[0] == cplx(-1.0));
    REQUIRE(bd[1] == cplx(1.0)); // delta_1 - delta_0
    for (std::size_t n = 2; n < N; ++n) REQUIRE(bd[n] == cplx(0.0));

    TruncatedSequence ones = TruncatedSequence::zeros(N); // exactly supported constant block
    for (auto& v : ones.values) v = 1.0;
    const TruncatedSequence bo = backward_diff(ones);
    REQUIRE(bo[0] == cplx(-1.0));
    for (std::size_t n = 1; n < N; ++n) REQUIRE(bo[n] == cplx(0.0));
    REQUIRE(bo[N] == cplx(1.0)); // support edge from the zero tail

    TruncatedSequence ramp = TruncatedSequence::zeros(N);
    for (std::size_t n = 0; n < N; ++n) ramp.values[n] = static_cast<double>(n);
    const TruncatedSequence br = backward_diff(ramp);
    REQUIRE(br[0] == cplx(0.0));
    for (std::size_t n = 1; n < N; ++n) REQUIRE(br[n] == cplx(-1.0));
}

TEST_CASE("zeta transform")
{
    const std::size_t N = 40;
    REQUIRE(zeta_transform(TruncatedSequence::delta(3, N), cplx(0.5)) == cplx(0.125));
    double tail = -1.0;
    const cplx z = zeta_transform(TruncatedSequence::ones(N), cplx(0.5), &tail);
    REQUIRE(std::abs(z - 2.0) <= tail + 1e-15);
    REQUIRE(tail < 1e-10);
    // k^alpha prefix at z = 0.5 -> 2^alpha within the recorded tail bound
    for (double alpha : {0.5, 1.0, 2.5}) {
        const TruncatedSequence k = TruncatedSequence::cesaro(alpha, 80);
        double te = -1.0;
        const cplx v = zeta_transform(k, cplx(0.5), &te);
        REQUIRE(std::abs(v - std::pow(2.0, alpha)) <= te + 1e-12);
    }
    REQUIRE_THROWS_AS(zeta_transform(TruncatedSequence::ones(4), cplx(1.0)), DomainError);
}

TEST_CASE("difference operators are adjoint up to the boundary")
{
    // <Delta a, b> = <a, nabla b> when both supported in [0, N-2]
    auto pool = random_pairs_pool(777, 4, 24);
    for (auto& s : pool) {
        s.values[s.size() - 1] = 0.0;
        s.values[s.size() - 2] = 0.0;
    }
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
        const cplx lhs = pairing(forward_diff(pool[i]), pool[i + 1]);
        const cplx rhs = pairing(pool[i], backward_diff(pool[i + 1]));
        REQUIRE(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("truncated operator norms of the differences approach 2 from below")
{
    // p = 1 column-sum norm of Delta on an N-truncation is exactly 2
    auto norm1_delta = [](std::size_t n) {
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            TruncatedSequence e = TruncatedSequence::delta(j, n);
            e.tail = TailModel::Geometric; // forbid the support-edge extension
            e.tail_coeff = 0.0;
            e.tail_ratio = 0.0;
            double s = 0.0;
            const TruncatedSequence de = forward_diff(e);
            for (std::size_t i = 0; i < n; ++i) s += std::abs(de[i]);
            best = std::max(best, s);
        }
        return best;
    };
    REQUIRE(norm1_delta(16) == Catch::Approx(2.0));

    // p = 2 norms of the honest N x N truncation grow toward 2
    auto norm2 = [](std::size_t n) {
        // A = truncated Delta: A[i][i] = -1, A[i][i+1] = 1
        auto apply_a = [&](const std::vector<double>& x, bool transpose) {
            std::vector<double> y(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (!transpose) {
                    y[i] = -x[i] + (i + 1 < n ? x[i + 1] : 0.0);
                } else {
                    y[i] = -x[i] + (i > 0 ? x[i - 1] : 0.0);
                }
            }
            return y;
        };
        std::vector<double> v(n, 1.0);
        double sigma2 = 0.0;
        for (int it = 0; it < 800; ++it) {
            std::vector<double> w = apply_a(apply_a(v, false), true);
            double nrm = 0.0;
            for (double x : w) nrm += x * x;
            nrm = std::sqrt(nrm);
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nrm;
            sigma2 = nrm;
        }
        return std::sqrt(sigma2);
    };
    const double n16 = norm2(16);
    const double n48 = norm2(48);
    REQUIRE(n16 < n48);
    REQUIRE(n48 < 2.0);
    REQUIRE(n48 > 1.98);
}
