#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lpsemi/charlier.hpp"

using namespace lpsemi;

namespace {
long long to_ll(__int128 v) { return static_cast<long long>(v); }
}

TEST_CASE("charlier_p low-degree closed forms")
{
    // p2(z) = z^2 + 3z + 1
    REQUIRE(charlier_p(2, cplx(1.0)).real() == Catch::Approx(5.0).epsilon(1e-15));
    const cplx z(0.3, -0.7);
    const cplx expect = z * z + 3.0 * z + 1.0;
    REQUIRE(std::abs(charlier_p(2, z) - expect) < 1e-14);
    // p3(z) = z^3 + 6 z^2 + 8 z + 1 at z = -1 evaluates to -2
    REQUIRE(charlier_p(3, cplx(-1.0)).real() == Catch::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("integer prefixes match the two OEIS sequences exactly")
{
    const long long a000522[6] = {1, 2, 5, 16, 65, 326};
    const long long a001339[6] = {1, 3, 11, 49, 261, 1631};
    for (std::size_t n = 0; n < 6; ++n) {
        REQUIRE(to_ll(charlier_p_exact(n, 1)) == a000522[n]);
        REQUIRE(to_ll(charlier_p_exact(n, 2)) == a001339[n]);
    }
}

TEST_CASE("direct sum agrees with the recurrence")
{
    REQUIRE(charlier_p_direct(0, cplx(2.3, 1.0)) == cplx(1.0));
    REQUIRE(charlier_p_direct(3, cplx(1.0)).real() == Catch::Approx(16.0).epsilon(1e-13));
    for (std::size_t n : {1u, 4u, 9u, 17u, 30u}) {
        for (cplx z : {cplx(0.5, 0.0), cplx(-2.0, 0.0), cplx(3.0, 4.0), cplx(-7.5, 1.2)}) {
            const cplx a = charlier_p(n, z);
            const cplx b = charlier_p_direct(n, z);
            REQUIRE(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
        }
    }
    // integer inputs: recurrence and direct sum agree exactly in integer
    // arithmetic for n <= 20 (the floating path only to machine precision)
    for (std::size_t n = 0; n <= 20; ++n) {
        for (long long z = 0; z <= 4; ++z) {
            __int128 direct = 0;
            __int128 falling = 1;
            __int128 kz = 1; // k^z(j) j = 0
            for (std::size_t j = 0; j <= n; ++j) {
                if (j > 0) {
                    falling *= static_cast<__int128>(n - j + 1);
                    kz = kz * (z + static_cast<long long>(j) - 1) / static_cast<long long>(j);
                }
                direct += kz * falling;
            }
            REQUIRE(direct == charlier_p_exact(n, z));
            const double exact = static_cast<double>(charlier_p_exact(n, z));
            const double fl = charlier_p(n, cplx(static_cast<double>(z))).real();
            REQUIRE(std::abs(fl - exact) <= 1e-13 * (1.0 + std::abs(exact)));
        }
    }
}

TEST_CASE("charlier_q values and identities")
{
    REQUIRE(charlier_q(2, cplx(1.0)).real() == Catch::Approx(2.5).epsilon(1e-15));
    REQUIRE(charlier_q(3, cplx(1.0)).real() == Catch::Approx(16.0 / 6.0).epsilon(1e-14));
    // q_n(0) = 1/n!; decaying values carry absolute (not relative) accuracy
    for (std::size_t n : {0u, 1u, 2u, 5u, 11u}) {
        REQUIRE(charlier_q(n, cplx(0.0)).real() ==
                Catch::Approx(1.0 / std::tgamma(n + 1.0)).margin(1e-14));
    }
    // q_n(z) = (k^z * eps)(n) with eps(n) = 1/n!
    const cplx z(1.4, -0.6);
    const std::size_t N = 24;
    const std::vector<cplx> kz = cesaro_numbers_c(z, N);
    for (std::size_t n = 0; n < N; ++n) {
        cplx conv = 0.0;
        for (std::size_t j = 0; j <= n; ++j)
            conv += kz[j] / std::tgamma(static_cast<double>(n - j) + 1.0);
        const cplx q = charlier_q(n, z);
        REQUIRE(std::abs(conv - q) <= 1e-12 * (1.0 + std::abs(q)));
    }
}

TEST_CASE("backward difference identity del p_n = n p_{n-1}, exact integers")
{
    for (std::size_t n = 1; n <= 20; ++n) {
        for (long long z = 0; z <= 10; ++z) {
            const __int128 lhs = charlier_p_exact(n, z) - charlier_p_exact(n, z - 1);
            const __int128 rhs = static_cast<__int128>(n) * charlier_p_exact(n - 1, z);
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("second-order difference identity")
{
    // del^2 p_n(z) - (z+n) del p_n(z) + n p_n(z) = 0
    for (std::size_t n = 0; n <= 20; ++n) {
        for (long long z = 0; z <= 10; ++z) {
            auto del = [&](long long zz) { return charlier_p_exact(n, zz) - charlier_p_exact(n, zz - 1); };
            const __int128 del2 = del(z) - del(z - 1);
            const __int128 lhs = del2 - (static_cast<__int128>(z) + static_cast<__int128>(n)) * del(z) +
                                 static_cast<__int128>(n) * charlier_p_exact(n, z);
            REQUIRE(lhs == static_cast<__int128>(0));
        }
    }
}

TEST_CASE("generating function partial sums approach e^w (1-w)^{-z}")
{
    REQUIRE(charlier_generating_partial(cplx(0.7, 0.1), cplx(0.0), 10) == cplx(1.0));
    double last = 0.0;
    const cplx val = charlier_generating_partial(cplx(1.0), cplx(0.5), 60, &last);
    REQUIRE(std::abs(val - std::exp(0.5) * 2.0) < 1e-10);
    REQUIRE(last < 1e-10);
    // p_n(0) = 1 means the z = 0 column is the partial sum of e^w
    const cplx val0 = charlier_generating_partial(cplx(0.0), cplx(0.3, 0.2), 40);
    REQUIRE(std::abs(val0 - std::exp(cplx(0.3, 0.2))) < 1e-12);
    REQUIRE_THROWS_AS(charlier_generating_partial(cplx(1.0), cplx(1.2), 10), DomainError);

    for (cplx z : {cplx(0.0), cplx(1.0), cplx(2.5)}) {
        for (cplx w : {cplx(0.5), cplx(-0.5), cplx(0.0, 0.3)}) {
            const cplx target = std::exp(w) * std::exp(-z * std::log(1.0 - w));
            REQUIRE(std::abs(charlier_generating_partial(z, w, 120) - target) < 1e-10);
        }
    }
}

TEST_CASE("lp membership trend of (q_n(z)) in N")
{
    // blocks of sum |q_n(z)|^p flatten for Re z < 1 - 1/p and grow otherwise
    auto block = [](cplx z, double p, std::size_t from, std::size_t to) {
        double s = 0.0;
        const std::vector<cplx> q = charlier_q_prefix(z, to);
        for (std::size_t n = from; n < to; ++n) s += std::pow(std::abs(q[n]), p);
        return s;
    };
    const double p = 2.0;
    // convergent side: Re z = 0.1 < 1 - 1/2
    {
        const cplx z(0.1, 0.0);
        const double b1 = block(z, p, 64, 128), b2 = block(z, p, 128, 256);
        REQUIRE(b2 < b1);
    }
    // divergent side: Re z = 1.5 > 1 - 1/2
    {
        const cplx z(1.5, 0.0);
        const double b1 = block(z, p, 64, 128), b2 = block(z, p, 128, 256);
        REQUIRE(b2 > b1);
    }
}
