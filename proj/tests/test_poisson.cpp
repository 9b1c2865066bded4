#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lpsemi/poisson.hpp"

using namespace lpsemi;

TEST_CASE("forward transform of exponentials: P(e_lam)(n) = (1+lam)^-(n+1)")
{
    // the direct integral gives the -(n+1) exponent; spot-checked here
    // against the independent Laguerre quadrature route as well
    const TestFunction e1 = TestFunction::exponential(cplx(1.0));
    const TruncatedSequence s = poisson_forward(e1, 32);
    REQUIRE(std::abs(s[0] - 0.5) < 1e-14);
    for (std::size_t n = 0; n < 32; ++n) {
        const double expect = std::pow(2.0, -static_cast<double>(n) - 1.0);
        REQUIRE(std::abs(s[n] - expect) < 1e-14 * (1.0 + expect));
        REQUIRE(std::abs(poisson_forward_quadrature(e1, n) - expect) < 1e-10);
    }
    const cplx lam(0.6, 0.4);
    const TruncatedSequence sc = poisson_forward(TestFunction::exponential(lam), 24);
    for (std::size_t n = 0; n < 24; ++n) {
        const cplx expect = std::pow(1.0 + lam, -(static_cast<double>(n) + 1.0));
        REQUIRE(std::abs(sc[n] - expect) < 1e-13 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("forward transform of monomials: P(j_k) = k^k Cesaro numbers")
{
    // j_2(t) = t: P(j_2)(n) = n + 1 = k^2(n)
    const TestFunction j2 = TestFunction::monomial(1, cplx(0.0));
    const TruncatedSequence s = poisson_forward(j2, 24);
    for (std::size_t n = 0; n < 24; ++n)
        REQUIRE(std::abs(s[n] - (static_cast<double>(n) + 1.0)) < 1e-12 * (n + 1.0));
    // zero function maps to the zero sequence
    const TruncatedSequence z = poisson_forward(TestFunction{}, 8);
    for (std::size_t n = 0; n < 8; ++n) REQUIRE(z[n] == cplx(0.0));
}

TEST_CASE("closed form agrees with the Laguerre route on shifted terms")
{
    const TestFunction f({Term{cplx(0.7, -0.4), 2, cplx(0.8, 0.5), 1.3},
                          Term{cplx(1.0), 0, cplx(1.0), 0.0}});
    const TruncatedSequence s = poisson_forward(f, 40);
    for (std::size_t n : {0u, 1u, 5u, 17u, 33u}) {
        const cplx q = poisson_forward_quadrature(f, n);
        REQUIRE(std::abs(s[n] - q) < 1e-10 * (1.0 + std::abs(q)));
    }
}

TEST_CASE("non-integer powers through the quadrature path reproduce Cesaro numbers")
{
    for (double alpha : {0.5, 1.7, 3.2}) {
        for (std::size_t n : {0u, 1u, 4u, 11u}) {
            REQUIRE(poisson_forward_power(alpha, n) ==
                    Catch::Approx(cesaro_number(alpha, n)).epsilon(1e-11));
        }
    }
}

TEST_CASE("adjoint transform basics")
{
    const std::size_t N = 48;
    // P*(delta_0)(t) = e^{-t}
    const std::vector<cplx> v =
        poisson_adjoint(TruncatedSequence::delta(0, N), {0.0, 0.5, 1.0, 3.0});
    REQUIRE(std::abs(v[0] - 1.0) < 1e-15);
    REQUIRE(std::abs(v[2] - std::exp(-1.0)) < 1e-15);
    // P*((lam^n))(t) = e^{-(1-lam) t}
    const TruncatedSequence geo = TruncatedSequence::geometric(cplx(0.5), N);
    const std::vector<cplx> w = poisson_adjoint(geo, {0.3, 1.0, 2.5});
    REQUIRE(std::abs(w[0] - std::exp(-0.15)) < 1e-13);
    REQUIRE(std::abs(w[1] - std::exp(-0.5)) < 1e-13);
    REQUIRE(std::abs(w[2] - std::exp(-1.25)) < 1e-13);
    // P*(k^alpha)(t) = e^{-t} E^alpha_{1,1}(t)
    for (double alpha : {0.5, 2.0}) {
        const TruncatedSequence k = TruncatedSequence::cesaro(alpha, 96);
        const std::vector<cplx> kk = poisson_adjoint(k, {0.5, 2.0});
        REQUIRE(std::abs(kk[0] - std::exp(-0.5) * prabhakar(alpha, 1.0, 1.0, cplx(0.5))) < 1e-9);
        REQUIRE(std::abs(kk[1] - std::exp(-2.0) * prabhakar(alpha, 1.0, 1.0, cplx(2.0))) < 1e-9);
    }
    // the truncation gate rejects sample points the prefix cannot support
    const TruncatedSequence ones = TruncatedSequence::ones(12);
    REQUIRE_THROWS_AS(poisson_adjoint(ones, {30.0}), ConvergenceError);
}

TEST_CASE("P(P*(a)) closed form vs the double transform")
{
    const std::size_t N = 48, M = 24;
    // a = delta_0: (2^{-(m+1)})_m
    const TruncatedSequence r0 = pp_star(TruncatedSequence::delta(0, N), M);
    for (std::size_t m = 0; m < M; ++m)
        REQUIRE(std::abs(r0[m] - std::pow(0.5, static_cast<double>(m) + 1.0)) < 1e-15);
    // a = delta_1: ((m+1)/2^{m+2})_m
    const TruncatedSequence r1 = pp_star(TruncatedSequence::delta(1, N), M);
    for (std::size_t m = 0; m < M; ++m) {
        const double expect = (static_cast<double>(m) + 1.0) * std::pow(0.5, static_cast<double>(m) + 2.0);
        REQUIRE(std::abs(r1[m] - expect) < 1e-15);
    }
    // zero input
    const TruncatedSequence rz = pp_star(TruncatedSequence::zeros(N), M);
    for (std::size_t m = 0; m < M; ++m) REQUIRE(rz[m] == cplx(0.0));

    // oracle: the double transform P(P*(a)) computed through the family
    TruncatedSequence a = TruncatedSequence::zeros(N);
    a.values[0] = cplx(0.3, 0.1);
    a.values[3] = cplx(-1.0, 0.0);
    a.values[7] = cplx(0.0, 0.9);
    const TruncatedSequence direct = poisson_forward(poisson_adjoint_function(a), M);
    const TruncatedSequence closed = pp_star(a, M);
    REQUIRE(max_abs_diff(direct, closed) < 1e-8);
}

TEST_CASE("P*(P(f)) by Bessel kernel vs series route")
{
    const TestFunction e1 = TestFunction::exponential(cplx(1.0));
    const PStarPResult r = p_star_p(e1, {0.0, 1.0});
    // at t = 0 the kernel drops to integral e^{-2s} ds = 1/2
    REQUIRE(std::abs(r.bessel_route[0] - 0.5) < 1e-10);
    REQUIRE(r.max_disagreement < 1e-8);
    const PStarPResult z = p_star_p(TestFunction{}, {0.7});
    REQUIRE(std::abs(z.bessel_route[0]) < 1e-14);
    const TestFunction mixed({Term{cplx(1.0), 1, cplx(1.3), 0.0}, Term{cplx(0.4, 0.2), 0, cplx(0.9), 0.7}});
    REQUIRE(p_star_p(mixed, {0.5, 2.0}).max_disagreement < 1e-8);
}

TEST_CASE("convolution homomorphisms")
{
    const TestFunction f = TestFunction::exponential(cplx(1.0));
    const TestFunction g = TestFunction::exponential(cplx(2.0));
    TruncatedSequence a = TruncatedSequence::delta(0, 16);
    TruncatedSequence b = TruncatedSequence::delta(0, 16);
    const auto reports =
        check_convolution_homomorphisms(f, g, a, b, 33, {0.3, 1.0, 2.0}, 1e-10);
    for (const auto& r : reports) {
        INFO(r.identity_id);
        REQUIRE(r.residual < 1e-10);
        REQUIRE(r.pass);
    }
    // P(e_1 * e_1)(n) = (n+1)/2^{n+2}
    const TruncatedSequence self = poisson_forward(convolve_exponentials(f, f), 24);
    for (std::size_t n = 0; n < 24; ++n) {
        const double expect = (static_cast<double>(n) + 1.0) * std::pow(0.5, static_cast<double>(n) + 2.0);
        REQUIRE(std::abs(self[n] - expect) < 1e-13);
    }
    // P*(delta_1)(t) = t e^{-t} = (e^{-t} * e^{-t})(t)
    const std::vector<cplx> d1 = poisson_adjoint(TruncatedSequence::delta(1, 8), {0.5, 1.5});
    REQUIRE(std::abs(d1[0] - 0.5 * std::exp(-0.5)) < 1e-14);
    REQUIRE(std::abs(d1[1] - 1.5 * std::exp(-1.5)) < 1e-14);
}

TEST_CASE("transform conjugation identities")
{
    const TestFunction f = TestFunction::exponential(cplx(1.0));
    TruncatedSequence a = TruncatedSequence::delta(0, 24);
    a.values[2] = cplx(0.4, -0.1);
    const std::vector<cplx> zs{cplx(0.0), cplx(0.5), cplx(-0.3), cplx(0.0, 0.4), cplx(1.0), cplx(2.0, 1.0)};
    const auto reports = check_transform_conjugation(f, a, zs, 64, 1e-10);
    for (const auto& r : reports) {
        INFO(r.identity_id);
        REQUIRE(r.pass);
    }
    // spot value: both sides at z = 0.5 equal L e_1(0.5) = 2/3
    const TruncatedSequence pf = poisson_forward(f, 64);
    REQUIRE(std::abs(zeta_transform(pf, cplx(0.5)) - 2.0 / 3.0) < 1e-10);
}

TEST_CASE("norm contraction and sharpness of the Poisson pair")
{
    // |P f|_p <= |f|_p on a few family members, p in {1, 2, 4}
    const std::vector<TestFunction> fs{
        TestFunction::exponential(cplx(1.0)),
        TestFunction({Term{cplx(0.8, -0.3), 2, cplx(1.5, 0.4), 0.0}, Term{cplx(-1.0, 0.2), 0, cplx(0.7), 1.2}}),
    };
    for (const TestFunction& f : fs) {
        const TruncatedSequence pf = poisson_forward(f, 96);
        for (double p : {1.0, 2.0, 4.0}) {
            const double seq_norm = lp_norm(pf, p);
            const double tail =
                pf.tail_coeff / std::max(1e-9, 1.0 - pf.tail_ratio); // crude l^1-style tail pad
            REQUIRE(seq_norm <= lp_norm_fn(f, p) * (1.0 + 1e-9) + tail * 1e-12);
        }
    }
    // |P e_lam|_p / |e_lam|_p increases toward 1 as lam -> 0+ (for p = 1 the
    // two norms are already equal, by Fubini on the positive integrand)
    for (double p : {1.0, 2.0, 4.0}) {
        double prev = 0.0;
        for (double lam : {1.0, 0.1, 0.01}) {
            // closed forms: |e_lam|_p^p = 1/(p lam); |P e_lam|_p^p = sum (1+lam)^{-p(n+1)}
            const double fn = std::pow(p * lam, -1.0 / p);
            const double q = std::pow(1.0 + lam, -p);
            const double sn = std::pow(q / (1.0 - q), 1.0 / p);
            const double ratio = sn / fn;
            REQUIRE(ratio <= 1.0 + 1e-12);
            REQUIRE(ratio >= prev - 1e-12);
            prev = ratio;
        }
        REQUIRE(prev > 0.99);
    }
}

TEST_CASE("adjoint pairing <P f, b> = <f, P* b>")
{
    const std::vector<TestFunction> fs{
        TestFunction::exponential(cplx(1.0)),
        TestFunction({Term{cplx(1.0), 1, cplx(2.0), 0.5}, Term{cplx(0.5), 0, cplx(1.0), 0.0}}),
    };
    TruncatedSequence b = TruncatedSequence::zeros(20);
    b.values[0] = cplx(1.0);
    b.values[4] = cplx(-0.3, 0.7);
    b.values[11] = cplx(0.2);
    for (const TestFunction& f : fs) REQUIRE(adjoint_pairing_residual(f, b) < 1e-9);
}

TEST_CASE("injectivity proxy: P f = 0 forces the Laplace transform to vanish")
{
    // if P(f)(n) = 0 for n < N then Zeta(P f)(z) = L f(1-z) = 0 at samples
    const TestFunction f = subtract(TestFunction::exponential(cplx(1.0)),
                                    TestFunction::exponential(cplx(1.0)));
    const TruncatedSequence pf = poisson_forward(f, 32);
    for (std::size_t n = 0; n < 32; ++n) REQUIRE(std::abs(pf[n]) < 1e-15);
    for (double z : {-0.9, -0.5, 0.0, 0.3, 0.7}) {
        // Chebyshev-ish samples of the unit interval
        REQUIRE(std::abs(laplace(f, 1.0 - z)) < 1e-15);
    }
}
