#include <chrono>

#include <gtest/gtest.h>

#include <lacuna/dfinite/ode.hpp>
#include <lacuna/oracle/series.hpp>
#include <lacuna/poly/parse.hpp>

using namespace lacuna;

namespace
{

LaurentPoly linear_denominator(std::size_t d)
{
    LaurentPoly Q = LaurentPoly::constant(d, 1);
    for (std::size_t j = 0; j < d; ++j) {
        Q -= LaurentPoly::variable(d, j);
    }
    return Q;
}

RatFun grz()
{
    LaurentPoly Q = linear_denominator(4);
    Q.add_term({1, 1, 1, 1}, 27);
    return RatFun(LaurentPoly::constant(4, 1), Q, 1);
}

Integer factorial(long n)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

// [ (xyzw)^n ] sum_m (x+y+z+w-27xyzw)^m, by the multinomial theorem.
Integer grz_diagonal_closed_form(long n)
{
    Integer s = 0, p = 1;
    for (long k = 0; k <= n; ++k) {
        const Integer f = factorial(n - k);
        s += p * factorial(4 * n - 3 * k) / (factorial(k) * f * f * f * f);
        p *= -27;
    }
    return s;
}

} // namespace

TEST(Oracle, BinomialCoefficients)
{
    const CoeffBox b = expand(RatFun(LaurentPoly::constant(2, 1), linear_denominator(2), 1), 10);
    for (long i = 0; i <= 10; ++i) {
        for (long j = 0; j <= 10; ++j) {
            Integer c;
            mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(i + j), static_cast<unsigned long>(i));
            EXPECT_EQ(b.at({i, j}), Rational(c));
        }
    }
}

TEST(Oracle, PowerOfDenominator)
{
    // 1/(1-x)^3 = sum binom(n+2, 2) x^n
    const CoeffBox b = expand(RatFun(LaurentPoly::constant(1, 1), linear_denominator(1), 3), 12);
    for (long n = 0; n <= 12; ++n) {
        EXPECT_EQ(b.at({n}), Rational((n + 1) * (n + 2) / 2));
    }
}

TEST(Oracle, GrzDiagonalMatchesClosedForm)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto diag = diagonal(expand(grz(), 12), {1, 1, 1, 1});
    ASSERT_EQ(diag.size(), 13u);
    EXPECT_EQ(diag[0], 1);
    EXPECT_EQ(diag[1], -3);
    EXPECT_EQ(diag[2], 9);
    for (long n = 0; n <= 12; ++n) {
        EXPECT_EQ(diag[static_cast<std::size_t>(n)], Rational(grz_diagonal_closed_form(n))) << n;
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
}

TEST(Oracle, NonDiagonalDirection)
{
    // [x^{2n} y^n] 1/(1-x-y) = binom(3n, n)
    const auto s = diagonal(expand(RatFun(LaurentPoly::constant(2, 1), linear_denominator(2), 1), 12), {2, 1});
    ASSERT_EQ(s.size(), 7u);
    for (long n = 0; n < 7; ++n) {
        Integer c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(3 * n), static_cast<unsigned long>(n));
        EXPECT_EQ(s[static_cast<std::size_t>(n)], Rational(c));
    }
}

TEST(Oracle, RejectsBadInput)
{
    EXPECT_THROW(expand(grz(), 1000), DomainError);
    LaurentPoly q = LaurentPoly::variable(2, 0);
    EXPECT_THROW(expand(RatFun(LaurentPoly::constant(2, 1), q, 1), 3), DomainError);
    const CoeffBox b = expand(grz(), 3);
    EXPECT_THROW(diagonal(b, {1, 1, 1}), DomainError);
    EXPECT_THROW(diagonal(b, {1, -1, 1, 1}), DomainError);
}

TEST(Oracle, GrowthEstimate)
{
    std::vector<Rational> s;
    for (int n = 0; n <= 60; ++n) {
        s.push_back(Rational(Integer(1) << n));
    }
    const auto g = growth_estimate(s, 10);
    EXPECT_TRUE(g.root.contains(Rational(2)));
    EXPECT_THROW(growth_estimate(std::vector<Rational>{Rational(1)}, 1), DomainError);
}

TEST(Oracle, GrzRecurrenceExtendsOracle)
{
    const ODE ode({parse_upoly("3*(27z+1)"), parse_upoly("(21z+1)*(27z+1)"), parse_upoly("3z*(162z^2+21z+1)"),
                   parse_upoly("z^2*(81z^2+14z+1)")});
    const auto diag = diagonal(expand(grz(), 12), {1, 1, 1, 1});
    EXPECT_TRUE(verify_annihilation(ode, diag));
    const auto ext = recurrence_extend(ode_to_recurrence(ode), {Rational(1)}, 40);
    for (long n = 0; n <= 40; ++n) {
        EXPECT_EQ(ext[static_cast<std::size_t>(n)], Rational(grz_diagonal_closed_form(n))) << n;
    }
    auto wrong = diag;
    wrong[7] += 1;
    EXPECT_FALSE(verify_annihilation(ode, wrong));
}
