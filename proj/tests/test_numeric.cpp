#include <random>

#include <gtest/gtest.h>

#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/gamma.hpp>
#include <lacuna/numeric/matrix.hpp>
#include <lacuna/numeric/rational.hpp>

using namespace lacuna;

namespace
{

Rational random_rational(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<long> num(-100000, 100000), den(1, 5000);
    return make_rational(num(rng), den(rng));
}

ComplexBall cb(const Rational &re, const Rational &im, mpfr_prec_t p)
{
    return ComplexBall::from_rational(re, im, p);
}

} // namespace

TEST(Rational, ParseAndCanonicalize)
{
    EXPECT_EQ(parse_rational("6/-4"), Rational(-3, 2));
    EXPECT_EQ(parse_rational(" 12 "), Rational(12));
    EXPECT_THROW(parse_rational("1/0"), ParseError);
    EXPECT_THROW(parse_rational("x"), ParseError);
    EXPECT_THROW(make_rational(1, 0), DomainError);
}

TEST(Rational, Reconstruct)
{
    const Ball b = Ball::from_rational(Rational(355, 113), 200);
    ASSERT_TRUE(reconstruct_rational(b).has_value());
    EXPECT_EQ(*reconstruct_rational(b), Rational(355, 113));
    EXPECT_FALSE(reconstruct_rational(ball_pi(200)).has_value());
}

// Every arithmetic result must contain the exact rational result.
TEST(BallProperty, ArithmeticEnclosesExactRationals)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 500; ++t) {
        const Rational a = random_rational(rng), b = random_rational(rng);
        const mpfr_prec_t p = 24 + static_cast<mpfr_prec_t>(t % 5) * 40;
        const Ball x = Ball::from_rational(a, p), y = Ball::from_rational(b, p);
        EXPECT_TRUE((x + y).contains(a + b));
        EXPECT_TRUE((x - y).contains(a - b));
        EXPECT_TRUE((x * y).contains(a * b));
        if (b != 0) {
            EXPECT_TRUE((x / y).contains(a / b));
        }
    }
}

TEST(BallProperty, ComplexArithmeticEnclosesExactRationals)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const Rational a = random_rational(rng), b = random_rational(rng);
        const Rational c = random_rational(rng), d = random_rational(rng);
        const ComplexBall x = cb(a, b, 40), y = cb(c, d, 40);
        EXPECT_TRUE((x * y).contains(a * c - b * d, a * d + b * c));
        const Rational n = c * c + d * d;
        if (n != 0) {
            EXPECT_TRUE((x / y).contains((a * c + b * d) / n, (b * c - a * d) / n));
        }
    }
}

// A low-precision evaluation must contain the high-precision one.
TEST(BallProperty, ElementaryFunctionsNestAcrossPrecisions)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const Rational a = random_rational(rng) / 1000, b = random_rational(rng) / 1000;
        const ComplexBall lo = cb(a, b, 53), hi = cb(a, b, 600);
        EXPECT_TRUE(exp(lo).contains(exp(hi)));
        if (!(b == 0 && a <= 0) && !(a == 0 && b == 0)) {
            EXPECT_TRUE(log(lo).contains(log(hi)));
            EXPECT_TRUE(sqrt(lo).contains(sqrt(hi)));
            EXPECT_TRUE(pow(lo, Rational(3, 7)).contains(pow(hi, Rational(3, 7))));
        }
        EXPECT_TRUE(abs(lo).contains(abs(hi)));
        if (a != 0 || b != 0) {
            EXPECT_TRUE(arg(lo).contains(arg(hi)));
        }
    }
}

TEST(BallProperty, WideInputsStillEnclose)
{
    const ComplexBall z = cb(Rational(1, 3), Rational(1, 5), 128).add_error(Mag::pow2(-10));
    const ComplexBall w = cb(Rational(1, 3) + Rational(1, 2048), Rational(1, 5) - Rational(1, 2048), 256);
    EXPECT_TRUE(exp(z).contains(exp(w)));
    EXPECT_TRUE(log(z).contains(log(w)));
    EXPECT_TRUE(sqrt(z).contains(sqrt(w)));
    EXPECT_TRUE((z * z).contains(w * w));
}

TEST(Ball, SqrAndHypotOfBallsStraddlingZero)
{
    const Ball x = Ball::from_rational(0, 64).add_error(Mag::pow2(-20));
    EXPECT_TRUE(sqr(x).is_nonnegative() || sqr(x).contains(Rational(0)));
    EXPECT_NO_THROW(hypot(x, x));
    EXPECT_TRUE(hypot(x, x).contains(Rational(0)));
    const Ball h = hypot(Ball::from_int(3, 128), x);
    EXPECT_TRUE(h.contains(Rational(3)));
    EXPECT_LT(h.rad().to_double(), 1e-10);
}

TEST(ComplexBall, PrincipalBranches)
{
    const mpfr_prec_t p = 128;
    const ComplexBall s = sqrt(cb(-4, Rational(1, 1000000), p));
    EXPECT_TRUE(s.im().is_positive());
    const ComplexBall l = log(cb(-1, Rational(1, 1000000000), p));
    EXPECT_TRUE(l.im().overlaps(ball_pi(p)) || l.im().mid().to_double() < 3.1416);
    EXPECT_TRUE(pow(cb(-1, 0, p) + cb(0, Rational(1, 1000000000), p), Rational(1, 2)).im().is_positive());
    EXPECT_THROW(log(ComplexBall(p)), DomainError);
}

TEST(ComplexBall, NegatedRealStaysOnUpperSide)
{
    const mpfr_prec_t p = 128;
    const ComplexBall m = -ComplexBall::from_int(1, p);
    EXPECT_TRUE(arg(m).overlaps(ball_pi(p)));
    EXPECT_TRUE(pow(m, Rational(1, 2)).im().is_positive());
    EXPECT_TRUE(arg(m * ComplexBall::from_int(1, p)).is_positive());
}

TEST(ComplexBall, IntegerPowerAndConjugation)
{
    const ComplexBall z = cb(Rational(-7, 81), Rational(4, 81), 200);
    const ComplexBall z3 = pow(z, 3L);
    EXPECT_TRUE(z3.overlaps(z * z * z));
    EXPECT_TRUE(pow(z.conj(), 3L).overlaps(z3.conj()));
    EXPECT_TRUE(pow(z, -2L).overlaps(ComplexBall::from_int(1, 200) / (z * z)));
}

TEST(Gamma, SpecialValues)
{
    const mpfr_prec_t p = 200;
    const Ball sp = sqrt(ball_pi(p));
    EXPECT_TRUE(gamma(Rational(1, 2), p).re().overlaps(sp));
    EXPECT_TRUE(gamma(Rational(-1, 2), p).re().overlaps(-sp.mul_2exp(1)));
    EXPECT_TRUE(gamma(Rational(5), p).contains(Rational(24)));
    EXPECT_TRUE(gamma(Rational(3, 2), p).re().overlaps(sp.mul_2exp(-1)));
    EXPECT_LT(gamma(Rational(1, 3), p).rad().to_double(), 1e-50);
}

TEST(Gamma, ReflectionFormula)
{
    const mpfr_prec_t p = 160;
    for (const Rational &a : {Rational(1, 3), Rational(2, 7), Rational(-5, 4)}) {
        const ComplexBall lhs = gamma(a, p) * gamma(1 - a, p);
        const Ball rhs = ball_pi(p) / sin(ball_pi(p) * a);
        EXPECT_TRUE(lhs.re().overlaps(rhs)) << a;
    }
    EXPECT_THROW(gamma(Rational(-2), p), DomainError);
}

TEST(Float, DecimalRoundTrip)
{
    const Ball b = ball_pi(300);
    const Ball c = Ball::from_decimal(b.mid().to_string(), "0", 300);
    EXPECT_TRUE(c.contains(b.mid_ball()));
}

TEST(BallMatrix, SolveEnclosesExactSolution)
{
    const mpfr_prec_t p = 128;
    BallMatrix a(3, 3, p);
    const Rational m[3][3] = {{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            a(i, j) = ComplexBall::from_rational(m[i][j], p);
        }
    }
    const std::vector<ComplexBall> rhs{ComplexBall::from_int(1, p), ComplexBall::from_int(2, p),
                                       ComplexBall::from_int(3, p)};
    const auto x = solve(a, rhs);
    EXPECT_TRUE(x[0].contains(Rational(1, 3)));
    EXPECT_TRUE(x[1].contains(Rational(1, 3)));
    EXPECT_TRUE(x[2].contains(Rational(2, 3)));
    const BallMatrix prod = a * inverse(a);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_TRUE(prod(i, j).contains(Rational(i == j ? 1 : 0)));
        }
    }
    BallMatrix s(2, 2, p);
    s(0, 0) = s(0, 1) = s(1, 0) = s(1, 1) = ComplexBall::from_int(1, p);
    EXPECT_THROW(inverse(s), PrecisionError);
}
