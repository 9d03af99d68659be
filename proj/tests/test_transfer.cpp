#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/transfer/transfer.hpp>

using namespace lacuna;

namespace
{

constexpr mpfr_prec_t P = 128;

ComplexBall c(long re, long im = 0)
{
    return ComplexBall::from_rational(Rational(re), Rational(im), P);
}

AsymptoticTerm pole(const AlgebraicNumber &w, const ComplexBall &C)
{
    return *term_asymptotics(SingularTerm{w, Rational(-1), 0, C});
}

// [z^n] sqrt(1-z) log(1-z), by convolution in doubles
double sqrt_log_coefficient(long n)
{
    std::vector<double> b(static_cast<std::size_t>(n) + 1);
    b[0] = 1;
    for (long k = 1; k <= n; ++k) {
        b[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k - 1)] * (static_cast<double>(k) - 1.5) / k;
    }
    double s = 0;
    for (long k = 1; k <= n; ++k) {
        s -= b[static_cast<std::size_t>(n - k)] / k;
    }
    return s;
}

} // namespace

TEST(Transfer, ChangeOfConvention)
{
    const AlgebraicNumber one(Rational(1));
    // (z-1)^(1/2) = i (1-z)^(1/2) on the principal branch
    const auto s = to_one_minus_form(LocalTerm{one, Rational(1, 2), 0, c(1)}, P);
    EXPECT_EQ(s.alpha, Rational(1, 2));
    EXPECT_TRUE(s.C.overlaps(c(0, 1)));
    // alpha = 0 leaves the constant alone
    EXPECT_TRUE(to_one_minus_form(LocalTerm{one, Rational(0), 0, c(3, 2)}, P).C.overlaps(c(3, 2)));
    // (z-2) log(z-2) = -2 (1-z/2) (log(1-z/2) + log 2)
    const auto all = to_one_minus_form_all(LocalTerm{AlgebraicNumber(Rational(2)), Rational(1), 1, c(1)}, P);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[0].log_pow, 1);
    EXPECT_TRUE(all[0].C.overlaps(c(-2)));
    EXPECT_TRUE(all[1].C.re().overlaps(log(Ball::from_int(2, P)) * Ball::from_int(-2, P)));
    EXPECT_THROW(to_one_minus_form(LocalTerm{AlgebraicNumber(Rational(0)), Rational(1, 2), 0, c(1)}, P), DomainError);
}

TEST(Transfer, SquareRootCoefficient)
{
    const auto a = term_asymptotics(SingularTerm{AlgebraicNumber(Rational(1)), Rational(1, 2), 0, c(1)});
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->power, Rational(-3, 2));
    // 1 / Gamma(-1/2) = -1 / (2 sqrt(pi))
    const Ball expect = -Ball::from_int(1, P) / (sqrt(ball_pi(P)) * Ball::from_int(2, P));
    EXPECT_TRUE(a->constant.re().overlaps(expect));
    EXPECT_TRUE(a->growth.contains(Rational(1)));
    // exact coefficients agree with the leading term
    // [z^n] sqrt(1-z) = Gamma(n-1/2) / (Gamma(-1/2) Gamma(n+1))
    const double n = 4000;
    const double exact = -std::exp(std::lgamma(n - 0.5) - std::lgamma(n + 1)) / (2 * std::sqrt(M_PI));
    const double pred = predict_terms(combine({*a}), {4000}, P)[0].mid().to_double();
    EXPECT_NEAR(pred / exact, 1.0, 1e-3);
}

TEST(Transfer, AnalyticTermsVanish)
{
    EXPECT_FALSE(term_asymptotics(SingularTerm{AlgebraicNumber(Rational(1)), Rational(2), 0, c(1)}).has_value());
    EXPECT_FALSE(term_asymptotics(SingularTerm{AlgebraicNumber(Rational(1)), Rational(0), 0, c(1)}).has_value());
    EXPECT_THROW(term_asymptotics(SingularTerm{AlgebraicNumber(Rational(1)), Rational(1), 1, c(1)}), DomainError);
}

TEST(Transfer, LogarithmSign)
{
    const auto a = term_asymptotics(SingularTerm{AlgebraicNumber(Rational(1)), Rational(1, 2), 1, c(1)});
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->log_pow, 1);
    for (long n : {500L, 2000L}) {
        const double pred = predict_terms(combine({*a}), {n}, P)[0].mid().to_double();
        const double r = pred / sqrt_log_coefficient(n);
        EXPECT_GT(r, 0.7) << n;
        EXPECT_LT(r, 1.3) << n;
    }
}

TEST(Transfer, GeometricPrediction)
{
    const auto a = pole(AlgebraicNumber(Rational(1, 2)), c(1));
    EXPECT_EQ(a.power, 0);
    const auto v = predict_terms(combine({a}), {1, 10, 30}, P);
    EXPECT_TRUE(v[0].contains(Rational(2)));
    EXPECT_TRUE(v[1].contains(Rational(1024)));
    EXPECT_TRUE(v[2].contains(Rational(Integer(1) << 30)));
    EXPECT_THROW(predict_terms(combine({a}), {0}, P), DomainError);
}

TEST(Transfer, CombineAndRealify)
{
    // 1/(1+9z^2) = sum over w = +-i/3 of (1/2)(1-z/w)^-1: a_n = 3^n cos(n pi/2)
    const AlgebraicNumber w = parse_point("root-of:9z^2+1:0", P);
    const AlgebraicNumber wc = parse_point("root-of:9z^2+1:1", P);
    const ComplexBall half = ComplexBall::from_rational(Rational(1, 2), P);
    const auto a = pole(w, half), b = pole(wc, half);
    const auto e = combine({a, b});
    ASSERT_TRUE(e.modulus.has_value());
    EXPECT_TRUE(e.modulus->contains(Rational(3)));
    EXPECT_EQ(*e.error_power, -1);
    const auto v = predict_terms(e, {1, 2, 3, 4, 8}, P);
    const long expect[] = {0, -9, 0, 81, 6561};
    for (std::size_t i = 0; i < v.size(); ++i) {
        EXPECT_TRUE(v[i].contains(Rational(expect[i]))) << i;
    }

    const RealAsymptoticForm r = realify(a, b);
    EXPECT_TRUE(r.modulus.contains(Rational(3)));
    EXPECT_TRUE(r.amplitude.contains(Rational(1)));
    EXPECT_TRUE(abs(r.frequency).overlaps(ball_pi(P).mul_2exp(-1)));
    EXPECT_THROW(realify(a, a), DomainError);
    EXPECT_THROW(realify(a, pole(wc, c(1))), DomainError);

    const auto [x, y] = expand(r);
    EXPECT_TRUE(x.growth.overlaps(a.growth));
    EXPECT_TRUE(x.constant.overlaps(a.constant));
    EXPECT_TRUE(y.growth.overlaps(b.growth));

    EXPECT_THROW(combine({a, pole(AlgebraicNumber(Rational(1, 2)), c(1))}), DomainError);
    const auto empty = combine({});
    EXPECT_TRUE(empty.terms.empty());
    EXPECT_FALSE(empty.modulus.has_value());
    EXPECT_THROW(realify(pole(AlgebraicNumber(Rational(1, 2)), c(1)), pole(AlgebraicNumber(Rational(1, 2)), c(1))),
                 DomainError);
}

TEST(TransferProperty, ConjugateSingularitiesGiveRealCoefficients)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> U(-9, 9);
    const AlgebraicNumber w = parse_point("root-of:81z^2+14z+1:0", P);
    const AlgebraicNumber wc = parse_point("root-of:81z^2+14z+1:1", P);
    for (int t = 0; t < 20; ++t) {
        const Rational alpha(U(rng) * 2 + 1, 2);
        const ComplexBall C = c(U(rng), U(rng));
        const auto a = term_asymptotics(SingularTerm{w, alpha, 0, C});
        const auto b = term_asymptotics(SingularTerm{wc, alpha, 0, C.conj()});
        ASSERT_TRUE(a && b);
        EXPECT_TRUE(a->constant.conj().overlaps(b->constant));
        EXPECT_TRUE(a->growth.conj().overlaps(b->growth));
        // the sum is real and agrees with its realified cosine form
        const auto e = combine({*a, *b});
        const RealAsymptoticForm r = realify(*a, *b);
        const auto [x, y] = expand(r);
        const auto v = predict_terms(e, {7, 40}, P);
        const auto u = predict_terms(combine({x, y}), {7, 40}, P);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_TRUE(v[i].overlaps(u[i]));
        }
    }
}
