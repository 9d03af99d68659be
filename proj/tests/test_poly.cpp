#include <random>

#include <gtest/gtest.h>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/poly/parse.hpp>
#include <lacuna/ratfun/polytope.hpp>
#include <lacuna/ratfun/ratfun.hpp>

using namespace lacuna;

namespace
{

LaurentPoly grz_denominator()
{
    LaurentPoly Q = LaurentPoly::constant(4, 1);
    for (std::size_t j = 0; j < 4; ++j) {
        Q -= LaurentPoly::variable(4, j);
    }
    Q.add_term({1, 1, 1, 1}, 27);
    return Q;
}

} // namespace

TEST(UPoly, ParseAndPrint)
{
    const UPoly p = parse_upoly("z^2*(81z^2+14z+1)");
    EXPECT_EQ(p, UPoly({0, 0, 1, 14, 81}));
    EXPECT_EQ(parse_upoly("(3t-1)^2*(3t^2+2t+1)", 't'), UPoly({1, -4, 0, 0, 27}));
    EXPECT_EQ(parse_upoly("3*(27z+1)"), UPoly({3, 81}));
    EXPECT_EQ(parse_upoly("1/2 z - 3/4"), UPoly({Rational(-3, 4), Rational(1, 2)}));
    EXPECT_THROW(parse_upoly("z^"), ParseError);
    EXPECT_THROW(parse_upoly("(z+1"), ParseError);
    EXPECT_THROW(parse_upoly("z*y"), ParseError);
}

TEST(UPoly, DivisionAndGcd)
{
    const UPoly a = parse_upoly("(z-1)^2*(z+2)"), b = parse_upoly("(z-1)*(z+5)");
    EXPECT_EQ(UPoly::gcd(a, b), parse_upoly("z-1"));
    const auto [q, r] = UPoly::divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
}

TEST(UPoly, SquarefreeDecomposition)
{
    const auto f = squarefree_decomposition(parse_upoly("(3z-1)^2*(3z^2+2z+1)"));
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0], parse_upoly("z^2+2/3 z+1/3"));
    EXPECT_EQ(f[1], parse_upoly("z-1/3"));
}

TEST(Roots, GrzSingularities)
{
    const auto roots = isolate_roots(parse_upoly("81z^2+14z+1"), 200);
    ASSERT_EQ(roots.size(), 2u);
    const ComplexBall w = roots[0].value.value(200);
    // (-7 - 4 sqrt(2) i) / 81
    const Ball s2 = sqrt(Ball::from_int(2, 200));
    EXPECT_TRUE(w.re().contains(Rational(-7, 81)));
    EXPECT_TRUE(w.im().overlaps(-s2 * Rational(4, 81)));
    EXPECT_EQ(roots[1].value, roots[0].value.conj());
    EXPECT_FALSE(roots[0].value.is_real());
    EXPECT_EQ(parse_point("root-of:81z^2+14z+1:1", 200), roots[1].value);
    EXPECT_THROW(parse_point("root-of:81z^2+14z+1:2"), ParseError);
}

TEST(Roots, MultiplicitiesAndRationalRoots)
{
    const auto roots = isolate_roots(parse_upoly("(3z-1)^2*(3z^2+2z+1)"), 128);
    ASSERT_EQ(roots.size(), 3u);
    int twice = 0;
    for (const auto &r : roots) {
        if (r.multiplicity == 2) {
            ++twice;
            EXPECT_EQ(r.value.rational(), Rational(1, 3));
        }
    }
    EXPECT_EQ(twice, 1);
}

TEST(Roots, RefinementKeepsEnclosure)
{
    const AlgebraicNumber w = parse_point("root-of:z^3-2:0", 64);
    const ComplexBall lo = w.value(64), hi = w.value(512);
    EXPECT_TRUE(lo.overlaps(hi));
    EXPECT_LT(hi.rad().to_double(), 1e-140);
    const ComplexBall cube = hi * hi * hi;
    EXPECT_TRUE(cube.contains(Rational(2)));
}

TEST(LaurentPoly, ArithmeticAndEvaluation)
{
    const LaurentPoly Q = grz_denominator();
    const std::vector<Rational> z(4, Rational(1, 3));
    EXPECT_EQ(Q.eval(z), 0);
    LaurentPoly inv(2);
    inv.add_term({-1, 0}, 1);
    inv.add_term({0, 1}, 2);
    EXPECT_EQ(inv.eval({Rational(1, 2), Rational(3)}), 8);
    EXPECT_EQ((inv * inv).eval({Rational(1, 2), Rational(3)}), 64);
    EXPECT_THROW(inv.eval({Rational(0), Rational(3)}), DomainError);
}

// Gradient against symmetric difference quotients at random rational points.
TEST(LaurentPolyProperty, GradientMatchesFiniteDifferences)
{
    const LaurentPoly Q = grz_denominator() * grz_denominator() - LaurentPoly::variable(4, 2).pow(3);
    const auto g = Q.gradient();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> U(-40, 40);
    const Rational h(1, 1000000);
    for (int t = 0; t < 25; ++t) {
        std::vector<Rational> z;
        for (int j = 0; j < 4; ++j) {
            z.push_back(Rational(U(rng), 17));
        }
        for (std::size_t j = 0; j < 4; ++j) {
            auto zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            const Rational fd = (Q.eval(zp) - Q.eval(zm)) / (2 * h);
            const Rational ex = g[j].eval(z);
            EXPECT_LT(abs(fd - ex), Rational(1, 1000)) << "coordinate " << j;
        }
    }
}

TEST(LaurentPoly, LogDerivativeAndRestriction)
{
    const LaurentPoly Q = grz_denominator();
    EXPECT_EQ(Q.log_derivative(0), LaurentPoly::variable(4, 0) * Rational(-1) + LaurentPoly::monomial({1, 1, 1, 1}, 27));
    const UPoly u = restrict_symmetric(Q, Partition::single(4)).to_upoly();
    EXPECT_EQ(u, parse_upoly("27z^4-4z+1"));
    const Partition p = Partition::by_values({2, 1, 1, 2});
    EXPECT_EQ(p.classes, 2u);
    EXPECT_EQ(p.cls, (std::vector<std::size_t>{0, 1, 1, 0}));
}

TEST(Polytope, NewtonPolytopeVertices)
{
    const auto v = newton_polytope(grz_denominator());
    EXPECT_EQ(v.size(), 6u);
    LaurentPoly p(2);
    for (const Exponent &e : {Exponent{0, 0}, Exponent{2, 0}, Exponent{0, 2}, Exponent{1, 1}, Exponent{1, 0}}) {
        p.add_term(e, 1);
    }
    EXPECT_EQ(newton_polytope(p), (std::vector<Exponent>{{0, 0}, {0, 2}, {2, 0}}));
}

TEST(RatFun, Validation)
{
    EXPECT_THROW(RatFun(LaurentPoly(2), LaurentPoly(2), 1), ParseError);
    EXPECT_THROW(RatFun(LaurentPoly::constant(3, 1), grz_denominator(), 1), ParseError);
    EXPECT_NO_THROW(RatFun(LaurentPoly::constant(4, 1), grz_denominator(), 1));
}

TEST(Direction, ParseAndNormalise)
{
    const Direction d = Direction::parse("2,1,1,1");
    EXPECT_EQ(d.rhat_exact(), (std::vector<Rational>{1, Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
    EXPECT_THROW(Direction::parse("0,0"), ParseError);
    EXPECT_THROW(Direction::parse("1,a"), ParseError);
}
