#include <gtest/gtest.h>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/continuation/connect.hpp>
#include <lacuna/continuation/transition.hpp>
#include <lacuna/pipeline/pipeline.hpp>
#include <lacuna/poly/parse.hpp>
#include <lacuna/resolver/expr.hpp>

using namespace lacuna;

namespace
{

ODE grz_ode()
{
    return ODE({parse_upoly("3*(27z+1)"), parse_upoly("(21z+1)*(27z+1)"), parse_upoly("3z*(162z^2+21z+1)"),
                parse_upoly("z^2*(81z^2+14z+1)")});
}

ComplexBall cb(const char *e, mpfr_prec_t p)
{
    return Expr::parse(e).eval(p);
}

Path path_of(std::initializer_list<const char *> pts, mpfr_prec_t p)
{
    Path path;
    for (const char *s : pts) {
        path.waypoints.push_back(cb(s, p));
    }
    return path;
}

} // namespace

TEST(Transition, ExponentialIsExpOfLength)
{
    const ODE e({parse_upoly("-1"), parse_upoly("1")});
    const auto T = transition(e, path_of({"0", "1"}, 128), 128);
    ASSERT_EQ(T.matrix.rows(), 1u);
    EXPECT_TRUE(T.matrix(0, 0).re().overlaps(exp(Ball::from_int(1, 128))));
    EXPECT_LT(T.matrix(0, 0).rad().to_double(), 1e-30);
}

TEST(Transition, HarmonicOscillatorIsRotation)
{
    const ODE h({UPoly({1}), UPoly(), UPoly({1})});
    const mpfr_prec_t p = 128;
    const auto T = transition(h, path_of({"0", "3/2"}, p), p);
    const Ball x = Ball::from_rational(Rational(3, 2), p);
    EXPECT_TRUE(T.matrix(0, 0).re().overlaps(cos(x)));
    EXPECT_TRUE(T.matrix(0, 1).re().overlaps(sin(x)));
    EXPECT_TRUE(T.matrix(1, 0).re().overlaps(-sin(x)));
    EXPECT_TRUE(T.matrix(1, 1).re().overlaps(cos(x)));
}

TEST(Transition, RejectsBadPaths)
{
    const mpfr_prec_t p = 128;
    EXPECT_THROW(transition(grz_ode(), path_of({"1/10"}, p), p), DomainError);
    EXPECT_THROW(transition(grz_ode(), path_of({"1/10", "0"}, p), p), DomainError);
    EXPECT_THROW(transition(grz_ode(), path_of({"-1/10", "1/10"}, p), p), DomainError);
    Path bad = path_of({"1/10", "1/5"}, p);
    bad.eta = 1.5;
    EXPECT_THROW(transition(grz_ode(), bad, p), DomainError);
}

TEST(TransitionProperty, Composition)
{
    const mpfr_prec_t p = 160;
    const ODE ode = grz_ode();
    const auto ab = transition(ode, path_of({"1/20", "1/20+I/20"}, p), p);
    const auto bc = transition(ode, path_of({"1/20+I/20", "-1/40+I/10"}, p), p);
    const auto ac = transition(ode, path_of({"1/20", "1/20+I/20", "-1/40+I/10"}, p), p);
    EXPECT_TRUE(ac.matrix.overlaps(bc.matrix * ab.matrix));
}

TEST(TransitionProperty, HomotopyInvariance)
{
    const mpfr_prec_t p = 160;
    const ODE ode = grz_ode();
    const auto direct = transition(ode, path_of({"1/100", "1/20"}, p), p);
    const auto bent = transition(ode, path_of({"1/100", "3/100+I/50", "1/20"}, p), p);
    EXPECT_TRUE(direct.matrix.overlaps(bent.matrix));
    EXPECT_LT(direct.matrix.max_rad().to_double(), 1e-30);
}

TEST(TransitionProperty, LoopAroundOriginHasMonodromy)
{
    const mpfr_prec_t p = 160;
    const auto loop = transition(grz_ode(), path_of({"1/20", "I/20", "-1/20", "-I/20", "1/20"}, p), p);
    EXPECT_FALSE(loop.matrix.overlaps(BallMatrix::identity(3, p)));
}

TEST(Connect, GrzConstantsAtDominantSingularity)
{
    const ODE ode = grz_ode();
    const AlgebraicNumber w = parse_point("root-of:81z^2+14z+1:0", 256);
    ConnectOptions opt;
    opt.digits = 30;
    const auto cr = connect(ode, AlgebraicNumber(Rational(0)), w, unit_target(2, 3, 64), opt);
    ASSERT_EQ(cr.constants.size(), 3u);
    EXPECT_TRUE(cr.residual_contains_zero);
    EXPECT_GE(cr.digits, 30.0);
    const ComplexBall c2 = cb("-3.59330985587432330990-0.381322149093113860*I", 256);
    EXPECT_LT((cr.constants[1] - c2).abs_upper().to_double(), 1e-16);

    // precision doubling leaves the constants inside the coarser enclosures
    ConnectOptions fine = opt;
    fine.digits = 60;
    const auto cf = connect(ode, AlgebraicNumber(Rational(0)), w, unit_target(2, 3, 64), fine);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(cr.constants[i].overlaps(cf.constants[i]));
    }

    // the conjugate singularity with the mirrored path gives conjugate constants
    const AlgebraicNumber wc = parse_point("root-of:81z^2+14z+1:1", 256);
    const auto cc = connect(ode, AlgebraicNumber(Rational(0)), wc, unit_target(2, 3, 64), opt);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(cr.constants[i].conj().overlaps(cc.constants[i]));
    }
}

TEST(Connect, RejectsMismatchedTarget)
{
    EXPECT_THROW(connect(grz_ode(), AlgebraicNumber(Rational(0)), parse_point("root-of:81z^2+14z+1:0"),
                         unit_target(0, 2, 64)),
                 DomainError);
}
