#include <filesystem>

#include <gtest/gtest.h>

#include <lacuna/io/json.hpp>
#include <lacuna/pipeline/pipeline.hpp>
#include <lacuna/poly/parse.hpp>

using namespace lacuna;
using io::json;

namespace
{

std::string fixture(const char *name)
{
    return std::string(LACUNA_FIXTURES) + "/" + name;
}

} // namespace

TEST(Json, BallRoundTrip)
{
    const ComplexBall z = ComplexBall::from_rational(Rational(1, 3), Rational(-2, 7), 200);
    const json j = io::to_json(z);
    EXPECT_EQ(j.at("prec_bits"), 200);
    const ComplexBall w = io::complex_ball_from_json(j);
    EXPECT_TRUE(w.overlaps(z));
    // the serialized radius never understates the enclosure
    EXPECT_TRUE(w.re().contains(Rational(1, 3)));
    EXPECT_TRUE(w.im().contains(Rational(-2, 7)));
}

TEST(Json, PolynomialRoundTrips)
{
    const UPoly u = parse_upoly("z^2*(81z^2+14z+1) - 1/3");
    EXPECT_EQ(io::upoly_from_json(io::to_json(u)), u);
    LaurentPoly q = LaurentPoly::constant(3, 1);
    q.add_term({-1, 2, 0}, Rational(5, 4));
    EXPECT_EQ(io::laurent_from_json(io::to_json(q)), q);
    const RatFun f = io::ratfun_from_json(io::read_file(fixture("grz.json")));
    EXPECT_EQ(f.dim(), 4u);
    const RatFun g = io::ratfun_from_json(io::to_json(f));
    EXPECT_EQ(g.Q, f.Q);
    EXPECT_EQ(g.k, f.k);
    const ODE ode = io::ode_from_json(io::read_file(fixture("grz_ode.json")));
    EXPECT_EQ(ode.order(), 3u);
    EXPECT_EQ(ode.p[3], parse_upoly("z^2*(81z^2+14z+1)"));
    EXPECT_EQ(io::ode_from_json(io::to_json(ode)).p, ode.p);
}

TEST(Json, AsymptoticTermRoundTrip)
{
    AsymptoticTerm t;
    t.omega = AlgebraicNumber(Rational(1, 9));
    t.growth = ComplexBall::from_int(9, 128);
    t.power = Rational(-3, 2);
    t.log_pow = 1;
    t.constant = ComplexBall::from_rational(Rational(1, 5), Rational(2), 128);
    const AsymptoticTerm u = io::asymptotic_term_from_json(io::to_json(t));
    EXPECT_EQ(u.power, t.power);
    EXPECT_EQ(u.log_pow, 1);
    EXPECT_TRUE(u.constant.overlaps(t.constant));
    EXPECT_TRUE(u.growth.overlaps(t.growth));
}

TEST(Json, MalformedInputs)
{
    EXPECT_THROW(io::ratfun_from_json(json::parse(R"({"P": 1})")), ParseError);
    EXPECT_THROW(io::laurent_from_json(json::parse(R"({"dim": 2, "terms": [{"exp": [1], "num": "1", "den": "1"}]})")),
                 ParseError);
    EXPECT_THROW(io::laurent_from_json(json::parse(R"({"dim": 1, "terms": [{"exp": [1], "num": "x", "den": "1"}]})")),
                 ParseError);
    EXPECT_THROW(io::upoly_from_json(json::parse(R"({"dim": 1, "terms": [{"exp": [0], "num": "1", "den": "0"}]})")),
                 ParseError);
    EXPECT_THROW(io::ode_from_json(json::parse(R"({"order": 2, "coeffs": [[1]]})")), ParseError);
    EXPECT_THROW(io::read_file(fixture("does_not_exist.json")), ParseError);
    EXPECT_THROW(pipeline_config_from_json(json::parse(R"({"function": "f.json", "digits": 3})")), ParseError);
    EXPECT_THROW(pipeline_config_from_json(json::parse(R"({"digits": 30})")), ParseError);
}

TEST(Json, Fnv1aReferenceVectors)
{
    EXPECT_EQ(io::fnv1a(""), "cbf29ce484222325");
    EXPECT_EQ(io::fnv1a("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(io::fnv1a("foobar"), "85944171f73967e8");
}

TEST(Pipeline, ConfigResolvesPathsAgainstItsDirectory)
{
    const auto c = pipeline_config_from_json(io::read_file(fixture("grz_pipeline.json")), LACUNA_FIXTURES);
    EXPECT_EQ(c.function_file, fixture("grz.json"));
    EXPECT_EQ(c.ode_file, fixture("grz_ode.json"));
    EXPECT_EQ(c.target, "a3");
    EXPECT_EQ(target_index(c.target, 3), 2u);
    EXPECT_THROW(target_index("a4", 3), ParseError);
    EXPECT_THROW(target_index("b1", 3), ParseError);
}

TEST(Pipeline, DeterministicWithoutOde)
{
    auto c = pipeline_config_from_json(io::read_file(fixture("trinomial_pipeline.json")), LACUNA_FIXTURES);
    const auto dir = std::filesystem::temp_directory_path() / "lacuna_io_test";
    c.out_dir = dir.string();
    const auto a = run_pipeline(c);
    const auto b = run_pipeline(c);
    EXPECT_EQ(a.summary.dump(), b.summary.dump());
    ASSERT_EQ(a.stages.size(), b.stages.size());
    for (std::size_t i = 0; i < a.stages.size(); ++i) {
        EXPECT_EQ(a.stages[i].second.dump(), b.stages[i].second.dump()) << a.stages[i].first;
        EXPECT_EQ(a.stages[i].second.at("inputs_hash"), b.stages[i].second.at("inputs_hash"));
    }
    EXPECT_EQ(a.summary.at("lacuna"), false);
    write_pipeline_report(a, c.out_dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "crit.json"));
    std::filesystem::remove_all(dir);
}
