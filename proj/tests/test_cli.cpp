#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <json.hpp>

namespace
{

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string &args)
{
    const std::string cmd = std::string(LACUNA_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string fixture(const char *name)
{
    return std::string(LACUNA_FIXTURES) + "/" + name;
}

std::string unit_expr()
{
    std::ifstream in(fixture("grz_unit.txt"));
    std::string s;
    std::getline(in, s);
    return s;
}

} // namespace

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("oracle diag").code, 2);
    EXPECT_EQ(run("oracle diag --fun " + fixture("missing.json")).code, 2);
    EXPECT_EQ(run("connect --ode " + fixture("grz.json")).code, 2);
    EXPECT_EQ(run("crit --fun " + fixture("grz.json") + " --dir 1,x,1,1").code, 2);
}

TEST(Cli, OracleDiagonal)
{
    const CliRun r = run("oracle diag --fun " + fixture("grz.json") + " --box 6");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const std::vector<std::string> expect{"1", "-3", "9", "-3", "-279", "2997", "-19431"};
    EXPECT_EQ(j.at("coefficients").get<std::vector<std::string>>(), expect);
    const CliRun checked = run("oracle diag --fun " + fixture("grz.json") + " --box 8 --ode " + fixture("grz_ode.json"));
    ASSERT_EQ(checked.code, 0);
    EXPECT_EQ(nlohmann::json::parse(checked.out).at("annihilated"), true);
    // seven terms cannot certify an order-3 operator of degree 4
    EXPECT_EQ(run("oracle diag --fun " + fixture("grz.json") + " --box 6 --ode " + fixture("grz_ode.json")).code, 3);
}

TEST(Cli, CriticalHypotheses)
{
    const CliRun ok = run("crit --fun " + fixture("grz.json") + " --symmetric --require-lacuna");
    ASSERT_EQ(ok.code, 0);
    const auto j = nlohmann::json::parse(ok.out);
    EXPECT_EQ(j.at("lacuna"), true);
    EXPECT_EQ(run("crit --fun " + fixture("trinomial.json") + " --dir 1,1,1 --symmetric --require-lacuna").code, 4);
    EXPECT_EQ(run("crit --fun " + fixture("trinomial.json") + " --dir 1,1,1 --symmetric").code, 0);
}

TEST(Cli, ResolveExitCodes)
{
    const std::string u = "'" + unit_expr() + "'";
    EXPECT_EQ(run("resolve --numeric '3*" + u.substr(1) + " --unit-expr " + u).code, 0);
    EXPECT_EQ(run("resolve --numeric '2.4*" + u.substr(1) + " --unit-expr " + u).code, 4);
    EXPECT_EQ(run("resolve --numeric '1/0' --unit-expr 1").code, 3);
    EXPECT_EQ(run("resolve --numeric '1+' --unit-expr 1").code, 2);
}

TEST(Cli, DfiniteRecurrence)
{
    const CliRun r = run("dfinite recurrence --ode " + fixture("grz_ode.json") + " --terms 4");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("start"), -1);
    EXPECT_EQ(j.at("analytic_solution").get<std::vector<std::string>>(),
              (std::vector<std::string>{"1", "-3", "9", "-3", "-279"}));
}

TEST(Cli, PipelineWritesStageFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "lacuna_cli_test";
    std::filesystem::remove_all(dir);
    const CliRun r = run("pipeline --config " + fixture("trinomial_pipeline.json") + " --out " + dir.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
    std::ifstream in(dir / "summary.json");
    const auto s = nlohmann::json::parse(in);
    EXPECT_EQ(s.at("lacuna"), false);
    std::filesystem::remove_all(dir);
}
