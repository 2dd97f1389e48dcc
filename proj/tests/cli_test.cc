#include <cqmono/cli.hh>
#include <cqmono/textio.hh>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace
{
    struct Outcome
    {
        int code;
        std::string out;
        std::string err;
    };

    auto run(std::vector<std::string> args) -> Outcome
    {
        std::ostringstream out, err;
        int code = cqmono::cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }

    auto golden(const std::string & name) -> std::string
    {
        return std::string{CQMONO_GOLDEN_DIR} + "/" + name;
    }

    auto scratch(const std::string & name, const std::string & text) -> std::string
    {
        auto path = std::filesystem::temp_directory_path() / ("cqmono_cli_test_" + name);
        std::ofstream{path} << text;
        return path.string();
    }
}

TEST(Cli, EvalFlights)
{
    auto r = run({"eval", "-d", golden("flights.cq"), "-q", "P", "-i", golden("flights.inst")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, cqmono::read_file(golden("flights.out")));
}

TEST(Cli, EvalJson)
{
    auto r = run({"--json", "eval", "-d", golden("flights.cq"), "-q", "P", "-i", golden("flights.inst")});
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["command"], "eval");
    EXPECT_EQ(j["results"].size(), 2u);
}

TEST(Cli, ProbeModes)
{
    auto paper = run({"monotone", "-d", golden("probe.cq"), "--lhs", "Q1", "--rhs", "Q2", "--mode", "paper"});
    EXPECT_EQ(paper.code, 0);
    EXPECT_NE(paper.out.find("verdict: Monotone"), std::string::npos);

    auto strict = run({"monotone", "-d", golden("probe.cq"), "--lhs", "Q1", "--rhs", "Q2"});
    EXPECT_EQ(strict.code, 1);
    EXPECT_NE(strict.out.find("verdict: NotMonotone"), std::string::npos);
    EXPECT_NE(strict.out.find("branch: two-relation-unmapped"), std::string::npos);
    EXPECT_NE(strict.out.find("witness.I:"), std::string::npos);
}

TEST(Cli, MonotoneJsonKeysAndStableOutput)
{
    std::vector<std::string> args{"monotone", "-d", golden("probe.cq"), "--lhs", "Q1", "--rhs", "Q2", "--json", "--stable"};
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 1);
    EXPECT_EQ(a.out, b.out);
    auto j = json::parse(a.out);
    for (auto key : {"command", "lhs", "rhs", "mode", "verdict", "branch", "certificate", "witness", "stripped_witness",
             "compiled", "bounds"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_FALSE(j.contains("timing_ms"));
    EXPECT_EQ(j["verdict"], "NotMonotone");
    EXPECT_EQ(j["certificate"], "witness");
    EXPECT_TRUE(j["witness"]["I"].is_array());

    auto timed = run({"--json", "monotone", "-d", golden("probe.cq"), "--lhs", "Q1", "--rhs", "Q2"});
    EXPECT_TRUE(json::parse(timed.out).contains("timing_ms"));
}

TEST(Cli, VerifyReportsModeDisagreement)
{
    auto r = run({"verify", "-d", golden("probe.cq"), "--lhs", "Q1", "--rhs", "Q2", "--domain", "2", "--max-facts", "3"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("strict_vs_oracle: agree"), std::string::npos);
    EXPECT_NE(r.out.find("paper_vs_oracle: disagree"), std::string::npos);
    EXPECT_NE(r.out.find("modes: disagree"), std::string::npos);
    EXPECT_NE(r.out.find("  T(d1)\n"), std::string::npos);
}

TEST(Cli, CustomersVerdict)
{
    auto r = run({"--json", "--stable", "monotone", "-d", golden("customers.cq"), "--lhs", "LuxuryBuyer", "--rhs",
        "SportsBuyer", "--domain", "2", "--max-facts", "6"});
    EXPECT_EQ(r.code, 1);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "NotMonotone");
    EXPECT_EQ(j["bounds"]["domain"], 2);
}

TEST(Cli, CompileAndContains)
{
    auto doc = scratch("compile.cq",
        "schema R/2, T/1.\nquery Q1() :- R(x,y).\nquery Q2() :- T(u), R(v,w).\nquery Loop() :- R(z,z).\n");
    auto c = run({"compile", "-d", doc, "--lhs", "Q1", "--rhs", "Q2"});
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(c.out, "query compiled() :- T(u).\n");

    auto refused = run({"compile", "-d", doc, "--lhs", "Q1", "--rhs", "Loop"});
    EXPECT_EQ(refused.code, 1);

    auto yes = run({"contains", "-d", doc, "-q", "Loop", "-r", "Q1"});
    EXPECT_EQ(yes.code, 0);
    EXPECT_EQ(yes.out, "contained: true\n");
    auto no = run({"contains", "-d", doc, "-q", "Q1", "-r", "Loop"});
    EXPECT_EQ(no.code, 1);
    EXPECT_NE(no.out.find("counterexample:\n  R(x,y)\n"), std::string::npos);
}

TEST(Cli, MinimizeComponentsEnumerate)
{
    auto doc = scratch("misc.cq", "schema R/2, T/1.\nquery Q() :- R(x,y), R(x,z), T(w).\n");
    auto m = run({"minimize", "-d", doc, "-q", "Q"});
    EXPECT_EQ(m.code, 0);
    EXPECT_EQ(m.out, "query Q() :- R(x,y), T(w).\n");

    auto c = run({"components", "-d", doc, "-q", "Q"});
    EXPECT_EQ(c.code, 0);
    EXPECT_NE(c.out.find("connected: false"), std::string::npos);

    auto e = run({"enumerate", "-d", doc, "--domain", "2", "--max-facts", "6", "--count"});
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(e.out, "63\n");
}

TEST(Cli, ErrorExitCodes)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"eval", "-d", golden("flights.cq")}).code, 2);
    EXPECT_EQ(run({"eval", "-d", "/nonexistent/file.cq", "-q", "P", "-i", golden("flights.inst")}).code, 2);

    auto bad = scratch("bad.cq", "schema R/2.\nquery Q() :- R(x).\n");
    auto parse = run({"minimize", "-d", bad, "-q", "Q"});
    EXPECT_EQ(parse.code, 2);
    EXPECT_EQ(parse.err.rfind("parse error: ", 0), 0u);

    EXPECT_EQ(run({"minimize", "-d", golden("flights.cq"), "-q", "Missing"}).code, 2);

    auto big = run({"enumerate", "-d", golden("probe.cq"), "--domain", "5", "--count"});
    EXPECT_EQ(big.code, 3);

    auto steps = run({"eval", "-d", golden("flights.cq"), "-q", "P", "-i", golden("flights.inst"), "--max-steps", "1"});
    EXPECT_EQ(steps.code, 3);
}
