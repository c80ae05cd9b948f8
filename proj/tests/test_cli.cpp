#include <doctest.h>

#include <cstdlib>

#include "commands.hpp"

using namespace colombeau;
using namespace colombeau::cli;

namespace {

RunConfig config(std::string command) {
    RunConfig c;
    c.command = std::move(command);
    return c;
}

}  // namespace

TEST_CASE("mollifier report") {
    auto c = config("mollifier");
    c.q = 4;
    c.strict = true;
    const auto out = cmd_mollifier(c);
    CHECK(out.body["schema_version"] == kSchemaVersion);
    CHECK(out.body["verified"] == true);
    CHECK(out.body["moments"].size() == 7);
    for (int i = 1; i <= 4; ++i) CHECK(std::abs(out.body["moments"][i]["moment"].get<double>()) <= 1e-9);
    const auto csv = out.csv();
    CHECK(csv.rfind("t,phi,dphi\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == c.samples + 1);
    c.q = 0;
    c.strict = false;
    CHECK(cmd_mollifier(c).body["moments"][0]["moment"].get<double>() == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("classify reports") {
    auto c = config("classify");
    c.k_max = 0;
    c.expr = "iota(delta@0)";
    auto b = cmd_classify(c).body;
    CHECK(b["moderateness"]["N"] == 1);
    CHECK(b["negligibility"]["negligible"] == false);
    c.expr = "sigma(1)";
    b = cmd_classify(c).body;
    CHECK(b["moderateness"]["N"] == 0);
    c.expr = "sub(iota(sin), sigma(sin))";
    b = cmd_classify(c).body;
    CHECK(b["negligibility"]["negligible"] == true);
    for (const auto& w : b["negligibility"]["witnesses"]) CHECK(w["q"] == w["m"].get<int>() - 1);
    const auto csv = cmd_classify(c).csv();
    CHECK(csv.rfind("eps,k,sup_value,q\n", 0) == 0);
}

TEST_CASE("demos") {
    const auto names = demo_names();
    for (const char* n : {"heaviside-squared", "heaviside-times-delta", "delta-squared", "x-times-delta",
                          "lie-commutation", "covariant-association"})
        CHECK(names.find(n) != std::string::npos);
    auto c = config("demo");
    c.scenario = "x-times-delta";
    CHECK(cmd_demo(c).body["result"]["verdict"] == "AssociatedToZero");
    c.scenario = "delta-squared";
    const auto d = cmd_demo(c).body["result"];
    CHECK(d["verdict"] == "Divergent(1)");
    for (const auto& r : d["scaled_limit_checks"]) CHECK(r["deviation"].get<double>() <= 1e-3);
    c.scenario = "nope";
    CHECK_THROWS_AS(cmd_demo(c), UnknownScenario);
    CHECK_THROWS_AS(cmd_demo(c).csv(), UnknownScenario);
}

TEST_CASE("reports are deterministic") {
    auto c = config("demo");
    c.scenario = "heaviside-times-delta";
    CHECK(cmd_demo(c).body.dump() == cmd_demo(c).body.dump());
}

TEST_CASE("association report rows carry oracle values") {
    auto c = config("associate");
    c.expr = "iota(heaviside@0)";
    c.candidate = "heaviside@0";
    const auto b = cmd_associate(c).body["association"];
    CHECK(b["verdict"] == "AssociatedTo(heaviside@0)");
    for (const auto& r : b["rows"]) {
        CHECK(r.contains("candidate_value"));
        CHECK(r.contains("oracle_source"));
        CHECK(r.contains("deviation"));
    }
}

TEST_CASE("config validation") {
    auto c = config("classify");
    c.eps_min = 0.5;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = config("classify");
    c.format = "xml";
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = config("classify");
    c.k_lo = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = config("classify");
    c.eps_count = 2;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK_NOTHROW(config("mollifier").validate());
}

TEST_CASE("quadrature tolerance override") {
    ::unsetenv("COLOMBEAU_QUAD_TOL");
    CHECK(quad_tolerance() == quad::kDefaultTolerance);
    ::setenv("COLOMBEAU_QUAD_TOL", "1e-8", 1);
    CHECK(quad_tolerance() == 1e-8);
    ::setenv("COLOMBEAU_QUAD_TOL", "lots", 1);
    CHECK_THROWS_AS(quad_tolerance(), InvalidArgument);
    ::unsetenv("COLOMBEAU_QUAD_TOL");
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ParseError("x", 0)) == static_cast<int>(kParse));
    CHECK(exit_code_for(UnsupportedOrder("x")) == static_cast<int>(kConstruction));
    CHECK(exit_code_for(ConstructionError("x")) == static_cast<int>(kConstruction));
    CHECK(exit_code_for(UnknownScenario("x")) == static_cast<int>(kUnknownScenario));
    CHECK(exit_code_for(InvalidArgument("x")) == static_cast<int>(kUsage));
    CHECK(exit_code_for(QuadratureError("x", 0.0, 1.0)) == static_cast<int>(kQuadrature));
    auto c = config("mollifier");
    c.q = 13;
    try {
        cmd_mollifier(c);
        FAIL("expected an exception");
    } catch (const std::exception& e) {
        CHECK(exit_code_for(e) == static_cast<int>(kConstruction));
    }
}
