#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mqg/cli.hpp"
#include "mqg/report.hpp"

using namespace mqg;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"yflag", "nf", "--n", "3"}).code == 2);                  // missing expression
    CHECK(run({"yflag", "nf", "--n", "3", "Y[3,2]*"}).code == 2);       // syntax error
    CHECK(run({"yflag", "nf", "--n", "3", "Y[2,3]"}).code == 2);        // unknown generator
    CHECK(run({"yflag", "confluence", "--n", "3"}).code == 2);          // missing --seed
}

TEST_CASE("passing and failing checks drive the exit code") {
    CHECK(run({"coeff", "eq", "(q^2-q^-2)*lam^-1", "q+q^-1"}).code == 0);
    CHECK(run({"coeff", "eq", "q", "q13"}).code == 1);
    CHECK(run({"yflag", "residuals", "--n", "3"}).code == 0);
    CHECK(run({"qmatrix", "gauss2"}).code == 0);
}

TEST_CASE("normal form golden output is byte-stable") {
    auto a = run({"yflag", "nf", "--n", "3", "Y[3,2]*Y[2,1]", "--format", "json"});
    auto b = run({"yflag", "nf", "--n", "3", "Y[3,2]*Y[2,1]", "--format", "json"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    json j = json::parse(a.out);
    CHECK(j["tool"] == "mqg");
    auto terms = j["checks"][0]["poly"]["terms"];
    REQUIRE(terms.size() == 2);
    // canonical order: degree then lexicographic, so Y[3,1] comes first
    CHECK(terms[0]["word"] == json::array({"Y[3,1]"}));
    CHECK(terms[0]["coef"]["lampow"] == 0);
    CHECK(terms[1]["word"] == json::array({"Y[2,1]", "Y[3,2]"}));
    // the two-letter term carries q12 q23 / (q^2 q13)
    CHECK(terms[1]["coef"]["num"][0]["mono"] ==
          json({{"q", "-2"}, {"q12", "1"}, {"q13", "-1"}, {"q23", "1"}}));
}

TEST_CASE("coefficient JSON carries weight-label exponents") {
    auto r = run({"coeff", "show", "q^(1/2 - r1)*q13^(r2)", "--format", "json"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    auto mono = j["checks"][0]["coef"]["num"][0]["mono"];
    CHECK(mono["q"] == "1/2");
    CHECK(mono["q@r1"] == "-1");
    CHECK(mono["q13@r2"] == "1");
}

TEST_CASE("rational evaluation through --params") {
    auto r = run({"coeff", "show", "(q^2-q^-2)*lam^-1", "--params", "q=2", "--format", "json"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["checks"][0]["value"] == "5/2");
}

TEST_CASE("one-parameter substitution in rules") {
    auto r = run({"yflag", "rules", "--n", "3", "--one-param", "--format", "json"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    bool found = false;
    for (auto& c : j["checks"]) {
        if (c["name"] == "Y[3,2]*Y[3,1]") {
            CHECK(c["rhs"] == "(q)*Y[3,1]*Y[3,2]");
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("rep subcommands run end to end") {
    auto r = run({"rep", "act", "--n", "3", "--gen", "X+1", "--vec", "j=0,n=0,l=0", "--closed3",
                  "--format", "json"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["checks"][0]["result"]["terms"].size() == 1);
    CHECK(run({"rep", "welldef", "--n", "3", "--degree", "2"}).code == 0);
    // the closed-form table fails its i = 2 consistency checks, so exit 1
    CHECK(run({"rep", "verify", "--n", "3", "--degree", "2", "--closed3", "--split"}).code == 1);
    CHECK(run({"rep", "verify", "--n", "3", "--degree", "2", "--split"}).code == 0);
}
