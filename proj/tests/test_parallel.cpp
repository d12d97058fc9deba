#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqg/parallel.hpp"
#include "mqg/qmatrix.hpp"
#include "mqg/rep.hpp"

using namespace mqg;

// The OpenMP task pool must be an observationally exact replacement for the
// serial reference loops: identical seeded workloads, identical reports.

TEST_CASE("task runner covers every index exactly once") {
    std::vector<int> hits(257, 0);
    run_indexed_tasks(hits.size(), [&](std::size_t i) { hits[i] += 1; }, true);
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("confluence reports agree between serial and parallel") {
    FlagAlgebra f = build_flag_algebra(3);
    auto serial = confluence_check(f.alg, 5, 200, 99, false);
    auto parallel = confluence_check(f.alg, 5, 200, 99, true);
    CHECK(serial.passed());
    CHECK(parallel.passed());
    CHECK(serial.trials == parallel.trials);
    CHECK(serial.counterexamples.size() == parallel.counterexamples.size());
}

TEST_CASE("coproduct reports agree between serial and parallel") {
    auto serial = coproduct_check(2, 3, false);
    auto parallel = coproduct_check(2, 3, true);
    REQUIRE(serial.relations.size() == parallel.relations.size());
    for (std::size_t t = 0; t < serial.relations.size(); ++t) {
        CHECK(serial.relations[t].relation == parallel.relations[t].relation);
        CHECK(serial.relations[t].residual == parallel.relations[t].residual);
    }
    REQUIRE(serial.homomorphism_checks.size() == parallel.homomorphism_checks.size());
    for (std::size_t t = 0; t < serial.homomorphism_checks.size(); ++t)
        CHECK(serial.homomorphism_checks[t].ok == parallel.homomorphism_checks[t].ok);
}

TEST_CASE("well-definedness reports agree between serial and parallel") {
    auto serial = well_definedness(3, 2, false);
    auto parallel = well_definedness(3, 2, true);
    REQUIRE(serial.checks.size() == parallel.checks.size());
    for (std::size_t t = 0; t < serial.checks.size(); ++t) {
        CHECK(serial.checks[t].name == parallel.checks[t].name);
        CHECK(serial.checks[t].status == parallel.checks[t].status);
    }
}

TEST_CASE("verification reports agree between serial and parallel") {
    auto serial = verify_relations(3, 2, true, true, false);
    auto parallel = verify_relations(3, 2, true, true, true);
    REQUIRE(serial.checks.size() == parallel.checks.size());
    for (std::size_t t = 0; t < serial.checks.size(); ++t) {
        CHECK(serial.checks[t].name == parallel.checks[t].name);
        CHECK(serial.checks[t].status == parallel.checks[t].status);
        CHECK(serial.checks[t].detail == parallel.checks[t].detail);
    }
}
