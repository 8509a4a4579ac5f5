#include "doctest.h"
#include "rrr/incremental.hpp"
#include "rrr/generators.hpp"
#include "test_helpers.hpp"

using namespace rrr;

TEST_CASE("incremental recovery on the running example") {
    const Instance ins = builtin("ex1");
    const FirstStageSolution x{{0, 3}};  // items 1 and 4

    SUBCASE("item 4 attacked forces the exchange to item 3") {
        const IncResult r = inc_solve(ins, x, Scenario{{3}});
        CHECK(r.value == 19);
        CHECK(r.recovery.selected == std::vector<int>{0, 2});
    }
    SUBCASE("nominal costs prefer swapping item 1 out") {
        const IncResult r = inc_brute(ins, x, ins.c_lower);
        CHECK(r.value == 11);
        CHECK(r.recovery.selected == std::vector<int>{1, 3});
        CHECK(inc_solve(ins, x, ins.c_lower).value == 11);
    }
    SUBCASE("from items 1 and 3 the nominal recovery is items 1 and 4") {
        const IncResult r = inc_brute(ins, {{0, 2}}, ins.c_lower);
        CHECK(r.value == 14);
        CHECK(r.recovery.selected == std::vector<int>{0, 3});
    }
}

TEST_CASE("k = 0 pins the recovery to x") {
    SplitMix64 rng(11);
    for (int t = 0; t < 30; ++t) {
        Instance ins = testutil::sample_small(rng);
        ins.k = 0;
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const std::vector<Cost> c = testutil::random_scenario(ins, rng).realize(ins);
        const IncResult r = inc_solve(ins, x, c);
        CHECK(r.recovery.selected == x.selected);
        Cost direct = 0;
        for (int i : x.selected) direct += c[i];
        CHECK(r.value == direct);
        CHECK(inc_brute(ins, x, c).value == direct);
    }
}

TEST_CASE("k >= P frees the recovery completely") {
    SplitMix64 rng(12);
    for (int t = 0; t < 30; ++t) {
        Instance ins = testutil::sample_small(rng);
        ins.k = ins.total_quota();
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const std::vector<Cost> c = testutil::random_scenario(ins, rng).realize(ins);
        Cost unconstrained = 0;
        for (int j = 0; j < ins.num_parts(); ++j) {
            std::vector<Cost> costs;
            for (int i : ins.parts[j]) costs.push_back(c[i]);
            std::sort(costs.begin(), costs.end());
            for (int u = 0; u < ins.p[j]; ++u) unconstrained += costs[u];
        }
        CHECK(inc_solve(ins, x, c).value == unconstrained);
    }
}

TEST_CASE("full-part quotas leave no slack") {
    Instance ins;
    ins.n = 4;
    ins.parts = {{0, 1}, {2, 3}};
    ins.p = {2, 1};
    ins.C = {1, 1, 1, 1};
    ins.c_lower = {5, 6, 7, 8};
    ins.d = {1, 1, 1, 1};
    ins.gamma = 1;
    ins.k = 1;
    REQUIRE(validate(ins).ok);
    const FirstStageSolution x{{0, 1, 2}};
    const IncResult r = inc_solve(ins, x, ins.c_lower);
    CHECK(r.value == 5 + 6 + 7);  // only part 2 offers an exchange, 7 < 8 stays
    CHECK(inc_brute(ins, x, ins.c_lower).value == r.value);
}

TEST_CASE("incremental solver matches the enumeration oracle") {
    SplitMix64 rng(13);
    for (int t = 0; t < 300; ++t) {
        const Instance ins = testutil::sample_small(rng);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const std::vector<Cost> c = testutil::random_scenario(ins, rng).realize(ins);
        const IncResult fast = inc_solve(ins, x, c);
        const IncResult slow = inc_brute(ins, x, c);
        REQUIRE(fast.value == slow.value);
        // returned recovery must be feasible, in range, and match its value
        CHECK(is_feasible(ins, {fast.recovery.selected}));
        CHECK(hamming(x, fast.recovery.selected, ins.n) <= 2 * ins.k);
        Cost v = 0;
        for (int i : fast.recovery.selected) v += c[i];
        CHECK(v == fast.value);
    }
}

TEST_CASE("incremental value never exceeds staying put and improves with k") {
    SplitMix64 rng(14);
    for (int t = 0; t < 100; ++t) {
        Instance ins = testutil::sample_small(rng);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const std::vector<Cost> c = testutil::random_scenario(ins, rng).realize(ins);
        Cost stay = 0;
        for (int i : x.selected) stay += c[i];
        const Cost at_k = inc_solve(ins, x, c).value;
        CHECK(at_k <= stay);
        Instance looser = ins;
        looser.k = std::min(ins.k + 1, ins.total_quota());
        CHECK(inc_solve(looser, x, c).value <= at_k);
    }
}

TEST_CASE("incremental rejects malformed input") {
    const Instance ins = builtin("ex1");
    CHECK_THROWS_AS(inc_solve(ins, {{0, 1}}, ins.c_lower), std::invalid_argument);
    std::vector<Cost> short_costs(3, 1);
    CHECK_THROWS_AS(inc_solve(ins, {{0, 3}}, short_costs), std::invalid_argument);
    CHECK_THROWS_AS(inc_brute(ins, {{0, 3}}, ins.c_lower, 2), std::runtime_error);
}
