#include "doctest.h"
#include "rrr/special_case.hpp"
#include "rrr/solvers.hpp"
#include "rrr/generators.hpp"
#include "test_helpers.hpp"

using namespace rrr;

namespace {

// Three-part instance where the optimum needs the strategy-II family with a
// runner-up saving strictly between the extremes; a regression guard for the
// membership repair in solve_special.
Instance tricky_pairs() {
    Instance ins;
    ins.n = 6;
    ins.parts = {{0, 1}, {2, 3}, {4, 5}};
    ins.p = {1, 1, 1};
    //            a0   b0  a1 b1  a2 b2
    ins.C = {0, 100, 0, 100, 0, 100};
    ins.c_lower = {10, 0, 9, 0, 5, 5};
    ins.d = {3, 10, 3, 0, 3, 0};
    ins.gamma = 1;
    ins.k = 1;
    return ins;
}

}  // namespace

TEST_CASE("pair view rejects other shapes") {
    const Instance ex2 = builtin("ex2");
    CHECK_THROWS_AS((void)PairInstance(ex2), std::invalid_argument);
    Instance bad_budget = builtin("ex1");
    bad_budget.gamma = 2;
    CHECK_THROWS_AS((void)PairInstance(bad_budget), std::invalid_argument);
    const Instance ex1 = builtin("ex1");
    CHECK_NOTHROW((void)PairInstance(ex1));
}

TEST_CASE("strategy analysis on the running example") {
    const Instance ex1 = builtin("ex1");
    const PairInstance pv(ex1);
    SUBCASE("items 1 and 4") {
        const StrategyAnalysis an = analyze(pv, {{0, 3}});
        CHECK(an.j_star == 0);
        CHECK(an.b_star == 1);
        CHECK(an.g1 == 3);
        CHECK(an.i_star == 1);
        CHECK(an.g2 == 8);
    }
    SUBCASE("items 1 and 3") {
        const StrategyAnalysis an = analyze(pv, {{0, 2}});
        CHECK(an.j_star == 1);
        CHECK(an.b_star == 0);
        CHECK(an.g1 == 2);
        CHECK(an.g2 == 2);
    }
}

TEST_CASE("without deviations strategy II gains nothing") {
    SplitMix64 rng(31);
    for (int t = 0; t < 30; ++t) {
        Instance ins = testutil::sample_pair(rng, 5);
        std::fill(ins.d.begin(), ins.d.end(), 0);
        const PairInstance pv(ins);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const StrategyAnalysis an = analyze(pv, x);
        CHECK(an.g2 <= 0);
        CHECK(adv_closed_form(pv, x) ==
              inc_solve(ins, x, ins.c_lower).value + an.g1);
    }
}

TEST_CASE("closed-form adversary on the running example") {
    const Instance ins = builtin("ex1");
    CHECK(adv_closed_form(ins, {{0, 3}}) == 19);
    CHECK(adv_closed_form(ins, {{0, 2}}) == 16);
}

TEST_CASE("closed-form adversary matches the enumeration oracle") {
    SplitMix64 rng(32);
    for (int t = 0; t < 300; ++t) {
        const Instance ins = testutil::sample_pair(rng);
        const PairInstance pv(ins);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const StrategyAnalysis an = analyze(pv, x);
        CHECK(an.g1 >= 0);
        const Cost adv = adv_brute(ins, x).value;
        REQUIRE(adv_closed_form(pv, x) == adv);
        // gain identity relative to the nominal recovery value
        CHECK(adv - inc_solve(ins, x, ins.c_lower).value == std::max(an.g1, an.g2));
    }
}

TEST_CASE("special-case solver on the running example") {
    const auto [value, x] = solve_special(builtin("ex1"));
    CHECK(value == 25);
    CHECK(x.selected == std::vector<int>{0, 2});
}

TEST_CASE("special-case solver without deviations picks per-part cheapest totals") {
    Instance ins;
    ins.n = 6;
    ins.parts = {{0, 1}, {2, 3}, {4, 5}};
    ins.p = {1, 1, 1};
    ins.C = {4, 9, 2, 1, 7, 3};
    ins.c_lower = {3, 1, 5, 9, 2, 8};
    ins.d = {0, 0, 0, 0, 0, 0};
    ins.gamma = 1;
    ins.k = 1;
    const auto [value, x] = solve_special(ins);
    const auto [bvalue, bx] = rec_brute(ins);
    CHECK(value == bvalue);
    CHECK(x.selected == bx.selected);
}

TEST_CASE("special-case solver covers the runner-up repair") {
    const Instance ins = tricky_pairs();
    const auto [value, x] = solve_special(ins);
    const auto [bvalue, bx] = rec_brute(ins, 1000000, true);
    CHECK(value == bvalue);
    CHECK(value == 17);
    CHECK(x.selected == bx.selected);
    CHECK(x.selected == std::vector<int>{0, 2, 4});
}

TEST_CASE("single-part instances fall back to direct enumeration") {
    SplitMix64 rng(33);
    for (int t = 0; t < 20; ++t) {
        const Instance ins = testutil::sample_pair(rng, 1);
        REQUIRE(ins.num_parts() == 1);
        const auto [value, x] = solve_special(ins);
        const auto [bvalue, bx] = rec_brute(ins);
        CHECK(value == bvalue);
        CHECK(x.selected == bx.selected);
    }
}

TEST_CASE("special-case solver equals brute force on random pair instances") {
    SplitMix64 rng(34);
    for (int t = 0; t < 200; ++t) {
        const Instance ins = testutil::sample_pair(rng);
        const auto [value, x] = solve_special(ins);
        const auto [bvalue, bx] = rec_brute(ins);
        REQUIRE(value == bvalue);
        CHECK(is_feasible(ins, x));
        CHECK(first_stage_cost(ins, x) + adv_brute(ins, x).value == value);
    }
}
