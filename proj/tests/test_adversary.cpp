#include <set>

#include "doctest.h"
#include "rrr/adversary.hpp"
#include "rrr/generators.hpp"
#include "rrr/solvers.hpp"
#include "test_helpers.hpp"

using namespace rrr;

namespace {

// Defining-set oracle for B, written straight off the definition.
std::set<Cost> beta_set_oracle(const Instance& ins) {
    std::set<Cost> out{0};
    for (int i = 0; i < ins.n; ++i)
        for (int j = 0; j < ins.n; ++j)
            for (int bi = 0; bi <= 1; ++bi)
                for (int bj = 0; bj <= 1; ++bj) {
                    const Cost v = ins.c_lower[i] + bi * ins.d[i] - ins.c_lower[j] - bj * ins.d[j];
                    if (v >= 0) out.insert(v);
                }
    return out;
}

// Inner value of the per-part problem for fixed (alpha, attack set).
Cost part_inner(const Instance& ins, const std::vector<char>& mask, int j, Cost beta, Cost alpha,
                const std::vector<char>& attacked) {
    Cost v = static_cast<Cost>(ins.p[j]) * alpha;
    for (int i : ins.parts[j]) {
        const Cost u = alpha + (mask[i] ? beta : 0) - ins.c_lower[i] - (attacked[i] ? ins.d[i] : 0);
        v -= std::max<Cost>(u, 0);
    }
    return v;
}

}  // namespace

TEST_CASE("beta candidate examples") {
    Instance ins;
    ins.n = 2;
    ins.parts = {{0, 1}};
    ins.p = {1};
    ins.C = {0, 0};
    ins.c_lower = {0, 1};
    ins.d = {1, 1};
    ins.gamma = 1;
    ins.k = 0;
    CHECK(beta_candidates(ins) == std::vector<Cost>{0, 1, 2});

    Instance same = ins;
    same.c_lower = {5, 5};
    same.d = {3, 3};
    CHECK(beta_candidates(same) == std::vector<Cost>{0, 3});

    Instance flat = ins;
    flat.c_lower = {4, 4};
    flat.d = {0, 0};
    CHECK(beta_candidates(flat) == std::vector<Cost>{0});
}

TEST_CASE("beta candidates equal the defining set") {
    SplitMix64 rng(21);
    for (int t = 0; t < 40; ++t) {
        const Instance ins = testutil::sample_small(rng);
        const std::set<Cost> oracle = beta_set_oracle(ins);
        const std::vector<Cost> got = beta_candidates(ins);
        CHECK(std::set<Cost>(got.begin(), got.end()) == oracle);
        CHECK(got.size() <= static_cast<std::size_t>(4 * ins.n * ins.n + 1));
    }
}

TEST_CASE("alpha candidates are the four kink families") {
    const Instance ins = builtin("ex1");
    const std::vector<Cost> a = alpha_candidates(ins, 1, 3);
    // items 3,4: c = 9,4; cbar = 19,13; minus beta: 6,1; 16,10
    CHECK(a == std::vector<Cost>{1, 4, 6, 9, 10, 13, 16, 19});
    for (int j = 0; j < ins.num_parts(); ++j)
        CHECK(alpha_candidates(ins, j, 0).size() <= 4 * ins.parts[j].size());
}

TEST_CASE("per-part adversarial subproblem, hand-evaluated entry") {
    const Instance ins = builtin("ex1");
    const FirstStageSolution x{{0, 3}};
    const auto [value, attacked] = adv_part(ins, x, 1, 0, 1, 9);
    CHECK(value == 9);
    CHECK(attacked == std::vector<int>{3});
}

TEST_CASE("per-part subproblem with no budget and no deviations is the bare sum") {
    Instance ins = builtin("ex1");
    ins.d = {0, 0, 0, 0};
    const FirstStageSolution x{{0, 3}};
    const Cost beta = 2, alpha = 8;
    const auto [value, attacked] = adv_part(ins, x, 0, beta, 0, alpha);
    Cost expect = static_cast<Cost>(ins.p[0]) * alpha;
    const std::vector<char> mask = x.mask(ins.n);
    for (int i : ins.parts[0])
        expect -= std::max<Cost>(alpha + (mask[i] ? beta : 0) - ins.c_lower[i], 0);
    CHECK(value == expect);
    CHECK(attacked.empty());
}

TEST_CASE("per-part subproblem matches brute force over attacks and an alpha grid") {
    SplitMix64 rng(22);
    for (int t = 0; t < 40; ++t) {
        const Instance ins = testutil::sample_small(rng, 2, 1, 8);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const std::vector<char> mask = x.mask(ins.n);
        const Cost beta = rng.uniform_int(0, 6);
        for (int j = 0; j < ins.num_parts(); ++j) {
            const int budget = static_cast<int>(rng.uniform_int(0, 2));
            // solver side: best over the candidate kinks
            Cost fast = 0;
            bool first = true;
            for (Cost alpha : alpha_candidates(ins, j, beta)) {
                const Cost v = adv_part(ins, x, j, beta, budget, alpha).first;
                if (first || v > fast) fast = v;
                first = false;
            }
            // oracle side: fine integer grid and explicit attack subsets
            Cost slow = 0;
            first = true;
            for (Cost alpha = -12; alpha <= 30; ++alpha) {
                std::vector<int> items = ins.parts[j];
                for (int size = 0; size <= std::min<int>(budget, items.size()); ++size) {
                    for_each_subset(items, size, [&](const std::vector<int>& sub) {
                        std::vector<char> att(ins.n, 0);
                        for (int i : sub) att[i] = 1;
                        const Cost v = part_inner(ins, mask, j, beta, alpha, att);
                        if (first || v > slow) slow = v;
                        first = false;
                    });
                }
            }
            CHECK(fast == slow);
        }
    }
}

TEST_CASE("adversary on the running example") {
    const Instance ins = builtin("ex1");
    SUBCASE("items 1 and 3: worst attack is item 1, value 16") {
        const AdvResult r = adv_solve(ins, {{0, 2}});
        CHECK(r.value == 16);
        CHECK(inc_solve(ins, {{0, 2}}, r.scenario).value == 16);
    }
    SUBCASE("items 1 and 4: value 19") {
        const AdvResult r = adv_solve(ins, {{0, 3}});
        CHECK(r.value == 19);
        CHECK(inc_solve(ins, {{0, 3}}, r.scenario).value == 19);
    }
    SUBCASE("enumeration oracle agrees with the narrative values") {
        CHECK(adv_brute(ins, {{0, 2}}).value == 16);
        CHECK(adv_brute(ins, {{1, 3}}).value == 16);
    }
    SUBCASE("no attack budget reduces to the nominal incremental value") {
        Instance g0 = ins;
        g0.gamma = 0;
        const FirstStageSolution x{{0, 3}};
        CHECK(adv_solve(g0, x).value == inc_solve(g0, x, g0.c_lower).value);
        CHECK(adv_solve(g0, x).scenario.attacked.empty());
    }
}

TEST_CASE("enumeration oracles respect their bounds") {
    const Instance ins = builtin("ex1");
    CHECK_THROWS_AS(adv_brute(ins, {{0, 2}}, 3), std::runtime_error);
}

TEST_CASE("full attack is maximal when the budget covers every item") {
    SplitMix64 rng(23);
    for (int t = 0; t < 20; ++t) {
        Instance ins = testutil::sample_small(rng);
        ins.gamma = ins.n;
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        Scenario all;
        for (int i = 0; i < ins.n; ++i) all.attacked.push_back(i);
        CHECK(adv_brute(ins, x).value == inc_solve(ins, x, all).value);
    }
}

TEST_CASE("k = 0 closed form") {
    Instance ins = builtin("ex1");
    ins.k = 0;
    CHECK(adv_k0(ins, {{0, 3}}) == 23);
    CHECK(adv_k0(ins, {{1, 3}}) == 21);
    CHECK(adv_k0(ins, {{0, 3}}) == adv_brute(ins, {{0, 3}}).value);
    Instance g0 = ins;
    g0.gamma = 0;
    CHECK(adv_k0(g0, {{0, 3}}) == 14);

    Instance k1 = builtin("ex1");
    CHECK_THROWS_AS(adv_k0(k1, {{0, 3}}), std::invalid_argument);

    SplitMix64 rng(24);
    for (int t = 0; t < 50; ++t) {
        Instance r = testutil::sample_small(rng);
        r.k = 0;
        const FirstStageSolution x = testutil::random_feasible(r, rng);
        CHECK(adv_k0(r, x) == adv_brute(r, x).value);
    }
}

TEST_CASE("adversary equals the enumeration oracle with a consistent scenario") {
    SplitMix64 rng(25);
    for (int t = 0; t < 300; ++t) {
        const Instance ins = testutil::sample_small(rng);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const AdvResult fast = adv_solve(ins, x);
        const AdvResult slow = adv_brute(ins, x);
        REQUIRE(fast.value == slow.value);
        CHECK(static_cast<int>(fast.scenario.attacked.size()) <= ins.gamma);
        CHECK(inc_solve(ins, x, fast.scenario).value == fast.value);
        int total_alloc = 0;
        for (int g : fast.budget_alloc) total_alloc += g;
        CHECK(total_alloc <= ins.gamma);
    }
}

TEST_CASE("adversary value is monotone in gamma and antitone in k") {
    SplitMix64 rng(26);
    for (int t = 0; t < 60; ++t) {
        const Instance ins = testutil::sample_small(rng);
        const FirstStageSolution x = testutil::random_feasible(ins, rng);
        const Cost base = adv_solve(ins, x).value;
        Instance more_gamma = ins;
        more_gamma.gamma = std::min(ins.gamma + 1, ins.n);
        CHECK(adv_solve(more_gamma, x).value >= base);
        Instance more_k = ins;
        more_k.k = std::min(ins.k + 1, ins.total_quota());
        CHECK(adv_solve(more_k, x).value <= base);
    }
}

TEST_CASE("cuts are tight at their origin and valid everywhere") {
    SplitMix64 rng(27);
    for (int t = 0; t < 120; ++t) {
        const Instance ins = testutil::sample_small(rng);
        const FirstStageSolution xhat = testutil::random_feasible(ins, rng);
        const AdvResult r = adv_solve(ins, xhat);
        CHECK(cut_value(ins, xhat, r.candidate()) == r.value);
        const FirstStageSolution other = testutil::random_feasible(ins, rng);
        CHECK(cut_value(ins, other, r.candidate()) <= adv_brute(ins, other).value);
    }
}

TEST_CASE("zero candidate evaluates to zero on nonnegative costs") {
    const Instance ins = builtin("ex1");
    CutCandidate zero;
    zero.beta = 0;
    zero.alpha = {0, 0};
    const Cost v = cut_value(ins, FirstStageSolution{{0, 2}}, zero);
    CHECK(v == 0);
    CHECK(v <= 0);
}

TEST_CASE("degenerate quotas: empty parts, full parts, empty instances") {
    SUBCASE("zero-quota and full-quota parts") {
        Instance ins;
        ins.n = 5;
        ins.parts = {{0, 1}, {2, 3}, {4}};
        ins.p = {0, 2, 1};  // select nothing, everything, and the forced single
        ins.C = {3, 1, 4, 1, 5};
        ins.c_lower = {2, 7, 1, 8, 2};
        ins.d = {8, 2, 8, 1, 7};
        ins.gamma = 2;
        ins.k = 1;
        REQUIRE(validate(ins).ok);
        const FirstStageSolution x{{2, 3, 4}};
        const AdvResult fast = adv_solve(ins, x);
        const AdvResult slow = adv_brute(ins, x);
        CHECK(fast.value == slow.value);
        CHECK(inc_solve(ins, x, fast.scenario).value == fast.value);
        CHECK(rec_brute(ins).first == solve_m1(ins).value);
        CHECK(rec_brute(ins).first == solve_m2(ins).value);
    }
    SUBCASE("empty instance") {
        Instance ins;
        REQUIRE(validate(ins).ok);
        const FirstStageSolution x;
        CHECK(adv_solve(ins, x).value == 0);
        CHECK(inc_solve(ins, x, std::vector<Cost>{}).value == 0);
        CHECK(rec_brute(ins).first == 0);
    }
}

TEST_CASE("relaxed adversary at the fractional witness is exactly zero") {
    const Instance ins = builtin("ex2");
    FractionalAssignment frac;
    frac.values = {Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(2, 3), Rat(1, 3)};
    CHECK(adv_relaxed(ins, frac) == Rat(0));
    CHECK(beta_candidates(ins) == std::vector<Cost>{0, 1});

    // total relaxed objective: first-stage C x = 1/3, ratio 3 to the integral optimum
    Rat first_stage(0);
    for (int i = 0; i < ins.n; ++i) first_stage += frac.values[i] * Rat(ins.C[i]);
    CHECK(first_stage == Rat(1, 3));
}
