#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "rrr/mip.hpp"
#include "rrr/solvers.hpp"
#include "rrr/generators.hpp"
#include "test_helpers.hpp"

using namespace rrr;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Exact row evaluation at a rational assignment (missing vars read as 0).
bool rows_hold(const MipModel& m, const std::map<int, Rat>& assign, std::string* why = nullptr) {
    for (const auto& row : m.rows) {
        Rat lhs(0);
        for (const auto& term : row.terms) {
            const auto it = assign.find(term.var);
            if (it != assign.end()) lhs += Rat(term.coef) * it->second;
        }
        const Rat rhs{row.rhs};
        const bool ok = row.sense == MipModel::Sense::LE   ? lhs <= rhs
                        : row.sense == MipModel::Sense::GE ? lhs >= rhs
                                                           : lhs == rhs;
        if (!ok) {
            if (why) *why = row.name + ": " + lhs.str() + " vs " + rhs.str();
            return false;
        }
    }
    return true;
}

int var_index(const MipModel& m, const std::string& name) {
    for (int v = 0; v < static_cast<int>(m.vars.size()); ++v)
        if (m.vars[v].name == name) return v;
    throw std::runtime_error("no variable named " + name);
}

// Optimal duals of "pick <= budget largest gains": pi is the (budget+1)-th
// largest gain (0 beyond the list), rho the excess.
template <typename T>
std::pair<T, std::vector<T>> top_k_duals(std::vector<T> gains, int budget) {
    std::vector<T> sorted = gains;
    std::sort(sorted.begin(), sorted.end(), [](const T& a, const T& b) { return b < a; });
    T pi(0);
    if (budget < static_cast<int>(sorted.size())) {
        pi = sorted[budget];
        if (pi < T(0)) pi = T(0);
    }
    std::vector<T> rho;
    for (const T& g : gains) rho.push_back(g - pi > T(0) ? g - pi : T(0));
    return {pi, rho};
}

}  // namespace

TEST_CASE("scenario model for the running example has the tallied shape") {
    const Instance ins = builtin("ex1");
    const MipModel m = build_m1(ins, {Scenario{}});
    CHECK(m.vars.size() == 13);  // n + 2nS + 1
    CHECK(m.rows.size() == 14);  // S + K + SK + nS + nS + S
    CHECK(m.formulation == "m1");

    const MipModel m3s = build_m1(ins, {Scenario{}, Scenario{{0}}, Scenario{{3}}});
    CHECK(m3s.vars.size() == 4 + 2 * 4 * 3 + 1);
    CHECK_THROWS_AS(build_m1(ins, {}), std::invalid_argument);
}

TEST_CASE("lp serialization is deterministic and matches the golden file") {
    const Instance ins = builtin("ex1");
    const std::string lp = write_lp(build_m1(ins, {Scenario{}}));
    CHECK(lp == write_lp(build_m1(ins, {Scenario{}})));
    const std::string golden = read_file(std::string(RRR_GOLDEN_DIR) + "/ex1_m1_nominal.lp");
    CHECK(lp == golden);
}

TEST_CASE("scenario model admits the combinatorial optimum as a witness") {
    const Instance ins = builtin("ex1");
    const std::vector<Scenario> pool{Scenario{}, Scenario{{3}}};
    const MipModel m = build_m1(ins, pool);
    // best selection for this pool is items 1 and 3 at master value 23? compute it
    const auto [master_value, xbest] = master_exhaustive(ins, pool);

    std::map<int, Rat> assign;
    const std::vector<char> mask = FirstStageSolution{xbest.selected}.mask(ins.n);
    for (int i = 0; i < ins.n; ++i)
        assign[var_index(m, "x" + std::to_string(i + 1))] = Rat(mask[i]);
    Cost worst = 0;
    for (int s = 0; s < static_cast<int>(pool.size()); ++s) {
        const IncResult inc = inc_solve(ins, xbest, pool[s]);
        worst = std::max(worst, inc.value);
        std::vector<char> ymask(ins.n, 0);
        for (int i : inc.recovery.selected) ymask[i] = 1;
        for (int i = 0; i < ins.n; ++i) {
            assign[var_index(m, "y" + std::to_string(i + 1) + "_s" + std::to_string(s + 1))] =
                Rat(ymask[i]);
            assign[var_index(m, "z" + std::to_string(i + 1) + "_s" + std::to_string(s + 1))] =
                Rat(ymask[i] && mask[i] ? 1 : 0);
        }
    }
    assign[var_index(m, "t")] = Rat(worst);
    std::string why;
    CHECK_MESSAGE(rows_hold(m, assign, &why), why);
    Rat obj(0);
    for (const auto& term : m.objective) obj += Rat(term.coef) * assign[term.var];
    CHECK(obj == Rat(master_value));
}

TEST_CASE("candidate model rows certify cut values across all selections") {
    const Instance ins = builtin("ex1");
    CutCandidate cand;
    cand.beta = 0;
    cand.alpha = {7, 4};
    const MipModel m = build_m2(ins, {cand});
    CHECK(m.formulation == "m2");

    for_each_feasible(ins, [&](const FirstStageSolution& x) {
        const Cost cv = cut_value(ins, x, cand);
        const std::vector<char> mask = x.mask(ins.n);
        // exact gains at this x, then optimal duals
        std::vector<Cost> gains;
        const std::vector<int> owner = ins.part_of();
        for (int i = 0; i < ins.n; ++i) {
            const Cost u = cand.alpha[owner[i]] + (mask[i] ? cand.beta : 0) - ins.c_lower[i];
            gains.push_back(std::max<Cost>(u, 0) - std::max<Cost>(u - ins.d[i], 0));
        }
        const auto [pi, rho] = top_k_duals(gains, ins.gamma);

        std::map<int, Rat> assign;
        for (int i = 0; i < ins.n; ++i)
            assign[var_index(m, "x" + std::to_string(i + 1))] = Rat(mask[i]);
        assign[var_index(m, "t")] = Rat(cv);
        assign[var_index(m, "pi_s1")] = Rat(pi);
        for (int i = 0; i < ins.n; ++i)
            assign[var_index(m, "rho" + std::to_string(i + 1) + "_s1")] = Rat(rho[i]);
        std::string why;
        CHECK_MESSAGE(rows_hold(m, assign, &why), why);

        // the epigraph row is tight at the optimal duals
        const MipModel::Row& cut_row = m.rows.front();
        REQUIRE(cut_row.name == "cut_s1");
        Rat lhs(0);
        for (const auto& term : cut_row.terms) lhs += Rat(term.coef) * assign[term.var];
        CHECK(lhs == Rat(cut_row.rhs));
    });
}

TEST_CASE("compact model builds for the running example") {
    const Instance ins = builtin("ex1");
    const MipModel m = build_m3(ins);
    CHECK(m.formulation == "m3");
    CHECK(beta_candidates(ins).size() <= 33);
    CHECK(m.vars.size() < 1000000);
    // quota rows present and every row references declared variables
    int quota_rows = 0;
    for (const auto& row : m.rows) {
        for (const auto& term : row.terms) {
            CHECK(term.var >= 0);
            CHECK(term.var < static_cast<int>(m.vars.size()));
        }
        if (row.name.rfind("quota_", 0) == 0) ++quota_rows;
    }
    CHECK(quota_rows == ins.num_parts());
}

TEST_CASE("compact model admits the fractional witness at objective one third") {
    const Instance ins = builtin("ex2");
    const MipModel m = build_m3(ins);
    const std::vector<Rat> xfrac{Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(2, 3), Rat(1, 3)};
    const std::vector<Cost> betas = beta_candidates(ins);
    const std::vector<int> owner = ins.part_of();
    const int K = ins.num_parts();
    const int G = ins.gamma;
    const Cost pk = ins.total_quota() - ins.k;

    std::map<int, Rat> assign;
    for (int i = 0; i < ins.n; ++i)
        assign[var_index(m, "x" + std::to_string(i + 1))] = xfrac[i];

    Rat tval(0);
    bool t_first = true;
    for (int bi = 0; bi < static_cast<int>(betas.size()); ++bi) {
        const Cost beta = betas[bi];
        // per-part arc values from the linearized tables
        std::vector<std::vector<Rat>> cval(K, std::vector<Rat>(G + 1));
        for (int j = 0; j < K; ++j) {
            const std::vector<Cost> alphas = alpha_candidates(ins, j, beta);
            for (int g = 0; g <= G; ++g) {
                Rat best(0);
                bool first = true;
                for (int ai = 0; ai < static_cast<int>(alphas.size()); ++ai) {
                    const Cost alpha = alphas[ai];
                    Rat value(static_cast<Cost>(ins.p[j]) * alpha);
                    std::vector<Rat> gains;
                    for (int i : ins.parts[j]) {
                        const Cost b0 = std::max<Cost>(alpha - ins.c_lower[i], 0);
                        const Cost b1 = std::max<Cost>(alpha + beta - ins.c_lower[i], 0);
                        value -= Rat(b0) + xfrac[i] * Rat(b1 - b0);
                        const Cost g0 = b0 - std::max<Cost>(alpha - ins.c_lower[i] - ins.d[i], 0);
                        const Cost g1 =
                            b1 - std::max<Cost>(alpha + beta - ins.c_lower[i] - ins.d[i], 0);
                        gains.push_back(Rat(g0) + xfrac[i] * Rat(g1 - g0));
                    }
                    const auto [pi, rho] = top_k_duals(gains, g);
                    Rat dual = value + Rat(g) * pi;
                    for (const Rat& r : rho) dual += r;
                    const std::string tag = "_b" + std::to_string(bi + 1) + "_j" +
                                            std::to_string(j + 1) + "_g" + std::to_string(g) +
                                            "_a" + std::to_string(ai + 1);
                    assign[var_index(m, "pi" + tag)] = pi;
                    for (std::size_t u = 0; u < rho.size(); ++u)
                        assign[var_index(m, "rho" + std::to_string(ins.parts[j][u] + 1) + tag)] =
                            rho[u];
                    if (first || dual > best) best = dual;
                    first = false;
                }
                cval[j][g] = best;
                assign[var_index(m, "c_b" + std::to_string(bi + 1) + "_j" +
                                        std::to_string(j + 1) + "_g" + std::to_string(g))] = best;
            }
        }
        // longest-path potentials
        std::vector<std::vector<Rat>> s(K + 2, std::vector<Rat>(G + 1, Rat(0)));
        for (int j = 1; j <= K; ++j) {
            for (int gp = 0; gp <= G; ++gp) {
                bool first = true;
                Rat best(0);
                for (int g = 0; g <= gp; ++g) {
                    const Rat v = s[j][g] + cval[j - 1][gp - g];
                    if (first || v > best) best = v;
                    first = false;
                }
                s[j + 1][gp] = best;
            }
        }
        for (int gp = 1; gp <= G; ++gp)
            if (s[K + 1][gp] < s[K + 1][gp - 1]) s[K + 1][gp] = s[K + 1][gp - 1];
        for (int j = 1; j <= K + 1; ++j)
            for (int g = 0; g <= G; ++g)
                assign[var_index(m, "s_b" + std::to_string(bi + 1) + "_j" + std::to_string(j) +
                                        "_g" + std::to_string(g))] = s[j][g];
        const Rat total = Rat(pk * beta) + s[K + 1][G];
        if (t_first || total > tval) tval = total;
        t_first = false;
    }
    assign[var_index(m, "t")] = tval;
    CHECK(tval == Rat(0));

    std::string why;
    CHECK_MESSAGE(rows_hold(m, assign, &why), why);
    Rat obj(0);
    for (const auto& term : m.objective) obj += Rat(term.coef) * assign[term.var];
    CHECK(obj == Rat(1, 3));
}

TEST_CASE("compact model collapses without attack budget") {
    Instance ins = builtin("ex1");
    ins.gamma = 0;
    const MipModel m = build_m3(ins);
    for (const auto& row : m.rows) CHECK(row.name.rfind("mono_", 0) != 0);
    for (const auto& v : m.vars) {
        // only budget level 0 exists
        CHECK(v.name.find("_g1") == std::string::npos);
    }
}

TEST_CASE("compact model size guard trips on large instances") {
    GeneratorSpec spec;
    spec.family = Family::i1;
    spec.K = 10;
    spec.n_j = 10;
    spec.gamma = 30;
    spec.k = 5;
    spec.seed = 8;
    const Instance ins = gen_random(spec);
    CHECK_THROWS_AS((void)build_m3(ins), std::length_error);
}

TEST_CASE("solution files parse and reject malformed input") {
    const Instance ins = builtin("ex1");
    const MipModel m = build_m1(ins, {Scenario{}});
    SUBCASE("well-formed file") {
        const ExternalSolution sol = parse_external_solution(
            "#status optimal\nx1 1\nx2 0\nx3 0\nx4 1\nt 11\n"
            "y1_s1 0\ny2_s1 1\ny3_s1 0\ny4_s1 1\nz1_s1 0\nz2_s1 0\nz3_s1 0\nz4_s1 1\n",
            m);
        CHECK(sol.status == "optimal");
        CHECK(sol.objective == 19);
    }
    SUBCASE("missing status header") {
        CHECK_THROWS_WITH_AS(parse_external_solution("x1 1\n", m), doctest::Contains("#status"),
                             ParseError);
    }
    SUBCASE("malformed pair names its line") {
        CHECK_THROWS_WITH_AS(parse_external_solution("#status optimal\nx1 one\n", m),
                             doctest::Contains("line 2"), ParseError);
    }
    SUBCASE("missing binary variable") {
        CHECK_THROWS_AS(parse_external_solution("#status optimal\nx1 1\n", m),
                        std::runtime_error);
    }
    SUBCASE("non-optimal status skips objective reconstruction") {
        const ExternalSolution sol = parse_external_solution("#status infeasible\n", m);
        CHECK(sol.status == "infeasible");
    }
}

TEST_CASE("external bridge runs a command template end to end") {
    const Instance ins = builtin("ex1");
    const MipModel m = build_m1(ins, {Scenario{}});
    const std::string prepared = std::string(RRR_GOLDEN_DIR) + "/ex1_m1_nominal.solution";
    const ExternalSolution sol = run_external(m, "cp " + prepared + " {solution} && test -s {model}");
    CHECK(sol.status == "optimal");
    CHECK(sol.objective == 19);
}

TEST_CASE("instance hashes differ across instances and stay stable") {
    CHECK(instance_hash(builtin("ex1")) == instance_hash(builtin("ex1")));
    CHECK(instance_hash(builtin("ex1")) != instance_hash(builtin("ex2")));
}
