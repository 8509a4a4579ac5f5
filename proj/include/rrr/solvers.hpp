#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrr/adversary.hpp"
#include "rrr/core.hpp"
#include "rrr/incremental.hpp"

namespace rrr {

struct SolveLimits {
    double time_limit_s = std::numeric_limits<double>::infinity();
    int max_iter = std::numeric_limits<int>::max();
    std::uint64_t enum_bound = 1000000;
};

struct IterationRecord {
    Cost lb = 0;
    Cost ub = 0;
    std::vector<int> master_x;  // selection proposed by the master this round
    std::string generated;      // human-readable id of the added scenario/cut
};

struct SolveLog {
    std::string method;
    std::vector<IterationRecord> iterations;
    std::string status;  // "optimal" | "time-limit"
    double wall_ms = 0;
    std::vector<Scenario> generated_scenarios;
    std::vector<CutCandidate> generated_candidates;
};

struct SolveResult {
    Cost value = 0;
    FirstStageSolution x;
    SolveLog log;
};

namespace detail {

// Exact DFS master: min over x of C x + max over pool items of eval(x, item).
// Prunes on partial first-stage cost plus a caller-supplied lower bound on the
// second stage; ties resolved toward the lexicographically smallest selection.
template <typename Item>
std::pair<Cost, FirstStageSolution> master_dfs(
    const Instance& ins, const std::vector<Item>& pool,
    const std::function<Cost(const FirstStageSolution&, const Item&)>& eval,
    Cost second_stage_lb, std::uint64_t enum_bound) {
    if (pool.empty()) throw std::invalid_argument("master pool must be nonempty");
    if (feasible_count(ins, enum_bound) >= enum_bound)
        throw std::runtime_error("enumeration bound exceeded");

    const int K = ins.num_parts();
    // cheapest possible remaining first-stage cost from part j on
    std::vector<Cost> tail_min(K + 1, 0);
    for (int j = K - 1; j >= 0; --j) {
        std::vector<Cost> costs;
        for (int i : ins.parts[j]) costs.push_back(ins.C[i]);
        std::sort(costs.begin(), costs.end());
        Cost s = 0;
        for (int t = 0; t < ins.p[j]; ++t) s += costs[t];
        tail_min[j] = tail_min[j + 1] + s;
    }

    bool have = false;
    Cost best_value = 0;
    std::vector<int> best_sel;
    std::vector<int> chosen;

    auto leaf = [&](const FirstStageSolution& x) {
        Cost second = 0;
        bool first = true;
        for (const Item& item : pool) {
            const Cost v = eval(x, item);
            if (first || v > second) second = v;
            first = false;
        }
        Cost c = 0;
        for (int i : x.selected) c += ins.C[i];
        const Cost total = c + second;
        if (!have || total < best_value || (total == best_value && x.selected < best_sel)) {
            have = true;
            best_value = total;
            best_sel = x.selected;
        }
    };

    std::function<void(int, Cost)> rec = [&](int j, Cost partial) {
        if (have && partial + tail_min[j] + second_stage_lb > best_value) return;
        if (j == K) {
            FirstStageSolution x;
            x.selected = chosen;
            std::sort(x.selected.begin(), x.selected.end());
            leaf(x);
            return;
        }
        for_each_subset(ins.parts[j], ins.p[j], [&](const std::vector<int>& sub) {
            Cost add = 0;
            for (int i : sub) add += ins.C[i];
            const std::size_t base = chosen.size();
            chosen.insert(chosen.end(), sub.begin(), sub.end());
            rec(j + 1, partial + add);
            chosen.resize(base);
        });
    };
    rec(0, 0);
    if (!have) throw std::runtime_error("no feasible selection");
    return {best_value, FirstStageSolution{best_sel}};
}

// Valid for any scenario pool: realized costs dominate nominal ones.
inline Cost nominal_floor(const Instance& ins) {
    Cost total = 0;
    for (int j = 0; j < ins.num_parts(); ++j) {
        std::vector<Cost> costs;
        for (int i : ins.parts[j]) costs.push_back(ins.c_lower[i]);
        std::sort(costs.begin(), costs.end());
        for (int t = 0; t < ins.p[j]; ++t) total += costs[t];
    }
    return total;
}

// Lower bound of one cut over every x: drop the gains, take the worse bracket.
inline Cost cut_floor(const Instance& ins, const CutCandidate& cand) {
    Cost total = (ins.total_quota() - ins.k) * cand.beta;
    for (int j = 0; j < ins.num_parts(); ++j) {
        total += static_cast<Cost>(ins.p[j]) * cand.alpha[j];
        for (int i : ins.parts[j]) {
            const Cost b0 = std::max<Cost>(cand.alpha[j] - ins.c_lower[i], 0);
            const Cost b1 = std::max<Cost>(cand.alpha[j] + cand.beta - ins.c_lower[i], 0);
            total -= std::max(b0, b1);
        }
    }
    return total;
}

}  // namespace detail

// Master over a scenario pool (empty pool = the nominal scenario).
inline std::pair<Cost, FirstStageSolution> master_exhaustive(
    const Instance& ins, std::vector<Scenario> pool, std::uint64_t enum_bound = 1000000) {
    if (pool.empty()) pool.push_back(Scenario{});
    std::vector<std::vector<Cost>> realized;
    realized.reserve(pool.size());
    for (const Scenario& s : pool) realized.push_back(s.realize(ins));
    std::function<Cost(const FirstStageSolution&, const std::vector<Cost>&)> eval =
        [&](const FirstStageSolution& x, const std::vector<Cost>& c) {
            return inc_solve(ins, x, c).value;
        };
    return detail::master_dfs<std::vector<Cost>>(ins, realized, eval,
                                                 detail::nominal_floor(ins), enum_bound);
}

// Master over a candidate-cut pool.
inline std::pair<Cost, FirstStageSolution> master_exhaustive(
    const Instance& ins, const std::vector<CutCandidate>& pool,
    std::uint64_t enum_bound = 1000000) {
    if (pool.empty()) throw std::invalid_argument("candidate pool must be nonempty");
    Cost floor = detail::cut_floor(ins, pool.front());
    for (const CutCandidate& c : pool) floor = std::max(floor, detail::cut_floor(ins, c));
    std::function<Cost(const FirstStageSolution&, const CutCandidate&)> eval =
        [&](const FirstStageSolution& x, const CutCandidate& c) { return cut_value(ins, x, c); };
    return detail::master_dfs<CutCandidate>(ins, pool, eval, floor, enum_bound);
}

// Full enumeration of X with the polynomial adversary (or the enumeration
// oracle under `use_adv_brute`) evaluating each candidate.
inline std::pair<Cost, FirstStageSolution> rec_brute(const Instance& ins,
                                                     std::uint64_t enum_bound = 1000000,
                                                     bool use_adv_brute = false) {
    if (feasible_count(ins, enum_bound) >= enum_bound)
        throw std::runtime_error("enumeration bound exceeded");
    const Cost floor = detail::nominal_floor(ins);

    const int K = ins.num_parts();
    std::vector<Cost> tail_min(K + 1, 0);
    for (int j = K - 1; j >= 0; --j) {
        std::vector<Cost> costs;
        for (int i : ins.parts[j]) costs.push_back(ins.C[i]);
        std::sort(costs.begin(), costs.end());
        Cost s = 0;
        for (int t = 0; t < ins.p[j]; ++t) s += costs[t];
        tail_min[j] = tail_min[j + 1] + s;
    }

    bool have = false;
    Cost best_value = 0;
    std::vector<int> best_sel;
    std::vector<int> chosen;
    std::function<void(int, Cost)> rec = [&](int j, Cost partial) {
        if (have && partial + tail_min[j] + floor > best_value) return;
        if (j == K) {
            FirstStageSolution x;
            x.selected = chosen;
            std::sort(x.selected.begin(), x.selected.end());
            const Cost adv =
                use_adv_brute ? adv_brute(ins, x, enum_bound).value : adv_solve(ins, x).value;
            const Cost total = partial + adv;
            if (!have || total < best_value ||
                (total == best_value && x.selected < best_sel)) {
                have = true;
                best_value = total;
                best_sel = x.selected;
            }
            return;
        }
        for_each_subset(ins.parts[j], ins.p[j], [&](const std::vector<int>& sub) {
            Cost add = 0;
            for (int i : sub) add += ins.C[i];
            const std::size_t base = chosen.size();
            chosen.insert(chosen.end(), sub.begin(), sub.end());
            rec(j + 1, partial + add);
            chosen.resize(base);
        });
    };
    rec(0, 0);
    if (!have) throw std::runtime_error("no feasible selection");
    return {best_value, FirstStageSolution{best_sel}};
}

namespace detail {

inline std::string scenario_id(const Scenario& s) {
    std::string out = "scenario{";
    for (std::size_t t = 0; t < s.attacked.size(); ++t)
        out += (t ? "," : "") + std::to_string(s.attacked[t] + 1);
    return out + "}";
}

inline std::string candidate_id(const CutCandidate& c) {
    std::string out = "cut{b=" + std::to_string(c.beta) + ";a=";
    for (std::size_t t = 0; t < c.alpha.size(); ++t)
        out += (t ? "," : "") + std::to_string(c.alpha[t]);
    return out + "}";
}

// Shared scenario/candidate generation loop. Alternates the exact restricted
// master (lower bound) with the adversary at the master's solution (upper
// bound); the adversary's certificate joins the pool. Equality of the integer
// bounds is the stopping rule.
template <typename Item>
SolveResult generate_and_cut(const Instance& ins, const SolveLimits& limits,
                             const std::string& method, std::vector<Item> pool,
                             const std::function<std::pair<Cost, FirstStageSolution>(
                                 const std::vector<Item>&)>& master,
                             const std::function<Item(const AdvResult&)>& extract,
                             const std::function<std::string(const Item&)>& id,
                             std::vector<Item>* generated_sink) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    SolveResult res;
    res.log.method = method;
    Cost ub = 0;
    bool have_ub = false;
    int iter = 0;
    while (true) {
        ++iter;
        const auto [lb, xhat] = master(pool);
        const AdvResult adv = adv_solve(ins, xhat);
        const Cost cand_ub = first_stage_cost(ins, xhat) + adv.value;
        if (!have_ub || cand_ub < ub) {
            have_ub = true;
            ub = cand_ub;
            res.x = xhat;
        }

        IterationRecord it;
        it.lb = lb;
        it.ub = ub;
        it.master_x = xhat.selected;
        if (lb > ub) throw std::logic_error("master bound exceeded incumbent");
        if (lb == ub) {
            res.log.iterations.push_back(it);
            res.log.status = "optimal";
            break;
        }
        if (iter >= limits.max_iter || elapsed_s() > limits.time_limit_s) {
            res.log.iterations.push_back(it);
            res.log.status = "time-limit";
            break;
        }
        Item gen = extract(adv);
        if (std::find(pool.begin(), pool.end(), gen) != pool.end())
            throw std::logic_error("generated pool item is not new despite lb < ub");
        it.generated = id(gen);
        res.log.iterations.push_back(it);
        if (generated_sink) generated_sink->push_back(gen);
        pool.push_back(std::move(gen));
    }
    res.value = ub;
    res.log.wall_ms = elapsed_s() * 1000.0;
    return res;
}

}  // namespace detail

// Scenario generation (M1): pool of attack scenarios, master evaluates the
// incremental problem per scenario. Generated scenarios are padded to size
// min(gamma, n): a superset attack stays within the budget and can only raise
// recovery costs, so it certifies the same adversarial value while cutting
// more of X (worst-case scenarios can be assumed to spend the whole budget).
inline SolveResult solve_m1(const Instance& ins, const SolveLimits& limits = {}) {
    std::vector<Scenario> pool{Scenario{}};
    std::function<std::pair<Cost, FirstStageSolution>(const std::vector<Scenario>&)> master =
        [&](const std::vector<Scenario>& p) {
            return master_exhaustive(ins, p, limits.enum_bound);
        };
    std::function<Scenario(const AdvResult&)> extract = [&ins](const AdvResult& a) {
        Scenario s = a.scenario;
        const int want = std::min(ins.gamma, ins.n);
        if (static_cast<int>(s.attacked.size()) < want) {
            std::vector<char> in(ins.n, 0);
            for (int i : s.attacked) in[i] = 1;
            std::vector<int> rest;
            for (int i = 0; i < ins.n; ++i)
                if (!in[i]) rest.push_back(i);
            std::sort(rest.begin(), rest.end(), [&](int a_, int b_) {
                return ins.d[a_] != ins.d[b_] ? ins.d[a_] > ins.d[b_] : a_ < b_;
            });
            for (int i : rest) {
                if (static_cast<int>(s.attacked.size()) >= want) break;
                s.attacked.push_back(i);
            }
            std::sort(s.attacked.begin(), s.attacked.end());
        }
        return s;
    };
    std::function<std::string(const Scenario&)> id = detail::scenario_id;
    SolveResult res;
    std::vector<Scenario> generated;
    res = detail::generate_and_cut<Scenario>(ins, limits, "m1", std::move(pool), master, extract,
                                             id, &generated);
    res.log.generated_scenarios = std::move(generated);
    return res;
}

// Candidate-cut generation (M2): pool of (beta, alpha) duals, master evaluates
// cut_value per candidate.
inline SolveResult solve_m2(const Instance& ins, const SolveLimits& limits = {}) {
    CutCandidate initial;
    initial.beta = 0;
    for (int j = 0; j < ins.num_parts(); ++j) {
        std::vector<Cost> costs;
        for (int i : ins.parts[j]) costs.push_back(ins.c_lower[i]);
        std::sort(costs.begin(), costs.end());
        initial.alpha.push_back(ins.p[j] > 0 ? costs[ins.p[j] - 1] : 0);
    }
    std::vector<CutCandidate> pool{initial};
    std::function<std::pair<Cost, FirstStageSolution>(const std::vector<CutCandidate>&)> master =
        [&](const std::vector<CutCandidate>& p) {
            return master_exhaustive(ins, p, limits.enum_bound);
        };
    std::function<CutCandidate(const AdvResult&)> extract = [](const AdvResult& a) {
        return a.candidate();
    };
    std::function<std::string(const CutCandidate&)> id = detail::candidate_id;
    SolveResult res;
    std::vector<CutCandidate> generated;
    res = detail::generate_and_cut<CutCandidate>(ins, limits, "m2", std::move(pool), master,
                                                 extract, id, &generated);
    res.log.generated_candidates = std::move(generated);
    return res;
}

}  // namespace rrr
