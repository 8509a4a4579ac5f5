#pragma once

#include <vector>

#include "rrr/core.hpp"
#include "rrr/generators.hpp"
#include "rrr/prng.hpp"

namespace testutil {

// Random instance within the oracle-suite shape (n <= 10, K <= 4).
inline rrr::Instance sample_small(rrr::SplitMix64& rng, int max_gamma = 3, int max_k = 2,
                                  rrr::Cost cost_max = 20) {
    rrr::GeneratorSpec spec;
    spec.family = rrr::Family::custom;
    spec.K = static_cast<int>(rng.uniform_int(1, 4));
    spec.n_j = static_cast<int>(rng.uniform_int(2, spec.K <= 3 ? 3 : 2));
    spec.gamma = static_cast<int>(rng.uniform_int(0, max_gamma));
    spec.k = static_cast<int>(rng.uniform_int(0, max_k));
    spec.cost_lo = 0;
    spec.cost_hi = cost_max;
    spec.seed = rng.next();
    return rrr::gen_random(spec);
}

// Random pair-case instance (two items per part, quota 1, gamma = k = 1).
inline rrr::Instance sample_pair(rrr::SplitMix64& rng, int max_K = 8, rrr::Cost cost_max = 20) {
    rrr::GeneratorSpec spec;
    spec.family = rrr::Family::custom;
    spec.K = static_cast<int>(rng.uniform_int(1, max_K));
    spec.n_j = 2;
    spec.gamma = 1;
    spec.k = 1;
    spec.cost_lo = 0;
    spec.cost_hi = cost_max;
    spec.seed = rng.next();
    return rrr::gen_random(spec);
}

// Uniform quota-feasible selection.
inline rrr::FirstStageSolution random_feasible(const rrr::Instance& ins, rrr::SplitMix64& rng) {
    rrr::FirstStageSolution x;
    for (int j = 0; j < ins.num_parts(); ++j) {
        std::vector<int> items = ins.parts[j];
        for (int t = 0; t < ins.p[j]; ++t) {
            const int pick = t + static_cast<int>(rng.uniform_int(
                                     0, static_cast<int>(items.size()) - 1 - t));
            std::swap(items[t], items[pick]);
            x.selected.push_back(items[t]);
        }
    }
    std::sort(x.selected.begin(), x.selected.end());
    return x;
}

inline rrr::Scenario random_scenario(const rrr::Instance& ins, rrr::SplitMix64& rng) {
    rrr::Scenario s;
    const int size = static_cast<int>(rng.uniform_int(0, ins.gamma));
    std::vector<int> items(ins.n);
    for (int i = 0; i < ins.n; ++i) items[i] = i;
    for (int t = 0; t < size; ++t) {
        const int pick =
            t + static_cast<int>(rng.uniform_int(0, static_cast<int>(items.size()) - 1 - t));
        std::swap(items[t], items[pick]);
        s.attacked.push_back(items[t]);
    }
    std::sort(s.attacked.begin(), s.attacked.end());
    return s;
}

inline bool subset_sums_to(const std::vector<rrr::Cost>& a, rrr::Cost target2x) {
    // does some subset have doubled sum == target2x (target may be half-integral)
    if (target2x % 2 != 0) return false;
    const rrr::Cost target = target2x / 2;
    if (target < 0) return false;
    std::vector<char> reach(static_cast<std::size_t>(target) + 1, 0);
    reach[0] = 1;
    for (rrr::Cost v : a)
        for (rrr::Cost s = target; s >= v; --s)
            if (reach[s - v]) reach[s] = 1;
    return reach[target];
}

inline bool same_instance(const rrr::Instance& a, const rrr::Instance& b) {
    return a.n == b.n && a.parts == b.parts && a.p == b.p && a.C == b.C &&
           a.c_lower == b.c_lower && a.d == b.d && a.gamma == b.gamma && a.k == b.k;
}

}  // namespace testutil
