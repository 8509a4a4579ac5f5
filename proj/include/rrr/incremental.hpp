#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rrr/core.hpp"

namespace rrr {

struct IncResult {
    Cost value = 0;
    RecoverySolution recovery;
};

namespace detail {

constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

inline void require_costs(const Instance& ins, const std::vector<Cost>& c) {
    if (static_cast<int>(c.size()) != ins.n)
        throw std::invalid_argument("cost vector has wrong length");
}

inline void require_feasible(const Instance& ins, const FirstStageSolution& x) {
    if (!is_feasible(ins, x)) throw std::invalid_argument("infeasible first-stage selection");
}

// Items of `pool` ordered by (cost, index); prefix[m] = cost of the m cheapest.
struct CheapestPrefix {
    std::vector<int> order;
    std::vector<Cost> prefix;

    CheapestPrefix(const std::vector<int>& pool, const std::vector<Cost>& c) {
        order = pool;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return c[a] != c[b] ? c[a] < c[b] : a < b; });
        prefix.assign(order.size() + 1, 0);
        for (std::size_t t = 0; t < order.size(); ++t) prefix[t + 1] = prefix[t] + c[order[t]];
    }
};

}  // namespace detail

// Exact incremental solver: cheapest quota-feasible y keeping at least P-k of
// the x-selected items. Per part, keeping exactly m items costs
//   f_j(m) = (m cheapest selected) + (p_j - m cheapest unselected),
// and a knapsack-style DP over parts enforces sum m_j >= P-k (kept counts
// beyond P-k collapse into one saturated state).
inline IncResult inc_solve(const Instance& ins, const FirstStageSolution& x,
                           const std::vector<Cost>& costs) {
    detail::require_feasible(ins, x);
    detail::require_costs(ins, costs);

    const int K = ins.num_parts();
    const int P = ins.total_quota();
    const int cap = std::max(0, P - ins.k);
    const std::vector<char> in_x = x.mask(ins.n);

    struct PartTable {
        int m_lo, m_hi;
        std::vector<Cost> f;  // f[m - m_lo]
        detail::CheapestPrefix sel, non;
        PartTable(detail::CheapestPrefix s, detail::CheapestPrefix ns)
            : m_lo(0), m_hi(0), sel(std::move(s)), non(std::move(ns)) {}
    };
    std::vector<PartTable> tables;
    tables.reserve(K);
    for (int j = 0; j < K; ++j) {
        std::vector<int> sel, non;
        for (int i : ins.parts[j]) (in_x[i] ? sel : non).push_back(i);
        PartTable tab(detail::CheapestPrefix(sel, costs), detail::CheapestPrefix(non, costs));
        const int pj = ins.p[j];
        tab.m_lo = std::max(0, pj - static_cast<int>(non.size()));
        tab.m_hi = pj;
        for (int m = tab.m_lo; m <= tab.m_hi; ++m)
            tab.f.push_back(tab.sel.prefix[m] + tab.non.prefix[pj - m]);
        tables.push_back(std::move(tab));
    }

    // dp[j][t] = min cost over the first j parts with min(total kept, cap) = t
    std::vector<std::vector<Cost>> dp(K + 1, std::vector<Cost>(cap + 1, detail::kInf));
    std::vector<std::vector<int>> from_t(K + 1, std::vector<int>(cap + 1, -1));
    std::vector<std::vector<int>> took_m(K + 1, std::vector<int>(cap + 1, -1));
    dp[0][0] = 0;
    for (int j = 0; j < K; ++j) {
        const auto& tab = tables[j];
        for (int t = 0; t <= cap; ++t) {
            if (dp[j][t] == detail::kInf) continue;
            for (int m = tab.m_lo; m <= tab.m_hi; ++m) {
                const int nt = std::min(cap, t + m);
                const Cost v = dp[j][t] + tab.f[m - tab.m_lo];
                if (v < dp[j + 1][nt]) {
                    dp[j + 1][nt] = v;
                    from_t[j + 1][nt] = t;
                    took_m[j + 1][nt] = m;
                }
            }
        }
    }
    if (dp[K][cap] == detail::kInf)
        throw std::invalid_argument("recovery infeasible: k smaller than structurally required");

    IncResult res;
    res.value = dp[K][cap];
    int t = cap;
    std::vector<int> kept_m(K);
    for (int j = K; j >= 1; --j) {
        kept_m[j - 1] = took_m[j][t];
        t = from_t[j][t];
    }
    for (int j = 0; j < K; ++j) {
        const auto& tab = tables[j];
        const int m = kept_m[j];
        for (int u = 0; u < m; ++u) res.recovery.selected.push_back(tab.sel.order[u]);
        for (int u = 0; u < ins.p[j] - m; ++u) res.recovery.selected.push_back(tab.non.order[u]);
    }
    std::sort(res.recovery.selected.begin(), res.recovery.selected.end());
    return res;
}

inline IncResult inc_solve(const Instance& ins, const FirstStageSolution& x,
                           const Scenario& scen) {
    return inc_solve(ins, x, scen.realize(ins));
}

// Enumeration oracle over R(x); independent of the DP above.
inline IncResult inc_brute(const Instance& ins, const FirstStageSolution& x,
                           const std::vector<Cost>& costs,
                           std::uint64_t enum_bound = 1000000) {
    detail::require_feasible(ins, x);
    detail::require_costs(ins, costs);
    if (feasible_count(ins, enum_bound) >= enum_bound)
        throw std::runtime_error("enumeration bound exceeded");

    bool found = false;
    IncResult best;
    for_each_feasible(ins, [&](const FirstStageSolution& y) {
        if (hamming(x, y.selected, ins.n) > 2 * ins.k) return;
        Cost v = 0;
        for (int i : y.selected) v += costs[i];
        if (!found || v < best.value ||
            (v == best.value && y.selected < best.recovery.selected)) {
            found = true;
            best.value = v;
            best.recovery.selected = y.selected;
        }
    });
    if (!found) throw std::runtime_error("no feasible recovery");
    return best;
}

}  // namespace rrr
