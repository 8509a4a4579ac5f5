#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rrr/core.hpp"
#include "rrr/incremental.hpp"
#include "rrr/rational.hpp"

namespace rrr {

// Dual candidate (beta, alpha_1..alpha_K): a valid cut for the second-stage
// value at every x, tight at the x it was extracted from.
struct CutCandidate {
    Cost beta = 0;
    std::vector<Cost> alpha;

    friend bool operator==(const CutCandidate& a, const CutCandidate& b) {
        return a.beta == b.beta && a.alpha == b.alpha;
    }
    friend bool operator<(const CutCandidate& a, const CutCandidate& b) {
        return a.beta != b.beta ? a.beta < b.beta : a.alpha < b.alpha;
    }
};

struct AdvResult {
    Cost value = 0;
    bool has_candidate = false;  // false for the enumeration oracle
    Cost beta_star = 0;
    std::vector<Cost> alpha_star;
    std::vector<int> budget_alloc;
    Scenario scenario;

    CutCandidate candidate() const { return CutCandidate{beta_star, alpha_star}; }
};

// Candidate values for the kept-count dual beta: all nonnegative differences
// of realized item costs, plus 0.
inline std::vector<Cost> beta_candidates(const Instance& ins) {
    std::vector<Cost> realized;
    realized.reserve(2 * ins.n);
    for (int i = 0; i < ins.n; ++i) {
        realized.push_back(ins.c_lower[i]);
        realized.push_back(ins.c_upper(i));
    }
    std::sort(realized.begin(), realized.end());
    realized.erase(std::unique(realized.begin(), realized.end()), realized.end());
    std::vector<Cost> out{0};
    for (Cost a : realized)
        for (Cost b : realized)
            if (a - b >= 0) out.push_back(a - b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Kink points of the per-part dual objective in alpha_j, for fixed beta.
inline std::vector<Cost> alpha_candidates(const Instance& ins, int j, Cost beta) {
    std::vector<Cost> out;
    out.reserve(4 * ins.parts[j].size());
    for (int i : ins.parts[j]) {
        out.push_back(ins.c_lower[i]);
        out.push_back(ins.c_upper(i));
        out.push_back(ins.c_lower[i] - beta);
        out.push_back(ins.c_upper(i) - beta);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

// Per-item dual terms for fixed (beta, alpha): with u_i = alpha + x_i beta - c_i,
// the unattacked bracket is [u_i]+ and attacking item i recovers
// gain_i = [u_i]+ - [u_i - d_i]+ >= 0.
template <typename T, typename XFn>
struct PartEval {
    T base;                                 // p_j alpha - sum of unattacked brackets
    std::vector<std::pair<T, int>> gains;   // positive gains, (desc, index asc)
    std::vector<T> prefix;                  // prefix[t] = sum of t largest gains

    PartEval(const Instance& ins, int j, Cost beta, Cost alpha, const XFn& x)
        : base(T(ins.p[j]) * T(alpha)) {
        for (int i : ins.parts[j]) {
            const T u = T(alpha) + x(i) * T(beta) - T(ins.c_lower[i]);
            const T b0 = u > T(0) ? u : T(0);
            const T shifted = u - T(ins.d[i]);
            const T b1 = shifted > T(0) ? shifted : T(0);
            base = base - b0;
            if (b0 - b1 > T(0)) gains.emplace_back(b0 - b1, i);
        }
        std::sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? b.first < a.first : a.second < b.second;
        });
        prefix.assign(gains.size() + 1, T(0));
        for (std::size_t t = 0; t < gains.size(); ++t)
            prefix[t + 1] = prefix[t] + gains[t].first;
    }

    T value(int budget) const {
        const int take = std::min<int>(budget, static_cast<int>(gains.size()));
        return base + prefix[take];
    }
    std::vector<int> attacked(int budget) const {
        const int take = std::min<int>(budget, static_cast<int>(gains.size()));
        std::vector<int> out;
        out.reserve(take);
        for (int t = 0; t < take; ++t) out.push_back(gains[t].second);
        return out;
    }
};

template <typename T, typename XFn>
struct AdvCore {
    T value;
    Cost beta_star;
    std::vector<Cost> alpha_star;
    std::vector<int> budget_alloc;

    // max over beta of (P-k) beta + F(K, Gamma), where F allocates the attack
    // budget across parts and each part maximizes over its alpha kinks.
    AdvCore(const Instance& ins, const XFn& x) {
        const int K = ins.num_parts();
        const int G = ins.gamma;
        const Cost pk = ins.total_quota() - ins.k;
        const std::vector<Cost> betas = beta_candidates(ins);

        bool have = false;
        for (Cost beta : betas) {
            // part_val[j][g], part_arg[j][g]: best alpha per part and budget
            std::vector<std::vector<T>> part_val(K, std::vector<T>(G + 1));
            std::vector<std::vector<Cost>> part_arg(K, std::vector<Cost>(G + 1));
            for (int j = 0; j < K; ++j) {
                bool first = true;
                for (Cost alpha : alpha_candidates(ins, j, beta)) {
                    const PartEval<T, XFn> ev(ins, j, beta, alpha, x);
                    for (int g = 0; g <= G; ++g) {
                        const T v = ev.value(g);
                        if (first || v > part_val[j][g]) {
                            part_val[j][g] = v;
                            part_arg[j][g] = alpha;
                        }
                    }
                    first = false;
                }
            }
            // F[j][gamma']: best total over first j parts spending gamma'
            std::vector<std::vector<T>> F(K + 1, std::vector<T>(G + 1, T(0)));
            std::vector<std::vector<int>> choice(K + 1, std::vector<int>(G + 1, 0));
            for (int j = 1; j <= K; ++j) {
                for (int g = 0; g <= G; ++g) {
                    bool first = true;
                    for (int a = 0; a <= g; ++a) {
                        const T v = F[j - 1][g - a] + part_val[j - 1][a];
                        if (first || v > F[j][g]) {
                            F[j][g] = v;
                            choice[j][g] = a;
                            first = false;
                        }
                    }
                }
            }
            const T total = T(pk) * T(beta) + F[K][G];
            if (!have || total > value) {
                have = true;
                value = total;
                beta_star = beta;
                alpha_star.assign(K, 0);
                budget_alloc.assign(K, 0);
                int g = G;
                for (int j = K; j >= 1; --j) {
                    budget_alloc[j - 1] = choice[j][g];
                    alpha_star[j - 1] = part_arg[j - 1][choice[j][g]];
                    g -= choice[j][g];
                }
            }
        }
        if (!have) throw std::logic_error("empty beta candidate set");
    }
};

}  // namespace detail

// Per-part adversarial subproblem value for fixed (beta, alpha, budget).
// Excludes the global (P-k) beta term, which the caller adds exactly once.
inline std::pair<Cost, std::vector<int>> adv_part(const Instance& ins,
                                                  const FirstStageSolution& x, int j, Cost beta,
                                                  int gamma_j, Cost alpha) {
    const std::vector<char> m = x.mask(ins.n);
    auto xf = [&](int i) { return Cost(m[i]); };
    const detail::PartEval<Cost, decltype(xf)> ev(ins, j, beta, alpha, xf);
    return {ev.value(gamma_j), ev.attacked(gamma_j)};
}

inline std::pair<Rat, std::vector<int>> adv_part(const Instance& ins,
                                                 const FractionalAssignment& x, int j, Cost beta,
                                                 int gamma_j, Cost alpha) {
    auto xf = [&](int i) { return x.values[i]; };
    const detail::PartEval<Rat, decltype(xf)> ev(ins, j, beta, alpha, xf);
    return {ev.value(gamma_j), ev.attacked(gamma_j)};
}

// Exact adversarial value with worst-case scenario extraction. The returned
// scenario certifies the value: Inc(x, scenario) equals it.
inline AdvResult adv_solve(const Instance& ins, const FirstStageSolution& x) {
    detail::require_feasible(ins, x);
    const std::vector<char> m = x.mask(ins.n);
    auto xf = [&](int i) { return Cost(m[i]); };
    const detail::AdvCore<Cost, decltype(xf)> core(ins, xf);

    AdvResult res;
    res.value = core.value;
    res.has_candidate = true;
    res.beta_star = core.beta_star;
    res.alpha_star = core.alpha_star;
    res.budget_alloc = core.budget_alloc;
    for (int j = 0; j < ins.num_parts(); ++j) {
        const detail::PartEval<Cost, decltype(xf)> ev(ins, j, core.beta_star,
                                                      core.alpha_star[j], xf);
        for (int i : ev.attacked(core.budget_alloc[j])) res.scenario.attacked.push_back(i);
    }
    std::sort(res.scenario.attacked.begin(), res.scenario.attacked.end());
    return res;
}

// Relaxation evaluation at a fractional point: same candidate sets and
// formulas over exact rationals. This reports the candidate-family value, not
// a certified adversarial optimum (kinks shift under fractional x).
inline Rat adv_relaxed(const Instance& ins, const FractionalAssignment& x) {
    if (!is_feasible(ins, x))
        throw std::invalid_argument("fractional assignment is not quota-feasible");
    auto xf = [&](int i) { return x.values[i]; };
    const detail::AdvCore<Rat, decltype(xf)> core(ins, xf);
    return core.value;
}

// Enumeration oracle: max over all attack sets of size <= gamma of Inc(x, c).
inline AdvResult adv_brute(const Instance& ins, const FirstStageSolution& x,
                           std::uint64_t enum_bound = 1000000) {
    detail::require_feasible(ins, x);
    std::uint64_t count = 1, binom = 1;
    for (int t = 1; t <= std::min(ins.gamma, ins.n); ++t) {
        binom = binom * static_cast<std::uint64_t>(ins.n - t + 1) / static_cast<std::uint64_t>(t);
        count += binom;
        if (count >= enum_bound) throw std::runtime_error("enumeration bound exceeded");
    }

    std::vector<int> all(ins.n);
    for (int i = 0; i < ins.n; ++i) all[i] = i;
    AdvResult best;
    bool have = false;
    for (int size = 0; size <= std::min(ins.gamma, ins.n); ++size) {
        for_each_subset(all, size, [&](const std::vector<int>& attacked) {
            Scenario s{attacked};
            const Cost v = inc_solve(ins, x, s).value;
            if (!have || v > best.value) {
                have = true;
                best.value = v;
                best.scenario = std::move(s);
            }
        });
    }
    return best;
}

// k = 0 fast path: no recovery, so the adversary attacks the selected items
// with the largest deviations.
inline Cost adv_k0(const Instance& ins, const FirstStageSolution& x) {
    if (ins.k != 0) throw std::invalid_argument("adv_k0 requires k = 0");
    detail::require_feasible(ins, x);
    Cost value = 0;
    std::vector<Cost> devs;
    for (int i : x.selected) {
        value += ins.c_lower[i];
        devs.push_back(ins.d[i]);
    }
    std::sort(devs.begin(), devs.end(), std::greater<Cost>());
    const int take = std::min<int>(ins.gamma, static_cast<int>(devs.size()));
    for (int t = 0; t < take; ++t) value += devs[t];
    return value;
}

namespace detail {

template <typename T, typename XFn>
T cut_value_impl(const Instance& ins, const CutCandidate& cand, const XFn& x) {
    if (static_cast<int>(cand.alpha.size()) != ins.num_parts())
        throw std::invalid_argument("candidate alpha length must equal K");
    T total = T(Cost(ins.total_quota() - ins.k)) * T(cand.beta);
    std::vector<T> gains;
    for (int j = 0; j < ins.num_parts(); ++j) {
        const PartEval<T, XFn> ev(ins, j, cand.beta, cand.alpha[j], x);
        total = total + ev.base;
        for (const auto& g : ev.gains) gains.push_back(g.first);
    }
    std::sort(gains.begin(), gains.end(), [](const T& a, const T& b) { return b < a; });
    const int take = std::min<int>(ins.gamma, static_cast<int>(gains.size()));
    for (int t = 0; t < take; ++t) total = total + gains[t];
    return total;
}

}  // namespace detail

// Value of a candidate cut at x: the candidate's dual objective with the
// attack budget spent on the globally largest gains. Lower-bounds the true
// adversarial value everywhere and matches it at the extracting x.
inline Cost cut_value(const Instance& ins, const FirstStageSolution& x,
                      const CutCandidate& cand) {
    const std::vector<char> m = x.mask(ins.n);
    auto xf = [&](int i) { return Cost(m[i]); };
    return detail::cut_value_impl<Cost>(ins, cand, xf);
}

inline Rat cut_value(const Instance& ins, const FractionalAssignment& x,
                     const CutCandidate& cand) {
    auto xf = [&](int i) { return x.values[i]; };
    return detail::cut_value_impl<Rat>(ins, cand, xf);
}

// Every (beta, alpha_1..alpha_K) combination over the candidate sets. The pool
// always contains a maximizer of the adversarial dual, so the cut master over
// the full pool solves the problem exactly. Size |B| * prod |A_j(beta)|.
inline std::vector<CutCandidate> full_candidate_pool(const Instance& ins,
                                                     std::uint64_t size_bound = 1000000) {
    std::vector<CutCandidate> pool;
    for (Cost beta : beta_candidates(ins)) {
        std::vector<std::vector<Cost>> per_part;
        std::uint64_t combos = 1;
        for (int j = 0; j < ins.num_parts(); ++j) {
            per_part.push_back(alpha_candidates(ins, j, beta));
            combos *= std::max<std::uint64_t>(per_part.back().size(), 1);
            if (pool.size() + combos > size_bound)
                throw std::runtime_error("candidate pool size bound exceeded");
        }
        std::vector<std::size_t> idx(per_part.size(), 0);
        while (true) {
            CutCandidate c;
            c.beta = beta;
            for (std::size_t j = 0; j < per_part.size(); ++j)
                c.alpha.push_back(per_part[j].empty() ? 0 : per_part[j][idx[j]]);
            pool.push_back(std::move(c));
            std::size_t j = 0;
            while (j < idx.size() && ++idx[j] == std::max<std::size_t>(per_part[j].size(), 1))
                idx[j++] = 0;
            if (j == idx.size()) break;
        }
    }
    return pool;
}

// All attack sets of size at most gamma (the nominal scenario included).
inline std::vector<Scenario> full_scenario_pool(const Instance& ins,
                                                std::uint64_t size_bound = 1000000) {
    std::uint64_t count = 1, binom = 1;
    for (int t = 1; t <= std::min(ins.gamma, ins.n); ++t) {
        binom = binom * static_cast<std::uint64_t>(ins.n - t + 1) / static_cast<std::uint64_t>(t);
        count += binom;
        if (count > size_bound) throw std::runtime_error("scenario pool size bound exceeded");
    }
    std::vector<Scenario> pool;
    std::vector<int> all(ins.n);
    for (int i = 0; i < ins.n; ++i) all[i] = i;
    for (int size = 0; size <= std::min(ins.gamma, ins.n); ++size)
        for_each_subset(all, size,
                        [&](const std::vector<int>& sub) { pool.push_back(Scenario{sub}); });
    return pool;
}

}  // namespace rrr
