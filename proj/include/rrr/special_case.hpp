#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rrr/adversary.hpp"
#include "rrr/core.hpp"
#include "rrr/incremental.hpp"

namespace rrr {

// View over instances with |T_j| = 2, p_j = 1 for all parts and gamma = k = 1.
// Slot s in {0,1} addresses the two items of a part.
class PairInstance {
public:
    explicit PairInstance(const Instance& ins) : ins_(&ins) {
        if (ins.gamma != 1 || ins.k != 1)
            throw std::invalid_argument("pair special case requires gamma = k = 1");
        for (int j = 0; j < ins.num_parts(); ++j) {
            if (ins.parts[j].size() != 2 || ins.p[j] != 1)
                throw std::invalid_argument(
                    "pair special case requires two items and quota 1 per part");
        }
    }

    const Instance& instance() const { return *ins_; }
    int num_parts() const { return ins_->num_parts(); }
    int item(int j, int slot) const { return ins_->parts[j][slot]; }

    // slot chosen by x in part j
    int chosen_slot(int j, const std::vector<char>& mask) const {
        return mask[item(j, 0)] ? 0 : 1;
    }

private:
    const Instance* ins_;
};

// Gains of the adversary's two canonical attacks against a fixed x:
// g1 raises the unchosen item of the best-recovery part j_star, g2 raises the
// chosen item of i_star. b_star is the runner-up recovery part (-1 when K=1).
struct StrategyAnalysis {
    int j_star = -1;
    int b_star = -1;
    int i_star = -1;
    Cost g1 = 0;
    Cost g2 = 0;
};

namespace detail {

// Helpers over (part, slot) choices; `drop` is the nominal saving of
// exchanging the chosen item, `term` the strategy-II gain given [A]+.
struct PairCosts {
    const PairInstance& pv;
    explicit PairCosts(const PairInstance& p) : pv(p) {}

    Cost drop(int j, int s) const {
        const Instance& ins = pv.instance();
        return ins.c_lower[pv.item(j, s)] - ins.c_lower[pv.item(j, 1 - s)];
    }
    Cost term(int j, int s, Cost a_plus) const {
        const Instance& ins = pv.instance();
        const int sel = pv.item(j, s), other = pv.item(j, 1 - s);
        return ins.d[sel] - std::max<Cost>(ins.c_upper(sel) - ins.c_lower[other] - a_plus, 0);
    }
    Cost blocked(int j, int s) const {  // [c_sel - cbar_unsel]+, strategy I's residue at j
        const Instance& ins = pv.instance();
        return std::max<Cost>(ins.c_lower[pv.item(j, s)] - ins.c_upper(pv.item(j, 1 - s)), 0);
    }
    Cost fill(int j, int s) const {
        const Instance& ins = pv.instance();
        const int sel = pv.item(j, s);
        return ins.C[sel] + ins.c_lower[sel];
    }
};

}  // namespace detail

inline StrategyAnalysis analyze(const PairInstance& pv, const FirstStageSolution& x) {
    const Instance& ins = pv.instance();
    detail::require_feasible(ins, x);
    const std::vector<char> mask = x.mask(ins.n);
    const detail::PairCosts pc(pv);
    const int K = pv.num_parts();
    if (K == 0) throw std::invalid_argument("instance has no parts");

    std::vector<int> slot(K);
    for (int j = 0; j < K; ++j) slot[j] = pv.chosen_slot(j, mask);

    StrategyAnalysis an;
    for (int j = 0; j < K; ++j)
        if (an.j_star < 0 || pc.drop(j, slot[j]) > pc.drop(an.j_star, slot[an.j_star]))
            an.j_star = j;
    const Cost a_plus = std::max<Cost>(pc.drop(an.j_star, slot[an.j_star]), 0);

    for (int j = 0; j < K; ++j) {
        if (j == an.j_star) continue;
        if (an.b_star < 0 || pc.drop(j, slot[j]) > pc.drop(an.b_star, slot[an.b_star]))
            an.b_star = j;
    }
    const Cost runner_plus =
        an.b_star < 0 ? 0 : std::max<Cost>(pc.drop(an.b_star, slot[an.b_star]), 0);
    an.g1 = a_plus - std::max(pc.blocked(an.j_star, slot[an.j_star]), runner_plus);

    for (int j = 0; j < K; ++j)
        if (an.i_star < 0 || pc.term(j, slot[j], a_plus) > pc.term(an.i_star, slot[an.i_star], a_plus))
            an.i_star = j;
    an.g2 = pc.term(an.i_star, slot[an.i_star], a_plus);
    return an;
}

// Closed-form adversarial value for the pair case: nominal recovery value plus
// the better of the two canonical attack gains.
inline Cost adv_closed_form(const PairInstance& pv, const FirstStageSolution& x) {
    const Instance& ins = pv.instance();
    const std::vector<char> mask = x.mask(ins.n);
    const detail::PairCosts pc(pv);
    Cost nominal = 0;
    Cost best_drop = 0;
    for (int j = 0; j < pv.num_parts(); ++j) {
        const int s = pv.chosen_slot(j, mask);
        nominal += ins.c_lower[pv.item(j, s)];
        best_drop = std::max(best_drop, pc.drop(j, s));
    }
    const StrategyAnalysis an = analyze(pv, x);
    return nominal - best_drop + std::max(an.g1, an.g2);
}

inline Cost adv_closed_form(const Instance& ins, const FirstStageSolution& x) {
    return adv_closed_form(PairInstance(ins), x);
}

namespace detail {

struct SpecialBest {
    bool have = false;
    Cost value = 0;
    std::vector<int> selected;

    void offer(Cost v, std::vector<int> sel) {
        std::sort(sel.begin(), sel.end());
        if (!have || v < value || (v == value && sel < selected)) {
            have = true;
            value = v;
            selected = std::move(sel);
        }
    }
};

}  // namespace detail

// Exact solver for the pair special case. Enumerates the adversary's two
// canonical strategies: for each guessed argmax pair the per-part conditions
// pin or filter the remaining choices, and free parts are filled with the
// cheapest first-plus-nominal cost. In the strategy-II family the membership
// condition g1 <= g2 depends on the runner-up part of the final solution, so
// after the cheapest fill one part may need to be swapped to the choice with
// the larger nominal saving; the cheapest such swap is taken. Every candidate
// is evaluated through the closed-form adversary, and the best one is exact.
inline std::pair<Cost, FirstStageSolution> solve_special(const PairInstance& pv) {
    const Instance& ins = pv.instance();
    const detail::PairCosts pc(pv);
    const int K = pv.num_parts();

    if (K == 0) return {0, FirstStageSolution{}};
    if (K == 1) {
        detail::SpecialBest best;
        for (int s = 0; s < 2; ++s) {
            FirstStageSolution x{{pv.item(0, s)}};
            best.offer(ins.C[pv.item(0, s)] + adv_brute(ins, x).value, x.selected);
        }
        return {best.value, FirstStageSolution{best.selected}};
    }

    detail::SpecialBest best;
    auto evaluate = [&](const std::vector<int>& slot) {
        std::vector<int> sel(K);
        for (int j = 0; j < K; ++j) sel[j] = pv.item(j, slot[j]);
        FirstStageSolution x{sel};
        std::sort(x.selected.begin(), x.selected.end());
        best.offer(first_stage_cost(ins, x) + adv_closed_form(pv, x), x.selected);
    };

    // Strategy-I family: guess (j_star, b_star) and their chosen slots.
    for (int js = 0; js < K; ++js) {
        for (int bs = 0; bs < K; ++bs) {
            if (bs == js) continue;
            for (int sj = 0; sj < 2; ++sj) {
                for (int sb = 0; sb < 2; ++sb) {
                    const Cost a = pc.drop(js, sj);
                    const Cost a_plus = std::max<Cost>(a, 0);
                    if (pc.drop(bs, sb) > a) continue;
                    const Cost g1 =
                        a_plus - std::max(pc.blocked(js, sj),
                                          std::max<Cost>(pc.drop(bs, sb), 0));
                    if (pc.term(js, sj, a_plus) > g1 || pc.term(bs, sb, a_plus) > g1) continue;

                    std::vector<int> slot(K, -1);
                    slot[js] = sj;
                    slot[bs] = sb;
                    bool dead = false;
                    for (int j = 0; j < K && !dead; ++j) {
                        if (j == js || j == bs) continue;
                        int pick = -1;
                        for (int s = 0; s < 2; ++s) {
                            if (pc.drop(j, s) > pc.drop(bs, sb)) continue;
                            if (pc.term(j, s, a_plus) > g1) continue;
                            if (pick < 0 || pc.fill(j, s) < pc.fill(j, pick)) pick = s;
                        }
                        if (pick < 0) dead = true;
                        slot[j] = pick;
                    }
                    if (!dead) evaluate(slot);
                }
            }
        }
    }

    // Strategy-II family: guess (j_star, i_star) and their chosen slots.
    for (int js = 0; js < K; ++js) {
        for (int is = 0; is < K; ++is) {
            for (int sj = 0; sj < 2; ++sj) {
                for (int si = 0; si < 2; ++si) {
                    if (is == js && si != sj) continue;
                    const Cost a = pc.drop(js, sj);
                    const Cost a_plus = std::max<Cost>(a, 0);
                    const Cost g2 = pc.term(is, si, a_plus);
                    if (is != js && pc.drop(is, si) > a) continue;
                    if (pc.term(js, sj, a_plus) > g2) continue;

                    std::vector<int> slot(K, -1);
                    slot[js] = sj;
                    slot[is] = si;
                    bool dead = false;
                    for (int j = 0; j < K && !dead; ++j) {
                        if (slot[j] >= 0) continue;
                        int pick = -1;
                        for (int s = 0; s < 2; ++s) {
                            if (pc.drop(j, s) > a) continue;
                            if (pc.term(j, s, a_plus) > g2) continue;
                            if (pick < 0 || pc.fill(j, s) < pc.fill(j, pick)) pick = s;
                        }
                        if (pick < 0) dead = true;
                        slot[j] = pick;
                    }
                    if (dead) continue;

                    // Membership g1 <= g2 needs some part other than j_star to
                    // reach nominal saving at least t; swap in the cheapest
                    // qualifying choice if the fill missed it.
                    const Cost t = a_plus - g2;
                    if (pc.blocked(js, sj) < t) {
                        Cost reached = 0;
                        for (int j = 0; j < K; ++j)
                            if (j != js)
                                reached = std::max(reached,
                                                   std::max<Cost>(pc.drop(j, slot[j]), 0));
                        if (reached < t) {
                            int up_j = -1, up_s = -1;
                            Cost up_penalty = 0;
                            for (int j = 0; j < K; ++j) {
                                if (j == js || j == is) continue;
                                const int s = 1 - slot[j];
                                if (pc.drop(j, s) > a || pc.drop(j, s) < t) continue;
                                if (pc.term(j, s, a_plus) > g2) continue;
                                const Cost pen = pc.fill(j, s) - pc.fill(j, slot[j]);
                                if (up_j < 0 || pen < up_penalty) {
                                    up_j = j;
                                    up_s = s;
                                    up_penalty = pen;
                                }
                            }
                            if (up_j < 0) continue;
                            slot[up_j] = up_s;
                        }
                    }
                    evaluate(slot);
                }
            }
        }
    }

    if (!best.have) throw std::logic_error("special-case search produced no candidate");
    return {best.value, FirstStageSolution{best.selected}};
}

inline std::pair<Cost, FirstStageSolution> solve_special(const Instance& ins) {
    return solve_special(PairInstance(ins));
}

}  // namespace rrr
