#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrr/core.hpp"
#include "rrr/prng.hpp"

namespace rrr {

enum class Family { i1, i2, reduction, custom };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::i1: return "i1";
        case Family::i2: return "i2";
        case Family::reduction: return "reduction";
        case Family::custom: return "custom";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    if (s == "i1") return Family::i1;
    if (s == "i2") return Family::i2;
    if (s == "reduction") return Family::reduction;
    if (s == "custom") return Family::custom;
    throw std::invalid_argument("unknown family '" + s + "'");
}

// Random family parameters. i1 defaults to K=10, n_j=10; i2 forces n_j=3,
// gamma=K, k=K/2 (K even). Quotas are uniform on {1..n_j-1} and all three
// cost vectors uniform on the cost range.
struct GeneratorSpec {
    Family family = Family::i1;
    int K = 0;     // 0 = family default
    int n_j = 0;   // 0 = family default
    int gamma = 0;
    int k = 0;
    Cost cost_lo = 1;
    Cost cost_hi = 100;
    std::uint64_t seed = 0;
};

// Sampling order is fixed (quotas, then C, c_lower, d in item order) so a
// seed identifies one instance on every platform.
inline Instance gen_random(const GeneratorSpec& spec) {
    int K = spec.K;
    int nj = spec.n_j;
    int gamma = spec.gamma;
    int k = spec.k;
    switch (spec.family) {
        case Family::i1:
            if (K == 0) K = 10;
            if (nj == 0) nj = 10;
            break;
        case Family::i2:
            if (K == 0) K = 2;
            if (nj == 0) nj = 3;
            if (nj != 3) throw std::invalid_argument("family i2 requires n_j = 3");
            if (K < 2 || K % 2 != 0) throw std::invalid_argument("family i2 requires even K >= 2");
            gamma = K;
            k = K / 2;
            break;
        case Family::custom:
            break;
        case Family::reduction:
            throw std::invalid_argument("reduction instances come from gen_reduction");
    }
    if (K <= 0) throw std::invalid_argument("K must be positive");
    if (nj < 2) throw std::invalid_argument("n_j must be at least 2");
    if (gamma < 0 || k < 0) throw std::invalid_argument("gamma and k must be nonnegative");
    if (spec.cost_lo < 0 || spec.cost_lo > spec.cost_hi)
        throw std::invalid_argument("invalid cost range");

    SplitMix64 rng(spec.seed);
    Instance ins;
    ins.n = K * nj;
    ins.gamma = gamma;
    ins.k = k;
    for (int j = 0; j < K; ++j) {
        std::vector<int> part(nj);
        for (int t = 0; t < nj; ++t) part[t] = j * nj + t;
        ins.parts.push_back(std::move(part));
        ins.p.push_back(static_cast<int>(rng.uniform_int(1, nj - 1)));
    }
    ins.C.resize(ins.n);
    ins.c_lower.resize(ins.n);
    ins.d.resize(ins.n);
    for (int i = 0; i < ins.n; ++i) ins.C[i] = rng.uniform_int(spec.cost_lo, spec.cost_hi);
    for (int i = 0; i < ins.n; ++i) ins.c_lower[i] = rng.uniform_int(spec.cost_lo, spec.cost_hi);
    for (int i = 0; i < ins.n; ++i) ins.d[i] = rng.uniform_int(spec.cost_lo, spec.cost_hi);
    canonicalize(ins);
    return ins;
}

// Partition input for the hardness-reduction family. M defaults to 50 * sum A
// (that is, 100 Q); the table's infinite entries become BIG = 1000 (M + sum A),
// large enough that no optimal first stage ever buys one.
struct PartitionInput {
    std::vector<Cost> A;
    Cost M = 0;  // 0 = default

    Cost sum() const {
        Cost s = 0;
        for (Cost a : A) s += a;
        return s;
    }
    Cost big_m() const { return M > 0 ? M : 50 * sum(); }
};

// 2n+1 two-item parts: n "number" parts whose second item deviates by 2 a_j,
// and n+1 "anchor" parts guarding a cost of M; gamma = n+1, k = n.
inline Instance gen_reduction(const PartitionInput& input) {
    const int n = static_cast<int>(input.A.size());
    if (n == 0) throw std::invalid_argument("partition multiset must be nonempty");
    for (Cost a : input.A)
        if (a <= 0) throw std::invalid_argument("partition entries must be positive");
    const Cost sum_a = input.sum();
    const Cost M = input.big_m();
    if (2 * M < 100 * sum_a) throw std::invalid_argument("M must be at least 100 Q");
    const Cost BIG = 1000 * (M + sum_a);

    Instance ins;
    ins.n = 2 * (2 * n + 1);
    ins.gamma = n + 1;
    ins.k = n;
    ins.C.resize(ins.n);
    ins.c_lower.resize(ins.n);
    ins.d.resize(ins.n);
    for (int j = 0; j < 2 * n + 1; ++j) {
        ins.parts.push_back({2 * j, 2 * j + 1});
        ins.p.push_back(1);
        if (j < n) {
            ins.C[2 * j] = input.A[j];
            ins.c_lower[2 * j] = 0;
            ins.d[2 * j] = 0;
            ins.C[2 * j + 1] = 0;
            ins.c_lower[2 * j + 1] = 0;
            ins.d[2 * j + 1] = 2 * input.A[j];
        } else {
            ins.C[2 * j] = BIG;
            ins.c_lower[2 * j] = 0;
            ins.d[2 * j] = 0;
            ins.C[2 * j + 1] = 0;
            ins.c_lower[2 * j + 1] = M;
            ins.d[2 * j + 1] = sum_a;
        }
    }
    canonicalize(ins);
    return ins;
}

// Yes-instances satisfy Rec <= M + 3Q. Doubled to stay integral when sum A is
// odd: compare 2 * Rec against this.
inline Cost reduction_threshold_x2(const PartitionInput& input) {
    return 2 * input.big_m() + 3 * input.sum();
}

inline Instance builtin(const std::string& name) {
    Instance ins;
    if (name == "ex1") {
        ins.n = 4;
        ins.parts = {{0, 1}, {2, 3}};
        ins.p = {1, 1};
        ins.C = {1, 5, 8, 7};
        ins.c_lower = {10, 7, 9, 4};
        ins.d = {9, 10, 10, 9};
        ins.gamma = 1;
        ins.k = 1;
    } else if (name == "ex2") {
        ins.n = 5;
        ins.parts = {{0, 1, 2}, {3, 4}};
        ins.p = {1, 1};
        ins.C = {0, 0, 0, 0, 1};
        ins.c_lower = {0, 0, 0, 1, 0};
        ins.d = {1, 1, 1, 0, 0};
        ins.gamma = 1;
        ins.k = 1;
    } else {
        throw std::invalid_argument("unknown builtin instance '" + name + "'");
    }
    return ins;
}

}  // namespace rrr
