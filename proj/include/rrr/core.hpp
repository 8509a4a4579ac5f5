#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrr/rational.hpp"

namespace rrr {

using Cost = std::int64_t;

// Item-set partition selection instance with budgeted second-stage uncertainty.
// Items are 0-based internally; all file and CLI I/O is 1-based.
//
//   parts    disjoint index sets T_1..T_K covering exactly [0, n)
//   p        quota per part (exactly p_j items selected from T_j)
//   C        first-stage cost per item
//   c_lower  nominal second-stage cost per item (>= 0)
//   d        second-stage deviation per item (>= 0); attacked cost is c_lower + d
//   gamma    attack budget (number of items whose cost may deviate)
//   k        recovery budget (number of items exchangeable after the attack)
struct Instance {
    int n = 0;
    std::vector<std::vector<int>> parts;
    std::vector<int> p;
    std::vector<Cost> C;
    std::vector<Cost> c_lower;
    std::vector<Cost> d;
    int gamma = 0;
    int k = 0;

    int num_parts() const { return static_cast<int>(parts.size()); }
    int total_quota() const {
        int s = 0;
        for (int q : p) s += q;
        return s;
    }
    Cost c_upper(int i) const { return c_lower[i] + d[i]; }

    // part_of[i] = index of the part containing item i; requires a valid partition.
    std::vector<int> part_of() const {
        std::vector<int> owner(n, -1);
        for (int j = 0; j < num_parts(); ++j)
            for (int i : parts[j])
                if (i >= 0 && i < n) owner[i] = j;
        return owner;
    }
};

// First-stage selection x (sorted 0-based item indices).
struct FirstStageSolution {
    std::vector<int> selected;

    std::vector<char> mask(int n) const {
        std::vector<char> m(n, 0);
        for (int i : selected) m[i] = 1;
        return m;
    }
};

// Recovery selection y; quota-feasible and within Hamming distance 2k of x.
struct RecoverySolution {
    std::vector<int> selected;
};

// Attack set delta, |attacked| <= gamma. Realized cost of item i is
// c_lower[i] + d[i] if attacked, else c_lower[i].
struct Scenario {
    std::vector<int> attacked;

    std::vector<Cost> realize(const Instance& ins) const {
        std::vector<Cost> c(ins.c_lower);
        for (int i : attacked) c[i] += ins.d[i];
        return c;
    }

    friend bool operator==(const Scenario& a, const Scenario& b) {
        return a.attacked == b.attacked;
    }
};

// Fractional selection used when evaluating relaxations; exact rationals,
// per-part sums must equal the quotas exactly.
struct FractionalAssignment {
    std::vector<Rat> values;
};

inline bool is_feasible(const Instance& ins, const FractionalAssignment& x) {
    if (static_cast<int>(x.values.size()) != ins.n) return false;
    for (const Rat& v : x.values)
        if (v < Rat(0) || v > Rat(1)) return false;
    for (int j = 0; j < ins.num_parts(); ++j) {
        Rat sum(0);
        for (int i : ins.parts[j]) sum += x.values[i];
        if (sum != Rat(ins.p[j])) return false;
    }
    return true;
}

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    void violation(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

inline int hamming(const FirstStageSolution& x, const std::vector<int>& y, int n) {
    std::vector<char> mx(n, 0), my(n, 0);
    for (int i : x.selected) mx[i] = 1;
    for (int i : y) my[i] = 1;
    int dist = 0;
    for (int i = 0; i < n; ++i) dist += (mx[i] != my[i]);
    return dist;
}

// Structural invariant check. Never throws; clamping advice is reported as a
// warning (canonicalize() applies it).
inline ValidationReport validate(const Instance& ins) {
    ValidationReport rep;
    if (ins.n < 0) rep.violation("n is negative");
    const int K = ins.num_parts();
    auto check_len = [&](const char* name, std::size_t len) {
        if (len != static_cast<std::size_t>(ins.n))
            rep.violation(std::string(name) + " has length " + std::to_string(len) +
                          ", expected n = " + std::to_string(ins.n));
    };
    check_len("C", ins.C.size());
    check_len("c_lower", ins.c_lower.size());
    check_len("d", ins.d.size());
    if (static_cast<int>(ins.p.size()) != K)
        rep.violation("p has length " + std::to_string(ins.p.size()) + ", expected K = " +
                      std::to_string(K));

    std::vector<int> seen(std::max(ins.n, 0), 0);
    for (int j = 0; j < K; ++j) {
        for (int i : ins.parts[j]) {
            if (i < 0 || i >= ins.n) {
                rep.violation("part " + std::to_string(j + 1) + " references item " +
                              std::to_string(i + 1) + " outside [1, n]");
            } else if (seen[i]++) {
                rep.violation("parts overlap at item " + std::to_string(i + 1));
            }
        }
    }
    for (int i = 0; i < ins.n; ++i)
        if (i < static_cast<int>(seen.size()) && seen[i] == 0)
            rep.violation("item " + std::to_string(i + 1) + " belongs to no part");
    for (int j = 0; j < K && j < static_cast<int>(ins.p.size()); ++j) {
        if (ins.p[j] < 0 || ins.p[j] > static_cast<int>(ins.parts[j].size()))
            rep.violation("quota p_" + std::to_string(j + 1) + " = " + std::to_string(ins.p[j]) +
                          " exceeds part size " + std::to_string(ins.parts[j].size()));
    }
    for (int i = 0; i < ins.n && i < static_cast<int>(ins.C.size()); ++i)
        if (ins.C[i] < 0) rep.violation("negative first-stage cost C_" + std::to_string(i + 1));
    for (int i = 0; i < ins.n && i < static_cast<int>(ins.c_lower.size()); ++i)
        if (ins.c_lower[i] < 0) rep.violation("negative cost c_lower_" + std::to_string(i + 1));
    for (int i = 0; i < ins.n && i < static_cast<int>(ins.d.size()); ++i)
        if (ins.d[i] < 0) rep.violation("negative deviation d_" + std::to_string(i + 1));
    if (ins.gamma < 0) rep.violation("gamma is negative");
    if (ins.k < 0) rep.violation("k is negative");

    if (rep.ok) {
        if (ins.gamma > ins.n)
            rep.warnings.push_back("gamma = " + std::to_string(ins.gamma) +
                                   " exceeds n and is clamped to " + std::to_string(ins.n));
        if (ins.k > ins.total_quota())
            rep.warnings.push_back("k = " + std::to_string(ins.k) +
                                   " exceeds total quota and is clamped to " +
                                   std::to_string(ins.total_quota()));
    }
    return rep;
}

// Clamp gamma <= n and k <= P. All algorithms assume a canonicalized instance.
inline void canonicalize(Instance& ins) {
    ins.gamma = std::min(ins.gamma, ins.n);
    ins.k = std::min(ins.k, ins.total_quota());
}

inline bool is_feasible(const Instance& ins, const FirstStageSolution& x) {
    if (x.selected.empty() && ins.total_quota() != 0) return false;
    std::vector<char> m(ins.n, 0);
    for (int i : x.selected) {
        if (i < 0 || i >= ins.n || m[i]) return false;
        m[i] = 1;
    }
    for (int j = 0; j < ins.num_parts(); ++j) {
        int cnt = 0;
        for (int i : ins.parts[j]) cnt += m[i];
        if (cnt != ins.p[j]) return false;
    }
    return static_cast<int>(x.selected.size()) == ins.total_quota();
}

inline Cost first_stage_cost(const Instance& ins, const FirstStageSolution& x) {
    if (!is_feasible(ins, x)) throw std::invalid_argument("infeasible first-stage selection");
    Cost s = 0;
    for (int i : x.selected) s += ins.C[i];
    return s;
}

// ---------------------------------------------------------------------------
// Instance file format (format-version 1)
//
//   format-version: 1
//   n: 4
//   K: 2
//   gamma: 1
//   k: 1
//   p: 1 1
//   parts:
//   1 2
//   3 4
//   C: 1 5 8 7
//   c_lower: 10 7 9 4
//   d: 9 10 10 9
//
// Keys may appear in any order after the header; `parts:` is followed by K
// lines of 1-based item indices. '#' starts a comment.
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
    int line_no;
};

namespace detail {

inline std::vector<Cost> parse_int_list(const std::string& s, int line_no) {
    std::vector<Cost> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError(line_no, "expected integer, found '" + tok + "'");
        }
    }
    return out;
}

}  // namespace detail

inline Instance read_instance(std::istream& in) {
    Instance ins;
    std::map<std::string, bool> have;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    int parts_expected = -1;

    auto next_line = [&](std::string& out) -> bool {
        while (std::getline(in, out)) {
            ++line_no;
            const auto hash = out.find('#');
            if (hash != std::string::npos) out.erase(hash);
            const auto end = out.find_last_not_of(" \t\r");
            if (end == std::string::npos) continue;
            out.erase(end + 1);
            return true;
        }
        return false;
    };

    while (next_line(line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected 'key: value', found '" + line + "'");
        std::string key = line.substr(0, colon);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        const std::string value = line.substr(colon + 1);

        if (!header_seen) {
            if (key != "format-version")
                throw ParseError(line_no, "missing 'format-version: 1' header");
            if (detail::parse_int_list(value, line_no) != std::vector<Cost>{1})
                throw ParseError(line_no, "unsupported format-version '" + value + "'");
            header_seen = true;
            continue;
        }
        if (have[key]) throw ParseError(line_no, "duplicate field '" + key + "'");
        have[key] = true;

        auto scalar = [&](const std::string& what) -> Cost {
            const auto v = detail::parse_int_list(value, line_no);
            if (v.size() != 1) throw ParseError(line_no, what + " expects a single integer");
            return v[0];
        };
        if (key == "n") {
            ins.n = static_cast<int>(scalar("n"));
        } else if (key == "K") {
            parts_expected = static_cast<int>(scalar("K"));
        } else if (key == "gamma") {
            ins.gamma = static_cast<int>(scalar("gamma"));
        } else if (key == "k") {
            ins.k = static_cast<int>(scalar("k"));
        } else if (key == "p") {
            for (Cost v : detail::parse_int_list(value, line_no))
                ins.p.push_back(static_cast<int>(v));
        } else if (key == "parts") {
            if (parts_expected < 0)
                throw ParseError(line_no, "'parts:' requires 'K:' to appear first");
            for (int j = 0; j < parts_expected; ++j) {
                std::string row;
                if (!next_line(row))
                    throw ParseError(line_no, "expected " + std::to_string(parts_expected) +
                                                  " part lines, found " + std::to_string(j));
                std::vector<int> part;
                for (Cost v : detail::parse_int_list(row, line_no))
                    part.push_back(static_cast<int>(v) - 1);
                ins.parts.push_back(std::move(part));
            }
        } else if (key == "C") {
            ins.C = detail::parse_int_list(value, line_no);
        } else if (key == "c_lower") {
            ins.c_lower = detail::parse_int_list(value, line_no);
        } else if (key == "d") {
            ins.d = detail::parse_int_list(value, line_no);
        } else {
            throw ParseError(line_no, "unknown field '" + key + "'");
        }
    }

    for (const char* req : {"n", "K", "gamma", "k", "p", "parts", "C", "c_lower", "d"})
        if (!have[req]) throw ParseError(line_no, std::string("missing field '") + req + "'");

    const ValidationReport rep = validate(ins);
    if (!rep.ok) {
        std::string msg = "invalid instance:";
        for (const auto& v : rep.violations) msg += " " + v + ";";
        throw ParseError(line_no, msg);
    }
    canonicalize(ins);
    return ins;
}

inline Instance read_instance(const std::string& text) {
    std::istringstream iss(text);
    return read_instance(iss);
}

inline void write_instance(const Instance& ins, std::ostream& out) {
    out << "format-version: 1\n";
    out << "n: " << ins.n << "\n";
    out << "K: " << ins.num_parts() << "\n";
    out << "gamma: " << ins.gamma << "\n";
    out << "k: " << ins.k << "\n";
    out << "p:";
    for (int q : ins.p) out << ' ' << q;
    out << "\nparts:\n";
    for (const auto& part : ins.parts) {
        for (std::size_t t = 0; t < part.size(); ++t) out << (t ? " " : "") << part[t] + 1;
        out << "\n";
    }
    auto row = [&](const char* key, const std::vector<Cost>& v) {
        out << key << ":";
        for (Cost c : v) out << ' ' << c;
        out << "\n";
    };
    row("C", ins.C);
    row("c_lower", ins.c_lower);
    row("d", ins.d);
}

inline std::string write_instance(const Instance& ins) {
    std::ostringstream oss;
    write_instance(ins, oss);
    return oss.str();
}

// ---------------------------------------------------------------------------
// Small combinatorics shared by the brute-force oracles and exact masters.
// ---------------------------------------------------------------------------

// Calls fn for every size-r subset of items (in lexicographic order).
inline void for_each_subset(const std::vector<int>& items, int r,
                            const std::function<void(const std::vector<int>&)>& fn) {
    const int m = static_cast<int>(items.size());
    if (r < 0 || r > m) return;
    std::vector<int> idx(r);
    for (int t = 0; t < r; ++t) idx[t] = t;
    std::vector<int> sub(r);
    while (true) {
        for (int t = 0; t < r; ++t) sub[t] = items[idx[t]];
        fn(sub);
        int t = r - 1;
        while (t >= 0 && idx[t] == m - r + t) --t;
        if (t < 0) break;
        ++idx[t];
        for (int u = t + 1; u < r; ++u) idx[u] = idx[u - 1] + 1;
    }
}

// Number of quota-feasible selections, saturating at `cap`.
inline std::uint64_t feasible_count(const Instance& ins, std::uint64_t cap = UINT64_MAX) {
    std::uint64_t total = 1;
    for (int j = 0; j < ins.num_parts(); ++j) {
        const int m = static_cast<int>(ins.parts[j].size());
        const int r = ins.p[j];
        std::uint64_t comb = 1;
        for (int t = 0; t < r; ++t) {
            comb = comb * static_cast<std::uint64_t>(m - t) / static_cast<std::uint64_t>(t + 1);
            if (comb > cap) return cap;
        }
        if (total > cap / std::max<std::uint64_t>(comb, 1)) return cap;
        total *= comb;
    }
    return total;
}

// Calls fn for every x in X; per-part subsets advance lexicographically.
inline void for_each_feasible(const Instance& ins,
                              const std::function<void(const FirstStageSolution&)>& fn) {
    const int K = ins.num_parts();
    std::vector<int> chosen;
    std::function<void(int)> rec = [&](int j) {
        if (j == K) {
            FirstStageSolution x;
            x.selected = chosen;
            std::sort(x.selected.begin(), x.selected.end());
            fn(x);
            return;
        }
        for_each_subset(ins.parts[j], ins.p[j], [&](const std::vector<int>& sub) {
            const std::size_t base = chosen.size();
            chosen.insert(chosen.end(), sub.begin(), sub.end());
            rec(j + 1);
            chosen.resize(base);
        });
    };
    rec(0);
}

}  // namespace rrr
