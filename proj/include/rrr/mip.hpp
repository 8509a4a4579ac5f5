#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrr/adversary.hpp"
#include "rrr/core.hpp"

namespace rrr {

// Solver-neutral linear model. Coefficients and right-hand sides are integers
// by construction (brackets of integer data); continuous variables default to
// [0, inf) like the LP text format, with an explicit `free` marker otherwise.
struct MipModel {
    struct Var {
        std::string name;
        bool is_binary = false;
        bool free = false;  // continuous on (-inf, inf); else [0, inf)
    };
    struct Term {
        int var = 0;
        Cost coef = 0;
    };
    enum class Sense { LE, GE, EQ };
    struct Row {
        std::string name;
        std::vector<Term> terms;
        Sense sense = Sense::LE;
        Cost rhs = 0;
    };

    std::string formulation;
    std::string instance_hash;
    std::vector<Term> objective;  // minimization
    std::vector<Var> vars;
    std::vector<Row> rows;

    int add_binary(std::string name) {
        vars.push_back({std::move(name), true, false});
        return static_cast<int>(vars.size()) - 1;
    }
    int add_continuous(std::string name, bool is_free = false) {
        vars.push_back({std::move(name), false, is_free});
        return static_cast<int>(vars.size()) - 1;
    }
    void add_row(std::string name, std::vector<Term> terms, Sense sense, Cost rhs) {
        rows.push_back({std::move(name), std::move(terms), sense, rhs});
    }
};

inline std::string instance_hash(const Instance& ins) {
    // FNV-1a over the canonical text form
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : write_instance(ins)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline Cost bracket(Cost v) { return v > 0 ? v : 0; }

// Constants of [alpha + beta x - c]+ and of the attack gain at x in {0,1}:
// value(x) = at0 + (at1 - at0) x.
struct LinTerm {
    Cost at0 = 0;
    Cost at1 = 0;
    Cost slope() const { return at1 - at0; }
};

inline LinTerm lin_bracket(Cost alpha, Cost beta, Cost c) {
    return {bracket(alpha - c), bracket(alpha + beta - c)};
}

inline LinTerm lin_gain(Cost alpha, Cost beta, Cost c, Cost d) {
    return {bracket(alpha - c) - bracket(alpha - c - d),
            bracket(alpha + beta - c) - bracket(alpha + beta - c - d)};
}

}  // namespace detail

// Scenario formulation: binaries x, per-scenario recovery y^s and keep
// indicators z^s, epigraph t over the realized recovery costs.
inline MipModel build_m1(const Instance& ins, const std::vector<Scenario>& scenarios) {
    if (scenarios.empty()) throw std::invalid_argument("scenario list must be nonempty");
    const int n = ins.n;
    const int S = static_cast<int>(scenarios.size());
    const int K = ins.num_parts();
    const Cost pk = ins.total_quota() - ins.k;

    MipModel m;
    m.formulation = "m1";
    m.instance_hash = instance_hash(ins);
    std::vector<int> x(n);
    for (int i = 0; i < n; ++i) x[i] = m.add_binary("x" + std::to_string(i + 1));
    const int t = m.add_continuous("t");
    std::vector<std::vector<int>> y(S, std::vector<int>(n)), z(S, std::vector<int>(n));
    for (int s = 0; s < S; ++s) {
        for (int i = 0; i < n; ++i)
            y[s][i] = m.add_binary("y" + std::to_string(i + 1) + "_s" + std::to_string(s + 1));
        for (int i = 0; i < n; ++i)
            z[s][i] = m.add_binary("z" + std::to_string(i + 1) + "_s" + std::to_string(s + 1));
    }

    for (int i = 0; i < n; ++i) m.objective.push_back({x[i], ins.C[i]});
    m.objective.push_back({t, 1});

    for (int s = 0; s < S; ++s) {
        const std::vector<Cost> c = scenarios[s].realize(ins);
        std::vector<MipModel::Term> terms{{t, 1}};
        for (int i = 0; i < n; ++i)
            if (c[i] != 0) terms.push_back({y[s][i], -c[i]});
        m.add_row("wc_s" + std::to_string(s + 1), std::move(terms), MipModel::Sense::GE, 0);
    }
    for (int j = 0; j < K; ++j) {
        std::vector<MipModel::Term> terms;
        for (int i : ins.parts[j]) terms.push_back({x[i], 1});
        m.add_row("quota_j" + std::to_string(j + 1), std::move(terms), MipModel::Sense::EQ,
                  ins.p[j]);
    }
    for (int s = 0; s < S; ++s)
        for (int j = 0; j < K; ++j) {
            std::vector<MipModel::Term> terms;
            for (int i : ins.parts[j]) terms.push_back({y[s][i], 1});
            m.add_row("rquota_s" + std::to_string(s + 1) + "_j" + std::to_string(j + 1),
                      std::move(terms), MipModel::Sense::EQ, ins.p[j]);
        }
    for (int s = 0; s < S; ++s)
        for (int i = 0; i < n; ++i)
            m.add_row("keepx_s" + std::to_string(s + 1) + "_i" + std::to_string(i + 1),
                      {{z[s][i], 1}, {x[i], -1}}, MipModel::Sense::LE, 0);
    for (int s = 0; s < S; ++s)
        for (int i = 0; i < n; ++i)
            m.add_row("keepy_s" + std::to_string(s + 1) + "_i" + std::to_string(i + 1),
                      {{z[s][i], 1}, {y[s][i], -1}}, MipModel::Sense::LE, 0);
    for (int s = 0; s < S; ++s) {
        std::vector<MipModel::Term> terms;
        for (int i = 0; i < n; ++i) terms.push_back({z[s][i], 1});
        m.add_row("keepn_s" + std::to_string(s + 1), std::move(terms), MipModel::Sense::GE, pk);
    }
    return m;
}

// Candidate-cut formulation: epigraph rows per (beta, alpha) dual candidate,
// with brackets linearized through [a+bx]+ = [a+b]+ x + [a]+ (1-x).
inline MipModel build_m2(const Instance& ins, const std::vector<CutCandidate>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("candidate list must be nonempty");
    const int n = ins.n;
    const int S = static_cast<int>(candidates.size());
    const int K = ins.num_parts();
    const Cost pk = ins.total_quota() - ins.k;
    const std::vector<int> owner = ins.part_of();

    MipModel m;
    m.formulation = "m2";
    m.instance_hash = instance_hash(ins);
    std::vector<int> x(n);
    for (int i = 0; i < n; ++i) x[i] = m.add_binary("x" + std::to_string(i + 1));
    const int t = m.add_continuous("t");
    std::vector<int> pi(S);
    std::vector<std::vector<int>> rho(S, std::vector<int>(n));
    for (int s = 0; s < S; ++s) {
        pi[s] = m.add_continuous("pi_s" + std::to_string(s + 1));
        for (int i = 0; i < n; ++i)
            rho[s][i] = m.add_continuous("rho" + std::to_string(i + 1) + "_s" +
                                         std::to_string(s + 1));
    }

    for (int i = 0; i < n; ++i) m.objective.push_back({x[i], ins.C[i]});
    m.objective.push_back({t, 1});

    for (int s = 0; s < S; ++s) {
        const CutCandidate& cand = candidates[s];
        if (static_cast<int>(cand.alpha.size()) != K)
            throw std::invalid_argument("candidate alpha length must equal K");
        Cost rhs = pk * cand.beta;
        for (int j = 0; j < K; ++j) rhs += static_cast<Cost>(ins.p[j]) * cand.alpha[j];
        std::vector<MipModel::Term> terms{{t, 1}, {pi[s], -static_cast<Cost>(ins.gamma)}};
        for (int i = 0; i < n; ++i) terms.push_back({rho[s][i], -1});
        for (int i = 0; i < n; ++i) {
            const detail::LinTerm b =
                detail::lin_bracket(cand.alpha[owner[i]], cand.beta, ins.c_lower[i]);
            rhs -= b.at0;
            if (b.slope() != 0) terms.push_back({x[i], b.slope()});
        }
        m.add_row("cut_s" + std::to_string(s + 1), std::move(terms), MipModel::Sense::GE, rhs);
    }
    for (int s = 0; s < S; ++s) {
        const CutCandidate& cand = candidates[s];
        for (int i = 0; i < n; ++i) {
            const detail::LinTerm g =
                detail::lin_gain(cand.alpha[owner[i]], cand.beta, ins.c_lower[i], ins.d[i]);
            std::vector<MipModel::Term> terms{{pi[s], 1}, {rho[s][i], 1}};
            if (g.slope() != 0) terms.push_back({x[i], -g.slope()});
            m.add_row("gain_s" + std::to_string(s + 1) + "_i" + std::to_string(i + 1),
                      std::move(terms), MipModel::Sense::GE, g.at0);
        }
    }
    for (int j = 0; j < K; ++j) {
        std::vector<MipModel::Term> terms;
        for (int i : ins.parts[j]) terms.push_back({x[i], 1});
        m.add_row("quota_j" + std::to_string(j + 1), std::move(terms), MipModel::Sense::EQ,
                  ins.p[j]);
    }
    return m;
}

// Compact formulation: the budget-allocation dynamic program becomes a
// longest-path block per beta candidate (node potentials s, arc values c).
inline MipModel build_m3(const Instance& ins, bool allow_large = false) {
    const int n = ins.n;
    const int K = ins.num_parts();
    const int G = ins.gamma;
    const Cost pk = ins.total_quota() - ins.k;
    const std::vector<Cost> betas = beta_candidates(ins);
    const int NB = static_cast<int>(betas.size());

    std::uint64_t var_estimate = static_cast<std::uint64_t>(n) + 1 +
                                 static_cast<std::uint64_t>(NB) * (K + 1) * (G + 1) * 2;
    for (int bi = 0; bi < NB; ++bi)
        for (int j = 0; j < K; ++j)
            var_estimate += static_cast<std::uint64_t>(G + 1) *
                            alpha_candidates(ins, j, betas[bi]).size() *
                            (1 + ins.parts[j].size());
    if (var_estimate > 1000000 && !allow_large)
        throw std::length_error("compact model would have " + std::to_string(var_estimate) +
                                " variables; pass the override to build anyway");

    MipModel m;
    m.formulation = "m3";
    m.instance_hash = instance_hash(ins);
    std::vector<int> x(n);
    for (int i = 0; i < n; ++i) x[i] = m.add_binary("x" + std::to_string(i + 1));
    const int t = m.add_continuous("t");

    // s[bi][j][g]: node potential, j in 1..K+1; c[bi][j][g]: arc value, j in 1..K
    auto sname = [](int bi, int j, int g) {
        return "s_b" + std::to_string(bi + 1) + "_j" + std::to_string(j) + "_g" +
               std::to_string(g);
    };
    auto cname = [](int bi, int j, int g) {
        return "c_b" + std::to_string(bi + 1) + "_j" + std::to_string(j) + "_g" +
               std::to_string(g);
    };
    std::vector<std::vector<std::vector<int>>> sv(
        NB, std::vector<std::vector<int>>(K + 2, std::vector<int>(G + 1, -1)));
    std::vector<std::vector<std::vector<int>>> cv(
        NB, std::vector<std::vector<int>>(K + 1, std::vector<int>(G + 1, -1)));
    for (int bi = 0; bi < NB; ++bi) {
        for (int j = 1; j <= K + 1; ++j)
            for (int g = 0; g <= G; ++g) sv[bi][j][g] = m.add_continuous(sname(bi, j, g), true);
        for (int j = 1; j <= K; ++j)
            for (int g = 0; g <= G; ++g) cv[bi][j][g] = m.add_continuous(cname(bi, j, g), true);
    }

    for (int i = 0; i < n; ++i) m.objective.push_back({x[i], ins.C[i]});
    m.objective.push_back({t, 1});

    for (int bi = 0; bi < NB; ++bi)
        m.add_row("epi_b" + std::to_string(bi + 1), {{t, 1}, {sv[bi][K + 1][G], -1}},
                  MipModel::Sense::GE, pk * betas[bi]);
    for (int bi = 0; bi < NB; ++bi)
        for (int j = 1; j <= K; ++j)
            for (int g = 0; g <= G; ++g)
                for (int gp = g; gp <= G; ++gp)
                    m.add_row("path_b" + std::to_string(bi + 1) + "_j" + std::to_string(j) +
                                  "_g" + std::to_string(g) + "_gp" + std::to_string(gp),
                              {{sv[bi][j + 1][gp], 1}, {sv[bi][j][g], -1}, {cv[bi][j][gp - g], -1}},
                              MipModel::Sense::GE, 0);
    for (int bi = 0; bi < NB; ++bi)
        for (int g = 1; g <= G; ++g)
            m.add_row("mono_b" + std::to_string(bi + 1) + "_g" + std::to_string(g),
                      {{sv[bi][K + 1][g], 1}, {sv[bi][K + 1][g - 1], -1}}, MipModel::Sense::GE,
                      0);
    for (int bi = 0; bi < NB; ++bi)
        for (int g = 0; g <= G; ++g)
            m.add_row("src_b" + std::to_string(bi + 1) + "_g" + std::to_string(g),
                      {{sv[bi][1][g], 1}}, MipModel::Sense::EQ, 0);

    for (int bi = 0; bi < NB; ++bi) {
        const Cost beta = betas[bi];
        for (int j = 0; j < K; ++j) {
            const std::vector<Cost> alphas = alpha_candidates(ins, j, beta);
            for (int ai = 0; ai < static_cast<int>(alphas.size()); ++ai) {
                const Cost alpha = alphas[ai];
                for (int g = 0; g <= G; ++g) {
                    const std::string tag = "_b" + std::to_string(bi + 1) + "_j" +
                                            std::to_string(j + 1) + "_g" + std::to_string(g) +
                                            "_a" + std::to_string(ai + 1);
                    const int piv = m.add_continuous("pi" + tag);
                    std::vector<MipModel::Term> arc{{cv[bi][j + 1][g], 1},
                                                    {piv, -static_cast<Cost>(g)}};
                    Cost rhs = static_cast<Cost>(ins.p[j]) * alpha;
                    std::vector<std::pair<int, detail::LinTerm>> gains;
                    for (int i : ins.parts[j]) {
                        const int rhov = m.add_continuous("rho" + std::to_string(i + 1) + tag);
                        arc.push_back({rhov, -1});
                        const detail::LinTerm b = detail::lin_bracket(alpha, beta, ins.c_lower[i]);
                        rhs -= b.at0;
                        if (b.slope() != 0) arc.push_back({x[i], b.slope()});
                        gains.push_back({rhov, detail::lin_gain(alpha, beta, ins.c_lower[i],
                                                                ins.d[i])});
                    }
                    m.add_row("arc" + tag, std::move(arc), MipModel::Sense::GE, rhs);
                    for (std::size_t u = 0; u < gains.size(); ++u) {
                        const int i = ins.parts[j][u];
                        std::vector<MipModel::Term> row{{piv, 1}, {gains[u].first, 1}};
                        if (gains[u].second.slope() != 0)
                            row.push_back({x[i], -gains[u].second.slope()});
                        m.add_row("gain" + tag + "_i" + std::to_string(i + 1), std::move(row),
                                  MipModel::Sense::GE, gains[u].second.at0);
                    }
                }
            }
        }
    }
    for (int j = 0; j < K; ++j) {
        std::vector<MipModel::Term> terms;
        for (int i : ins.parts[j]) terms.push_back({x[i], 1});
        m.add_row("quota_j" + std::to_string(j + 1), std::move(terms), MipModel::Sense::EQ,
                  ins.p[j]);
    }
    return m;
}

// ---------------------------------------------------------------------------
// LP text serialization. Dialect: `Minimize`/`Subject To`/`Bounds`/`Binaries`/
// `End` sections, every coefficient written explicitly, variables and rows in
// declaration order. Deterministic byte-for-byte.
// ---------------------------------------------------------------------------

inline std::string write_lp(const MipModel& m) {
    std::ostringstream out;
    out << "\\ formulation: " << m.formulation << "\n";
    out << "\\ instance: " << m.instance_hash << "\n";
    out << "Minimize\n obj:";
    auto terms = [&](const std::vector<MipModel::Term>& ts) {
        bool first = true;
        for (const auto& term : ts) {
            const Cost c = term.coef;
            if (first) {
                out << ' ' << (c < 0 ? "- " : "") << (c < 0 ? -c : c);
                first = false;
            } else {
                out << (c < 0 ? " - " : " + ") << (c < 0 ? -c : c);
            }
            out << ' ' << m.vars[term.var].name;
        }
        if (first) out << " 0 " << m.vars[0].name;  // empty sum guard
    };
    terms(m.objective);
    out << "\nSubject To\n";
    for (const auto& row : m.rows) {
        out << ' ' << row.name << ':';
        terms(row.terms);
        switch (row.sense) {
            case MipModel::Sense::LE: out << " <= "; break;
            case MipModel::Sense::GE: out << " >= "; break;
            case MipModel::Sense::EQ: out << " = "; break;
        }
        out << row.rhs << "\n";
    }
    bool any_free = false;
    for (const auto& v : m.vars) any_free |= (!v.is_binary && v.free);
    if (any_free) {
        out << "Bounds\n";
        for (const auto& v : m.vars)
            if (!v.is_binary && v.free) out << ' ' << v.name << " free\n";
    }
    out << "Binaries\n";
    std::size_t col = 0;
    for (const auto& v : m.vars) {
        if (!v.is_binary) continue;
        if (col != 0 && col + 1 + v.name.size() > 72) {
            out << "\n";
            col = 0;
        }
        out << ' ' << v.name;
        col += 1 + v.name.size();
    }
    if (col != 0) out << "\n";
    out << "End\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// External solver bridge. The command template runs with {model} and
// {solution} substituted; the solution file holds `#status <word>` followed by
// `name value` pairs, one per line.
// ---------------------------------------------------------------------------

struct ExternalSolution {
    std::string status;
    std::map<std::string, double> values;
    Cost objective = 0;
};

inline ExternalSolution parse_external_solution(const std::string& text, const MipModel& m) {
    ExternalSolution sol;
    std::istringstream iss(text);
    std::string line;
    int line_no = 0;
    bool status_seen = false;
    while (std::getline(iss, line)) {
        ++line_no;
        const auto end = line.find_last_not_of(" \t\r");
        if (end == std::string::npos) continue;
        line.erase(end + 1);
        std::istringstream ls(line);
        if (!status_seen) {
            std::string key;
            ls >> key;
            if (key != "#status" || !(ls >> sol.status))
                throw ParseError(line_no, "expected '#status <word>', found '" + line + "'");
            status_seen = true;
            continue;
        }
        std::string name;
        double v = 0;
        if (!(ls >> name >> v) || !(ls >> std::ws).eof())
            throw ParseError(line_no, "expected 'name value', found '" + line + "'");
        sol.values[name] = v;
    }
    if (!status_seen) throw ParseError(line_no, "missing '#status' header");

    if (sol.status == "optimal") {
        for (const auto& v : m.vars)
            if (v.is_binary && !sol.values.count(v.name))
                throw std::runtime_error("solution file misses binary variable " + v.name);
        double obj = 0;
        for (const auto& term : m.objective) {
            const auto& name = m.vars[term.var].name;
            const auto it = sol.values.find(name);
            if (it == sol.values.end()) {
                if (term.coef != 0)
                    throw std::runtime_error("solution file misses objective variable " + name);
                continue;
            }
            obj += static_cast<double>(term.coef) * it->second;
        }
        const double rounded = std::nearbyint(obj);
        if (std::fabs(obj - rounded) > 1e-6)
            throw std::runtime_error("external objective " + std::to_string(obj) +
                                     " is not integral within 1e-6");
        sol.objective = static_cast<Cost>(rounded);
    }
    return sol;
}

inline ExternalSolution run_external(const MipModel& m, const std::string& command_template) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();
    const std::string stamp = std::to_string(
        std::chrono::steady_clock::now().time_since_epoch().count());
    const fs::path model_path = dir / ("rrr_model_" + stamp + ".lp");
    const fs::path sol_path = dir / ("rrr_sol_" + stamp + ".txt");

    {
        std::ofstream out(model_path);
        out << write_lp(m);
    }
    std::string cmd = command_template;
    auto substitute = [&](const std::string& key, const std::string& value) {
        for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key))
            cmd.replace(pos, key.size(), value);
    };
    substitute("{model}", model_path.string());
    substitute("{solution}", sol_path.string());

    const int rc = std::system(cmd.c_str());
    std::string text;
    {
        std::ifstream in(sol_path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    std::error_code ec;
    fs::remove(model_path, ec);
    fs::remove(sol_path, ec);
    if (rc != 0) throw std::runtime_error("external solver command failed with code " +
                                          std::to_string(rc));
    return parse_external_solution(text, m);
}

}  // namespace rrr
