#include "pomset/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pomset {

// ------------------------------------------------------------------ CNF

void validate(const CnfInstance& f) {
    int n = static_cast<int>(f.vars.size());
    for (auto& c : f.clauses) {
        if (c.empty()) throw std::invalid_argument("empty clause");
        for (auto& l : c)
            if (l.var < 0 || l.var >= n) throw std::invalid_argument("literal on an undeclared variable");
    }
    for (int u : f.universals)
        if (u < 0 || u >= n) throw std::invalid_argument("undeclared universal variable");
}

namespace {

std::vector<std::pair<int, int>> polarity_counts(const CnfInstance& f) {
    std::vector<std::pair<int, int>> c(f.vars.size());
    for (auto& cl : f.clauses)
        for (auto& l : cl) (l.neg ? c[l.var].second : c[l.var].first)++;
    return c;
}

bool is_universal(const CnfInstance& f, int v) {
    return std::find(f.universals.begin(), f.universals.end(), v) != f.universals.end();
}

std::string fresh_name(const std::vector<std::string>& used, std::string base) {
    while (std::find(used.begin(), used.end(), base) != used.end()) base += "_";
    return base;
}

}  // namespace

bool both_polarities(const CnfInstance& f) {
    for (auto [p, n] : polarity_counts(f))
        if (p == 0 || n == 0) return false;
    return true;
}

CnfInstance normalize_polarities(const CnfInstance& f) {
    validate(f);
    CnfInstance g = f;
    for (auto& c : g.clauses) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    for (bool changed = true; changed;) {
        changed = false;
        auto counts = polarity_counts(g);
        for (int v = 0; v < static_cast<int>(g.vars.size()); ++v) {
            auto [p, n] = counts[v];
            if ((p == 0) == (n == 0)) continue;
            changed = true;
            if (is_universal(g, v)) {
                for (auto& c : g.clauses)
                    c.erase(std::remove_if(c.begin(), c.end(), [&](const Literal& l) { return l.var == v; }),
                            c.end());
            } else {
                std::erase_if(g.clauses, [&](const std::vector<Literal>& c) {
                    return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return l.var == v; });
                });
            }
            break;
        }
        for (auto& c : g.clauses)
            if (c.empty()) {
                // A false instance, written with both polarities.
                CnfInstance bot;
                bot.vars = {fresh_name(f.vars, "e")};
                bot.clauses = {{Literal{0, false}}, {Literal{0, true}}};
                return bot;
            }
    }
    auto counts = polarity_counts(g);
    std::vector<int> remap(g.vars.size(), -1);
    CnfInstance out;
    for (int v = 0; v < static_cast<int>(g.vars.size()); ++v)
        if (counts[v].first + counts[v].second > 0) {
            remap[v] = static_cast<int>(out.vars.size());
            out.vars.push_back(g.vars[v]);
        }
    for (auto& c : g.clauses) {
        std::vector<Literal> d;
        for (auto& l : c) d.push_back(Literal{remap[l.var], l.neg});
        out.clauses.push_back(d);
    }
    for (int u : g.universals)
        if (remap[u] >= 0) out.universals.push_back(remap[u]);
    return out;
}

std::vector<int> variable_order(const CnfInstance& f) {
    std::vector<int> order;
    for (int u : f.universals) order.push_back(u);
    for (int v = 0; v < static_cast<int>(f.vars.size()); ++v)
        if (!is_universal(f, v)) order.push_back(v);
    return order;
}

std::string to_string(const CnfInstance& f) {
    std::string s;
    if (!f.universals.empty()) {
        s = "forall";
        for (int u : f.universals) s += " " + f.vars[u];
        s += " : ";
    }
    if (f.clauses.empty()) return s + "true";
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        if (i) s += " & ";
        s += "(";
        for (std::size_t j = 0; j < f.clauses[i].size(); ++j) {
            if (j) s += " | ";
            auto& l = f.clauses[i][j];
            s += (l.neg ? "~" : "") + f.vars[l.var];
        }
        s += ")";
    }
    return s;
}

CnfInstance parse_cnf(const std::string& text) {
    CnfInstance f;
    std::map<std::string, int> index;
    auto var = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        index[name] = static_cast<int>(f.vars.size());
        f.vars.push_back(name);
        return static_cast<int>(f.vars.size()) - 1;
    };
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto word = [&] {
        skip();
        std::size_t b = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
        return text.substr(b, i - b);
    };
    auto expect = [&](char c) {
        skip();
        if (i >= text.size() || text[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
        ++i;
    };
    skip();
    std::size_t save = i;
    if (word() == "forall") {
        for (;;) {
            skip();
            if (i < text.size() && text[i] == ':') {
                ++i;
                break;
            }
            std::string w = word();
            if (w.empty()) throw ParseError("expected a variable or ':'", i);
            f.universals.push_back(var(w));
        }
    } else {
        i = save;
    }
    skip();
    save = i;
    if (word() == "true") {
        skip();
        if (i != text.size()) throw ParseError("trailing input", i);
        return f;
    }
    i = save;
    for (;;) {
        expect('(');
        std::vector<Literal> c;
        for (;;) {
            skip();
            bool neg = i < text.size() && text[i] == '~';
            if (neg) ++i;
            std::string w = word();
            if (w.empty()) throw ParseError("expected a literal", i);
            c.push_back(Literal{var(w), neg});
            skip();
            if (i < text.size() && text[i] == '|') {
                ++i;
                continue;
            }
            break;
        }
        expect(')');
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        f.clauses.push_back(c);
        skip();
        if (i == text.size()) break;
        expect('&');
    }
    return f;
}

CnfInstance parse_dimacs(const std::string& text) {
    CnfInstance f;
    std::istringstream in(text);
    std::string line;
    int nvars = -1, nclauses = -1;
    std::vector<Literal> cur;
    auto check_var = [&](long v) {
        if (nvars < 0) throw std::invalid_argument("literal before the problem line");
        if (v < 1 || v > nvars) throw std::invalid_argument("variable " + std::to_string(v) + " out of range");
        return static_cast<int>(v - 1);
    };
    std::vector<long> prefix;
    auto read_prefix = [&](std::istringstream& ls) {
        long v;
        while (ls >> v && v != 0) prefix.push_back(v);
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "c") {
            std::string w;
            if (ls >> w && w == "forall") read_prefix(ls);
            continue;
        }
        if (head == "p") {
            std::string fmt;
            if (!(ls >> fmt >> nvars >> nclauses) || fmt != "cnf" || nvars < 0 || nclauses < 0)
                throw std::invalid_argument("bad problem line");
            for (int v = 1; v <= nvars; ++v) f.vars.push_back("x" + std::to_string(v));
            continue;
        }
        if (head == "a") {
            read_prefix(ls);
            continue;
        }
        if (head == "e") continue;
        std::istringstream all(line);
        long v;
        while (all >> v) {
            if (v == 0) {
                if (cur.empty()) throw std::invalid_argument("empty clause");
                std::sort(cur.begin(), cur.end());
                cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
                f.clauses.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(Literal{check_var(v < 0 ? -v : v), v < 0});
            }
        }
        if (!all.eof()) throw std::invalid_argument("bad token in clause line");
    }
    if (nvars < 0) throw std::invalid_argument("missing problem line");
    if (!cur.empty()) throw std::invalid_argument("unterminated clause");
    for (long v : prefix) f.universals.push_back(check_var(v));
    if (static_cast<int>(f.clauses.size()) != nclauses) throw std::invalid_argument("clause count mismatch");
    std::sort(f.universals.begin(), f.universals.end());
    f.universals.erase(std::unique(f.universals.begin(), f.universals.end()), f.universals.end());
    return f;
}

std::string to_dimacs(const CnfInstance& f) {
    std::ostringstream os;
    if (!f.universals.empty()) {
        os << "c forall";
        for (int u : f.universals) os << " " << u + 1;
        os << "\n";
    }
    os << "p cnf " << f.vars.size() << " " << f.clauses.size() << "\n";
    for (auto& c : f.clauses) {
        for (auto& l : c) os << (l.neg ? -(l.var + 1) : l.var + 1) << " ";
        os << "0\n";
    }
    return os.str();
}

namespace {

constexpr int kBruteLimit = 24;

bool satisfied(const CnfInstance& f, unsigned long long bits) {
    for (auto& c : f.clauses) {
        bool ok = false;
        for (auto& l : c)
            if (((bits >> l.var) & 1) != static_cast<unsigned long long>(l.neg)) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool brute_sat(const CnfInstance& f) {
    validate(f);
    int n = static_cast<int>(f.vars.size());
    if (n > kBruteLimit) throw std::length_error("too many variables for the truth table");
    for (unsigned long long b = 0; b < (1ULL << n); ++b)
        if (satisfied(f, b)) return true;
    return false;
}

bool brute_qbf(const CnfInstance& f) {
    validate(f);
    int n = static_cast<int>(f.vars.size());
    if (n > kBruteLimit) throw std::length_error("too many variables for the truth table");
    std::vector<int> ex;
    for (int v = 0; v < n; ++v)
        if (!is_universal(f, v)) ex.push_back(v);
    std::size_t m = f.universals.size();
    for (unsigned long long ub = 0; ub < (1ULL << m); ++ub) {
        unsigned long long base = 0;
        for (std::size_t k = 0; k < m; ++k)
            if ((ub >> k) & 1) base |= 1ULL << f.universals[k];
        bool found = false;
        for (unsigned long long eb = 0; eb < (1ULL << ex.size()) && !found; ++eb) {
            unsigned long long bits = base;
            for (std::size_t k = 0; k < ex.size(); ++k)
                if ((eb >> k) & 1) bits |= 1ULL << ex[k];
            found = satisfied(f, bits);
        }
        if (!found) return false;
    }
    return true;
}

// --------------------------------------------------------- clause digraphs

namespace {

// Occurrence vertices, per clause and per literal in clause order.
struct Occurrences {
    std::vector<std::vector<int>> by_clause;
    std::map<Literal, std::vector<int>> by_literal;
    std::vector<std::string> labels;
    int n = 2;
};

Occurrences occurrences(const CnfInstance& f) {
    Occurrences o;
    o.labels = {"s", "t"};
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        o.by_clause.emplace_back();
        for (auto& l : f.clauses[i]) {
            o.by_clause.back().push_back(o.n);
            o.by_literal[l].push_back(o.n);
            o.labels.push_back((l.neg ? "~" : "") + f.vars[l.var] + "@" + std::to_string(i + 1));
            ++o.n;
        }
    }
    return o;
}

}  // namespace

StDigraph build_gcl(const CnfInstance& f) {
    validate(f);
    if (f.clauses.empty()) throw std::invalid_argument("empty clause list");
    Occurrences o = occurrences(f);
    StDigraph d{Digraph(o.n), 0, 1, o.labels};
    for (int v : o.by_clause.front()) d.g.add(d.s, v);
    for (std::size_t i = 0; i + 1 < o.by_clause.size(); ++i)
        for (int u : o.by_clause[i])
            for (int v : o.by_clause[i + 1]) d.g.add(u, v);
    for (int v : o.by_clause.back()) d.g.add(v, d.t);
    return d;
}

StDigraph build_gvar(const CnfInstance& f) {
    validate(f);
    Occurrences o = occurrences(f);
    StDigraph d{Digraph(o.n), 0, 1, o.labels};
    std::vector<int> order;
    auto counts = polarity_counts(f);
    for (int v : variable_order(f)) {
        auto [p, n] = counts[v];
        if (p == 0 && n == 0) continue;
        if (p == 0 || n == 0) throw std::invalid_argument("variable " + f.vars[v] + " occurs with one polarity only");
        order.push_back(v);
    }
    if (order.empty()) {
        d.g.add(d.t, d.s);
        return d;
    }
    auto occ = [&](int v, bool neg) -> const std::vector<int>& { return o.by_literal.at(Literal{v, neg}); };
    for (auto& [l, vs] : o.by_literal)
        for (std::size_t k = 0; k + 1 < vs.size(); ++k) d.g.add(vs[k], vs[k + 1]);
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
        for (bool a : {false, true})
            for (bool b : {false, true}) d.g.add(occ(order[k], a).back(), occ(order[k + 1], b).front());
    for (bool a : {false, true}) {
        d.g.add(d.t, occ(order.front(), a).front());
        d.g.add(occ(order.back(), a).back(), d.s);
    }
    return d;
}

std::vector<int> false_occurrences(const CnfInstance& f, const std::vector<bool>& value) {
    Occurrences o = occurrences(f);
    std::vector<int> out;
    for (std::size_t i = 0; i < f.clauses.size(); ++i)
        for (std::size_t j = 0; j < f.clauses[i].size(); ++j) {
            auto& l = f.clauses[i][j];
            if (value.at(l.var) == l.neg) out.push_back(o.by_clause[i][j]);
        }
    return out;
}

std::vector<EdgePair> paired_gvar(const CnfInstance& f, const StDigraph& gvar) {
    Occurrences o = occurrences(f);
    if (o.n != gvar.g.size()) throw std::invalid_argument("digraph does not match the instance");
    std::vector<EdgePair> pairs;
    auto occ = [&](int v, bool neg) -> const std::vector<int>& { return o.by_literal.at(Literal{v, neg}); };
    for (std::size_t i = 0; i < f.universals.size(); ++i) {
        int x = f.universals[i];
        int pos = occ(x, false).front(), neg = occ(x, true).front();
        if (i == 0) {
            pairs.push_back(EdgePair{gvar.t, pos, neg});
        } else {
            int prev = f.universals[i - 1];
            for (bool b : {false, true}) pairs.push_back(EdgePair{occ(prev, b).back(), pos, neg});
        }
    }
    for (auto& p : pairs)
        if (!gvar.g.has(p.source, p.first) || !gvar.g.has(p.source, p.second))
            throw std::logic_error("paired edge missing from the variable digraph");
    return pairs;
}

// ------------------------------------------------------------ superposition

namespace {

bool acyclic(const Digraph& g, int& witness) {
    int n = g.size();
    std::vector<int> indeg(n, 0);
    for (auto [u, v] : g.edges()) ++indeg[v];
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++seen;
        for (int v = 0; v < n; ++v)
            if (g.has(u, v) && --indeg[v] == 0) stack.push_back(v);
    }
    for (int v = 0; v < n; ++v)
        if (indeg[v] > 0) {
            witness = v;
            return false;
        }
    return seen == n;
}

std::string edge_str(int u, int v, const std::vector<std::string>& labels) {
    auto name = [&](int x) { return x < static_cast<int>(labels.size()) ? labels[x] : std::to_string(x); };
    return "(" + name(u) + ", " + name(v) + ")";
}

int rank_of(int v, int s, int t) { return v - (v > s) - (v > t); }

}  // namespace

int plus_vertex(int v, int s, int t) { return 4 + 2 * rank_of(v, s, t); }
int minus_vertex(int v, int s, int t) { return 5 + 2 * rank_of(v, s, t); }

PairedRBDigraph superpose_paired(const Digraph& g1, const Digraph& g2, int s, int t,
                                 const std::vector<EdgePair>& pairs2, const std::vector<std::string>& labels) {
    int n = g1.size();
    if (g2.size() != n) throw std::invalid_argument("digraphs on different vertex sets");
    if (s < 0 || t < 0 || s >= n || t >= n || s == t) throw std::invalid_argument("bad distinguished vertices");
    for (int v = 0; v < n; ++v) {
        if (g1.has(v, s)) throw std::invalid_argument("edge into s in the first digraph: " + edge_str(v, s, labels));
        if (g1.has(t, v)) throw std::invalid_argument("edge out of t in the first digraph: " + edge_str(t, v, labels));
        if (g2.has(s, v)) throw std::invalid_argument("edge out of s in the second digraph: " + edge_str(s, v, labels));
        if (g2.has(v, t)) throw std::invalid_argument("edge into t in the second digraph: " + edge_str(v, t, labels));
    }
    for (const Digraph* g : {&g1, &g2}) {
        int w = -1;
        if (!acyclic(*g, w))
            throw std::invalid_argument("cycle through vertex " +
                                        (w < static_cast<int>(labels.size()) ? labels[w] : std::to_string(w)));
    }
    int m = 4 + 2 * (n - 2);
    PairedRBDigraph h;
    h.g.R = Digraph(m);
    h.g.mate.assign(m, -1);
    h.g.labels.assign(m, "");
    h.g.labels[0] = "s1";
    h.g.labels[1] = "s2";
    h.g.labels[2] = "t1";
    h.g.labels[3] = "t2";
    h.g.mate[0] = 1, h.g.mate[1] = 0, h.g.mate[2] = 3, h.g.mate[3] = 2;
    for (int v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        int p = plus_vertex(v, s, t), q = minus_vertex(v, s, t);
        std::string name = v < static_cast<int>(labels.size()) ? labels[v] : std::to_string(v);
        h.g.labels[p] = name + "+";
        h.g.labels[q] = name + "-";
        h.g.mate[p] = q;
        h.g.mate[q] = p;
    }
    auto first = [&](int u, int v) {
        int a = u == s ? 0 : minus_vertex(u, s, t);
        int b = v == t ? 2 : plus_vertex(v, s, t);
        return std::pair{a, b};
    };
    auto second = [&](int u, int v) {
        int a = u == t ? 3 : plus_vertex(u, s, t);
        int b = v == s ? 1 : minus_vertex(v, s, t);
        return std::pair{a, b};
    };
    for (auto [u, v] : g1.edges()) {
        auto [a, b] = first(u, v);
        h.g.R.add(a, b);
    }
    for (auto [u, v] : g2.edges()) {
        auto [a, b] = second(u, v);
        h.g.R.add(a, b);
    }
    for (auto& p : pairs2) {
        if (!g2.has(p.source, p.first) || !g2.has(p.source, p.second))
            throw std::invalid_argument("paired edge missing: " + edge_str(p.source, p.first, labels));
        auto [a, b] = second(p.source, p.first);
        h.pairs.push_back(EdgePair{a, b, second(p.source, p.second).second});
    }
    return h;
}

RBDigraph superpose(const Digraph& g1, const Digraph& g2, int s, int t, const std::vector<std::string>& labels) {
    return superpose_paired(g1, g2, s, t, {}, labels).g;
}

namespace {

PairedRBDigraph trivial_cycle() {
    Digraph g1(2), g2(2);
    g1.add(0, 1);
    g2.add(1, 0);
    return superpose_paired(g1, g2, 0, 1, {}, {"s", "t"});
}

}  // namespace

RBDigraph sat_to_rb(const CnfInstance& f) {
    CnfInstance g = normalize_polarities(f);
    if (g.clauses.empty()) return trivial_cycle().g;
    StDigraph cl = build_gcl(g), var = build_gvar(g);
    return superpose(cl.g, var.g, cl.s, cl.t, cl.labels);
}

PairedRBDigraph qbf_to_rb(const CnfInstance& f) {
    CnfInstance g = normalize_polarities(f);
    if (g.clauses.empty()) return trivial_cycle();
    StDigraph cl = build_gcl(g), var = build_gvar(g);
    return superpose_paired(cl.g, var.g, cl.s, cl.t, paired_gvar(g, var), cl.labels);
}

// ----------------------------------------------------------- proofification

void validate(const PairedRBDigraph& g) {
    validate(g.g);
    std::set<std::pair<int, int>> used;
    for (auto& p : g.pairs) {
        if (p.first == p.second) throw std::invalid_argument("pair of identical edges");
        for (int v : {p.first, p.second}) {
            if (!g.g.R.has(p.source, v)) throw std::invalid_argument("paired edge is not an R-edge");
            if (!used.insert({p.source, v}).second) throw std::invalid_argument("pairs are not disjoint");
        }
    }
}

PairedRBDigraph split_opposite_edges(const PairedRBDigraph& g) {
    validate(g);
    PairedRBDigraph h = g;
    for (std::size_t k = 0; k < h.pairs.size(); ++k) {
        for (int which = 0; which < 2; ++which) {
            int u = h.pairs[k].source, v = which ? h.pairs[k].second : h.pairs[k].first;
            if (!h.g.R.has(v, u)) continue;
            int n1 = h.g.R.add_vertex();
            int n2 = h.g.R.add_vertex();
            h.g.mate.push_back(n2);
            h.g.mate.push_back(n1);
            h.g.labels.resize(h.g.R.size());
            h.g.labels[n1] = "split" + std::to_string(n1);
            h.g.labels[n2] = "split" + std::to_string(n2);
            h.g.R.remove(v, u);
            h.g.R.add(v, n1);
            h.g.R.add(n2, u);
            for (auto& p : h.pairs) {
                if (p.source != v) continue;
                if (p.first == u) p.first = n1;
                if (p.second == u) p.second = n1;
            }
        }
    }
    return h;
}

Sequent paired_proofification(const PairedRBDigraph& input) {
    PairedRBDigraph h = split_opposite_edges(input);
    const RBDigraph& g = h.g;
    int n = g.size();
    std::vector<std::vector<Formula>> c(n);
    std::vector<Formula> leaves;
    std::map<std::pair<int, int>, int> pair_of;
    for (std::size_t k = 0; k < h.pairs.size(); ++k) {
        pair_of[{h.pairs[k].source, h.pairs[k].first}] = static_cast<int>(k);
        pair_of[{h.pairs[k].source, h.pairs[k].second}] = static_cast<int>(k);
    }
    auto name = [](int u, int v) { return "a_" + std::to_string(u) + "_" + std::to_string(v); };
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (!g.R.has(u, v)) continue;
            if (g.R.has(v, u)) {
                if (u < v) {
                    c[u].push_back(mk_atom(name(u, v)));
                    c[v].push_back(mk_atom(name(u, v), true));
                }
            } else if (!pair_of.count({u, v})) {
                c[u].push_back(mk_atom(name(u, v)));
                c[v].push_back(mk_atom(name(v, u)));
                leaves.push_back(mk_seq({mk_atom(name(u, v), true), mk_atom(name(v, u), true)}));
            }
        }
    for (std::size_t k = 0; k < h.pairs.size(); ++k) {
        auto& p = h.pairs[k];
        std::string a = "a_" + std::to_string(p.source) + "_p" + std::to_string(k);
        std::string b = "b_" + std::to_string(k);
        c[p.source].push_back(mk_atom(a));
        c[p.first].push_back(mk_atom(b));
        c[p.second].push_back(mk_atom(b));
        leaves.push_back(mk_par({mk_seq({mk_atom(a, true), mk_atom(b, true)}), mk_atom(b, true)}));
    }
    std::vector<Formula> out;
    for (int u = 0; u < n; ++u)
        if (u < g.mate[u]) out.push_back(mk_tensor({mk_par(c[u]), mk_par(c[g.mate[u]])}));
    out.insert(out.end(), leaves.begin(), leaves.end());
    return sq_flat(out);
}

Sequent proofification(const RBDigraph& g) { return paired_proofification(PairedRBDigraph{g, {}}); }

Sequent qbf_to_sequent(const CnfInstance& f) { return paired_proofification(qbf_to_rb(f)); }

long long switching_count(const PairedRBDigraph& g) {
    if (g.pairs.size() >= 62) throw std::length_error("too many pairs");
    return 1LL << g.pairs.size();
}

void for_each_switching(const PairedRBDigraph& g, const std::function<bool(const RBDigraph&)>& f) {
    validate(g);
    long long total = switching_count(g);
    for (long long b = 0; b < total; ++b) {
        RBDigraph s = g.g;
        for (std::size_t k = 0; k < g.pairs.size(); ++k) {
            auto& p = g.pairs[k];
            s.R.remove(p.source, (b >> k) & 1 ? p.first : p.second);
        }
        if (!f(s)) return;
    }
}

}  // namespace pomset
