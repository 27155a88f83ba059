#include "pomset/dicograph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace pomset {

std::size_t Digraph::idx(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("vertex out of range");
    return static_cast<std::size_t>(u) * n_ + v;
}

void Digraph::add(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    adj_[idx(u, v)] = 1;
}

int Digraph::add_vertex() {
    std::vector<unsigned char> a(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0);
    for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v) a[static_cast<std::size_t>(u) * (n_ + 1) + v] = adj_[idx(u, v)];
    adj_ = std::move(a);
    return n_++;
}

std::vector<std::pair<int, int>> Digraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
            if (has(u, v)) out.emplace_back(u, v);
    return out;
}

int Digraph::edge_count() const {
    return static_cast<int>(std::count(adj_.begin(), adj_.end(), 1));
}

Digraph Digraph::reversed() const {
    Digraph r(n_);
    for (auto [u, v] : edges()) r.add(v, u);
    return r;
}

RelationView relations(const Digraph& g) {
    int n = g.size();
    RelationView r{Digraph(n), Digraph(n), Digraph(n), Digraph(n)};
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            bool f = g.has(u, v), b = g.has(v, u);
            if (f && b) r.T.add(u, v);
            else if (f) r.S.add(u, v);
            else if (b) r.Z.add(u, v);
            else r.P.add(u, v);
        }
    return r;
}

// ------------------------------------------------------------ translation

namespace {

// Adds the edges of a formula whose atoms occupy vertices [base, base+size).
void formula_edges(const Formula& a, int base, Digraph& g) {
    if (a->kind == Kind::Atom || a->kind == Kind::Unit) return;
    int off = base;
    std::vector<std::pair<int, int>> ranges;
    for (auto& c : a->kids) {
        ranges.emplace_back(off, off + c->size);
        formula_edges(c, off, g);
        off += c->size;
    }
    if (a->kind == Kind::Par) return;
    for (std::size_t i = 0; i < ranges.size(); ++i)
        for (std::size_t j = i + 1; j < ranges.size(); ++j)
            for (int u = ranges[i].first; u < ranges[i].second; ++u)
                for (int v = ranges[j].first; v < ranges[j].second; ++v) {
                    g.add(u, v);
                    if (a->kind == Kind::Tensor) g.add(v, u);
                }
}

int sequent_size(const Sequent& s) {
    if (s->kind == SKind::Leaf) return s->leaf->size;
    int n = 0;
    for (auto& c : s->kids) n += sequent_size(c);
    return n;
}

// Vertex weight of a sequent node: atoms, or one per leaf.
void sequent_edges(const Sequent& s, int base, Digraph& g, bool per_leaf) {
    if (s->kind == SKind::Empty) return;
    if (s->kind == SKind::Leaf) {
        if (!per_leaf) formula_edges(s->leaf, base, g);
        return;
    }
    auto weight = [&](const Sequent& x) {
        return per_leaf ? static_cast<int>(leaves(x).size()) : sequent_size(x);
    };
    int off = base;
    std::vector<std::pair<int, int>> ranges;
    for (auto& c : s->kids) {
        int w = weight(c);
        ranges.emplace_back(off, off + w);
        sequent_edges(c, off, g, per_leaf);
        off += w;
    }
    if (s->kind != SKind::SeqList) return;
    for (std::size_t i = 0; i < ranges.size(); ++i)
        for (std::size_t j = i + 1; j < ranges.size(); ++j)
            for (int u = ranges[i].first; u < ranges[i].second; ++u)
                for (int v = ranges[j].first; v < ranges[j].second; ++v) g.add(u, v);
}

}  // namespace

LabeledDigraph tograph(const Formula& a) {
    LabeledDigraph out{Digraph(a->size), {}, {}};
    for (auto& l : atom_leaves(a)) {
        out.labels.push_back(l->key);
        out.tags.push_back(l->tag);
    }
    formula_edges(a, 0, out.g);
    return out;
}

LabeledDigraph tograph(const Sequent& s) {
    LabeledDigraph out{Digraph(sequent_size(s)), {}, {}};
    for (auto& f : leaves(s))
        for (auto& l : atom_leaves(f)) {
            out.labels.push_back(l->key);
            out.tags.push_back(l->tag);
        }
    sequent_edges(s, 0, out.g, false);
    return out;
}

Digraph leaf_order(const Sequent& s) {
    Digraph g(static_cast<int>(leaves(s).size()));
    sequent_edges(s, 0, g, true);
    return g;
}

// ------------------------------------------------------------ recognition

DicographCheck check_dicograph(const Digraph& g) {
    int n = g.size();
    RelationView r = relations(g);
    auto t = [&](int u, int v) { return r.T.has(u, v); };
    auto s = [&](int u, int v) { return r.S.has(u, v); };
    auto sz = [&](int u, int v) { return r.S.has(u, v) || r.S.has(v, u); };

    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
            if (c == b || !t(b, c)) continue;
            for (int a = 0; a < n; ++a) {
                if (a == b || a == c || !t(a, b) || t(a, c)) continue;
                for (int d = a + 1; d < n; ++d) {
                    if (d == b || d == c || !t(c, d) || t(b, d) || t(a, d)) continue;
                    return {false, "P4", {a, b, c, d}};
                }
            }
        }
    for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) {
            if (b == c || !s(c, b)) continue;
            for (int a = 0; a < n; ++a) {
                if (a == b || a == c || !s(a, b) || sz(a, c)) continue;
                for (int d = 0; d < n; ++d) {
                    if (d == a || d == b || d == c || !s(c, d)) continue;
                    if (sz(a, d) || sz(b, d)) continue;
                    return {false, "N", {a, b, c, d}};
                }
            }
        }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            for (int w = 0; w < n; ++w) {
                if (w == u || w == v) continue;
                bool lhs = (s(u, v) && g.has(v, w)) || (g.has(u, v) && s(v, w));
                if (lhs && !g.has(u, w)) return {false, "weak transitivity", {u, v, w}};
            }
        }
    return {};
}

bool is_sp_order(const Digraph& g) {
    return relations(g).T.edge_count() == 0 && is_dicograph(g);
}

namespace {

// Connected components of the undirected graph given by `linked`.
std::vector<std::vector<int>> components(const std::vector<int>& vs,
                                         const std::function<bool(int, int)>& linked) {
    std::vector<int> comp(vs.size(), -1);
    int k = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (comp[i] >= 0) continue;
        std::vector<std::size_t> stack{i};
        comp[i] = k;
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t y = 0; y < vs.size(); ++y)
                if (comp[y] < 0 && linked(vs[x], vs[y])) {
                    comp[y] = k;
                    stack.push_back(y);
                }
        }
        ++k;
    }
    std::vector<std::vector<int>> out(k);
    for (std::size_t i = 0; i < vs.size(); ++i) out[comp[i]].push_back(vs[i]);
    return out;
}

Formula decompose(const LabeledDigraph& lg, const std::vector<int>& vs) {
    const Digraph& g = lg.g;
    if (vs.size() == 1) {
        Formula a = parse_formula(lg.labels[vs[0]]);
        if (!is_atom(a)) throw std::invalid_argument("label is not an atom: " + lg.labels[vs[0]]);
        return mk_atom(a->var, a->neg, lg.tags.empty() ? -1 : lg.tags[vs[0]]);
    }
    auto recurse = [&](Kind k, const std::vector<std::vector<int>>& parts) {
        std::vector<Formula> kids;
        for (auto& p : parts) kids.push_back(decompose(lg, p));
        return mk_node(k, std::move(kids));
    };
    auto par = components(vs, [&](int u, int v) { return g.has(u, v) || g.has(v, u); });
    if (par.size() > 1) return recurse(Kind::Par, par);
    auto ten = components(vs, [&](int u, int v) { return !(g.has(u, v) && g.has(v, u)); });
    if (ten.size() > 1) return recurse(Kind::Tensor, ten);
    // Seq blocks: u and v share a block unless one strictly precedes the other
    // in every pair, so take components of "not one-way".
    auto oneway = [&](int u, int v) { return g.has(u, v) && !g.has(v, u); };
    auto blocks = components(vs, [&](int u, int v) { return !oneway(u, v) && !oneway(v, u); });
    if (blocks.size() > 1) {
        std::stable_sort(blocks.begin(), blocks.end(), [&](const std::vector<int>& x, const std::vector<int>& y) {
            return oneway(x[0], y[0]);
        });
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (std::size_t j = i + 1; j < blocks.size(); ++j)
                for (int u : blocks[i])
                    for (int v : blocks[j])
                        if (!oneway(u, v)) throw NotADicograph(check_dicograph(g));
        return recurse(Kind::Seq, blocks);
    }
    DicographCheck c = check_dicograph(g);
    if (c.ok) c = {false, "prime module", vs};
    throw NotADicograph(c);
}

}  // namespace

Formula graph_to_formula(const LabeledDigraph& g) {
    if (g.g.size() == 0) return mk_unit();
    if (static_cast<int>(g.labels.size()) != g.g.size()) throw std::invalid_argument("label count mismatch");
    std::vector<int> vs(g.g.size());
    std::iota(vs.begin(), vs.end(), 0);
    return decompose(g, vs);
}

Digraph induced(const Digraph& g, const std::vector<int>& keep) {
    Digraph h(static_cast<int>(keep.size()));
    for (int v : keep)
        if (v < 0 || v >= g.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (i != j && g.has(keep[i], keep[j])) h.add(static_cast<int>(i), static_cast<int>(j));
    return h;
}

LabeledDigraph induced(const LabeledDigraph& g, const std::vector<int>& keep) {
    LabeledDigraph h{induced(g.g, keep), {}, {}};
    for (int v : keep) {
        h.labels.push_back(g.labels[v]);
        h.tags.push_back(g.tags.empty() ? -1 : g.tags[v]);
    }
    return h;
}

std::vector<int> identify_by_label(const LabeledDigraph& a, const LabeledDigraph& b) {
    if (a.g.size() != b.g.size()) throw std::invalid_argument("occurrence sets differ in size");
    std::vector<int> ident(b.g.size(), -1);
    std::vector<bool> used(a.g.size(), false);
    for (int i = 0; i < b.g.size(); ++i) {
        for (int j = 0; j < a.g.size(); ++j)
            if (!used[j] && a.labels[j] == b.labels[i]) {
                ident[i] = j;
                used[j] = true;
                break;
            }
        if (ident[i] < 0) throw std::invalid_argument("no occurrence labelled " + b.labels[i]);
    }
    return ident;
}

bool edge_inclusion(const Formula& a, const Formula& b, const std::vector<int>& ident) {
    LabeledDigraph ga = tograph(a), gb = tograph(b);
    if (ga.g.size() != gb.g.size() || static_cast<int>(ident.size()) != gb.g.size())
        throw std::invalid_argument("occurrence sets differ in size");
    for (int i = 0; i < gb.g.size(); ++i)
        if (ga.labels.at(ident[i]) != gb.labels[i]) throw std::invalid_argument("bijection not label-preserving");
    for (auto [u, v] : gb.g.edges())
        if (!ga.g.has(ident[u], ident[v])) return false;
    return true;
}

bool edge_inclusion(const Formula& a, const Formula& b) {
    return edge_inclusion(a, b, identify_by_label(tograph(a), tograph(b)));
}

std::optional<std::vector<int>> graph_iso(const LabeledDigraph& g, const LabeledDigraph& h) {
    int n = g.g.size();
    if (n != h.g.size() || g.g.edge_count() != h.g.edge_count()) return std::nullopt;
    auto degs = [](const Digraph& d, int v) {
        int in = 0, out = 0;
        for (int u = 0; u < d.size(); ++u) {
            in += d.has(u, v);
            out += d.has(v, u);
        }
        return std::pair{in, out};
    };
    std::vector<std::pair<int, int>> dg(n), dh(n);
    for (int v = 0; v < n; ++v) {
        dg[v] = degs(g.g, v);
        dh[v] = degs(h.g, v);
    }
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    std::function<bool(int)> rec = [&](int i) {
        if (i == n) return true;
        for (int j = 0; j < n; ++j) {
            if (used[j] || g.labels[i] != h.labels[j] || dg[i] != dh[j]) continue;
            bool ok = true;
            for (int k = 0; k < i && ok; ++k)
                ok = g.g.has(i, k) == h.g.has(j, map[k]) && g.g.has(k, i) == h.g.has(map[k], j);
            if (!ok) continue;
            map[i] = j;
            used[j] = true;
            if (rec(i + 1)) return true;
            used[j] = false;
        }
        map[i] = -1;
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return map;
}

// ------------------------------------------------------------------- export

std::string to_dot(const LabeledDigraph& g) {
    std::ostringstream os;
    os << "digraph G {\n";
    for (int v = 0; v < g.g.size(); ++v) os << "  v" << v << " [label=\"" << g.labels[v] << "\"];\n";
    for (auto [u, v] : g.g.edges()) {
        if (g.g.has(v, u)) {
            if (u < v) os << "  v" << u << " -> v" << v << " [dir=none];\n";
        } else {
            os << "  v" << u << " -> v" << v << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string to_json(const LabeledDigraph& g) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < g.g.size(); ++v) j["vertices"].push_back({{"id", v}, {"label", g.labels[v]}});
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : g.g.edges()) j["edges"].push_back({u, v});
    return j.dump();
}

LabeledDigraph labeled_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int n = static_cast<int>(j.at("vertices").size());
    LabeledDigraph g{Digraph(n), std::vector<std::string>(n), std::vector<int>(n, -1)};
    for (auto& v : j.at("vertices")) {
        int id = v.at("id").get<int>();
        if (id < 0 || id >= n) throw std::invalid_argument("vertex id out of range");
        g.labels[id] = v.value("label", std::to_string(id));
    }
    for (auto& e : j.at("edges")) g.g.add(e.at(0).get<int>(), e.at(1).get<int>());
    return g;
}

}  // namespace pomset
