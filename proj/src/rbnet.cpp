#include "pomset/rbnet.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace pomset {

void Budget::tick(long long n) {
    used += n;
    if (limit >= 0 && used > limit) throw BudgetExceeded();
}

void validate(const RBDigraph& g) {
    int n = g.size();
    if (static_cast<int>(g.mate.size()) != n) throw std::invalid_argument("matching does not cover the vertices");
    for (int v = 0; v < n; ++v) {
        int m = g.mate[v];
        if (m < 0 || m >= n || m == v || g.mate[m] != v) throw std::invalid_argument("not a perfect matching");
    }
}

namespace {

std::string dual_label(const std::string& l) {
    if (!l.empty() && l.back() == '\'') return l.substr(0, l.size() - 1);
    return l + "'";
}

void check_linking(const LabeledDigraph& lg, const Linking& l) {
    int n = lg.g.size();
    if (static_cast<int>(l.size()) != n) throw std::invalid_argument("linking does not cover the occurrences");
    for (int v = 0; v < n; ++v) {
        int w = l[v];
        if (w < 0 || w >= n || w == v || l[w] != v) throw std::invalid_argument("linking is not an involution");
        if (lg.labels[w] != dual_label(lg.labels[v]))
            throw std::invalid_argument("linking pairs " + lg.labels[v] + " with " + lg.labels[w]);
    }
}

int nonatomic_count(const Formula& f) {
    if (f->kind == Kind::Atom) return 0;
    if (f->kind == Kind::Unit) return 1;
    int n = static_cast<int>(f->kids.size()) - 1;
    for (auto& c : f->kids) n += nonatomic_count(c);
    return n;
}

}  // namespace

RBDigraph cographic_prenet(const Sequent& s, const Linking& l) {
    LabeledDigraph lg = tograph(s);
    check_linking(lg, l);
    return RBDigraph{lg.g, l, lg.labels};
}

TreePrenet tree_prenet(const Sequent& s, const Linking& l) {
    LabeledDigraph orig = tograph(s);
    check_linking(orig, l);
    Sequent tagged = tag_atoms(s, 0);
    Unfolding u = unfold(tagged);
    LabeledDigraph lg = tograph(u.flat);
    int n = lg.g.size();
    TreePrenet tp;
    tp.occurrence_vertex.assign(orig.g.size(), -1);
    std::map<std::string, int> fresh;
    for (int v = 0; v < n; ++v) {
        if (lg.tags[v] >= 0) tp.occurrence_vertex[lg.tags[v]] = v;
        else fresh[lg.labels[v]] = v;
    }
    std::vector<int> mate(n, -1);
    for (std::size_t i = 0; i < l.size(); ++i) mate[tp.occurrence_vertex[i]] = tp.occurrence_vertex[l[i]];
    for (auto& [label, v] : fresh) {
        auto it = fresh.find(dual_label(label));
        if (it == fresh.end()) throw std::logic_error("unpaired fresh atom " + label);
        mate[v] = it->second;
    }
    int counter = 0, tag = 0;
    for (auto& f : leaves(tagged)) {
        if (f->kind == Kind::Atom) tp.leaf_root.push_back(tp.occurrence_vertex[tag]);
        else tp.leaf_root.push_back(fresh.at("#" + std::to_string(counter)));
        counter += nonatomic_count(f);
        tag += f->size;
    }
    tp.g = RBDigraph{lg.g, std::move(mate), lg.labels};
    return tp;
}

// ------------------------------------------------------------ cycle search

namespace {

// Depth-first search over matching pairs. A cycle enters a pair at one
// vertex, crosses its matching edge, and leaves by an R-edge to the entry of
// the next pair. The start pair has the smallest pair id on the cycle.
class CycleSearch {
public:
    CycleSearch(const RBDigraph& g, Budget* b, bool chordless) : g_(g), budget_(b), chordless_(chordless) {
        validate(g);
        int n = g.size();
        out_.resize(n);
        adj_.assign(static_cast<std::size_t>(n) * n, 0);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (g.R.has(u, v)) {
                    out_[u].push_back(v);
                    adj_[static_cast<std::size_t>(u) * n + v] = adj_[static_cast<std::size_t>(v) * n + u] = 1;
                }
        on_.assign(n, 0);
    }

    std::optional<AeCycle> run() {
        int n = g_.size();
        for (int u0 = 0; u0 < n; ++u0) {
            u0_ = u0;
            p0_ = pid(u0);
            path_ = {u0, g_.mate[u0]};
            on_[u0] = on_[g_.mate[u0]] = 1;
            bool found = dfs(g_.mate[u0]);
            on_[u0] = on_[g_.mate[u0]] = 0;
            if (found) {
                AeCycle c;
                c.verts = path_;
                for (std::size_t i = 0; i < path_.size(); ++i) c.kinds.push_back(i % 2 == 0 ? 'B' : 'R');
                return c;
            }
        }
        return std::nullopt;
    }

private:
    int pid(int v) const { return std::min(v, g_.mate[v]); }
    bool adj(int u, int v) const { return adj_[static_cast<std::size_t>(u) * g_.size() + v] != 0; }

    bool dfs(int x) {
        if (budget_) budget_->tick();
        if (g_.R.has(x, u0_)) return true;
        if (chordless_ && x != g_.mate[u0_] && adj(x, u0_)) return false;
        for (int y : out_[x]) {
            if (on_[y] || pid(y) <= p0_) continue;
            int z = g_.mate[y];
            if (chordless_ && !admissible(x, y, z)) continue;
            path_.push_back(y);
            path_.push_back(z);
            on_[y] = on_[z] = 1;
            bool found = dfs(z);
            on_[y] = on_[z] = 0;
            if (found) return true;
            path_.pop_back();
            path_.pop_back();
        }
        return false;
    }

    // y may touch only the previous exit x; z may touch u0 only through the
    // closing edge z -> u0.
    bool admissible(int x, int y, int z) const {
        for (int w : path_) {
            if (w != x && adj(y, w)) return false;
            if (w != u0_ && adj(z, w)) return false;
        }
        if (adj(z, u0_) && !g_.R.has(z, u0_)) return false;
        return true;
    }

    const RBDigraph& g_;
    Budget* budget_;
    bool chordless_;
    std::vector<std::vector<int>> out_;
    std::vector<unsigned char> adj_;
    std::vector<unsigned char> on_;
    std::vector<int> path_;
    int u0_ = 0, p0_ = 0;
};

}  // namespace

std::optional<AeCycle> find_ae_cycle(const RBDigraph& g, Budget* budget) {
    return CycleSearch(g, budget, false).run();
}

std::optional<AeCycle> find_chordless_ae_cycle(const RBDigraph& g, Budget* budget) {
    return CycleSearch(g, budget, true).run();
}

bool is_ae_cycle(const RBDigraph& g, const AeCycle& c) {
    std::size_t n = c.verts.size();
    if (n < 2 || n % 2 || c.kinds.size() != n) return false;
    std::vector<int> seen(c.verts);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    for (std::size_t i = 0; i < n; ++i) {
        int u = c.verts[i], v = c.verts[(i + 1) % n];
        if (u < 0 || u >= g.size() || v < 0 || v >= g.size()) return false;
        if (c.kinds[i] == c.kinds[(i + 1) % n]) return false;
        if (c.kinds[i] == 'B' ? g.mate[u] != v : !g.R.has(u, v)) return false;
    }
    return true;
}

bool is_chordless(const RBDigraph& g, const AeCycle& c) {
    std::size_t n = c.verts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || (i + 1) % n == j || (j + 1) % n == i) continue;
            int u = c.verts[i], v = c.verts[j];
            if (g.R.has(u, v) || g.mate[u] == v) return false;
        }
    return true;
}

Correctness is_correct(const RBDigraph& g, NetMode mode, Budget* budget) {
    auto w = mode == NetMode::Cographic ? find_chordless_ae_cycle(g, budget) : find_ae_cycle(g, budget);
    return Correctness{!w.has_value(), w};
}

// ----------------------------------------------------------------- linkings

void for_each_linking(const Sequent& s, const std::function<bool(const Linking&)>& f) {
    LabeledDigraph lg = tograph(s);
    std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> byvar;
    for (int v = 0; v < lg.g.size(); ++v) {
        const std::string& l = lg.labels[v];
        bool neg = !l.empty() && l.back() == '\'';
        auto& e = byvar[neg ? l.substr(0, l.size() - 1) : l];
        (neg ? e.second : e.first).push_back(v);
    }
    std::vector<std::pair<std::vector<int>, std::vector<int>>> groups;
    for (auto& [v, e] : byvar) {
        if (e.first.size() != e.second.size()) return;
        groups.push_back(e);
    }
    Linking l(lg.g.size(), -1);
    std::function<bool(std::size_t)> rec = [&](std::size_t gi) {
        if (gi == groups.size()) return f(l);
        auto& [pos, neg] = groups[gi];
        std::vector<int> perm(neg.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (std::size_t i = 0; i < pos.size(); ++i) {
                l[pos[i]] = neg[perm[i]];
                l[neg[perm[i]]] = pos[i];
            }
            if (!rec(gi + 1)) return false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return true;
    };
    rec(0);
}

std::vector<Linking> enumerate_linkings(const Sequent& s) {
    std::vector<Linking> out;
    for_each_linking(s, [&](const Linking& l) {
        out.push_back(l);
        return true;
    });
    return out;
}

long long count_linkings(const Sequent& s) {
    long long total = 1;
    for (auto& [v, c] : polarity_counts(sequent_to_formula(s))) {
        if (c.first != c.second) return 0;
        for (int i = 2; i <= c.first; ++i) total *= i;
    }
    return total;
}

namespace {

nlohmann::json cycle_json(const AeCycle& c) {
    return nlohmann::json{{"vertices", c.verts}, {"kinds", std::string(c.kinds.begin(), c.kinds.end())}};
}

nlohmann::json pairs_json(const Linking& l) {
    auto j = nlohmann::json::array();
    for (std::size_t v = 0; v < l.size(); ++v)
        if (static_cast<int>(v) < l[v]) j.push_back({v, l[v]});
    return j;
}

}  // namespace

PomsetResult pomset_provable(const Sequent& s, Budget* budget) {
    PomsetResult r;
    nlohmann::json refutations = nlohmann::json::array();
    for_each_linking(s, [&](const Linking& l) {
        ++r.linkings_tried;
        RBDigraph g = cographic_prenet(s, l);
        auto c = find_chordless_ae_cycle(g, budget);
        if (!c) {
            r.provable = true;
            r.linking = l;
            return false;
        }
        refutations.push_back({{"linking", pairs_json(l)}, {"cycle", cycle_json(*c)}});
        return true;
    });
    nlohmann::json cert;
    cert["sequent"] = print(s);
    cert["provable"] = r.provable;
    if (r.provable) {
        cert["linking"] = pairs_json(r.linking);
        cert["claim"] = "no chordless ae-cycle";
    } else {
        cert["refutations"] = refutations;
    }
    r.certificate = cert.dump();
    return r;
}

bool check_pomset_certificate(const Sequent& s, const std::string& certificate) {
    auto cert = nlohmann::json::parse(certificate);
    if (cert.at("sequent").get<std::string>() != print(s)) return false;
    int n = tograph(s).g.size();
    auto read_linking = [&](const nlohmann::json& j) {
        Linking l(n, -1);
        for (auto& p : j) {
            int u = p.at(0).get<int>(), v = p.at(1).get<int>();
            if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("vertex out of range");
            l[u] = v;
            l[v] = u;
        }
        return l;
    };
    if (cert.at("provable").get<bool>()) {
        RBDigraph g = cographic_prenet(s, read_linking(cert.at("linking")));
        return !find_chordless_ae_cycle(g).has_value();
    }
    // Every linking must be refuted by a checkable chordless cycle.
    std::map<Linking, AeCycle> refuted;
    for (auto& r : cert.at("refutations")) {
        AeCycle c;
        c.verts = r.at("cycle").at("vertices").get<std::vector<int>>();
        std::string k = r.at("cycle").at("kinds").get<std::string>();
        c.kinds.assign(k.begin(), k.end());
        refuted[read_linking(r.at("linking"))] = c;
    }
    bool ok = true;
    for_each_linking(s, [&](const Linking& l) {
        auto it = refuted.find(l);
        if (it == refuted.end()) return ok = false;
        RBDigraph g = cographic_prenet(s, l);
        return ok = is_ae_cycle(g, it->second) && is_chordless(g, it->second);
    });
    return ok;
}

bool ae_path_exists(const RBDigraph& g, int from, int to, Budget* budget) {
    int n = g.size();
    if (from < 0 || to < 0 || from >= n || to >= n) throw std::out_of_range("unknown vertex");
    if (from == to) return false;
    std::vector<unsigned char> on(n, 0);
    std::function<bool(int, bool)> rec = [&](int v, bool next_b) -> bool {
        if (budget) budget->tick();
        if (next_b) {
            int w = g.mate[v];
            if (w == to) return true;
            if (on[w]) return false;
            on[w] = 1;
            bool r = rec(w, false);
            on[w] = 0;
            return r;
        }
        for (int w = 0; w < n; ++w) {
            if (!g.R.has(v, w)) continue;
            if (w == to) return true;
            if (on[w]) continue;
            on[w] = 1;
            bool r = rec(w, true);
            on[w] = 0;
            if (r) return true;
        }
        return false;
    };
    on[from] = 1;
    return rec(from, true) || rec(from, false);
}

// ------------------------------------------------------------------- export

std::string to_dot(const RBDigraph& g) {
    std::ostringstream os;
    os << "digraph RB {\n";
    for (int v = 0; v < g.size(); ++v)
        os << "  v" << v << " [label=\"" << (v < static_cast<int>(g.labels.size()) ? g.labels[v] : std::to_string(v))
           << "\"];\n";
    for (int v = 0; v < g.size(); ++v)
        if (v < g.mate[v]) os << "  v" << v << " -> v" << g.mate[v] << " [dir=none, penwidth=3, color=blue];\n";
    for (auto [u, v] : g.R.edges()) {
        if (g.R.has(v, u)) {
            if (u < v) os << "  v" << u << " -> v" << v << " [dir=none];\n";
        } else {
            os << "  v" << u << " -> v" << v << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string to_json(const RBDigraph& g) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < g.size(); ++v)
        j["vertices"].push_back(
            {{"id", v}, {"label", v < static_cast<int>(g.labels.size()) ? g.labels[v] : std::to_string(v)}});
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : g.R.edges()) j["edges"].push_back({u, v});
    j["matching"] = nlohmann::json::array();
    for (int v = 0; v < g.size(); ++v)
        if (v < g.mate[v]) j["matching"].push_back({v, g.mate[v]});
    return j.dump();
}

RBDigraph rb_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    LabeledDigraph lg = labeled_from_json(text);
    RBDigraph g{lg.g, std::vector<int>(lg.g.size(), -1), lg.labels};
    for (auto& e : j.at("matching")) {
        int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        if (u < 0 || v < 0 || u >= g.size() || v >= g.size()) throw std::invalid_argument("vertex out of range");
        g.mate[u] = v;
        g.mate[v] = u;
    }
    validate(g);
    return g;
}

std::string cycle_str(const RBDigraph& g, const AeCycle& c) {
    std::string s;
    for (std::size_t i = 0; i < c.verts.size(); ++i) {
        int v = c.verts[i];
        s += (v < static_cast<int>(g.labels.size()) ? g.labels[v] : std::to_string(v)) + "#" + std::to_string(v);
        s += c.kinds[i] == 'B' ? " =B= " : " -R-> ";
    }
    if (!c.verts.empty()) s += std::to_string(c.verts[0]);
    return s;
}

}  // namespace pomset
