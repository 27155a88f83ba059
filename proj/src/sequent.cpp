#include "pomset/sequent.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace pomset {

namespace {

const std::vector<std::pair<SequentRule, const char*>> kRuleNames = {
    {SequentRule::Axiom, "axiom"},         {SequentRule::Dimix, "dimix"},
    {SequentRule::Entropy, "entropy"},     {SequentRule::Cut, "cut"},
    {SequentRule::ParIntro, "par_intro"},  {SequentRule::SeqIntro, "seq_intro"},
    {SequentRule::TensorIntro, "tensor_intro"},
    {SequentRule::SlvAxiom, "slv_axiom"},  {SequentRule::SlvMix, "slv_mix"},
    {SequentRule::SlvTensor, "slv_tensor"}, {SequentRule::SlvPar, "slv_par"},
    {SequentRule::SlvSeq, "slv_seq"},
};

SequentProof node(SequentRule r, Sequent c, std::vector<SequentProof> kids = {}) {
    return SequentProof{r, std::move(c), std::move(kids)};
}

Sequent leaf2(const Formula& a, const Formula& b) { return sq_par({sq_leaf(a), sq_leaf(b)}); }

// Kids of the top-level par list; a lone leaf or seq list is its own kid.
std::vector<Sequent> top_kids(const Sequent& s) {
    if (s->kind == SKind::ParList) return s->kids;
    if (s->kind == SKind::Empty) return {};
    return {s};
}

// Replaces the leaf with left-to-right index `idx`.
Sequent replace_leaf(const Sequent& s, int idx, const Sequent& sub) {
    int counter = 0;
    std::function<Sequent(const Sequent&)> rec = [&](const Sequent& x) -> Sequent {
        if (x->kind == SKind::Leaf) return counter++ == idx ? sub : x;
        if (x->kind == SKind::Empty) return x;
        std::vector<Sequent> kids;
        for (auto& c : x->kids) kids.push_back(rec(c));
        return sq_node(x->kind, std::move(kids));
    };
    return rec(s);
}

// The sequent induced on the leaves with keep[i] set.
Sequent restrict_leaves(const Sequent& s, const std::vector<bool>& keep) {
    int counter = 0;
    std::function<Sequent(const Sequent&)> rec = [&](const Sequent& x) -> Sequent {
        if (x->kind == SKind::Leaf) return keep[counter++] ? x : sq_empty();
        if (x->kind == SKind::Empty) return x;
        std::vector<Sequent> kids;
        for (auto& c : x->kids) kids.push_back(rec(c));
        return sq_node(x->kind, std::move(kids));
    };
    return rec(s);
}

std::vector<std::string> sorted_keys(const std::vector<Formula>& fs) {
    std::vector<std::string> out;
    for (auto& f : fs) out.push_back(f->key);
    std::sort(out.begin(), out.end());
    return out;
}

// Unordered splits of the kids of an n-ary par or tensor into two groups.
template <class F>
void for_each_split(const Formula& f, Kind k, F&& visit) {
    int n = static_cast<int>(f->kids.size());
    for (unsigned m = 1; m + 1 < (1u << n); m += 2) {
        std::vector<Formula> a, b;
        for (int i = 0; i < n; ++i) ((m >> i) & 1 ? a : b).push_back(f->kids[i]);
        if (visit(mk_node(k, a), mk_node(k, b))) return;
    }
}

// Cuts of the kids of a seq into a nonempty prefix and suffix.
template <class F>
void for_each_cut(const Formula& f, F&& visit) {
    std::size_t n = f->kids.size();
    for (std::size_t p = 1; p < n; ++p) {
        std::vector<Formula> a(f->kids.begin(), f->kids.begin() + static_cast<long>(p));
        std::vector<Formula> b(f->kids.begin() + static_cast<long>(p), f->kids.end());
        if (visit(mk_seq(a), mk_seq(b))) return;
    }
}

// ------------------------------------------------------------ rule checks

std::string check_intro(const SequentProof& p, Kind k) {
    if (p.children.size() != 1) return "expects one premise";
    const Sequent& prem = p.children[0].conclusion;
    auto ls = leaves(p.conclusion);
    bool found = false;
    for (std::size_t i = 0; i < ls.size() && !found; ++i) {
        if (ls[i]->kind != k) continue;
        auto visit = [&](const Formula& a, const Formula& b) {
            Sequent inner = k == Kind::Seq ? sq_seq({sq_leaf(a), sq_leaf(b)}) : sq_par({sq_leaf(a), sq_leaf(b)});
            found = same(replace_leaf(p.conclusion, static_cast<int>(i), inner), prem);
            return found;
        };
        if (k == Kind::Seq) for_each_cut(ls[i], visit);
        else for_each_split(ls[i], k, visit);
    }
    return found ? "" : "premise does not match";
}

// [G, A] and [D, B] with A and B top-level leaves; `combine` builds the
// principal formula or returns null when A and B do not fit.
std::string check_binary(const SequentProof& p,
                         const std::function<std::optional<Formula>(const Formula&, const Formula&)>& combine) {
    if (p.children.size() != 2) return "expects two premises";
    auto t1 = top_kids(p.children[0].conclusion), t2 = top_kids(p.children[1].conclusion);
    for (std::size_t i = 0; i < t1.size(); ++i) {
        if (t1[i]->kind != SKind::Leaf) continue;
        for (std::size_t j = 0; j < t2.size(); ++j) {
            if (t2[j]->kind != SKind::Leaf) continue;
            auto principal = combine(t1[i]->leaf, t2[j]->leaf);
            if (!principal) continue;
            std::vector<Sequent> rest;
            for (std::size_t x = 0; x < t1.size(); ++x)
                if (x != i) rest.push_back(t1[x]);
            for (std::size_t y = 0; y < t2.size(); ++y)
                if (y != j) rest.push_back(t2[y]);
            if (*principal) rest.push_back(sq_leaf(*principal));
            if (same(sq_par(rest), p.conclusion)) return "";
        }
    }
    return "premises do not match";
}

std::string check_node(const SequentProof& p, bool allow_cut) {
    const Sequent& c = p.conclusion;
    switch (p.rule) {
        case SequentRule::Axiom: {
            if (!p.children.empty()) return "axiom with premises";
            if (c->kind != SKind::ParList || c->kids.size() != 2) return "not an axiom";
            auto& x = c->kids[0];
            auto& y = c->kids[1];
            if (x->kind != SKind::Leaf || y->kind != SKind::Leaf || !is_atom(x->leaf) ||
                !same(negate(x->leaf), y->leaf))
                return "not an axiom";
            return "";
        }
        case SequentRule::Dimix:
            if (p.children.size() != 2) return "expects two premises";
            return same(sq_seq({p.children[0].conclusion, p.children[1].conclusion}), c) ? "" : "premises do not match";
        case SequentRule::Entropy:
            if (p.children.size() != 1) return "expects one premise";
            try {
                return entropy_valid(c, p.children[0].conclusion) ? "" : "order not contained";
            } catch (const std::invalid_argument& e) {
                return e.what();
            }
        case SequentRule::Cut:
            if (!allow_cut) return "cut not allowed";
            return check_binary(p, [](const Formula& a, const Formula& b) -> std::optional<Formula> {
                if (!same(negate(a), b)) return std::nullopt;
                return Formula{};
            });
        case SequentRule::ParIntro: return check_intro(p, Kind::Par);
        case SequentRule::SeqIntro: return check_intro(p, Kind::Seq);
        case SequentRule::TensorIntro:
            return check_binary(p, [](const Formula& a, const Formula& b) -> std::optional<Formula> {
                return mk_tensor({a, b});
            });
        default: return "not a rule of this calculus";
    }
}

SequentCheck check_rec(const SequentProof& p, bool allow_cut, std::vector<int>& path) {
    std::string why = check_node(p, allow_cut);
    if (!why.empty()) return SequentCheck{false, path, rule_name(p.rule) + ": " + why};
    for (std::size_t i = 0; i < p.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        SequentCheck r = check_rec(p.children[i], allow_cut, path);
        if (!r.ok) return r;
        path.pop_back();
    }
    return {};
}

// -------------------------------------------------------------- search

bool counts_balanced(const std::map<std::string, std::pair<int, int>>& m) {
    for (auto& [v, pn] : m)
        if (pn.first != pn.second) return false;
    return true;
}

void add_counts(std::map<std::string, std::pair<int, int>>& into, const std::map<std::string, std::pair<int, int>>& m) {
    for (auto& [v, pn] : m) {
        into[v].first += pn.first;
        into[v].second += pn.second;
    }
}

std::map<std::string, std::pair<int, int>> counts_of(const Sequent& s) {
    std::map<std::string, std::pair<int, int>> out;
    for (auto& f : leaves(s)) add_counts(out, polarity_counts(f));
    return out;
}

class RetoreSearch {
public:
    explicit RetoreSearch(Budget* b) : budget_(b) {}

    std::optional<SequentProof> run(const Sequent& s) {
        auto it = memo_.find(s->key);
        if (it != memo_.end()) return it->second;
        if (budget_) budget_->tick();
        std::optional<SequentProof> r = expand(s);
        memo_.emplace(s->key, r);
        return r;
    }

private:
    std::optional<SequentProof> expand(const Sequent& s) {
        if (s->kind == SKind::Empty || !counts_balanced(counts_of(s))) return std::nullopt;
        for (auto& f : leaves(s))
            if (has_unit(f)) return std::nullopt;

        if (check_node(node(SequentRule::Axiom, s), false).empty()) return node(SequentRule::Axiom, s);

        auto ls = leaves(s);
        std::optional<SequentProof> found;
        for (std::size_t i = 0; i < ls.size() && !found; ++i) {
            Kind k = ls[i]->kind;
            if (k != Kind::Par && k != Kind::Seq) continue;
            auto visit = [&](const Formula& a, const Formula& b) {
                Sequent inner = k == Kind::Seq ? sq_seq({sq_leaf(a), sq_leaf(b)}) : sq_par({sq_leaf(a), sq_leaf(b)});
                if (auto sub = run(replace_leaf(s, static_cast<int>(i), inner)))
                    found = node(k == Kind::Seq ? SequentRule::SeqIntro : SequentRule::ParIntro, s, {*sub});
                return found.has_value();
            };
            if (k == Kind::Seq) for_each_cut(ls[i], visit);
            else for_each_split(ls[i], Kind::Par, visit);
        }
        if (found) return found;
        if ((found = tensor(s))) return found;
        return dimix(s);
    }

    std::optional<SequentProof> tensor(const Sequent& s) {
        auto top = top_kids(s);
        std::vector<std::map<std::string, std::pair<int, int>>> counts;
        for (auto& t : top) counts.push_back(counts_of(t));
        std::optional<SequentProof> found;
        for (std::size_t i = 0; i < top.size() && !found; ++i) {
            if (top[i]->kind != SKind::Leaf || top[i]->leaf->kind != Kind::Tensor) continue;
            std::vector<std::size_t> others;
            for (std::size_t j = 0; j < top.size(); ++j)
                if (j != i) others.push_back(j);
            for_each_split(top[i]->leaf, Kind::Tensor, [&](const Formula& a, const Formula& b) {
                auto ca = polarity_counts(a), cb = polarity_counts(b);
                for (unsigned m = 0; m < (1u << others.size()) && !found; ++m) {
                    if (budget_) budget_->tick();
                    std::vector<Sequent> g{sq_leaf(a)}, d{sq_leaf(b)};
                    auto cg = ca, cd = cb;
                    for (std::size_t x = 0; x < others.size(); ++x) {
                        bool left = (m >> x) & 1;
                        (left ? g : d).push_back(top[others[x]]);
                        add_counts(left ? cg : cd, counts[others[x]]);
                    }
                    if (!counts_balanced(cg) || !counts_balanced(cd)) continue;
                    auto p1 = run(sq_par(g));
                    if (!p1) continue;
                    auto p2 = run(sq_par(d));
                    if (p2) found = node(SequentRule::TensorIntro, s, {*p1, *p2});
                }
                return found.has_value();
            });
        }
        return found;
    }

    // Dimix below an entropy: splits the leaves into X then Y when no order
    // edge goes from Y back to X.
    std::optional<SequentProof> dimix(const Sequent& s) {
        auto ls = leaves(s);
        int n = static_cast<int>(ls.size());
        if (n < 2) return std::nullopt;
        Digraph order = leaf_order(s);
        std::vector<std::map<std::string, std::pair<int, int>>> counts;
        for (auto& f : ls) counts.push_back(polarity_counts(f));
        for (unsigned m = 1; m + 1 < (1u << n); ++m) {
            if (budget_) budget_->tick();
            bool ok = true;
            for (int u = 0; u < n && ok; ++u)
                for (int v = 0; v < n && ok; ++v)
                    if (!((m >> u) & 1) && ((m >> v) & 1) && order.has(u, v)) ok = false;
            if (!ok) continue;
            std::map<std::string, std::pair<int, int>> cx, cy;
            std::vector<bool> keep(n);
            for (int v = 0; v < n; ++v) {
                keep[v] = (m >> v) & 1;
                add_counts(keep[v] ? cx : cy, counts[v]);
            }
            if (!counts_balanced(cx) || !counts_balanced(cy)) continue;
            Sequent x = restrict_leaves(s, keep);
            keep.flip();
            Sequent y = restrict_leaves(s, keep);
            auto p1 = run(x);
            if (!p1) continue;
            auto p2 = run(y);
            if (!p2) continue;
            SequentProof d = node(SequentRule::Dimix, sq_seq({x, y}), {*p1, *p2});
            if (same(d.conclusion, s)) return d;
            return node(SequentRule::Entropy, s, {d});
        }
        return std::nullopt;
    }

    Budget* budget_;
    std::unordered_map<std::string, std::optional<SequentProof>> memo_;
};

// ------------------------------------------------------- translation

SequentProof par_of(const Formula& a, const Formula& b, const Formula& rest, SequentProof below) {
    return node(SequentRule::ParIntro, leaf2(mk_par({a, b}), rest), {std::move(below)});
}

// [a', a] into [X', Y] gives [(a * X)', a * Y] and the like. `pi` proves
// [x', y].
SequentProof wrap(Kind k, bool left, const Formula& a, const Formula& x, const Formula& y, SequentProof pi) {
    Formula na = negate(a), nx = negate(x);
    SequentProof id = identity_proof(a);
    if (k == Kind::Par) {
        SequentProof t = node(SequentRule::TensorIntro, sq_par({sq_leaf(a), sq_leaf(y), sq_leaf(mk_tensor({na, nx}))}),
                              {std::move(id), std::move(pi)});
        return par_of(a, y, mk_tensor({na, nx}), std::move(t));
    }
    if (k == Kind::Tensor) {
        SequentProof t = node(SequentRule::TensorIntro, sq_par({sq_leaf(na), sq_leaf(nx), sq_leaf(mk_tensor({a, y}))}),
                              {std::move(id), std::move(pi)});
        return par_of(na, nx, mk_tensor({a, y}), std::move(t));
    }
    // Seq: a on the left or on the right of the hole.
    auto ordered = [&](const Formula& p, const Formula& q) {
        return left ? std::vector<Formula>{p, q} : std::vector<Formula>{q, p};
    };
    Sequent idc = id.conclusion, pic = pi.conclusion;
    SequentProof d = left ? node(SequentRule::Dimix, sq_seq({idc, pic}), {std::move(id), std::move(pi)})
                          : node(SequentRule::Dimix, sq_seq({pic, idc}), {std::move(pi), std::move(id)});
    auto lo = ordered(na, nx), hi = ordered(a, y);
    SequentProof e = node(SequentRule::Entropy,
                          sq_par({sq_seq({sq_leaf(lo[0]), sq_leaf(lo[1])}), sq_seq({sq_leaf(hi[0]), sq_leaf(hi[1])})}),
                          {std::move(d)});
    SequentProof s1 = node(SequentRule::SeqIntro,
                           sq_par({sq_leaf(mk_seq(lo)), sq_seq({sq_leaf(hi[0]), sq_leaf(hi[1])})}), {std::move(e)});
    return node(SequentRule::SeqIntro, leaf2(mk_seq(lo), mk_seq(hi)), {std::move(s1)});
}

SequentProof substitute_proof(const SequentProof& p, const std::map<std::string, Formula>& sub) {
    auto f = [&](const Formula& x) { return substitute(x, sub); };
    if (p.rule == SequentRule::Axiom) {
        Formula a = p.conclusion->kids[0]->leaf;
        if (sub.count(a->var)) return identity_proof(sub.at(a->var));
    }
    SequentProof out{p.rule, map_leaves(p.conclusion, f), {}};
    for (auto& c : p.children) out.children.push_back(substitute_proof(c, sub));
    return out;
}

// Replaces subformulas occurring exactly once on each side by fresh atoms.
struct Abstraction {
    Formula premise, conclusion;
    std::map<std::string, Formula> sub;
};

Abstraction abstract_common(const Formula& p, const Formula& c) {
    std::map<std::string, int> cp, cc;
    std::set<std::string> names;
    for_each_address(p, [&](const Address&, const Formula& f) {
        ++cp[f->key];
        if (is_atom(f)) names.insert(f->var);
    });
    for_each_address(c, [&](const Address&, const Formula& f) {
        ++cc[f->key];
        if (is_atom(f)) names.insert(f->var);
    });
    Abstraction out;
    std::map<std::string, Formula> fresh;  // key -> fresh atom
    int counter = 0;
    std::function<Formula(const Formula&, bool)> rec = [&](const Formula& f, bool pick) -> Formula {
        auto it = fresh.find(f->key);
        if (it != fresh.end()) return it->second;
        if (pick && cp[f->key] == 1 && cc[f->key] == 1) {
            std::string name;
            do name = "k" + std::to_string(counter++);
            while (names.count(name));
            Formula v = mk_atom(name);
            fresh.emplace(f->key, v);
            out.sub.emplace(name, f);
            return v;
        }
        if (f->kids.empty()) return f;
        std::vector<Formula> kids;
        for (auto& k : f->kids) kids.push_back(rec(k, pick));
        return mk_node(f->kind, std::move(kids));
    };
    out.conclusion = rec(c, true);
    out.premise = rec(p, false);
    return out;
}

// Proof of [np', nc] for one rule instance at the root of its redex.
class StepTranslator {
public:
    SequentProof local(const Formula& np, const Formula& nc) {
        Abstraction a = abstract_common(np, nc);
        Sequent goal = leaf2(negate(a.premise), a.conclusion);
        auto it = cache_.find(goal->key);
        if (it == cache_.end()) {
            Budget b{5'000'000};
            auto pr = search_cutfree_retore(goal, &b);
            if (!pr) throw std::logic_error("no cut-free proof of " + print(goal));
            it = cache_.emplace(goal->key, *pr).first;
        }
        return substitute_proof(it->second, a.sub);
    }

    // Proof of [P', C] for the whole step.
    SequentProof step(const Step& st) {
        const Formula& P = st.premise;
        const Formula& C = st.conclusion;
        if (same(P, C)) return identity_proof(P);
        bool up = is_up(st.rule);
        const Formula& base = up ? P : C;
        Address ad = st.address;
        Formula np, nc;
        try {
            Formula here = at(base, ad);
            auto cands = up ? conclusions_at(st.rule, here, {}) : premises_at(st.rule, here, {});
            for (auto& x : cands)
                if (same(replace_at(base, ad, x), up ? C : P)) {
                    (up ? nc : np) = x;
                    (up ? np : nc) = here;
                    break;
                }
        } catch (const std::exception&) {
        }
        if (!np) {
            ad.clear();
            np = P;
            nc = C;
        }
        SequentProof pi = local(np, nc);
        Formula x = np, y = nc;
        for (std::size_t d = ad.size(); d-- > 0;) {
            Formula n = at(base, Address(ad.begin(), ad.begin() + static_cast<long>(d)));
            std::size_t j = static_cast<std::size_t>(ad[d]);
            if (n->kind == Kind::Seq) {
                std::vector<Formula> l(n->kids.begin(), n->kids.begin() + static_cast<long>(j));
                std::vector<Formula> r(n->kids.begin() + static_cast<long>(j) + 1, n->kids.end());
                if (!r.empty()) {
                    pi = wrap(Kind::Seq, false, mk_seq(r), x, y, std::move(pi));
                    x = mk_seq({x, mk_seq(r)});
                    y = mk_seq({y, mk_seq(r)});
                }
                if (!l.empty()) {
                    pi = wrap(Kind::Seq, true, mk_seq(l), x, y, std::move(pi));
                    x = mk_seq({mk_seq(l), x});
                    y = mk_seq({mk_seq(l), y});
                }
            } else {
                std::vector<Formula> others;
                for (std::size_t k = 0; k < n->kids.size(); ++k)
                    if (k != j) others.push_back(n->kids[k]);
                Formula a = mk_node(n->kind, others);
                pi = wrap(n->kind, true, a, x, y, std::move(pi));
                x = mk_node(n->kind, {a, x});
                y = mk_node(n->kind, {a, y});
            }
        }
        if (!same(x, P) || !same(y, C)) throw std::logic_error("context reconstruction failed");
        return pi;
    }

private:
    std::unordered_map<std::string, SequentProof> cache_;
};

// ------------------------------------------------------------- Slavnov

struct TaggedSequent {
    std::vector<Formula> fs;
    std::map<int, int> partner;
};

std::size_t find_key(const std::vector<Formula>& fs, const Formula& f, std::size_t skip = SIZE_MAX) {
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (i != skip && same(fs[i], f)) return i;
    return SIZE_MAX;
}

Linking linking_of(const Sequent& s, const std::map<int, int>& partner) {
    LabeledDigraph lg = tograph(s);
    std::map<int, int> vertex;
    for (int v = 0; v < lg.g.size(); ++v) vertex[lg.tags[v]] = v;
    Linking l(lg.g.size());
    for (int v = 0; v < lg.g.size(); ++v) l[v] = vertex.at(partner.at(lg.tags[v]));
    return l;
}

class SlavnovWalker {
public:
    explicit SlavnovWalker(bool side_conditions) : side_(side_conditions) {}

    std::optional<SequentCheck> rejection;

    TaggedSequent walk(const SequentProof& p, std::vector<int>& path) {
        if (!is_flat(p.conclusion) || p.conclusion->kind == SKind::Empty)
            throw std::invalid_argument("non-flat sequent at node " + path_str(path));
        std::vector<TaggedSequent> kids;
        for (std::size_t i = 0; i < p.children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            kids.push_back(walk(p.children[i], path));
            path.pop_back();
        }
        auto concl = leaves(p.conclusion);
        auto want = sorted_keys(concl);
        auto malformed = [&](const std::string& why) {
            return std::invalid_argument("malformed " + rule_name(p.rule) + " at node " + path_str(path) + ": " + why);
        };
        switch (p.rule) {
            case SequentRule::SlvAxiom: {
                if (!kids.empty() || concl.size() != 2 || !is_atom(concl[0]) || !same(negate(concl[0]), concl[1]))
                    throw malformed("not an axiom");
                TaggedSequent t;
                int a = next_++, b = next_++;
                t.fs = {mk_atom(atom_of(concl[0]), a), mk_atom(atom_of(concl[1]), b)};
                t.partner = {{a, b}, {b, a}};
                return t;
            }
            case SequentRule::SlvMix: {
                if (kids.size() != 2) throw malformed("expects two premises");
                TaggedSequent t = kids[0];
                t.fs.insert(t.fs.end(), kids[1].fs.begin(), kids[1].fs.end());
                t.partner.insert(kids[1].partner.begin(), kids[1].partner.end());
                if (sorted_keys(t.fs) != want) throw malformed("premises do not match");
                return t;
            }
            case SequentRule::SlvTensor: {
                if (kids.size() != 2) throw malformed("expects two premises");
                for (auto& f : concl) {
                    if (f->kind != Kind::Tensor) continue;
                    std::optional<TaggedSequent> hit;
                    for_each_split(f, Kind::Tensor, [&](const Formula& a, const Formula& b) {
                        for (int flip = 0; flip < 2 && !hit; ++flip) {
                            const Formula& l = flip ? b : a;
                            const Formula& r = flip ? a : b;
                            std::size_t i = find_key(kids[0].fs, l), j = find_key(kids[1].fs, r);
                            if (i == SIZE_MAX || j == SIZE_MAX) continue;
                            TaggedSequent t;
                            for (std::size_t x = 0; x < kids[0].fs.size(); ++x)
                                if (x != i) t.fs.push_back(kids[0].fs[x]);
                            for (std::size_t y = 0; y < kids[1].fs.size(); ++y)
                                if (y != j) t.fs.push_back(kids[1].fs[y]);
                            t.fs.push_back(mk_tensor({kids[0].fs[i], kids[1].fs[j]}));
                            if (sorted_keys(t.fs) != want) continue;
                            t.partner = kids[0].partner;
                            t.partner.insert(kids[1].partner.begin(), kids[1].partner.end());
                            hit = std::move(t);
                        }
                        return hit.has_value();
                    });
                    if (hit) return *hit;
                }
                throw malformed("premises do not match");
            }
            case SequentRule::SlvPar:
            case SequentRule::SlvSeq: {
                if (kids.size() != 1) throw malformed("expects one premise");
                Kind k = p.rule == SequentRule::SlvPar ? Kind::Par : Kind::Seq;
                const TaggedSequent& prem = kids[0];
                for (auto& f : concl) {
                    if (f->kind != k) continue;
                    std::optional<std::pair<std::size_t, std::size_t>> hit;
                    auto visit = [&](const Formula& a, const Formula& b) {
                        std::size_t i = find_key(prem.fs, a);
                        if (i == SIZE_MAX) return false;
                        std::size_t j = find_key(prem.fs, b, i);
                        if (j == SIZE_MAX) return false;
                        std::vector<Formula> fs;
                        for (std::size_t x = 0; x < prem.fs.size(); ++x)
                            if (x != i && x != j) fs.push_back(prem.fs[x]);
                        fs.push_back(f);
                        if (sorted_keys(fs) == want) hit = {i, j};
                        return hit.has_value();
                    };
                    if (k == Kind::Seq) for_each_cut(f, visit);
                    else for_each_split(f, Kind::Par, visit);
                    if (!hit) continue;
                    auto [i, j] = *hit;
                    if (side_ && k == Kind::Seq && !rejection && !side_condition(prem, i, j))
                        rejection = SequentCheck{false, path, "seq introduction of " + print(f) +
                                                                  ": alternating path from its right to its left part"};
                    TaggedSequent t;
                    for (std::size_t x = 0; x < prem.fs.size(); ++x)
                        if (x != i && x != j) t.fs.push_back(prem.fs[x]);
                    t.fs.push_back(mk_node(k, {prem.fs[i], prem.fs[j]}));
                    t.partner = prem.partner;
                    return t;
                }
                throw malformed("premise does not match");
            }
            default: throw malformed("not a Slavnov rule");
        }
    }

private:
    static std::string path_str(const std::vector<int>& path) {
        std::string s = "/";
        for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "/" : "") + std::to_string(path[i]);
        return s;
    }

    // No alternating path from the root of the right part to the root of
    // the left part in the tree-like prenet of the premise.
    static bool side_condition(const TaggedSequent& prem, std::size_t left, std::size_t right) {
        Sequent s = sq_flat(prem.fs);
        TreePrenet tp = tree_prenet(s, linking_of(s, prem.partner));
        auto ls = leaves(s);
        int li = -1, ri = -1;
        for (std::size_t k = 0; k < ls.size(); ++k) {
            if (ls[k].get() == prem.fs[left].get()) li = static_cast<int>(k);
            if (ls[k].get() == prem.fs[right].get()) ri = static_cast<int>(k);
        }
        if (li < 0 || ri < 0) throw std::logic_error("lost a leaf of the premise");
        return !ae_path_exists(tp.g, tp.leaf_root[ri], tp.leaf_root[li]);
    }

    bool side_;
    int next_ = 0;
};

// ---------------------------------------------------- sequentialization

class Sequentializer {
public:
    Sequentializer(const std::map<int, int>& partner, Budget* b) : partner_(partner), budget_(b) {}

    std::optional<SequentProof> run(const std::vector<Formula>& fs) {
        if (budget_) budget_->tick();
        Sequent concl = sq_flat(fs);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Kind k = fs[i]->kind;
            if (k != Kind::Par && k != Kind::Seq) continue;
            std::vector<Formula> rest;
            for (std::size_t j = 0; j < fs.size(); ++j)
                if (j != i) rest.push_back(fs[j]);
            rest.push_back(fs[i]->kids[0]);
            rest.push_back(mk_node(k, std::vector<Formula>(fs[i]->kids.begin() + 1, fs[i]->kids.end())));
            auto sub = run(rest);
            if (!sub) return std::nullopt;
            return node(k == Kind::Par ? SequentRule::SlvPar : SequentRule::SlvSeq, concl, {*sub});
        }
        // Components joined by axiom links split by mix.
        int n = static_cast<int>(fs.size());
        std::vector<int> comp(n);
        for (int i = 0; i < n; ++i) comp[i] = i;
        std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
        std::map<int, int> owner;
        for (int i = 0; i < n; ++i)
            for (int t : tags(fs[i])) owner[t] = i;
        for (auto& [t, i] : owner) {
            auto it = owner.find(partner_.at(t));
            if (it == owner.end()) return std::nullopt;
            comp[find(i)] = find(it->second);
        }
        std::vector<Formula> first, second;
        for (int i = 0; i < n; ++i) (find(i) == find(0) ? first : second).push_back(fs[i]);
        if (!second.empty()) {
            auto a = run(first);
            if (!a) return std::nullopt;
            auto b = run(second);
            if (!b) return std::nullopt;
            return node(SequentRule::SlvMix, concl, {*a, *b});
        }
        if (n == 2 && is_atom(fs[0]) && is_atom(fs[1])) return node(SequentRule::SlvAxiom, concl);
        for (int i = 0; i < n; ++i) {
            if (fs[i]->kind != Kind::Tensor) continue;
            Formula a = fs[i]->kids[0];
            Formula b = mk_tensor(std::vector<Formula>(fs[i]->kids.begin() + 1, fs[i]->kids.end()));
            std::vector<int> others;
            for (int j = 0; j < n; ++j)
                if (j != i) others.push_back(j);
            for (unsigned m = 0; m < (1u << others.size()); ++m) {
                std::vector<Formula> g{a}, d{b};
                for (std::size_t x = 0; x < others.size(); ++x) ((m >> x) & 1 ? g : d).push_back(fs[others[x]]);
                if (!closed(g) || !closed(d)) continue;
                auto p1 = run(g);
                if (!p1) continue;
                auto p2 = run(d);
                if (p2) return node(SequentRule::SlvTensor, concl, {*p1, *p2});
            }
        }
        return std::nullopt;
    }

private:
    bool closed(const std::vector<Formula>& fs) const {
        std::set<int> have;
        for (auto& f : fs)
            for (int t : tags(f)) have.insert(t);
        for (int t : have)
            if (!have.count(partner_.at(t))) return false;
        return true;
    }

    const std::map<int, int>& partner_;
    Budget* budget_;
};

}  // namespace

std::string rule_name(SequentRule r) {
    for (auto& [k, n] : kRuleNames)
        if (k == r) return n;
    return "?";
}

std::optional<SequentRule> parse_sequent_rule(const std::string& name) {
    for (auto& [k, n] : kRuleNames)
        if (name == n) return k;
    return std::nullopt;
}

int proof_size(const SequentProof& p) {
    int n = 1;
    for (auto& c : p.children) n += proof_size(c);
    return n;
}

int count_rule(const SequentProof& p, SequentRule r) {
    int n = p.rule == r;
    for (auto& c : p.children) n += count_rule(c, r);
    return n;
}

std::string print_proof(const SequentProof& p) {
    std::string out;
    std::function<void(const SequentProof&, int)> rec = [&](const SequentProof& x, int depth) {
        out += std::string(2 * static_cast<std::size_t>(depth), ' ') + "(" + rule_name(x.rule) + " \"" +
               print(x.conclusion) + "\"";
        for (auto& c : x.children) {
            out += "\n";
            rec(c, depth + 1);
        }
        out += ")";
    };
    rec(p, 0);
    return out + "\n";
}

SequentProof parse_proof(const std::string& text) {
    std::size_t i = 0;
    auto ws = [&] {
        for (;;) {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            if (i < text.size() && text[i] == '#') {
                while (i < text.size() && text[i] != '\n') ++i;
                continue;
            }
            return;
        }
    };
    std::function<SequentProof()> rec = [&]() -> SequentProof {
        ws();
        if (i >= text.size() || text[i] != '(') throw ParseError("expected '('", i);
        ++i;
        ws();
        std::size_t b = i;
        while (i < text.size() && (std::islower(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
        std::string name = text.substr(b, i - b);
        auto r = parse_sequent_rule(name);
        if (!r) throw ParseError("unknown rule '" + name + "'", b);
        ws();
        if (i >= text.size() || text[i] != '"') throw ParseError("expected a quoted conclusion", i);
        std::size_t q = text.find('"', i + 1);
        if (q == std::string::npos) throw ParseError("unterminated conclusion", i);
        std::size_t start = i + 1;
        Sequent c;
        try {
            c = parse_sequent(text.substr(start, q - start));
        } catch (const ParseError& e) {
            throw ParseError(std::string("in conclusion: ") + e.what(), start + e.position);
        }
        i = q + 1;
        SequentProof p{*r, c, {}};
        for (;;) {
            ws();
            if (i >= text.size()) throw ParseError("expected ')'", i);
            if (text[i] == ')') {
                ++i;
                return p;
            }
            p.children.push_back(rec());
        }
    };
    SequentProof p = rec();
    ws();
    if (i != text.size()) throw ParseError("trailing input", i);
    return p;
}

bool entropy_valid(const Sequent& lower, const Sequent& upper) {
    auto la = leaves(lower), lb = leaves(upper);
    if (sorted_keys(la) != sorted_keys(lb))
        throw std::invalid_argument("occurrence mismatch between " + print(lower) + " and " + print(upper));
    Digraph ga = leaf_order(lower), gb = leaf_order(upper);
    int n = static_cast<int>(la.size());
    std::vector<int> phi(n, -1);
    std::vector<bool> used(n, false);
    std::function<bool(int)> rec = [&](int i) {
        if (i == n) return true;
        for (int j = 0; j < n; ++j) {
            if (used[j] || !same(la[i], lb[j])) continue;
            bool ok = true;
            for (int k = 0; k < i && ok; ++k) {
                if (ga.has(i, k) && !gb.has(j, phi[k])) ok = false;
                if (ga.has(k, i) && !gb.has(phi[k], j)) ok = false;
            }
            if (!ok) continue;
            used[j] = true;
            phi[i] = j;
            if (rec(i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return rec(0);
}

SequentCheck check_retore(const SequentProof& p, bool allow_cut) {
    std::vector<int> path;
    return check_rec(p, allow_cut, path);
}

std::optional<SequentProof> search_cutfree_retore(const Sequent& s, Budget* budget) {
    RetoreSearch search(budget);
    return search.run(s);
}

SequentProof identity_proof(const Formula& a) {
    switch (a->kind) {
        case Kind::Unit: throw std::invalid_argument("identity proof of the unit");
        case Kind::Atom: return node(SequentRule::Axiom, leaf2(a, negate(a)));
        default: break;
    }
    Formula b = a->kids[0];
    Formula c = mk_node(a->kind, std::vector<Formula>(a->kids.begin() + 1, a->kids.end()));
    Formula nb = negate(b), nc = negate(c);
    if (a->kind == Kind::Par) {
        SequentProof t = node(SequentRule::TensorIntro, sq_par({sq_leaf(b), sq_leaf(c), sq_leaf(mk_tensor({nb, nc}))}),
                              {identity_proof(b), identity_proof(c)});
        return par_of(b, c, mk_tensor({nb, nc}), std::move(t));
    }
    if (a->kind == Kind::Tensor) {
        SequentProof t = node(SequentRule::TensorIntro, sq_par({sq_leaf(nb), sq_leaf(nc), sq_leaf(mk_tensor({b, c}))}),
                              {identity_proof(b), identity_proof(c)});
        return par_of(nb, nc, mk_tensor({b, c}), std::move(t));
    }
    return wrap(Kind::Seq, true, b, c, c, identity_proof(c));
}

SequentProof translate_bvu_proof(const Derivation& d) {
    CheckResult cr = check_derivation(d, System::BVu);
    if (!cr.ok || !is_proof(d) || d.steps.empty())
        throw std::invalid_argument("not a valid BVu proof" + (cr.reason.empty() ? "" : ": " + cr.reason));
    const Step& first = d.steps[0];
    const Formula& c0 = first.conclusion;
    if (first.rule != Rule::Ai0Down || c0->kind != Kind::Par || c0->kids.size() != 2)
        throw std::invalid_argument("a BVu proof starts with ai0_down on the unit");
    SequentProof cur = node(SequentRule::ParIntro, sq_leaf(c0), {node(SequentRule::Axiom, leaf2(c0->kids[0], c0->kids[1]))});
    StepTranslator tr;
    for (std::size_t i = 1; i < d.steps.size(); ++i) {
        const Step& st = d.steps[i];
        SequentProof pi = tr.step(st);
        cur = node(SequentRule::Cut, sq_leaf(st.conclusion), {std::move(cur), std::move(pi)});
    }
    return cur;
}

Formula tiu_formula(int n) {
    if (n < 0 || n > kTiuCap) throw std::invalid_argument("tiu_formula: n must be in 0.." + std::to_string(kTiuCap));
    std::function<Formula(int, const std::string&, const Formula&, const Formula&)> xi =
        [&](int k, const std::string& w, const Formula& a, const Formula& b) -> Formula {
        auto v = [&](char c, bool neg = false) { return mk_atom(std::string(1, c) + w, neg); };
        Formula left = k == 0 ? mk_par({v('a'), v('b'), a}) : xi(k - 1, w + "0", v('a'), mk_par({v('b'), a}));
        Formula right = k == 0 ? mk_par({v('b', true), v('c', true), b})
                               : xi(k - 1, w + "1", v('b', true), mk_par({v('c', true), b}));
        return mk_par({mk_tensor({left, v('y')}), mk_seq({v('y', true), v('c')}), mk_seq({v('a', true), v('z')}),
                       mk_tensor({v('z', true), right})});
    };
    return xi(n, "0", mk_unit(), mk_unit());
}

SequentCheck check_slavnov(const SequentProof& p) {
    SlavnovWalker w(true);
    std::vector<int> path;
    w.walk(p, path);
    if (w.rejection) return *w.rejection;
    return {};
}

SlavnovNet slavnov_net(const SequentProof& p) {
    SlavnovWalker w(false);
    std::vector<int> path;
    TaggedSequent t = w.walk(p, path);
    Sequent s = sq_flat(t.fs);
    return SlavnovNet{s, linking_of(s, t.partner)};
}

std::optional<SequentProof> sequentialize(const Sequent& s, const Linking& l, Budget* budget) {
    if (!is_flat(s)) throw std::invalid_argument("sequentialize: non-flat sequent");
    Sequent tagged = tag_atoms(s, 0);
    std::map<int, int> partner;
    for (std::size_t i = 0; i < l.size(); ++i) partner[static_cast<int>(i)] = l[i];
    Sequentializer z(partner, budget);
    return z.run(leaves(tagged));
}

SequentProof random_slavnov_proof(std::mt19937& rng, int pairs) {
    if (pairs < 1) throw std::invalid_argument("random_slavnov_proof: need a pair");
    struct Item {
        SequentProof p;
        std::vector<Formula> fs;
    };
    std::vector<Item> forest;
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    for (int i = 0; i < pairs; ++i) {
        std::string v(1, static_cast<char>('a' + i));
        bool flip = rng() % 2;
        std::vector<Formula> fs{mk_atom(v, flip), mk_atom(v, !flip)};
        forest.push_back({node(SequentRule::SlvAxiom, sq_flat(fs)), fs});
    }
    for (;;) {
        bool can_join = forest.size() > 1;
        std::vector<std::size_t> wide;
        for (std::size_t i = 0; i < forest.size(); ++i)
            if (forest[i].fs.size() > 1) wide.push_back(i);
        if (!can_join && (wide.empty() || rng() % 4 == 0)) break;
        if (can_join && (wide.empty() || rng() % 2 == 0)) {
            std::size_t i = pick(forest.size()), j = pick(forest.size() - 1);
            if (j >= i) ++j;
            Item a = forest[i], b = forest[j];
            forest.erase(forest.begin() + static_cast<long>(std::max(i, j)));
            forest.erase(forest.begin() + static_cast<long>(std::min(i, j)));
            Item c;
            if (rng() % 4 == 0) {
                c.fs = a.fs;
                c.fs.insert(c.fs.end(), b.fs.begin(), b.fs.end());
                c.p = node(SequentRule::SlvMix, sq_flat(c.fs), {a.p, b.p});
            } else {
                std::size_t x = pick(a.fs.size()), y = pick(b.fs.size());
                for (std::size_t k = 0; k < a.fs.size(); ++k)
                    if (k != x) c.fs.push_back(a.fs[k]);
                for (std::size_t k = 0; k < b.fs.size(); ++k)
                    if (k != y) c.fs.push_back(b.fs[k]);
                c.fs.push_back(mk_tensor({a.fs[x], b.fs[y]}));
                c.p = node(SequentRule::SlvTensor, sq_flat(c.fs), {a.p, b.p});
            }
            forest.push_back(std::move(c));
        } else {
            Item& it = forest[wide[pick(wide.size())]];
            std::size_t x = pick(it.fs.size()), y = pick(it.fs.size() - 1);
            if (y >= x) ++y;
            bool seq = rng() % 5 < 3;
            std::vector<Formula> fs;
            for (std::size_t k = 0; k < it.fs.size(); ++k)
                if (k != x && k != y) fs.push_back(it.fs[k]);
            fs.push_back(seq ? mk_seq({it.fs[x], it.fs[y]}) : mk_par({it.fs[x], it.fs[y]}));
            it.p = node(seq ? SequentRule::SlvSeq : SequentRule::SlvPar, sq_flat(fs), {it.p});
            it.fs = std::move(fs);
        }
    }
    return forest[0].p;
}

}  // namespace pomset
