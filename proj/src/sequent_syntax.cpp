#include <algorithm>
#include <functional>

#include "pomset/formula.hpp"

namespace pomset {

namespace {

std::string leaf_text(const Formula& f) {
    const std::string& k = f->key;
    if (!k.empty() && (k[0] == '[' || k[0] == '<')) return "{" + k + "}";
    return k;
}

}  // namespace

Sequent sq_empty() {
    static const Sequent e = [] {
        auto n = std::make_shared<SNode>();
        n->kind = SKind::Empty;
        n->key = "[]";
        return Sequent(n);
    }();
    return e;
}

Sequent sq_leaf(Formula f) {
    auto n = std::make_shared<SNode>();
    n->kind = SKind::Leaf;
    n->key = leaf_text(f);
    n->leaf = std::move(f);
    return n;
}

Sequent sq_node(SKind k, std::vector<Sequent> kids) {
    if (k == SKind::Empty) return sq_empty();
    if (k == SKind::Leaf) throw std::logic_error("sq_node on leaf kind");
    std::vector<Sequent> flat;
    for (auto& c : kids) {
        if (c->kind == SKind::Empty) continue;
        if (c->kind == k)
            for (auto& g : c->kids) flat.push_back(g);
        else
            flat.push_back(std::move(c));
    }
    if (flat.empty()) return sq_empty();
    if (flat.size() == 1) return flat[0];
    if (k == SKind::ParList)
        std::stable_sort(flat.begin(), flat.end(),
                         [](const Sequent& a, const Sequent& b) { return a->key < b->key; });
    auto n = std::make_shared<SNode>();
    n->kind = k;
    n->key = k == SKind::ParList ? "[" : "<";
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (i) n->key += k == SKind::ParList ? " | " : " ; ";
        n->key += flat[i]->key;
    }
    n->key += k == SKind::ParList ? "]" : ">";
    n->kids = std::move(flat);
    return n;
}

Sequent sq_flat(const std::vector<Formula>& fs) {
    std::vector<Sequent> kids;
    for (auto& f : fs) kids.push_back(sq_leaf(f));
    return sq_par(std::move(kids));
}

std::string print(const Sequent& s) { return s->key; }

namespace {

struct SLexer {
    const std::string& s;
    std::size_t i = 0;
    explicit SLexer(const std::string& t) : s(t) {}
    void ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    }
    bool lit(const char* t) {
        ws();
        std::size_t n = std::char_traits<char>::length(t);
        if (s.compare(i, n, t) == 0) {
            i += n;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& m) { throw ParseError(m, i); }
};

// Extent of a formula that starts at position i (balanced brackets, stops at
// a separator or closing bracket of the enclosing sequent list).
std::size_t formula_end(const std::string& s, std::size_t i) {
    int depth = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '(' || c == '[' || c == '<') {
            ++depth;
        } else if (c == ')' || c == ']' || c == '>' || c == '}') {
            if (depth == 0) return i;
            --depth;
        } else if (depth == 0 && (c == ',' || c == '|' || c == ';')) {
            return i;
        } else if (depth == 0 && s.compare(i, 3, "\xE2\x97\x81") == 0) {
            return i;
        }
        ++i;
    }
    return i;
}

Sequent parse_item(SLexer& L);

Sequent parse_list(SLexer& L, SKind k, const char* close) {
    std::vector<Sequent> kids;
    if (L.lit(close)) return sq_empty();
    for (;;) {
        kids.push_back(parse_item(L));
        if (L.lit(close)) break;
        bool ok = k == SKind::ParList ? (L.lit("|") || L.lit(",") || L.lit("\xE2\x85\x8B"))
                                      : (L.lit(";") || L.lit("\xE2\x97\x81"));
        if (!ok) L.fail(std::string("expected separator or '") + close + "'");
    }
    return sq_node(k, std::move(kids));
}

Sequent parse_item(SLexer& L) {
    L.ws();
    if (L.i >= L.s.size()) L.fail("unexpected end of sequent");
    char c = L.s[L.i];
    if (c == '[') {
        ++L.i;
        return parse_list(L, SKind::ParList, "]");
    }
    if (c == '<') {
        ++L.i;
        return parse_list(L, SKind::SeqList, ">");
    }
    if (c == '{') {
        ++L.i;
        int depth = 0;
        std::size_t b = L.i;
        while (L.i < L.s.size() && !(L.s[L.i] == '}' && depth == 0)) {
            if (L.s[L.i] == '{') ++depth;
            if (L.s[L.i] == '}') --depth;
            ++L.i;
        }
        if (L.i >= L.s.size()) L.fail("unterminated '{'");
        std::string inner = L.s.substr(b, L.i - b);
        ++L.i;
        try {
            return sq_leaf(parse_formula(inner));
        } catch (const ParseError& e) {
            throw ParseError(std::string("in leaf: ") + e.what(), b + e.position);
        }
    }
    std::size_t b = L.i;
    std::size_t e = formula_end(L.s, b);
    if (e == b) L.fail("expected a formula");
    std::string text = L.s.substr(b, e - b);
    L.i = e;
    try {
        return sq_leaf(parse_formula(text));
    } catch (const ParseError& err) {
        throw ParseError(std::string("in leaf: ") + err.what(), b + err.position);
    }
}

}  // namespace

Sequent parse_sequent(const std::string& text) {
    SLexer L(text);
    L.ws();
    if (L.i >= L.s.size()) return sq_empty();
    std::vector<Sequent> items;
    for (;;) {
        items.push_back(parse_item(L));
        L.ws();
        if (L.i >= L.s.size()) break;
        if (!L.lit(",")) L.fail("expected ',' or end of sequent");
    }
    if (items.size() == 1) return items[0];
    return sq_par(std::move(items));
}

Formula sequent_to_formula(const Sequent& s) {
    switch (s->kind) {
        case SKind::Empty: return mk_unit();
        case SKind::Leaf: return s->leaf;
        default: {
            std::vector<Formula> kids;
            for (auto& c : s->kids) kids.push_back(sequent_to_formula(c));
            return mk_node(s->kind == SKind::ParList ? Kind::Par : Kind::Seq, std::move(kids));
        }
    }
}

Sequent formula_to_sequent(const Formula& a) {
    if (a->kind == Kind::Unit) return sq_empty();
    if (a->kind == Kind::Par) return sq_flat(a->kids);
    return sq_leaf(a);
}

std::vector<Formula> leaves(const Sequent& s) {
    std::vector<Formula> out;
    std::function<void(const Sequent&)> rec = [&](const Sequent& x) {
        if (x->kind == SKind::Leaf) out.push_back(x->leaf);
        for (auto& c : x->kids) rec(c);
    };
    rec(s);
    return out;
}

bool is_flat(const Sequent& s) {
    if (s->kind == SKind::SeqList) return false;
    for (auto& c : s->kids)
        if (c->kind != SKind::Leaf) return false;
    return true;
}

Sequent map_leaves(const Sequent& s, const std::function<Formula(const Formula&)>& f) {
    switch (s->kind) {
        case SKind::Empty: return s;
        case SKind::Leaf: return sq_leaf(f(s->leaf));
        default: {
            std::vector<Sequent> kids;
            for (auto& c : s->kids) kids.push_back(map_leaves(c, f));
            return sq_node(s->kind, std::move(kids));
        }
    }
}

Sequent tag_atoms(const Sequent& s, int first) {
    int next = first;
    // Tags follow the left-to-right order of the printed canonical sequent.
    std::function<Sequent(const Sequent&)> rec = [&](const Sequent& x) -> Sequent {
        if (x->kind == SKind::Empty) return x;
        if (x->kind == SKind::Leaf) {
            Formula t = tag_atoms(x->leaf, next);
            next += x->leaf->size;
            return sq_leaf(t);
        }
        std::vector<Sequent> kids;
        for (auto& c : x->kids) kids.push_back(rec(c));
        return sq_node(x->kind, std::move(kids));
    };
    return rec(s);
}

Unfolding unfold(const Sequent& s) {
    Unfolding u;
    int counter = 0;
    std::vector<Formula> gadgets;
    // An n-ary node is read as the right-nested chain of binary nodes, each
    // with its own fresh pair.
    std::function<Formula(const Formula&)> root;
    std::function<Formula(Kind, const std::vector<Formula>&, std::size_t)> chain =
        [&](Kind k, const std::vector<Formula>& kids, std::size_t from) -> Formula {
        if (from + 1 == kids.size()) return root(kids[from]);
        std::string name = "#" + std::to_string(counter++);
        std::vector<Formula> rest(kids.begin() + static_cast<long>(from), kids.end());
        u.table.emplace_back(name, mk_node(k, rest)->key);
        Formula left = root(kids[from]);
        Formula right = chain(k, kids, from + 1);
        gadgets.push_back(mk_tensor({mk_atom(name, true), mk_node(k, {left, right})}));
        return mk_atom(name, false);
    };
    root = [&](const Formula& f) -> Formula {
        if (f->kind == Kind::Atom) return f;
        if (f->kind == Kind::Unit) {
            std::string name = "#" + std::to_string(counter++);
            u.table.emplace_back(name, f->key);
            gadgets.push_back(mk_atom(name, true));
            return mk_atom(name, false);
        }
        return chain(f->kind, f->kids, 0);
    };
    Sequent g0 = map_leaves(s, root);
    std::vector<Sequent> parts{g0};
    for (auto& g : gadgets) parts.push_back(sq_leaf(g));
    u.flat = sq_par(std::move(parts));
    return u;
}

}  // namespace pomset
