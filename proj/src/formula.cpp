#include "pomset/formula.hpp"

#include <algorithm>
#include <sstream>

namespace pomset {

namespace {

const char* open_of(Kind k) { return k == Kind::Par ? "[" : k == Kind::Tensor ? "(" : "<"; }
const char* close_of(Kind k) { return k == Kind::Par ? "]" : k == Kind::Tensor ? ")" : ">"; }
const char* sep_of(Kind k) { return k == Kind::Par ? " | " : k == Kind::Tensor ? " * " : " ; "; }

std::shared_ptr<Node> finish(std::shared_ptr<Node> n) {
    n->hash = std::hash<std::string>{}(n->key);
    return n;
}

}  // namespace

Formula mk_unit() {
    static const Formula u = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Unit;
        n->key = "I";
        return Formula(finish(n));
    }();
    return u;
}

Formula mk_atom(const std::string& var, bool neg, int tag) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->var = var;
    n->neg = neg;
    n->tag = tag;
    n->size = 1;
    n->key = neg ? var + "'" : var;
    return finish(n);
}

Formula mk_atom(const Atom& a, int tag) { return mk_atom(a.var, a.neg, tag); }

Formula mk_node(Kind k, std::vector<Formula> kids) {
    if (k == Kind::Unit) return mk_unit();
    if (k == Kind::Atom) throw std::logic_error("mk_node on atom kind");
    std::vector<Formula> flat;
    flat.reserve(kids.size());
    for (auto& c : kids) {
        if (c->kind == Kind::Unit) continue;
        if (c->kind == k) {
            for (auto& g : c->kids) flat.push_back(g);
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.empty()) return mk_unit();
    if (flat.size() == 1) return flat[0];
    if (k != Kind::Seq)
        std::stable_sort(flat.begin(), flat.end(),
                         [](const Formula& a, const Formula& b) { return a->key < b->key; });
    auto n = std::make_shared<Node>();
    n->kind = k;
    std::size_t len = 2;
    for (auto& c : flat) len += c->key.size() + 3;
    n->key.reserve(len);
    n->key += open_of(k);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (i) n->key += sep_of(k);
        n->key += flat[i]->key;
        n->size += flat[i]->size;
    }
    n->key += close_of(k);
    n->kids = std::move(flat);
    return finish(n);
}

std::string print(const Formula& a) { return a->key; }

// ------------------------------------------------------------------ parser

namespace {

struct Lexer {
    const std::string& s;
    std::size_t i = 0;

    explicit Lexer(const std::string& t) : s(t) {}

    void ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    }
    bool eof() {
        ws();
        return i >= s.size();
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
    bool peek(const char* t) {
        ws();
        return s.compare(i, std::char_traits<char>::length(t), t) == 0;
    }
    [[noreturn]] void fail(const std::string& m) { throw ParseError(m, i); }
};

bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool dual_marker(Lexer& L) {
    if (L.i < L.s.size() && L.s[L.i] == '\'') {
        ++L.i;
        return true;
    }
    if (L.s.compare(L.i, 3, "\xE2\x8A\xA5") == 0) {  // ⊥
        L.i += 3;
        return true;
    }
    return false;
}

bool separator(Lexer& L, Kind k) {
    if (L.lit(",") || L.lit(";")) return true;
    switch (k) {
        case Kind::Par: return L.lit("|") || L.lit("\xE2\x85\x8B");     // ⅋
        case Kind::Tensor: return L.lit("*") || L.lit("\xE2\x8A\x97");  // ⊗
        case Kind::Seq: return L.lit("\xE2\x97\x81");                    // ◁
        default: return false;
    }
}

Formula parse_f(Lexer& L);

Formula parse_group(Lexer& L, Kind k, const char* close) {
    std::vector<Formula> kids;
    if (L.lit(close)) return mk_unit();
    for (;;) {
        kids.push_back(parse_f(L));
        if (L.lit(close)) break;
        if (!separator(L, k)) L.fail(std::string("expected separator or '") + close + "'");
    }
    return mk_node(k, std::move(kids));
}

Formula parse_f(Lexer& L) {
    L.ws();
    if (L.i >= L.s.size()) L.fail("unexpected end of input");
    std::size_t start = L.i;
    char c = L.s[L.i];
    Formula f;
    bool compound = true;
    if (c == '[') {
        ++L.i;
        f = parse_group(L, Kind::Par, "]");
    } else if (c == '(') {
        ++L.i;
        f = parse_group(L, Kind::Tensor, ")");
    } else if (c == '<') {
        ++L.i;
        f = parse_group(L, Kind::Seq, ">");
    } else if (c == 'I' && (L.i + 1 >= L.s.size() || !is_ident_char(L.s[L.i + 1]))) {
        ++L.i;
        f = mk_unit();
        compound = false;
        if (L.i < L.s.size() && dual_marker(L)) {
            // the unit is self-dual
        }
    } else if ((c >= 'a' && c <= 'z') || c == '#') {
        std::size_t b = L.i++;
        if (c == '#') {
            if (L.i >= L.s.size() || !(L.s[L.i] >= '0' && L.s[L.i] <= '9'))
                L.fail("expected digits after '#'");
        }
        while (L.i < L.s.size() && is_ident_char(L.s[L.i])) ++L.i;
        std::string var = L.s.substr(b, L.i - b);
        bool neg = false;
        while (dual_marker(L)) neg = !neg;
        return mk_atom(var, neg);
    } else {
        L.fail(std::string("unexpected character '") + c + "'");
    }
    if (compound && L.i < L.s.size() && (L.s[L.i] == '\'' || L.s.compare(L.i, 3, "\xE2\x8A\xA5") == 0))
        throw ParseError("dual marker on non-atom", start);
    return f;
}

}  // namespace

Formula parse_formula(const std::string& text) {
    Lexer L(text);
    Formula f = parse_f(L);
    if (!L.eof()) L.fail("trailing input");
    return f;
}

// ------------------------------------------------------------- operations

Formula canonicalize(const Formula& a) {
    switch (a->kind) {
        case Kind::Unit: return mk_unit();
        case Kind::Atom: return a;
        default: {
            std::vector<Formula> kids;
            for (auto& c : a->kids) kids.push_back(canonicalize(c));
            return mk_node(a->kind, std::move(kids));
        }
    }
}

std::optional<Formula> remove_units(const Formula& a) {
    Formula c = canonicalize(a);
    if (is_unit(c)) return std::nullopt;
    return c;
}

Formula negate(const Formula& a) {
    switch (a->kind) {
        case Kind::Unit: return a;
        case Kind::Atom: return mk_atom(a->var, !a->neg, a->tag);
        default: {
            std::vector<Formula> kids;
            kids.reserve(a->kids.size());
            for (auto& c : a->kids) kids.push_back(negate(c));
            Kind k = a->kind == Kind::Par ? Kind::Tensor : a->kind == Kind::Tensor ? Kind::Par : Kind::Seq;
            return mk_node(k, std::move(kids));
        }
    }
}

Formula conjugate(const Formula& a) {
    if (a->kind == Kind::Unit || a->kind == Kind::Atom) return a;
    std::vector<Formula> kids;
    for (auto it = a->kids.rbegin(); it != a->kids.rend(); ++it) kids.push_back(conjugate(*it));
    return mk_node(a->kind, std::move(kids));
}

int size(const Formula& a) { return a->size; }

namespace {
void collect(const Formula& a, std::vector<Formula>& out) {
    if (a->kind == Kind::Atom) {
        out.push_back(a);
        return;
    }
    for (auto& c : a->kids) collect(c, out);
}
}  // namespace

std::vector<Formula> atom_leaves(const Formula& a) {
    std::vector<Formula> out;
    collect(a, out);
    return out;
}

std::vector<Atom> atoms(const Formula& a) {
    std::vector<Atom> out;
    for (auto& l : atom_leaves(a)) out.push_back(atom_of(l));
    return out;
}

std::map<std::string, std::pair<int, int>> polarity_counts(const Formula& a) {
    std::map<std::string, std::pair<int, int>> m;
    for (auto& l : atom_leaves(a)) {
        auto& p = m[l->var];
        (l->neg ? p.second : p.first)++;
    }
    return m;
}

bool is_balanced(const Formula& a) {
    for (auto& [v, c] : polarity_counts(a))
        if (c.first != 1 || c.second != 1) return false;
    return true;
}

bool is_linear(const Formula& a) {
    for (auto& [v, c] : polarity_counts(a))
        if (c.first > 1 || c.second > 1) return false;
    return true;
}

bool has_tensor(const Formula& a) {
    if (a->kind == Kind::Tensor) return true;
    for (auto& c : a->kids)
        if (has_tensor(c)) return true;
    return false;
}

bool has_unit(const Formula& a) {
    if (a->kind == Kind::Unit) return true;
    for (auto& c : a->kids)
        if (has_unit(c)) return true;
    return false;
}

namespace {
Formula tag_rec(const Formula& a, int& next) {
    if (a->kind == Kind::Atom) return mk_atom(a->var, a->neg, next++);
    if (a->kind == Kind::Unit) return a;
    std::vector<Formula> kids;
    for (auto& c : a->kids) kids.push_back(tag_rec(c, next));
    return mk_node(a->kind, std::move(kids));
}
}  // namespace

Formula tag_atoms(const Formula& a, int first) {
    int next = first;
    return tag_rec(a, next);
}

std::vector<int> tags(const Formula& a) {
    std::vector<int> out;
    for (auto& l : atom_leaves(a)) out.push_back(l->tag);
    return out;
}

Formula rename_vars(const Formula& a, const std::function<std::string(const std::string&)>& f) {
    if (a->kind == Kind::Atom) return mk_atom(f(a->var), a->neg, a->tag);
    if (a->kind == Kind::Unit) return a;
    std::vector<Formula> kids;
    for (auto& c : a->kids) kids.push_back(rename_vars(c, f));
    return mk_node(a->kind, std::move(kids));
}

Formula substitute(const Formula& a, const std::map<std::string, Formula>& sub) {
    if (a->kind == Kind::Atom) {
        auto it = sub.find(a->var);
        if (it == sub.end()) return a;
        return a->neg ? negate(it->second) : it->second;
    }
    if (a->kind == Kind::Unit) return a;
    std::vector<Formula> kids;
    for (auto& c : a->kids) kids.push_back(substitute(c, sub));
    return mk_node(a->kind, std::move(kids));
}

namespace {
Formula kill_rec(const Formula& a, const std::vector<bool>& kill, std::size_t& idx) {
    if (a->kind == Kind::Atom) return kill[idx++] ? mk_unit() : a;
    if (a->kind == Kind::Unit) return a;
    std::vector<Formula> kids;
    for (auto& c : a->kids) kids.push_back(kill_rec(c, kill, idx));
    return mk_node(a->kind, std::move(kids));
}
}  // namespace

Formula kill_atoms(const Formula& a, const std::vector<bool>& kill) {
    std::size_t idx = 0;
    return kill_rec(a, kill, idx);
}

std::vector<Formula> pseudo_subformulas(const Formula& a, int max_kill) {
    int n = a->size;
    std::vector<Formula> out;
    std::vector<std::string> seen;
    std::vector<bool> kill(n, false);
    std::function<void(int, int)> rec = [&](int from, int left) {
        Formula f = kill_atoms(a, kill);
        if (std::find(seen.begin(), seen.end(), f->key) == seen.end()) {
            seen.push_back(f->key);
            out.push_back(f);
        }
        if (left == 0) return;
        for (int i = from; i < n; ++i) {
            kill[i] = true;
            rec(i + 1, left - 1);
            kill[i] = false;
        }
    };
    rec(0, max_kill);
    return out;
}

bool is_pseudo_subformula(const Formula& b, const Formula& a) {
    int n = a->size, m = b->size;
    if (m > n) return false;
    auto ca = polarity_counts(a), cb = polarity_counts(b);
    for (auto& [v, c] : cb) {
        auto it = ca.find(v);
        if (it == ca.end() || it->second.first < c.first || it->second.second < c.second) return false;
    }
    auto la = atoms(a);
    std::vector<Atom> want = atoms(b);
    std::sort(want.begin(), want.end());
    std::vector<bool> kill(n, true);
    bool found = false;
    std::function<void(int, int)> rec = [&](int from, int left) {
        if (found) return;
        if (left == 0) {
            std::vector<Atom> got;
            for (int i = 0; i < n; ++i)
                if (!kill[i]) got.push_back(la[i]);
            std::sort(got.begin(), got.end());
            if (got == want && kill_atoms(a, kill)->key == b->key) found = true;
            return;
        }
        for (int i = from; i <= n - left; ++i) {
            kill[i] = false;
            rec(i + 1, left - 1);
            kill[i] = true;
        }
    };
    rec(0, m);
    return found;
}

// --------------------------------------------------------------- addresses

std::string address_str(const Address& ad) {
    if (ad.empty()) return "root";
    std::string s;
    for (std::size_t i = 0; i < ad.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(ad[i]);
    }
    return s;
}

Address parse_address(const std::string& s) {
    Address ad;
    if (s == "root" || s.empty() || s == "-") return ad;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad address '" + s + "'", 0);
        ad.push_back(std::stoi(part));
    }
    return ad;
}

Formula at(const Formula& a, const Address& ad) {
    Formula f = a;
    for (int i : ad) {
        if (i < 0 || static_cast<std::size_t>(i) >= f->kids.size())
            throw std::out_of_range("address " + address_str(ad) + " not in formula");
        f = f->kids[i];
    }
    return f;
}

Formula replace_at(const Formula& a, const Address& ad, std::size_t depth, const Formula& sub) {
    if (depth == ad.size()) return sub;
    std::vector<Formula> kids = a->kids;
    kids.at(ad[depth]) = replace_at(a->kids.at(ad[depth]), ad, depth + 1, sub);
    return mk_node(a->kind, std::move(kids));
}

void for_each_address(const Formula& a, const std::function<void(const Address&, const Formula&)>& f) {
    Address ad;
    std::function<void(const Formula&)> rec = [&](const Formula& x) {
        f(ad, x);
        for (std::size_t i = 0; i < x->kids.size(); ++i) {
            ad.push_back(static_cast<int>(i));
            rec(x->kids[i]);
            ad.pop_back();
        }
    };
    rec(a);
}

}  // namespace pomset
