#include "pomset/bv.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pomset/dicograph.hpp"

namespace pomset {

// ------------------------------------------------------------------ names

namespace {

struct RuleInfo {
    Rule rule;
    const char* name;
    bool up;
};

const RuleInfo kRules[] = {
    {Rule::Hyp, "hyp", false},
    {Rule::AiDown, "ai_down", false},
    {Rule::AiUp, "ai_up", true},
    {Rule::QDown, "q_down", false},
    {Rule::QUp, "q_up", true},
    {Rule::S, "s", false},
    {Rule::Eq, "eq", false},
    {Rule::Ai0Down, "ai0_down", false},
    {Rule::AiTensorDown, "ai_tensor_down", false},
    {Rule::AiSeqLDown, "ai_seqL_down", false},
    {Rule::AiSeqRDown, "ai_seqR_down", false},
    {Rule::Q2Down, "q2_down", false},
    {Rule::Q3LDown, "q3L_down", false},
    {Rule::Q3RDown, "q3R_down", false},
    {Rule::Q4Down, "q4_down", false},
    {Rule::S2, "s2", false},
    {Rule::S3, "s3", false},
    {Rule::EqP, "eqp", false},
    {Rule::Ai0Up, "ai0_up", true},
    {Rule::AiTensorUp, "ai_tensor_up", true},
    {Rule::AiSeqLUp, "ai_seqL_up", true},
    {Rule::AiSeqRUp, "ai_seqR_up", true},
    {Rule::Q2Up, "q2_up", true},
    {Rule::Q3LUp, "q3L_up", true},
    {Rule::Q3RUp, "q3R_up", true},
    {Rule::Q4Up, "q4_up", true},
    {Rule::Q2hDown, "q2h_down", false},
    {Rule::Q3LhDown, "q3Lh_down", false},
    {Rule::Q3RhDown, "q3Rh_down", false},
    {Rule::S2h, "s2h", false},
    {Rule::S3h, "s3h", false},
    {Rule::Ws, "ws", false},
    {Rule::IDown, "i_down", false},
    {Rule::IUp, "i_up", true},
};

const RuleInfo& info(Rule r) {
    for (auto& i : kRules)
        if (i.rule == r) return i;
    throw std::logic_error("unknown rule");
}

const std::pair<System, const char*> kSystems[] = {
    {System::BV, "bv"},       {System::SBV, "sbv"},
    {System::BVu, "bvu"},     {System::SBVu, "sbvu"},
    {System::BVhatu, "bvhatu"}, {System::NonInteraction, "nonint"},
    {System::NonInteractionWs, "nonint_ws"},
};

}  // namespace

std::string rule_name(Rule r) { return info(r).name; }

std::optional<Rule> parse_rule(const std::string& name) {
    for (auto& i : kRules)
        if (name == i.name) return i.rule;
    return std::nullopt;
}

std::string system_name(System s) {
    for (auto& [sys, n] : kSystems)
        if (sys == s) return n;
    return "?";
}

std::optional<System> parse_system(const std::string& name) {
    for (auto& [sys, n] : kSystems)
        if (name == n) return sys;
    return std::nullopt;
}

bool is_up(Rule r) { return info(r).up; }

bool in_system(Rule r, System s) {
    using R = Rule;
    auto any = [r](std::initializer_list<Rule> rs) {
        return std::find(rs.begin(), rs.end(), r) != rs.end();
    };
    const bool hatted = any({R::Q2hDown, R::Q3LhDown, R::Q3RhDown, R::S2h, R::S3h});
    const bool unit_free_down =
        any({R::Hyp, R::Ai0Down, R::AiTensorDown, R::AiSeqLDown, R::AiSeqRDown, R::Q2Down,
             R::Q3LDown, R::Q3RDown, R::Q4Down, R::S2, R::S3, R::EqP, R::IDown}) ||
        hatted;
    const bool unit_free_up = any({R::Ai0Up, R::AiTensorUp, R::AiSeqLUp, R::AiSeqRUp, R::Q2Up,
                                   R::Q3LUp, R::Q3RUp, R::Q4Up, R::IUp});
    switch (s) {
        case System::BV: return any({R::Hyp, R::AiDown, R::QDown, R::S, R::Eq, R::IDown});
        case System::SBV:
            return any({R::Hyp, R::AiDown, R::QDown, R::S, R::Eq, R::IDown, R::AiUp, R::QUp,
                        R::IUp});
        case System::BVu: return unit_free_down;
        case System::SBVu: return unit_free_down || unit_free_up;
        case System::BVhatu:
            return hatted || any({R::Hyp, R::Ai0Down, R::AiTensorDown, R::AiSeqLDown,
                                  R::AiSeqRDown, R::Q4Down, R::EqP});
        case System::NonInteraction:
            return any({R::Hyp, R::EqP, R::Q2Down, R::Q3LDown, R::Q3RDown, R::Q4Down});
        case System::NonInteractionWs:
            return any({R::Hyp, R::EqP, R::Q2Down, R::Q3LDown, R::Q3RDown, R::Q4Down, R::S2,
                        R::S3, R::Q2Up, R::Q3LUp, R::Q3RUp, R::Q4Up, R::Ws});
    }
    return false;
}

// --------------------------------------------------------------- patterns

namespace {

enum class PK { Var, Atom, Dual, Neg, Unit, Par, Tensor, Seq };

struct Pat {
    PK k = PK::Var;
    int v = 0;
    bool nonpar = false;
    std::vector<Pat> kids;
};

constexpr int kA = 0, kB = 1, kC = 2, kD = 3, kAtomSlot = 4;
using Bind = std::array<Formula, 5>;

Pat V(int v) { return Pat{PK::Var, v, false, {}}; }
Pat Vh(int v) { return Pat{PK::Var, v, true, {}}; }
Pat At() { return Pat{PK::Atom, kAtomSlot, false, {}}; }
Pat Du() { return Pat{PK::Dual, kAtomSlot, false, {}}; }
Pat Ng(int v) { return Pat{PK::Neg, v, false, {}}; }
Pat Un() { return Pat{PK::Unit, 0, false, {}}; }
Pat Pr(Pat a, Pat b) { return Pat{PK::Par, 0, false, {std::move(a), std::move(b)}}; }
Pat Tn(Pat a, Pat b) { return Pat{PK::Tensor, 0, false, {std::move(a), std::move(b)}}; }
Pat Sq(Pat a, Pat b) { return Pat{PK::Seq, 0, false, {std::move(a), std::move(b)}}; }

Kind kind_of(PK k) {
    switch (k) {
        case PK::Par: return Kind::Par;
        case PK::Tensor: return Kind::Tensor;
        case PK::Seq: return Kind::Seq;
        default: return Kind::Unit;
    }
}

bool connective(PK k) { return k == PK::Par || k == PK::Tensor || k == PK::Seq; }

struct Scheme {
    Pat concl;
    Pat prem;
};

const Scheme* scheme(Rule r) {
    static const std::map<Rule, Scheme> table = [] {
        std::map<Rule, Scheme> t;
        const Pat A = V(kA), B = V(kB), C = V(kC), D = V(kD);
        const Pat pair = Pr(At(), Du()), copair = Tn(At(), Du());
        t[Rule::AiTensorDown] = {Tn(pair, B), B};
        t[Rule::AiSeqLDown] = {Sq(pair, B), B};
        t[Rule::AiSeqRDown] = {Sq(B, pair), B};
        t[Rule::Q2Down] = {Pr(A, B), Sq(A, B)};
        t[Rule::Q3LDown] = {Pr(Sq(A, B), C), Sq(Pr(A, C), B)};
        t[Rule::Q3RDown] = {Pr(Sq(A, B), C), Sq(A, Pr(B, C))};
        t[Rule::Q4Down] = {Pr(Sq(A, B), Sq(C, D)), Sq(Pr(A, C), Pr(B, D))};
        t[Rule::S2] = {Pr(A, B), Tn(A, B)};
        t[Rule::S3] = {Pr(Tn(A, B), C), Tn(Pr(A, C), B)};
        t[Rule::AiTensorUp] = {B, Pr(copair, B)};
        t[Rule::AiSeqLUp] = {B, Sq(copair, B)};
        t[Rule::AiSeqRUp] = {B, Sq(B, copair)};
        t[Rule::Q2Up] = {Sq(A, B), Tn(A, B)};
        t[Rule::Q3LUp] = {Sq(Tn(A, C), B), Tn(Sq(A, B), C)};
        t[Rule::Q3RUp] = {Sq(A, Tn(B, C)), Tn(Sq(A, B), C)};
        t[Rule::Q4Up] = {Sq(Tn(A, C), Tn(B, D)), Tn(Sq(A, B), Sq(C, D))};
        t[Rule::Q2hDown] = {Pr(Vh(kA), Vh(kB)), Sq(A, B)};
        t[Rule::Q3LhDown] = {Pr(Sq(A, B), Vh(kC)), Sq(Pr(A, C), B)};
        t[Rule::Q3RhDown] = {Pr(Sq(A, B), Vh(kC)), Sq(A, Pr(B, C))};
        t[Rule::S2h] = {Pr(Vh(kA), Vh(kB)), Tn(A, B)};
        t[Rule::S3h] = {Pr(Tn(A, B), Vh(kC)), Tn(Pr(A, C), B)};
        t[Rule::Ws] = {Pr(Tn(A, C), Tn(B, D)), Tn(Pr(A, B), Pr(C, D))};
        t[Rule::IDown] = {Pr(A, Ng(kA)), Un()};
        t[Rule::IUp] = {Un(), Tn(A, Ng(kA))};
        return t;
    }();
    auto it = table.find(r);
    return it == table.end() ? nullptr : &it->second;
}

bool dual_atoms(const Formula& x, const Formula& y) {
    return x->kind == Kind::Atom && y->kind == Kind::Atom && x->var == y->var && x->neg != y->neg;
}

Formula group(Kind k, const std::vector<Formula>& kids, unsigned mask) {
    std::vector<Formula> g;
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (mask >> i & 1U) g.push_back(kids[i]);
    return g.size() == 1 ? g[0] : mk_node(k, std::move(g));
}

Formula range(const std::vector<Formula>& kids, std::size_t b, std::size_t e) {
    if (e - b == 1) return kids[b];
    return mk_seq(std::vector<Formula>(kids.begin() + static_cast<long>(b),
                                       kids.begin() + static_cast<long>(e)));
}

// Whether a pattern can match a formula whose main connective is k.
bool may_match(const Pat& p, Kind k) {
    switch (p.k) {
        case PK::Var: return !(p.nonpar && k == Kind::Par);
        case PK::Neg: return true;
        case PK::Atom:
        case PK::Dual: return k == Kind::Atom;
        case PK::Unit: return k == Kind::Unit;
        default: return kind_of(p.k) == k;
    }
}

using Emit = std::function<bool(Bind&)>;  // false stops the enumeration

bool match(const Pat& p, const Formula& f, Bind& b, const Emit& emit);

// Both pattern children against a split of f's children into two groups.
bool match_pair(const Pat& p1, const Pat& p2, const Formula& g1, const Formula& g2, Bind& b,
                const Emit& emit) {
    return match(p1, g1, b, [&](Bind& b1) { return match(p2, g2, b1, emit); });
}

bool match(const Pat& p, const Formula& f, Bind& b, const Emit& emit) {
    switch (p.k) {
        case PK::Var: {
            if (b[p.v]) return same(b[p.v], f) ? emit(b) : true;
            if (p.nonpar && f->kind == Kind::Par) return true;
            if (f->kind == Kind::Unit) return true;
            b[p.v] = f;
            bool go = emit(b);
            b[p.v] = nullptr;
            return go;
        }
        case PK::Atom: {
            if (f->kind != Kind::Atom) return true;
            if (b[p.v]) return same(b[p.v], f) ? emit(b) : true;
            b[p.v] = f;
            bool go = emit(b);
            b[p.v] = nullptr;
            return go;
        }
        case PK::Dual:
            if (!b[p.v]) throw std::logic_error("dual before atom in pattern");
            return dual_atoms(b[p.v], f) ? emit(b) : true;
        case PK::Neg:
            if (!b[p.v]) throw std::logic_error("negation before variable in pattern");
            return same(negate(b[p.v]), f) ? emit(b) : true;
        case PK::Unit: return f->kind == Kind::Unit ? emit(b) : true;
        case PK::Par:
        case PK::Tensor: {
            Kind k = kind_of(p.k);
            if (f->kind != k) return true;
            const auto& kids = f->kids;
            const unsigned n = static_cast<unsigned>(kids.size());
            if (n > 20) throw std::length_error("node too wide for matching");
            const unsigned all = (1U << n) - 1;
            for (unsigned m = 1; m < all; ++m) {
                bool one1 = (m & (m - 1)) == 0, one2 = ((all ^ m) & ((all ^ m) - 1)) == 0;
                if (!one1 && !may_match(p.kids[0], k)) continue;
                if (!one2 && !may_match(p.kids[1], k)) continue;
                if (!match_pair(p.kids[0], p.kids[1], group(k, kids, m), group(k, kids, all ^ m),
                                b, emit))
                    return false;
            }
            return true;
        }
        case PK::Seq: {
            if (f->kind != Kind::Seq) return true;
            const auto& kids = f->kids;
            for (std::size_t s = 1; s < kids.size(); ++s) {
                if (s > 1 && !may_match(p.kids[0], Kind::Seq)) continue;
                if (kids.size() - s > 1 && !may_match(p.kids[1], Kind::Seq)) continue;
                if (!match_pair(p.kids[0], p.kids[1], range(kids, 0, s), range(kids, s, kids.size()),
                                b, emit))
                    return false;
            }
            return true;
        }
    }
    return true;
}

Formula build(const Pat& p, const Bind& b) {
    switch (p.k) {
        case PK::Var: return b[p.v];
        case PK::Atom: return b[p.v];
        case PK::Dual: return mk_atom(b[p.v]->var, !b[p.v]->neg);
        case PK::Neg: return negate(b[p.v]);
        case PK::Unit: return mk_unit();
        default: {
            std::vector<Formula> kids;
            for (auto& c : p.kids) kids.push_back(build(c, b));
            return mk_node(kind_of(p.k), std::move(kids));
        }
    }
}

using FEmit = std::function<bool(const Formula&)>;

// Rewrites instances of `from` rooted at node f into `to`, keeping the
// remaining children of f as context. Emits the rewritten node.
void rewrite_node(const Pat& from, const Pat& to, const Formula& f, const FEmit& emit) {
    if (!connective(from.k)) throw std::logic_error("rule cannot be applied in this direction");
    Kind k = kind_of(from.k);
    if (f->kind != k) return;
    const auto& kids = f->kids;
    Bind b{};
    if (k == Kind::Seq) {
        const std::size_t n = kids.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 2; j <= n; ++j)
                for (std::size_t s = i + 1; s < j; ++s) {
                    if (s - i > 1 && !may_match(from.kids[0], Kind::Seq)) continue;
                    if (j - s > 1 && !may_match(from.kids[1], Kind::Seq)) continue;
                    bool go = match_pair(from.kids[0], from.kids[1], range(kids, i, s),
                                         range(kids, s, j), b, [&](Bind& bb) {
                                             std::vector<Formula> out(kids.begin(),
                                                                      kids.begin() + static_cast<long>(i));
                                             out.push_back(build(to, bb));
                                             out.insert(out.end(), kids.begin() + static_cast<long>(j),
                                                        kids.end());
                                             return emit(mk_seq(std::move(out)));
                                         });
                    if (!go) return;
                }
        return;
    }
    const unsigned n = static_cast<unsigned>(kids.size());
    if (n > 20) throw std::length_error("node too wide for matching");
    const unsigned all = (1U << n) - 1;
    for (unsigned m1 = 1; m1 <= all; ++m1) {
        if ((m1 & (m1 - 1)) != 0 && !may_match(from.kids[0], k)) continue;
        Formula g1 = group(k, kids, m1);
        bool go = match(from.kids[0], g1, b, [&](Bind& b1) {
            const unsigned rest = all ^ m1;
            for (unsigned m2 = rest; m2; m2 = (m2 - 1) & rest) {
                if ((m2 & (m2 - 1)) != 0 && !may_match(from.kids[1], k)) continue;
                bool more = match(from.kids[1], group(k, kids, m2), b1, [&](Bind& b2) {
                    std::vector<Formula> out;
                    for (unsigned i = 0; i < n; ++i)
                        if (!((m1 | m2) >> i & 1U)) out.push_back(kids[i]);
                    out.push_back(build(to, b2));
                    return emit(mk_node(k, std::move(out)));
                });
                if (!more) return false;
            }
            return true;
        });
        if (!go) return;
    }
}

// Removes a dual pair of atom children of a node of kind k.
void remove_pair(Kind k, const Formula& f, const FEmit& emit) {
    if (f->kind != k) return;
    const auto& kids = f->kids;
    for (std::size_t i = 0; i < kids.size(); ++i)
        for (std::size_t j = i + 1; j < kids.size(); ++j)
            if (dual_atoms(kids[i], kids[j])) {
                std::vector<Formula> out;
                for (std::size_t t = 0; t < kids.size(); ++t)
                    if (t != i && t != j) out.push_back(kids[t]);
                if (!emit(mk_node(k, std::move(out)))) return;
            }
}

bool is_pair(const Formula& f, Kind k) {
    return f->kind == k && f->kids.size() == 2 && dual_atoms(f->kids[0], f->kids[1]);
}

const std::vector<Rule>& parts_of(Rule r) {
    static const std::vector<Rule> q{Rule::Q2Down, Rule::Q3LDown, Rule::Q3RDown, Rule::Q4Down};
    static const std::vector<Rule> qu{Rule::Q2Up, Rule::Q3LUp, Rule::Q3RUp, Rule::Q4Up};
    static const std::vector<Rule> s{Rule::S2, Rule::S3};
    static const std::vector<Rule> none;
    if (r == Rule::QDown) return q;
    if (r == Rule::QUp) return qu;
    if (r == Rule::S) return s;
    return none;
}

// Replacement nodes for the node at an address. Down rules run backwards
// (conclusion to premise) unless `forward` is set; up rules always run forward.
void node_results(Rule r, const Formula& node, bool forward, const FEmit& emit) {
    switch (r) {
        case Rule::Hyp:
        case Rule::Ai0Down:
        case Rule::Ai0Up: return;
        case Rule::Eq:
        case Rule::EqP: emit(node); return;
        case Rule::AiDown:
            if (forward) throw std::logic_error("ai_down cannot be applied forward");
            remove_pair(Kind::Par, node, emit);
            return;
        case Rule::AiUp: remove_pair(Kind::Tensor, node, emit); return;
        case Rule::QDown:
        case Rule::QUp:
        case Rule::S: {
            if (!emit(node)) return;
            bool go = true;
            for (Rule p : parts_of(r)) {
                node_results(p, node, forward, [&](const Formula& x) { return go = emit(x); });
                if (!go) return;
            }
            return;
        }
        default: break;
    }
    const Scheme* sc = scheme(r);
    if (!sc) throw std::logic_error("no scheme for " + rule_name(r));
    if (is_up(r) || forward)
        rewrite_node(sc->prem, sc->concl, node, emit);
    else
        rewrite_node(sc->concl, sc->prem, node, emit);
}

void results_at(Rule r, const Formula& f, const Address& ad, bool forward, const FEmit& emit) {
    Formula node;
    try {
        node = at(f, ad);
    } catch (const std::out_of_range&) {
        return;
    }
    node_results(r, node, forward, [&](const Formula& x) { return emit(replace_at(f, ad, x)); });
}

std::vector<Formula> collect_unique(Rule r, const Formula& f, const Address& ad, bool forward) {
    std::vector<Formula> out;
    std::unordered_set<std::string> seen;
    results_at(r, f, ad, forward, [&](const Formula& x) {
        if (seen.insert(x->key).second) out.push_back(x);
        return true;
    });
    return out;
}

bool produces(Rule r, const Formula& f, const Address& ad, bool forward, const Formula& target) {
    bool found = false;
    results_at(r, f, ad, forward, [&](const Formula& x) {
        found = same(x, target);
        return !found;
    });
    return found;
}

}  // namespace

std::vector<Formula> premises_at(Rule r, const Formula& c, const Address& ad) {
    if (is_up(r)) throw std::invalid_argument(rule_name(r) + " is checked forward");
    if (r == Rule::Ai0Down) {
        if (ad.empty() && is_pair(c, Kind::Par)) return {mk_unit()};
        return {};
    }
    return collect_unique(r, c, ad, false);
}

std::vector<Formula> conclusions_at(Rule r, const Formula& p, const Address& ad) {
    if (r == Rule::Ai0Up) {
        if (ad.empty() && is_pair(p, Kind::Tensor)) return {mk_unit()};
        return {};
    }
    return collect_unique(r, p, ad, true);
}

std::vector<Instance> premises_of(Rule r, const Formula& c) {
    std::vector<Instance> out;
    for_each_address(c, [&](const Address& ad, const Formula&) {
        for (auto& p : premises_at(r, c, ad)) out.push_back({p, Step{r, ad, p, c}});
    });
    return out;
}

bool valid_step(const Step& s) {
    if (!s.premise || !s.conclusion) return false;
    switch (s.rule) {
        case Rule::Hyp: return false;
        case Rule::Eq:
        case Rule::EqP: return same(s.premise, s.conclusion);
        case Rule::Ai0Down:
            return s.address.empty() && is_unit(s.premise) && is_pair(s.conclusion, Kind::Par);
        case Rule::Ai0Up:
            return s.address.empty() && is_unit(s.conclusion) && is_pair(s.premise, Kind::Tensor);
        default: break;
    }
    if (is_up(s.rule)) return produces(s.rule, s.premise, s.address, true, s.conclusion);
    return produces(s.rule, s.conclusion, s.address, false, s.premise);
}

std::optional<Address> locate(Rule r, const Formula& premise, const Formula& conclusion) {
    std::optional<Address> found;
    const Formula& host = is_up(r) ? premise : conclusion;
    std::function<bool(const Formula&, Address&)> rec = [&](const Formula& x, Address& ad) {
        if (valid_step(Step{r, ad, premise, conclusion})) {
            found = ad;
            return true;
        }
        for (std::size_t i = 0; i < x->kids.size(); ++i) {
            ad.push_back(static_cast<int>(i));
            bool done = rec(x->kids[i], ad);
            ad.pop_back();
            if (done) return true;
        }
        return false;
    };
    Address ad;
    rec(host, ad);
    return found;
}

// ------------------------------------------------------------- checking

CheckResult check_derivation(const Derivation& d, System sys) {
    auto fail = [](int i, std::string why) { return CheckResult{false, i, std::move(why)}; };
    if (!d.premise) return fail(-1, "missing premise");
    Formula cur = d.premise;
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        const Step& s = d.steps[i];
        const int at_step = static_cast<int>(i);
        if (!in_system(s.rule, sys))
            return fail(at_step, rule_name(s.rule) + " is not a rule of " + system_name(sys));
        if (!s.premise || !same(s.premise, cur))
            return fail(at_step, "premise does not match the previous line");
        if (s.rule == Rule::Ai0Down && i != 0) return fail(at_step, "ai0_down below the top");
        if (!valid_step(s))
            return fail(at_step, "not an instance of " + rule_name(s.rule) + " at " +
                                     address_str(s.address));
        cur = s.conclusion;
    }
    return {};
}

bool is_proof(const Derivation& d) {
    return d.premise && is_unit(d.premise);
}

// ---------------------------------------------------------- certificates

std::string print_certificate(const Derivation& d) {
    std::ostringstream os;
    std::size_t from = 0;
    if (!d.steps.empty() && d.steps[0].rule == Rule::Ai0Down) {
        os << "ai0_down @ root : " << print(d.steps[0].conclusion) << "\n";
        from = 1;
    } else {
        os << "hyp @ root : " << print(d.premise) << "\n";
    }
    for (std::size_t i = from; i < d.steps.size(); ++i)
        os << rule_name(d.steps[i].rule) << " @ " << address_str(d.steps[i].address) << " : "
           << print(d.steps[i].conclusion) << "\n";
    return os.str();
}

Derivation parse_certificate(const std::string& text) {
    Derivation d;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        std::string body = line;
        // '#' starts a comment only at the beginning of a line; atoms may contain it.
        if (hash != std::string::npos && line.find_first_not_of(" \t") == hash) body.clear();
        if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto at_pos = body.find(" @ ");
        auto colon = at_pos == std::string::npos ? std::string::npos : body.find(" : ", at_pos);
        if (colon == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected '<rule> @ <address> : <formula>'", 0);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string rname = trim(body.substr(0, at_pos));
        Address ad = parse_address(trim(body.substr(at_pos + 3, colon - at_pos - 3)));
        Formula f = parse_formula(trim(body.substr(colon + 3)));
        auto r = parse_rule(rname);
        if (!r) throw ParseError("line " + std::to_string(lineno) + ": unknown rule '" + rname + "'", 0);
        if (!d.premise) {
            if (*r == Rule::Hyp) {
                d.premise = f;
                continue;
            }
            if (*r != Rule::Ai0Down)
                throw ParseError("line " + std::to_string(lineno) + ": first line must be hyp or ai0_down", 0);
            d.premise = mk_unit();
        } else if (*r == Rule::Hyp) {
            throw ParseError("line " + std::to_string(lineno) + ": hyp below the top", 0);
        }
        d.steps.push_back(Step{*r, ad, d.conclusion(), f});
    }
    if (!d.premise) throw ParseError("empty certificate", 0);
    return d;
}

// ------------------------------------------------------------ conversions

Derivation in_context(const Derivation& d, const std::function<Formula(const Formula&)>& ctx) {
    Derivation out;
    out.premise = ctx(d.premise);
    for (const Step& s : d.steps) {
        Formula p = out.conclusion(), c = ctx(s.conclusion);
        if (same(p, c)) continue;
        std::vector<Rule> tries{s.rule};
        if (s.rule == Rule::Ai0Down) tries = {Rule::AiTensorDown, Rule::AiSeqLDown, Rule::AiSeqRDown};
        bool placed = false;
        for (Rule r : tries)
            if (auto ad = locate(r, p, c)) {
                out.steps.push_back(Step{r, *ad, p, c});
                placed = true;
                break;
            }
        if (!placed) throw std::logic_error("step " + rule_name(s.rule) + " does not survive the context");
    }
    return out;
}

Derivation bvu_to_bv(const Derivation& proof) {
    Derivation out;
    out.premise = proof.premise;
    for (const Step& s : proof.steps) {
        Rule r = s.rule;
        switch (s.rule) {
            case Rule::Ai0Down:
            case Rule::AiTensorDown:
            case Rule::AiSeqLDown:
            case Rule::AiSeqRDown: r = Rule::AiDown; break;
            case Rule::Q2Down:
            case Rule::Q3LDown:
            case Rule::Q3RDown:
            case Rule::Q4Down:
            case Rule::Q2hDown:
            case Rule::Q3LhDown:
            case Rule::Q3RhDown: r = Rule::QDown; break;
            case Rule::S2:
            case Rule::S3:
            case Rule::S2h:
            case Rule::S3h: r = Rule::S; break;
            case Rule::EqP: r = Rule::Eq; break;
            case Rule::Q2Up:
            case Rule::Q3LUp:
            case Rule::Q3RUp:
            case Rule::Q4Up: r = Rule::QUp; break;
            case Rule::AiTensorUp:
            case Rule::AiSeqLUp:
            case Rule::AiSeqRUp:
            case Rule::Ai0Up: r = Rule::AiUp; break;
            default: break;
        }
        Formula p = out.conclusion();
        Step t{r, s.address, p, s.conclusion};
        if (!valid_step(t)) {
            auto ad = locate(r, p, s.conclusion);
            if (!ad) throw std::invalid_argument("cannot lift " + rule_name(s.rule));
            t.address = *ad;
        }
        out.steps.push_back(t);
    }
    return out;
}

Derivation bv_to_bvu(const Derivation& proof) {
    if (!proof.premise || !is_unit(proof.premise))
        throw std::invalid_argument("not a proof: premise is not the unit");
    Derivation out;
    out.premise = proof.premise;
    auto push_located = [&](std::initializer_list<Rule> rs, const Formula& c, const Address* hint) {
        Formula p = out.conclusion();
        for (Rule r : rs) {
            if (hint && valid_step(Step{r, *hint, p, c})) {
                out.steps.push_back(Step{r, *hint, p, c});
                return;
            }
        }
        for (Rule r : rs)
            if (auto ad = locate(r, p, c)) {
                out.steps.push_back(Step{r, *ad, p, c});
                return;
            }
        throw std::invalid_argument("no unit-free instance for a step");
    };
    for (const Step& s : proof.steps) {
        Formula p = out.conclusion(), c = s.conclusion;
        if (same(p, c) && s.rule != Rule::Ai0Down) continue;
        switch (s.rule) {
            case Rule::AiDown: {
                if (is_unit(p)) {
                    push_located({Rule::Ai0Down}, c, nullptr);
                    break;
                }
                Formula node = at(c, s.address);
                if (node->kids.size() == 2) {
                    push_located({Rule::AiTensorDown, Rule::AiSeqLDown, Rule::AiSeqRDown}, c, nullptr);
                    break;
                }
                // Inside a larger par: introduce next to the rest, then switch.
                const auto& kids = node->kids;
                Formula mid;
                for (std::size_t i = 0; i < kids.size() && !mid; ++i)
                    for (std::size_t j = i + 1; j < kids.size() && !mid; ++j) {
                        if (!dual_atoms(kids[i], kids[j])) continue;
                        std::vector<Formula> rest;
                        for (std::size_t t = 0; t < kids.size(); ++t)
                            if (t != i && t != j) rest.push_back(kids[t]);
                        Formula without = replace_at(c, s.address, mk_par(rest));
                        if (!same(without, p)) continue;
                        mid = replace_at(c, s.address,
                                         mk_tensor({mk_par({kids[i], kids[j]}), mk_par(rest)}));
                    }
                if (!mid) throw std::invalid_argument("ai_down step does not match its premise");
                push_located({Rule::AiTensorDown}, mid, nullptr);
                push_located({Rule::S2}, c, &s.address);
                break;
            }
            case Rule::QDown:
                push_located({Rule::Q2Down, Rule::Q3LDown, Rule::Q3RDown, Rule::Q4Down}, c, &s.address);
                break;
            case Rule::S: push_located({Rule::S2, Rule::S3}, c, &s.address); break;
            case Rule::Eq: break;
            case Rule::AiUp:
            case Rule::QUp:
            case Rule::IUp: throw std::invalid_argument("up rules do not occur in proofs");
            default: out.steps.push_back(Step{s.rule, s.address, p, c}); break;
        }
    }
    return out;
}

// ------------------------------------------------------------------ search

namespace {

bool atoms_balanced(const Formula& a) {
    for (auto& [v, pn] : polarity_counts(a))
        if (pn.first != pn.second) return false;
    return true;
}

struct Prover {
    std::vector<std::vector<Rule>> classes;
    ProveOptions opt;
    std::unordered_set<std::string> failed;
    std::unordered_map<std::string, bool> pomset_memo;
    std::vector<Step> chain;  // filled while unwinding, so top-down

    bool pomset_ok(const Formula& f) {
        if (!opt.pomset_pruning) return true;
        auto it = pomset_memo.find(f->key);
        if (it != pomset_memo.end()) return it->second;
        Sequent s = formula_to_sequent(f);
        bool ok = true;
        if (count_linkings(s) <= 64) ok = pomset_provable(s).provable;
        pomset_memo.emplace(f->key, ok);
        return ok;
    }

    bool solve(const Formula& f) {
        if (is_pair(f, Kind::Par)) return true;
        if (failed.count(f->key)) return false;
        if (opt.budget) opt.budget->tick();
        for (auto& cls : classes) {
            bool done = false;
            std::function<bool(const Formula&, Address&)> walk = [&](const Formula& x, Address& ad) {
                for (Rule r : cls) {
                    bool stop = false;
                    node_results(r, x, false, [&](const Formula& repl) {
                        Formula p = replace_at(f, ad, repl);
                        if (failed.count(p->key)) return true;
                        if (!pomset_ok(p)) {
                            failed.insert(p->key);
                            return true;
                        }
                        if (solve(p)) {
                            chain.push_back(Step{r, ad, p, f});
                            stop = true;
                            return false;
                        }
                        return true;
                    });
                    if (stop) return true;
                }
                for (std::size_t i = 0; i < x->kids.size(); ++i) {
                    ad.push_back(static_cast<int>(i));
                    bool hit = walk(x->kids[i], ad);
                    ad.pop_back();
                    if (hit) return true;
                }
                return false;
            };
            Address ad;
            done = walk(f, ad);
            if (done) return true;
        }
        failed.insert(f->key);
        return false;
    }
};

}  // namespace

std::optional<Derivation> prove(const Formula& a, System sys, const ProveOptions& opt) {
    if (sys != System::BV && sys != System::BVu && sys != System::BVhatu)
        throw std::invalid_argument("prove supports bv, bvu and bvhatu");
    auto stripped = remove_units(a);
    if (!stripped) {
        if (sys == System::BV) return Derivation{mk_unit(), {}};
        return std::nullopt;
    }
    Formula f = *stripped;
    if (!atoms_balanced(f)) return std::nullopt;

    Prover pr;
    pr.opt = opt;
    std::vector<std::vector<Rule>> classes;
    if (sys == System::BVhatu)
        classes = {{Rule::AiTensorDown, Rule::AiSeqLDown, Rule::AiSeqRDown},
                   {Rule::Q2hDown, Rule::Q3LhDown, Rule::Q3RhDown, Rule::Q4Down},
                   {Rule::S2h, Rule::S3h}};
    else
        classes = {{Rule::AiTensorDown, Rule::AiSeqLDown, Rule::AiSeqRDown},
                   {Rule::Q2Down, Rule::Q3LDown, Rule::Q3RDown, Rule::Q4Down},
                   {Rule::S2, Rule::S3}};
    for (auto& cls : classes) {
        std::vector<Rule> kept;
        for (Rule r : cls)
            if (std::find(opt.excluded.begin(), opt.excluded.end(), r) == opt.excluded.end())
                kept.push_back(r);
        pr.classes.push_back(kept);
    }
    if (!pr.pomset_ok(f)) return std::nullopt;
    if (!pr.solve(f)) return std::nullopt;

    Derivation d;
    d.premise = mk_unit();
    Formula top = pr.chain.empty() ? f : pr.chain.front().premise;
    d.steps.push_back(Step{Rule::Ai0Down, {}, mk_unit(), top});
    for (auto& s : pr.chain) d.steps.push_back(s);
    if (sys == System::BV) return bvu_to_bv(d);
    return d;
}

// ---------------------------------------------------------- derivability

namespace {

std::vector<Rule> forward_rules(System fragment) {
    if (fragment == System::NonInteraction)
        return {Rule::Q2Down, Rule::Q3LDown, Rule::Q3RDown, Rule::Q4Down};
    if (fragment == System::NonInteractionWs)
        return {Rule::Q2Down, Rule::Q3LDown, Rule::Q3RDown, Rule::Q4Down, Rule::S2, Rule::S3,
                Rule::Q2Up, Rule::Q3LUp, Rule::Q3RUp, Rule::Q4Up, Rule::Ws};
    throw std::invalid_argument("not a search fragment: " + system_name(fragment));
}

// Forward steps from f, each emitted with its rule and address.
void successors(const Formula& f, const std::vector<Rule>& rules,
                const std::function<bool(Rule, const Address&, const Formula&)>& emit) {
    bool go = true;
    std::function<void(const Formula&, Address&)> walk = [&](const Formula& x, Address& ad) {
        for (Rule r : rules) {
            node_results(r, x, true, [&](const Formula& repl) {
                return go = emit(r, ad, replace_at(f, ad, repl));
            });
            if (!go) return;
        }
        for (std::size_t i = 0; i < x->kids.size() && go; ++i) {
            ad.push_back(static_cast<int>(i));
            walk(x->kids[i], ad);
            ad.pop_back();
        }
    };
    Address ad;
    walk(f, ad);
}

std::optional<Derivation> forward_search(const Formula& a, const Formula& b, System fragment,
                                         Budget* budget) {
    const auto rules = forward_rules(fragment);
    std::unordered_set<std::string> seen{a->key};
    std::vector<Step> path;
    std::function<bool(const Formula&)> dfs = [&](const Formula& f) {
        if (same(f, b)) return true;
        if (budget) budget->tick();
        bool found = false;
        successors(f, rules, [&](Rule r, const Address& ad, const Formula& g) {
            if (!seen.insert(g->key).second) return true;
            if (!edge_inclusion(g, b)) return true;
            path.push_back(Step{r, ad, f, g});
            if (dfs(g)) {
                found = true;
                return false;
            }
            path.pop_back();
            return true;
        });
        return found;
    };
    if (!edge_inclusion(a, b)) return std::nullopt;
    if (!dfs(a)) return std::nullopt;
    // Down rules are recorded at their conclusion address.
    for (Step& s : path)
        if (!is_up(s.rule)) s.address = *locate(s.rule, s.premise, s.conclusion);
    return Derivation{a, path};
}

}  // namespace

std::vector<Formula> reachable(const Formula& a, System fragment, Budget* budget) {
    const auto rules = forward_rules(fragment);
    std::unordered_set<std::string> seen{a->key};
    std::vector<Formula> out{a};
    std::deque<Formula> todo{a};
    while (!todo.empty()) {
        Formula f = todo.front();
        todo.pop_front();
        if (budget) budget->tick();
        successors(f, rules, [&](Rule, const Address&, const Formula& g) {
            if (seen.insert(g->key).second) {
                out.push_back(g);
                todo.push_back(g);
            }
            return true;
        });
    }
    return out;
}

std::optional<Derivation> derive(const Formula& a, const Formula& b, System sys, Budget* budget) {
    if (same(a, b)) return Derivation{a, {}};
    if (sys == System::NonInteraction || sys == System::NonInteractionWs)
        return forward_search(a, b, sys, budget);
    if (sys != System::SBV && sys != System::SBVu)
        throw std::invalid_argument("derive supports sbv, sbvu and the two fragments");
    ProveOptions opt;
    opt.budget = budget;
    auto proof = prove(mk_par({negate(a), b}), System::BVhatu, opt);
    if (!proof) return std::nullopt;
    Derivation phi = sys == System::SBV ? bvu_to_bv(*proof) : *proof;
    // From a to (a * [a' | b]) to [(a * a') | b] to b.
    Derivation d = in_context(phi, [&](const Formula& x) { return mk_tensor({a, x}); });
    Formula switched = mk_par({mk_tensor({a, negate(a)}), b});
    Rule s_rule = sys == System::SBV ? Rule::S : Rule::S3;
    auto ad = locate(s_rule, d.conclusion(), switched);
    if (!ad) throw std::logic_error("switch step not found");
    d.steps.push_back(Step{s_rule, *ad, d.conclusion(), switched});
    auto ad2 = locate(Rule::IUp, switched, b);
    if (!ad2) throw std::logic_error("cut step not found");
    d.steps.push_back(Step{Rule::IUp, *ad2, switched, b});
    return d;
}

std::optional<Derivation> derive_inclusion(const Formula& a, const Formula& b, Budget* budget) {
    if (!is_linear(a) || !is_linear(b)) throw std::invalid_argument("derive_inclusion needs linear formulas");
    auto la = atoms(a), lb = atoms(b);
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    if (la != lb) return std::nullopt;
    System frag = has_tensor(a) || has_tensor(b) ? System::NonInteractionWs : System::NonInteraction;
    if (same(a, b)) return Derivation{a, {}};
    return forward_search(a, b, frag, budget);
}

// ------------------------------------------------------------- linkings

Linking extract_linking(const Derivation& proof) {
    if (!proof.premise || !is_unit(proof.premise)) throw std::invalid_argument("not a proof");
    Formula cur = tag_atoms(proof.conclusion());
    Linking link(static_cast<std::size_t>(cur->size), -1);
    auto pair_removed = [&](const Formula& before, const Formula& after) {
        auto tb = tags(before), ta = tags(after);
        std::sort(ta.begin(), ta.end());
        std::vector<int> gone;
        for (int t : tb)
            if (!std::binary_search(ta.begin(), ta.end(), t)) gone.push_back(t);
        if (gone.empty()) return;
        if (gone.size() != 2) throw std::invalid_argument("step removes other than one atom pair");
        link[static_cast<std::size_t>(gone[0])] = gone[1];
        link[static_cast<std::size_t>(gone[1])] = gone[0];
    };
    for (auto it = proof.steps.rbegin(); it != proof.steps.rend(); ++it) {
        const Step& s = *it;
        if (!same(cur, s.conclusion)) throw std::invalid_argument("derivation does not chain");
        if (s.rule == Rule::Ai0Down) {
            if (!is_pair(cur, Kind::Par)) throw std::invalid_argument("bad ai0_down step");
            pair_removed(cur, mk_unit());
            cur = mk_unit();
            continue;
        }
        if (is_up(s.rule) || s.rule == Rule::IDown || s.rule == Rule::Hyp)
            throw std::invalid_argument(rule_name(s.rule) + " is not supported in linking extraction");
        std::optional<Formula> next;
        results_at(s.rule, cur, s.address, false, [&](const Formula& p) {
            if (!same(p, s.premise)) return true;
            next = p;
            return false;
        });
        if (!next) throw std::invalid_argument("invalid step " + rule_name(s.rule));
        pair_removed(cur, *next);
        cur = *next;
    }
    if (!is_unit(cur)) throw std::invalid_argument("proof does not start from the unit");
    for (int v : link)
        if (v < 0) throw std::invalid_argument("atom left unpaired");
    // From occurrence tags to the vertices of the conclusion's sequent.
    auto g = tograph(formula_to_sequent(tag_atoms(proof.conclusion())));
    std::vector<int> vertex_of(link.size());
    for (std::size_t v = 0; v < g.tags.size(); ++v) vertex_of[static_cast<std::size_t>(g.tags[v])] = static_cast<int>(v);
    Linking out(link.size());
    for (std::size_t t = 0; t < link.size(); ++t)
        out[static_cast<std::size_t>(vertex_of[t])] = vertex_of[static_cast<std::size_t>(link[t])];
    return out;
}

Derivation identity_derivation(const Formula& a) {
    auto concat = [](Derivation x, const Derivation& y) {
        for (auto& s : y.steps) x.steps.push_back(s);
        return x;
    };
    auto push = [](Derivation& d, Rule r, const Formula& c) {
        auto ad = locate(r, d.conclusion(), c);
        if (!ad) throw std::logic_error("identity step not found");
        d.steps.push_back(Step{r, *ad, d.conclusion(), c});
    };
    switch (a->kind) {
        case Kind::Unit: return Derivation{mk_unit(), {}};
        case Kind::Atom: {
            Derivation d{mk_unit(), {}};
            push(d, Rule::AiDown, mk_par({a, negate(a)}));
            return d;
        }
        case Kind::Par: return identity_derivation(negate(a));
        case Kind::Seq: {
            Formula first = a->kids[0];
            Formula rest = mk_seq(std::vector<Formula>(a->kids.begin() + 1, a->kids.end()));
            Formula id1 = mk_par({first, negate(first)});
            Derivation d = concat(identity_derivation(first),
                                  in_context(identity_derivation(rest), [&](const Formula& x) {
                                      return mk_seq({id1, x});
                                  }));
            push(d, Rule::QDown, mk_par({a, negate(a)}));
            return d;
        }
        case Kind::Tensor: {
            Formula first = a->kids[0];
            Formula rest = mk_tensor(std::vector<Formula>(a->kids.begin() + 1, a->kids.end()));
            Formula id_rest = mk_par({rest, negate(rest)});
            Derivation d = concat(identity_derivation(rest),
                                  in_context(identity_derivation(first), [&](const Formula& x) {
                                      return mk_tensor({x, id_rest});
                                  }));
            push(d, Rule::S, mk_par({mk_tensor({first, id_rest}), negate(first)}));
            push(d, Rule::S, mk_par({a, negate(a)}));
            return d;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace pomset
