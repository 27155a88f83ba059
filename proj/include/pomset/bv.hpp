#pragma once
// Deep-inference rules for BV and its unit-free variants: matching, checking,
// proof search and derivation synthesis.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pomset/formula.hpp"
#include "pomset/rbnet.hpp"

namespace pomset {

enum class Rule {
    Hyp,
    // with units
    AiDown, AiUp, QDown, QUp, S, Eq,
    // unit-free
    Ai0Down, AiTensorDown, AiSeqLDown, AiSeqRDown,
    Q2Down, Q3LDown, Q3RDown, Q4Down, S2, S3, EqP,
    Ai0Up, AiTensorUp, AiSeqLUp, AiSeqRUp,
    Q2Up, Q3LUp, Q3RUp, Q4Up,
    // no par as main connective of the side formulas
    Q2hDown, Q3LhDown, Q3RhDown, S2h, S3h,
    Ws,
    IDown, IUp,
};

enum class System {
    BV, SBV, BVu, SBVu, BVhatu,
    NonInteraction,    // eqp, q2, q3L, q3R, q4 (down)
    NonInteractionWs,  // non-interaction down and up rules, switches and ws
};

std::string rule_name(Rule r);
std::optional<Rule> parse_rule(const std::string& name);
std::string system_name(System s);
std::optional<System> parse_system(const std::string& name);
bool in_system(Rule r, System s);
// Up rules are checked at an address of the premise, the others at an
// address of the conclusion.
bool is_up(Rule r);

struct Step {
    Rule rule = Rule::Hyp;
    Address address;
    Formula premise;
    Formula conclusion;
};

// Steps run from the premise down to the conclusion. A unit-free proof starts
// with an ai0_down step whose premise is the unit.
struct Derivation {
    Formula premise;
    std::vector<Step> steps;
    Formula conclusion() const { return steps.empty() ? premise : steps.back().conclusion; }
    std::size_t length() const { return steps.size(); }
};

// Every premise of `c` by one instance of the down rule at `ad`.
std::vector<Formula> premises_at(Rule r, const Formula& c, const Address& ad);
// Every conclusion of `p` by one instance of the rule applied forward at `ad`
// (an address of p).
std::vector<Formula> conclusions_at(Rule r, const Formula& p, const Address& ad);

struct Instance {
    Formula premise;
    Step step;
};
// Every instance of a down rule with conclusion c, over all addresses.
std::vector<Instance> premises_of(Rule r, const Formula& c);

bool valid_step(const Step& s);
// Address at which the step is a valid instance, if any.
std::optional<Address> locate(Rule r, const Formula& premise, const Formula& conclusion);

struct CheckResult {
    bool ok = true;
    int step = -1;
    std::string reason;
};
CheckResult check_derivation(const Derivation& d, System sys);
bool is_proof(const Derivation& d);

std::string print_certificate(const Derivation& d);
Derivation parse_certificate(const std::string& text);

struct ProveOptions {
    Budget* budget = nullptr;
    bool pomset_pruning = true;
    std::vector<Rule> excluded;  // rules removed from the search
};

// A proof of a in the given system (BV, BVu or BVhatu), or nullopt when none
// exists. Throws BudgetExceeded when the budget runs out first.
std::optional<Derivation> prove(const Formula& a, System sys, const ProveOptions& opt = {});

// Derivation from a to b. For SBV and SBVu this goes through a proof of
// [a' | b]; for the two fragments it is a direct forward search.
std::optional<Derivation> derive(const Formula& a, const Formula& b, System sys,
                                 Budget* budget = nullptr);
// Non-interaction fragment, with ws when a tensor occurs.
std::optional<Derivation> derive_inclusion(const Formula& a, const Formula& b,
                                           Budget* budget = nullptr);
// Every formula reachable from a by forward steps of a fragment.
std::vector<Formula> reachable(const Formula& a, System fragment, Budget* budget = nullptr);

// Pairs the atoms removed by each interaction step. Indices follow the vertex
// order of tograph(formula_to_sequent(conclusion)).
Linking extract_linking(const Derivation& proof);

Derivation identity_derivation(const Formula& a);
Derivation bv_to_bvu(const Derivation& proof);
Derivation bvu_to_bv(const Derivation& proof);

// The derivation with every line put into the context `ctx`.
Derivation in_context(const Derivation& d, const std::function<Formula(const Formula&)>& ctx);

}  // namespace pomset
