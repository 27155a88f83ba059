#pragma once
// Retore's sequent calculus for pomset logic (checking, cut-free search, the
// translation of unit-free BV proofs), the Tiu-style formula family, and
// Slavnov pre-proofs with their seq-introduction side condition.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pomset/bv.hpp"
#include "pomset/formula.hpp"
#include "pomset/rbnet.hpp"

namespace pomset {

enum class SequentRule {
    Axiom, Dimix, Entropy, Cut, ParIntro, SeqIntro, TensorIntro,
    SlvAxiom, SlvMix, SlvTensor, SlvPar, SlvSeq,
};

std::string rule_name(SequentRule r);
std::optional<SequentRule> parse_sequent_rule(const std::string& name);

struct SequentProof {
    SequentRule rule = SequentRule::Axiom;
    Sequent conclusion;
    std::vector<SequentProof> children;
};

int proof_size(const SequentProof& p);
int count_rule(const SequentProof& p, SequentRule r);

// (rule "conclusion" child*), one node per line, children indented.
// Lines starting with '#' are comments.
std::string print_proof(const SequentProof& p);
SequentProof parse_proof(const std::string& text);

// lower <= upper: the same leaf occurrences, and every order edge of `lower`
// is an edge of `upper` under some label-preserving bijection. Throws
// std::invalid_argument when the leaf multisets differ.
bool entropy_valid(const Sequent& lower, const Sequent& upper);

// `path` lists child indices from the root to the first failing node.
struct SequentCheck {
    bool ok = true;
    std::vector<int> path;
    std::string reason;
};
SequentCheck check_retore(const SequentProof& p, bool allow_cut);

// Complete search for a cut-free proof. Entropy is only generated right
// below a dimix. Throws BudgetExceeded.
std::optional<SequentProof> search_cutfree_retore(const Sequent& s, Budget* budget = nullptr);

// Cut-free proof of [a', a].
SequentProof identity_proof(const Formula& a);
// One cut per step of a unit-free BV proof. Throws std::invalid_argument
// when `d` is not a valid BVu proof.
SequentProof translate_bvu_proof(const Derivation& d);

constexpr int kTiuCap = 8;
// R_n over atoms a<w>, b<w>, c<w>, y<w>, z<w> for index words w.
Formula tiu_formula(int n);

// Slavnov pre-proofs use flat sequents only.
SequentCheck check_slavnov(const SequentProof& p);

// The conclusion with atoms tagged by occurrence and the linking given by
// the axioms, in tograph order.
struct SlavnovNet {
    Sequent conclusion;
    Linking linking;
};
SlavnovNet slavnov_net(const SequentProof& p);

// Pre-proof of a flat sequent whose axioms follow `l`, reading seq as par
// while splitting. nullopt when the linking admits no such proof.
std::optional<SequentProof> sequentialize(const Sequent& s, const Linking& l, Budget* budget = nullptr);

// Random pre-proof over `pairs` distinct variables.
SequentProof random_slavnov_proof(std::mt19937& rng, int pairs);

}  // namespace pomset
