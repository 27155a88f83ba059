#pragma once
// Reductions from CNF satisfiability to alternating cycles and from RB-digraphs
// to pomset logic sequents, with brute-force oracles.

#include <functional>
#include <string>
#include <vector>

#include "pomset/dicograph.hpp"
#include "pomset/formula.hpp"
#include "pomset/rbnet.hpp"

namespace pomset {

struct Literal {
    int var = 0;
    bool neg = false;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Clauses are sorted sets of literals. `universals` lists the variables of the
// universal prefix; it is empty for plain satisfiability.
struct CnfInstance {
    std::vector<std::string> vars;
    std::vector<std::vector<Literal>> clauses;
    std::vector<int> universals;
};

void validate(const CnfInstance& f);
bool both_polarities(const CnfInstance& f);
// Drops clauses made true by pure existential literals and pure universal
// literals from their clauses until every variable occurs both ways.
// Unused variables are removed.
CnfInstance normalize_polarities(const CnfInstance& f);
// Universal variables first, then the others, each in declaration order.
std::vector<int> variable_order(const CnfInstance& f);

// "forall x : (x | ~y) & (y)"
std::string to_string(const CnfInstance& f);
CnfInstance parse_cnf(const std::string& text);
// DIMACS with an optional "c forall v1 v2 ..." line (QDIMACS "a" lines are
// accepted too). Variable k is named xk.
CnfInstance parse_dimacs(const std::string& text);
std::string to_dimacs(const CnfInstance& f);

bool brute_sat(const CnfInstance& f);
bool brute_qbf(const CnfInstance& f);

// A digraph with a source and a sink. Vertex 0 is s, vertex 1 is t, and
// vertex 2 + k is the k-th literal occurrence in clause order.
struct StDigraph {
    Digraph g;
    int s = 0, t = 1;
    std::vector<std::string> labels;
};

// s -> first clause -> ... -> last clause -> t, one occurrence per clause.
StDigraph build_gcl(const CnfInstance& f);
// t -> occurrences of the literals set to false, variable by variable -> s.
StDigraph build_gvar(const CnfInstance& f);
// Occurrence vertices of the literals made false by an assignment.
std::vector<int> false_occurrences(const CnfInstance& f, const std::vector<bool>& value);

// Two edges (source, first) and (source, second); a switching keeps one.
struct EdgePair {
    int source = 0, first = 0, second = 0;
    friend bool operator==(const EdgePair&, const EdgePair&) = default;
};

struct PairedRBDigraph {
    RBDigraph g;
    std::vector<EdgePair> pairs;
};
void validate(const PairedRBDigraph& g);

// Pairs on the edges of build_gvar leaving t and the last occurrences of each
// universal variable.
std::vector<EdgePair> paired_gvar(const CnfInstance& f, const StDigraph& gvar);

// Vertices s1 s2 t1 t2 = 0 1 2 3, then v+ and v- for every other vertex v.
RBDigraph superpose(const Digraph& g1, const Digraph& g2, int s, int t,
                    const std::vector<std::string>& labels = {});
// Same construction, carrying pairs of g2 edges over to the result.
PairedRBDigraph superpose_paired(const Digraph& g1, const Digraph& g2, int s, int t,
                                 const std::vector<EdgePair>& pairs2,
                                 const std::vector<std::string>& labels = {});
int plus_vertex(int v, int s, int t);
int minus_vertex(int v, int s, int t);

// Normalizes first. The empty instance gives s1 -> t1 => t2 -> s2 => s1.
RBDigraph sat_to_rb(const CnfInstance& f);
PairedRBDigraph qbf_to_rb(const CnfInstance& f);

// Atoms a_u_v, a_u_pk and bk over vertex and pair ids.
Sequent proofification(const RBDigraph& g);
// Replaces the opposite (v,u) of every paired edge (u,v) by v -> n1 => n2 -> u.
PairedRBDigraph split_opposite_edges(const PairedRBDigraph& g);
Sequent paired_proofification(const PairedRBDigraph& g);
Sequent qbf_to_sequent(const CnfInstance& f);

long long switching_count(const PairedRBDigraph& g);
// Calls `f` on each switching until it returns false.
void for_each_switching(const PairedRBDigraph& g, const std::function<bool(const RBDigraph&)>& f);

}  // namespace pomset
