#pragma once
// Digraphs, relation webs, directed cographs and the formula/graph translation.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pomset/formula.hpp"

namespace pomset {

// Dense irreflexive digraph on vertices 0..n-1.
class Digraph {
public:
    explicit Digraph(int n = 0) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {}

    int size() const { return n_; }
    bool has(int u, int v) const { return adj_[idx(u, v)] != 0; }
    void add(int u, int v);
    void remove(int u, int v) { adj_[idx(u, v)] = 0; }
    void add_both(int u, int v) {
        add(u, v);
        add(v, u);
    }
    int add_vertex();
    std::vector<std::pair<int, int>> edges() const;
    int edge_count() const;
    Digraph reversed() const;
    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    std::size_t idx(int u, int v) const;
    int n_;
    std::vector<unsigned char> adj_;
};

struct LabeledDigraph {
    Digraph g;
    std::vector<std::string> labels;
    std::vector<int> tags;  // atom occurrence ids when built from a formula, else -1
};

// The four relations of a relation web, each as a digraph.
struct RelationView {
    Digraph T, S, Z, P;
};
RelationView relations(const Digraph& g);

LabeledDigraph tograph(const Formula& a);
LabeledDigraph tograph(const Sequent& s);
// Order digraph on the leaves of a sequent, left to right.
Digraph leaf_order(const Sequent& s);

struct DicographCheck {
    bool ok = true;
    std::string violation;  // "P4", "N" or "weak transitivity"
    std::vector<int> witness;
};
DicographCheck check_dicograph(const Digraph& g);
inline bool is_dicograph(const Digraph& g) { return check_dicograph(g).ok; }

class NotADicograph : public std::runtime_error {
public:
    NotADicograph(const DicographCheck& c)
        : std::runtime_error("not a dicograph (" + c.violation + ")"), check(c) {}
    DicographCheck check;
};

// Labels must parse as atoms.
Formula graph_to_formula(const LabeledDigraph& g);

bool is_sp_order(const Digraph& g);

Digraph induced(const Digraph& g, const std::vector<int>& keep);
LabeledDigraph induced(const LabeledDigraph& g, const std::vector<int>& keep);

// Edge inclusion E(A) ⊇ E(B). `ident[i]` is the vertex of A identified with
// vertex i of B; without it occurrences are matched by label (linear inputs).
bool edge_inclusion(const Formula& a, const Formula& b, const std::vector<int>& ident);
bool edge_inclusion(const Formula& a, const Formula& b);
// Label-preserving bijection from B's vertices to A's, when labels are unique.
std::vector<int> identify_by_label(const LabeledDigraph& a, const LabeledDigraph& b);

// Backtracking isomorphism; result[i] is the image of vertex i of g.
std::optional<std::vector<int>> graph_iso(const LabeledDigraph& g, const LabeledDigraph& h);

std::string to_dot(const LabeledDigraph& g);
std::string to_json(const LabeledDigraph& g);
LabeledDigraph labeled_from_json(const std::string& text);

}  // namespace pomset
