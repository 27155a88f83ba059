#pragma once
// Formulas over atoms with par, tensor and seq, kept in canonical form.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pomset {

enum class Kind : std::uint8_t { Unit, Atom, Par, Tensor, Seq };

struct Node;
using Formula = std::shared_ptr<const Node>;

// Immutable formula node. `key` is the printed canonical form and is the
// identity used for equality and for ordering par/tensor children. `tag` marks
// an atom occurrence and survives canonicalization; it never enters `key`.
struct Node {
    Kind kind = Kind::Unit;
    std::string var;
    bool neg = false;
    int tag = -1;
    std::vector<Formula> kids;
    std::string key;
    std::size_t hash = 0;
    int size = 0;
};

struct Atom {
    std::string var;
    bool neg = false;
    Atom dual() const { return Atom{var, !neg}; }
    std::string str() const { return neg ? var + "'" : var; }
    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// Smart constructors: children must be canonical; the result is canonical.
Formula mk_unit();
Formula mk_atom(const std::string& var, bool neg = false, int tag = -1);
Formula mk_atom(const Atom& a, int tag = -1);
Formula mk_node(Kind k, std::vector<Formula> kids);
inline Formula mk_par(std::vector<Formula> kids) { return mk_node(Kind::Par, std::move(kids)); }
inline Formula mk_tensor(std::vector<Formula> kids) { return mk_node(Kind::Tensor, std::move(kids)); }
inline Formula mk_seq(std::vector<Formula> kids) { return mk_node(Kind::Seq, std::move(kids)); }

inline bool same(const Formula& a, const Formula& b) { return a->key == b->key; }
inline bool is_unit(const Formula& a) { return a->kind == Kind::Unit; }
inline bool is_atom(const Formula& a) { return a->kind == Kind::Atom; }
inline Atom atom_of(const Formula& a) { return Atom{a->var, a->neg}; }

Formula parse_formula(const std::string& text);
std::string print(const Formula& a);

// Rebuilds bottom-up through the smart constructors.
Formula canonicalize(const Formula& a);
// Unit-free formula equal to `a` modulo the unit laws, or nullopt when a is the unit.
std::optional<Formula> remove_units(const Formula& a);

Formula negate(const Formula& a);
Formula conjugate(const Formula& a);

int size(const Formula& a);
bool is_balanced(const Formula& a);
bool is_linear(const Formula& a);
bool has_tensor(const Formula& a);
bool has_unit(const Formula& a);
std::vector<Formula> atom_leaves(const Formula& a);  // preorder
std::vector<Atom> atoms(const Formula& a);           // preorder
std::map<std::string, std::pair<int, int>> polarity_counts(const Formula& a);

// Numbers atom occurrences 0..n-1 in preorder.
Formula tag_atoms(const Formula& a, int first = 0);
std::vector<int> tags(const Formula& a);

Formula rename_vars(const Formula& a, const std::function<std::string(const std::string&)>& f);
// Substitutes a formula for each occurrence of a variable; a negative
// occurrence receives the negation of the substitute.
Formula substitute(const Formula& a, const std::map<std::string, Formula>& sub);
// Replaces the atom occurrences whose preorder index is in `kill` by the unit.
Formula kill_atoms(const Formula& a, const std::vector<bool>& kill);

std::vector<Formula> pseudo_subformulas(const Formula& a, int max_kill);
bool is_pseudo_subformula(const Formula& b, const Formula& a);

// Addresses are child-index paths from the root of a canonical formula.
using Address = std::vector<int>;
std::string address_str(const Address& ad);
Address parse_address(const std::string& s);
Formula at(const Formula& a, const Address& ad);
Formula replace_at(const Formula& a, const Address& ad, std::size_t depth, const Formula& sub);
inline Formula replace_at(const Formula& a, const Address& ad, const Formula& sub) {
    return replace_at(a, ad, 0, sub);
}
void for_each_address(const Formula& a, const std::function<void(const Address&, const Formula&)>& f);

// ---------------------------------------------------------------- sequents

enum class SKind : std::uint8_t { Empty, Leaf, ParList, SeqList };

struct SNode;
using Sequent = std::shared_ptr<const SNode>;

struct SNode {
    SKind kind = SKind::Empty;
    Formula leaf;
    std::vector<Sequent> kids;
    std::string key;
};

Sequent sq_empty();
Sequent sq_leaf(Formula f);
Sequent sq_node(SKind k, std::vector<Sequent> kids);
inline Sequent sq_par(std::vector<Sequent> kids) { return sq_node(SKind::ParList, std::move(kids)); }
inline Sequent sq_seq(std::vector<Sequent> kids) { return sq_node(SKind::SeqList, std::move(kids)); }
Sequent sq_flat(const std::vector<Formula>& fs);
inline bool same(const Sequent& a, const Sequent& b) { return a->key == b->key; }

Sequent parse_sequent(const std::string& text);
std::string print(const Sequent& s);

Formula sequent_to_formula(const Sequent& s);
// The flat sequent of the top-level par children.
Sequent formula_to_sequent(const Formula& a);
std::vector<Formula> leaves(const Sequent& s);  // left to right
bool is_flat(const Sequent& s);
Sequent tag_atoms(const Sequent& s, int first = 0);
Sequent map_leaves(const Sequent& s, const std::function<Formula(const Formula&)>& f);

// Unfolding into a flat sequent with one fresh pair per non-atomic
// subformula occurrence, n-ary nodes read as right-nested binary ones. The table lists, per fresh variable, the printed
// subformula occurrence it stands for.
struct Unfolding {
    Sequent flat;
    std::vector<std::pair<std::string, std::string>> table;
};
Unfolding unfold(const Sequent& s);

}  // namespace pomset
