#pragma once
// RB-digraphs, prenets, alternating elementary cycles and correctness.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pomset/dicograph.hpp"
#include "pomset/formula.hpp"

namespace pomset {

// Work counter shared by the exponential searches. A negative limit means
// no limit.
struct Budget {
    long long limit = -1;
    long long used = 0;
    void tick(long long n = 1);
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded() : std::runtime_error("budget exceeded") {}
};

// Regular edges R plus a perfect matching given by `mate`.
struct RBDigraph {
    Digraph R;
    std::vector<int> mate;
    std::vector<std::string> labels;
    int size() const { return R.size(); }
    bool matched(int u, int v) const { return mate[u] == v; }
};

void validate(const RBDigraph& g);

// Alternating elementary cycle. verts[0] -> verts[1] is a matching edge and
// kinds alternate from there; the last step returns to verts[0].
struct AeCycle {
    std::vector<int> verts;
    std::vector<char> kinds;  // 'B' or 'R' for the step leaving verts[i]
};

// partner[v] for every atom occurrence v, in the vertex order of tograph.
using Linking = std::vector<int>;

RBDigraph cographic_prenet(const Sequent& s, const Linking& l);

struct TreePrenet {
    RBDigraph g;
    std::vector<int> occurrence_vertex;  // original atom occurrence -> vertex
    std::vector<int> leaf_root;          // leaf of the sequent -> its root vertex
};
TreePrenet tree_prenet(const Sequent& s, const Linking& l);

std::optional<AeCycle> find_ae_cycle(const RBDigraph& g, Budget* budget = nullptr);
std::optional<AeCycle> find_chordless_ae_cycle(const RBDigraph& g, Budget* budget = nullptr);
bool is_ae_cycle(const RBDigraph& g, const AeCycle& c);
bool is_chordless(const RBDigraph& g, const AeCycle& c);

enum class NetMode { Cographic, Tree };

struct Correctness {
    bool correct = true;
    std::optional<AeCycle> witness;
};
Correctness is_correct(const RBDigraph& g, NetMode mode, Budget* budget = nullptr);

// Calls `f` on each linking until it returns false.
void for_each_linking(const Sequent& s, const std::function<bool(const Linking&)>& f);
std::vector<Linking> enumerate_linkings(const Sequent& s);
long long count_linkings(const Sequent& s);

struct PomsetResult {
    bool provable = false;
    Linking linking;
    long long linkings_tried = 0;
    std::string certificate;  // JSON
};
PomsetResult pomset_provable(const Sequent& s, Budget* budget = nullptr);
// Replays a certificate produced by pomset_provable.
bool check_pomset_certificate(const Sequent& s, const std::string& certificate);

// Alternating elementary path of length at least one from `from` to `to`.
bool ae_path_exists(const RBDigraph& g, int from, int to, Budget* budget = nullptr);

std::string to_dot(const RBDigraph& g);
std::string to_json(const RBDigraph& g);
RBDigraph rb_from_json(const std::string& text);
std::string cycle_str(const RBDigraph& g, const AeCycle& c);

}  // namespace pomset
