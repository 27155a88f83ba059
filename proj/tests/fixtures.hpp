#pragma once
// Formulas and small helpers shared by the unit and acceptance tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "pomset/formula.hpp"

namespace fixtures {

inline const char* kQ =
    "[(<a;b> * <c;d>) | (<e;f> * <g;h>) | <a';h'> | <e';b'> | <g';d'> | <c';f'>]";

inline const char* kGammaQ =
    "(<a;b> * <c;d>), (<e;f> * <g;h>), {<a';h'>}, {<e';b'>}, {<g';d'>}, {<c';f'>}";

inline const char* kFig4Conclusion =
    "[(a * <c;b'>) | <a';f> | <c';d'> | (d * <e';f'>) | <e;b>]";

// Random formula over the given atoms, each used exactly once.
inline pomset::Formula random_formula(std::mt19937& rng, std::vector<pomset::Formula> leaves) {
    using namespace pomset;
    std::shuffle(leaves.begin(), leaves.end(), rng);
    while (leaves.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
        std::size_t i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        if (i > j) std::swap(i, j);
        Formula a = leaves[i], b = leaves[j];
        Kind k = static_cast<Kind>(2 + rng() % 3);
        Formula c = rng() % 2 ? mk_node(k, {a, b}) : mk_node(k, {b, a});
        leaves.erase(leaves.begin() + j);
        leaves[i] = c;
    }
    return leaves.empty() ? mk_unit() : leaves[0];
}

// Balanced random formula on n variable pairs x0..x{n-1}.
inline pomset::Formula random_balanced(std::mt19937& rng, int pairs) {
    std::vector<pomset::Formula> ls;
    for (int i = 0; i < pairs; ++i) {
        ls.push_back(pomset::mk_atom("x" + std::to_string(i), false));
        ls.push_back(pomset::mk_atom("x" + std::to_string(i), true));
    }
    return random_formula(rng, ls);
}

}  // namespace fixtures
