#pragma once
#include <map>
#include <utility>
#include <vector>

#include "hopfcalc/model.hpp"

namespace hopfcalc {

// Word of letters from a model's basis.  Weight is the letter count; a word
// of weight k and internal degree n sits in total degree n - k, i.e. every
// letter contributes its degree lowered by one.
using BarWord = std::vector<int>;
using BarChain = std::map<BarWord, Rational>;
using BarTensor = std::map<std::pair<BarWord, BarWord>, Rational>;

void bar_add_scaled(BarChain& into, const BarChain& c, const Rational& k);
void bar_tensor_add_scaled(BarTensor& into, const BarTensor& t, const Rational& k);

int bar_internal_degree(const Model& m, const BarWord& w);
inline int bar_weight(const BarWord& w) { return static_cast<int>(w.size()); }
int bar_total_degree(const Model& m, const BarWord& w);

// Sum of the lowered letter degrees over the first `count` letters.
int lowered_prefix(const Model& m, const BarWord& w, int count);

// Letterwise differential: slot i picks up the sign -(-1)^{e} where e is the
// lowered degree of everything before the slot.
BarChain d_internal(const Model& m, const BarChain& c);
// Adjacent products: merging slots i, i+1 picks up -(-1)^{e} where e is the
// lowered degree through slot i.
BarChain d_external(const Model& m, const BarChain& c);
BarChain d_total(const Model& m, const BarChain& c);

// Deconcatenation into proper two-sided splits, no signs.
BarTensor coproduct(const BarChain& c);

// Order-preserving merges with the Koszul sign on lowered degrees.
BarChain shuffle_words(const Model& m, const BarWord& a, const BarWord& b);
BarChain shuffle(const Model& m, const BarChain& a, const BarChain& b);

// Multilinear expansion of a word whose slots hold linear combinations.
BarChain word_of_elements(const std::vector<Element>& slots);

} // namespace hopfcalc
