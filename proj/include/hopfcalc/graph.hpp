#pragma once
#include <compare>
#include <map>
#include <utility>
#include <vector>

#include "hopfcalc/bar.hpp"
#include "hopfcalc/linalg.hpp"
#include "hopfcalc/model.hpp"

namespace hopfcalc {

// Directed tree with ordered vertices; the vertex order is the tensor slot
// order, so reordering vertices costs a Koszul sign on lowered degrees.
struct Tree {
    std::vector<int> labels;                  // basis ids, indexed by vertex
    std::vector<std::pair<int, int>> edges;   // (source, target) vertex indices
    auto operator<=>(const Tree&) const = default;
};

using GraphChain = std::map<Tree, Rational>;
using GraphTensor = std::map<std::pair<Tree, Tree>, Rational>;

void graph_add_scaled(GraphChain& into, const GraphChain& c, const Rational& k);
void graph_tensor_add_scaled(GraphTensor& into, const GraphTensor& t,
                             const Rational& k);

int graph_internal_degree(const Model& m, const Tree& t);
inline int graph_weight(const Tree& t) { return static_cast<int>(t.labels.size()); }
int graph_total_degree(const Model& m, const Tree& t);
int graph_lowered_degree(const Model& m, const Tree& t);

// Throws input_error unless t is a nonempty connected directed tree without
// self loops, with labels from m.
void validate_tree(const Model& m, const Tree& t);

// Canonical representative of the vertex-reordering class, with the Koszul
// sign relating the input to it.  Sign 0 means the class vanishes: it admits
// an automorphism exchanging identical subtrees of odd total lowered degree.
std::pair<Tree, int> canonize(const Model& m, const Tree& t);

// canonize and accumulate.
void graph_add_tree(GraphChain& into, const Model& m, const Tree& t,
                    const Rational& c);

// Word to linear path x1 -> x2 -> ... -> xk.
GraphChain phi(const Model& m, const BarChain& c);

GraphChain d_graph_internal(const Model& m, const GraphChain& c);
GraphChain d_graph_external(const Model& m, const GraphChain& c); // edge contractions
GraphChain d_graph(const Model& m, const GraphChain& c);

// Single-edge cuts: for each edge, source component tensor target component
// minus the Koszul-signed flip.  The cut sign is the unshuffle of the slot
// order into (source component, target component) on lowered degrees.
GraphTensor cobracket(const Model& m, const GraphChain& c);

// Span of arrow-reversal and path-rotation relations among the canonical
// tree classes carrying one label multiset.  Reversals are collapsed by a
// signed union-find; rotation generators are row reduced in the surviving
// coordinates.  Quotient coordinates are the non-pivot survivors.
struct RelationSpace {
    std::vector<Tree> classes;    // nonzero canonical classes, ascending
    std::map<Tree, int> index;
    std::vector<int> uf_root;     // class -> root class (reversal collapse)
    std::vector<int> uf_sign;     // class = sign * root, modulo reversals
    std::vector<char> zero;       // class collapsed to zero
    std::vector<int> roots;       // surviving representatives, ascending
    std::map<int, int> root_pos;  // class index -> position in roots
    Echelon rotations;            // rotation relations over root positions
    std::vector<int> complement;  // root positions spanning the quotient

    int quotient_dim() const { return static_cast<int>(complement.size()); }
    // Canonical coset representative, as coordinates over `roots` positions.
    SVec reduce_coords(const SVec& coords_over_classes) const;
};

// Enumeration and relation spaces are memoized per sorted label multiset.
class RelationCache {
  public:
    explicit RelationCache(const Model* m) : m_(m) {}
    const Model* model() const { return m_; }
    // Every canonical form on the multiset, including vanishing classes.
    const std::vector<Tree>& structural(const std::vector<int>& sorted_labels);
    const RelationSpace& space(const std::vector<int>& sorted_labels);

  private:
    const Model* m_;
    std::map<std::vector<int>, std::vector<Tree>> structural_;
    std::map<std::vector<int>, RelationSpace> spaces_;
};

std::vector<int> label_multiset(const Tree& t);

// Canonical representative of the class of c in the quotient by reversal and
// rotation relations.  Linear, idempotent, kernel = the relation span.
GraphChain quotient_reduce(RelationCache& cache, const GraphChain& c);

// Weight-raising splitting operator for free models: pulls one generator
// occurrence out of a vertex of word length >= 2 into a new vertex wired
// into it, averaged over the total word length of the tree.
GraphChain homotopy_h(const Model& m, const GraphChain& c);

} // namespace hopfcalc
