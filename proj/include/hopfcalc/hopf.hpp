#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hopfcalc/chainalg.hpp"

namespace hopfcalc {

// A model together with a designated fundamental class: the w-coefficient of
// the weight-one part of a reduced chain is the value of the pairing.
// Validated so that reduction to weight one cannot get stuck in the pairing
// degree and the w-coefficient functional descends to cohomology.
struct SphereTarget {
    const Model* model = nullptr;
    int fundamental = -1; // basis id
    int dim = 0;
};

// Checks: the class is closed of degree n >= 2, positive-degree cohomology is
// one-dimensional concentrated in degree n (through the validation horizon
// for free models), and no differential hits the class symbol.
SphereTarget make_sphere_target(const Model& m, const std::string& name);

int model_cohomology_rank(const Model& m, int k);

// Iterated bracket of maps into a common space.  A leaf holds an algebra map
// from the base model to a sphere-like target; a node is the bracket of its
// children, a map from a sphere of dimension dim(left) + dim(right) - 1.
struct BracketExpr {
    const Morphism* map = nullptr; // leaf only
    SphereTarget target;           // leaf only
    int leaf_symbol = -1;          // base basis id for collapse leaves
    std::shared_ptr<const Model> owned_model;
    std::shared_ptr<const Morphism> owned_map;
    std::unique_ptr<BracketExpr> left, right;

    bool is_leaf() const { return !left; }
    int sphere_dim() const;
    std::string str(const Model& base) const;
};

BracketExpr leaf_expr(const Morphism* f, SphereTarget t);
// Leaf collapsing the base onto the sphere cohomology spanned by one basis
// symbol; only valid when this collapse is an algebra chain map.
BracketExpr collapse_leaf(const Model& base, int symbol);
BracketExpr bracket_expr(BracketExpr l, BracketExpr r);

// Shared caches for repeated pairings against one base model.
class PairEnv {
  public:
    explicit PairEnv(const Model* base, long cap = kDefaultCap);
    const Model* base() const { return base_; }
    long cap() const { return cap_; }
    ChainContext& word_ctx(int weight_cap);
    ChainContext& tree_ctx(int weight_cap);
    ChainContext& sphere_ctx(const Model* s, Flavor f);
    RelationCache& base_relations() { return base_relations_; }

  private:
    const Model* base_;
    long cap_;
    RelationCache base_relations_;
    std::map<int, std::unique_ptr<ChainContext>> word_ctxs_;
    std::map<int, std::unique_ptr<ChainContext>> tree_ctxs_;
    std::map<std::pair<const Model*, Flavor>, std::unique_ptr<ChainContext>>
        sphere_ctxs_;
};

// Letterwise application of an algebra map, expanded multilinearly.
BarChain pullback(const Morphism& f, const BarChain& c);
GraphChain pullback(const Morphism& f, const GraphChain& c);

// Strip weight >= 2 parts by repeatedly solving the letterwise differential
// at top weight and subtracting the full boundary of the preimage.  On
// success, input - d(certificate) = weight_one.  On failure, `stuck` holds
// the (weight, internal degree) slot with no preimage.
struct BarReduction {
    bool ok = false;
    BarChain weight_one;
    BarChain certificate;
    std::pair<int, int> stuck{0, 0};
};
BarReduction reduce_to_weight_one(ChainContext& ctx, const BarChain& c);

struct GraphReduction {
    bool ok = false;
    GraphChain weight_one;
    GraphChain certificate;
    std::pair<int, int> stuck{0, 0};
};
GraphReduction reduce_to_weight_one(ChainContext& ctx, const GraphChain& c);

Rational integrate(const SphereTarget& t, const BarChain& weight_one);
Rational integrate(const SphereTarget& t, const GraphChain& weight_one);

// Pairing of a closed chain against a bracket of maps.  Degree mismatches
// give 0; a non-closed chain is an error.
Rational hopf_pair(PairEnv& env, const BarChain& gamma, const BracketExpr& e);
Rational hopf_pair(PairEnv& env, const GraphChain& gamma, const BracketExpr& e);

Rational whitehead_pair(PairEnv& env, const BarChain& gamma,
                        const BracketExpr& u, const BracketExpr& v);
Rational whitehead_pair(PairEnv& env, const GraphChain& gamma,
                        const BracketExpr& u, const BracketExpr& v);

// Combinatorial pairing of tree classes with bracket words over a formal
// model: sum over label-matching vertex-to-leaf bijections, each edge forced
// onto the fork separating its endpoint leaves, +1 when the source sits on
// the left branch, with the Koszul sign of the bijection.
Rational config_pair(const Model& base, const GraphChain& c,
                     const BracketExpr& b);

// Standard-factorization brackets of the multilinear Lyndon words on the
// given symbols; (k-1)! of them, each symbol used exactly once.
std::vector<BracketExpr> lyndon_brackets(const Model& base,
                                         const std::vector<int>& symbols);

// Homogeneous slice of a chain by total degree.
BarChain degree_part(const Model& m, const BarChain& c, int total);
GraphChain degree_part(const Model& m, const GraphChain& c, int total);

} // namespace hopfcalc
