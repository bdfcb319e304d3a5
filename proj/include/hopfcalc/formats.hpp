#pragma once
#include "hopfcalc/bar.hpp"
#include "hopfcalc/graph.hpp"
#include "hopfcalc/hopf.hpp"
#include "hopfcalc/model.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hopfcalc {

// Model files are line oriented:
//   model <name>
//   kind free|table
//   truncate <N>                   optional validation horizon (free models)
//   generator <name> degree <d>    free models
//   basis <name> degree <d>        table models
//   d <name> = <poly>
//   product <a> <b> = <poly>       table models; omitted pairs are zero
// '#' starts a comment; blank lines are skipped.  Symbol names are
// identifiers ([A-Za-z_][A-Za-z0-9_]*, "tree" reserved).
Model parse_model(std::istream& in);
Model parse_model_file(const std::string& path); // "-" reads stdin

// Morphism files carry unresolved names so the caller can supply models:
//   morphism <name> from <src-model> to <tgt-model>
//   <generator> -> <poly>
// Omitted generators map to zero.
struct MorphismFile {
    struct Image {
        int line;
        std::string gen, poly;
    };
    std::string name, from, to;
    std::vector<Image> images;
};
MorphismFile parse_morphism(std::istream& in);
MorphismFile parse_morphism_file(const std::string& path);
Morphism bind_morphism(const MorphismFile& mf, const Model* src,
                       const Model* tgt);

// Polynomials are sums of terms `3/2*x^2*y`; a term's leading '*'-separated
// factor is its coefficient when it parses as a rational literal.  Table
// models take single basis symbols per term, free models take monomials.
Element parse_poly(const Model& m, const std::string& text, int line = 0);

// Bar expressions: `3/2*x|y - y|x + w`.
// Tree expressions: `tree{v1:x, v2:y, v3:z; v1->v2, v2->v3}` with vertex
// slots in listing order; terms combine with rational coefficients.
// Parsed trees are stored in canonical form (zero classes drop out).
BarChain parse_bar_expr(const Model& m, const std::string& text);
GraphChain parse_graph_expr(const Model& m, const std::string& text);
bool expr_is_graph(const std::string& text);

// Bracket expressions: `[g1,[g2,g3]]` over basis symbols of the base model;
// each leaf becomes the collapse map onto that symbol.
BracketExpr parse_bracket_expr(const Model& base, const std::string& text);

// Canonical printers; print∘parse is the identity on their output.
std::string print_poly(const Model& m, const Element& e);
std::string print_bar(const Model& m, const BarChain& c);
std::string print_graph(const Model& m, const GraphChain& c);

} // namespace hopfcalc
