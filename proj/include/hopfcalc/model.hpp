#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopfcalc/rational.hpp"

namespace hopfcalc {

// Koszul sign of reordering homogeneous symbols: perm[i] is the old position
// of the symbol landing at new position i, degrees are indexed by old
// position.  Callers working under a degree shift pass the shifted degrees.
int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees);

// Linear combination of basis symbols, keyed by basis id.  Kept zero-free.
using Element = std::map<int, Rational>;

void elem_add_scaled(Element& into, const Element& e, const Rational& c);
bool elem_is_zero(const Element& e);

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
    std::string str() const;
};

// Graded-commutative dg algebra over Q, presented either by an explicit
// multiplication/differential table on a finite graded basis, or as a free
// graded-commutative algebra on generators with a polynomial differential.
// Free models enumerate their monomial basis on demand in graded-lex order
// (generators sorted by name), so basis ids are stable and deterministic.
// Caches make the accessors non-reentrant; everything here is single-threaded.
class Model {
  public:
    enum class Kind { table, free };

    static Model make_table(std::string name,
                            std::vector<std::pair<std::string, int>> basis);
    static Model make_free(std::string name,
                           std::vector<std::pair<std::string, int>> generators);

    // Table only; value is expanded into the symmetric orientation on demand.
    void set_product(int a, int b, Element value);
    // Table: any basis id.  Free: generator's monomial id.
    void set_diff(int basis_or_gen, Element value);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    int basis_count() const; // table: full count; free: count enumerated so far
    int degree(int id) const;
    std::string basis_name(int id) const;
    std::optional<int> find_basis(const std::string& name) const; // table symbols / free generators
    bool one_connected() const;  // no degree-1 basis symbols / generators
    int min_positive_degree() const; // INT_MAX when the basis is empty

    // Ids of all basis symbols of the given degree, ascending.  Free models
    // extend their monomial tables as needed.
    const std::vector<int>& basis_of_degree(int d) const;

    Element mul(int a, int b) const;
    Element diff(int a) const;
    Element mul(const Element& a, const Element& b) const;
    Element diff(const Element& a) const;

    // Free only.
    int generator_count() const { return static_cast<int>(gens_.size()); }
    const std::string& generator_name(int g) const { return gens_[g].first; }
    int generator_degree(int g) const { return gens_[g].second; }
    int generator_monomial(int g) const; // monomial id of the bare generator
    int monomial_id(const std::vector<int>& exponents) const; // must be within enumerated range
    const std::vector<int>& monomial_exponents(int id) const;

    std::string render(const Element& e) const;

    // Degree through which validation runs for free models (set from input
    // files; d^2 = 0 etc. are checked on every monomial up to here).
    int validation_depth = 12;
    ValidationReport validate() const;

  private:
    Model() = default;
    void ensure_degree(int d) const;

    Kind kind_ = Kind::table;
    std::string name_;

    // table data
    std::vector<std::pair<std::string, int>> table_basis_;
    std::map<std::pair<int, int>, Element> products_; // as given by the user
    std::map<int, Element> diffs_;

    // free data
    std::vector<std::pair<std::string, int>> gens_; // sorted by name
    mutable std::map<std::vector<int>, int> mono_index_;
    mutable std::vector<std::vector<int>> mono_exps_;
    mutable std::vector<int> mono_degree_;
    mutable std::map<int, std::vector<int>> by_degree_;
    mutable int enumerated_degree_ = 0;
    mutable std::map<int, Element> diff_cache_;

    friend class Morphism;
};

ValidationReport validate_model(const Model& m);

// Free model of the n-sphere: one generator w of degree n when n is odd; for
// even n a second generator ww of degree 2n-1 with d(ww) = w^2.
Model sphere_model(int n);

// Cohomology of the n-sphere as a table model: single basis symbol w of
// degree n, zero differential and zero products.
Model sphere_cohomology_model(int n);

// Formal model of a wedge of spheres: zero differential, zero products.
// Default symbol names are g1..gk.
Model wedge_model(const std::vector<int>& degrees,
                  std::vector<std::string> names = {});

// Algebra map between models, given on table basis symbols resp. free
// generators and extended multiplicatively; stands in for a map of spaces in
// the opposite direction.
class Morphism {
  public:
    Morphism(std::string name, const Model* src, const Model* tgt);

    void set_image(int src_basis_or_gen, Element value);

    const std::string& name() const { return name_; }
    const Model* src() const { return src_; }
    const Model* tgt() const { return tgt_; }

    Element apply(int basis_id) const;
    Element apply(const Element& e) const;

    ValidationReport validate() const;

  private:
    std::string name_;
    const Model* src_;
    const Model* tgt_;
    std::map<int, Element> images_;
    mutable std::map<int, Element> apply_cache_;
};

ValidationReport validate_morphism(const Morphism& f);

// outer . inner (inner applied first).
Morphism compose(const Morphism& outer, const Morphism& inner,
                 const std::string& name = "composite");

} // namespace hopfcalc
