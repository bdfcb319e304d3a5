#pragma once
#include <map>
#include <optional>
#include <vector>

#include "hopfcalc/rational.hpp"

namespace hopfcalc {

// Sparse vector: (index, coefficient) pairs, strictly increasing indices, no zeros.
using SVec = std::vector<std::pair<int, Rational>>;

SVec svec_from_map(const std::map<int, Rational>& m);
Rational svec_coeff(const SVec& v, int idx);
// a + s*b, result normalized (sorted, zero-free).
SVec svec_axpy(const SVec& a, const Rational& s, const SVec& b);
void svec_scale(SVec& v, const Rational& s);

// Column-major exact sparse matrix: col[j] holds the j-th column as a sparse
// vector over row indices.  Shapes are tracked so mismatches fail loudly.
struct SparseMat {
    int rows = 0;
    int cols = 0;
    std::vector<SVec> col;

    SparseMat() = default;
    SparseMat(int r, int c) : rows(r), cols(c), col(c) {}

    // y = A x, x sparse over columns.
    SVec apply(const SVec& x) const;
};

// Row space in canonical reduced echelon form, maintained incrementally.
// Rows are normalized to primitive integer vectors with positive leading
// coefficient, so the stored data is unique for a given row space (this is
// what makes quotient coordinates and solver output deterministic).  Each row
// may carry a tag vector in a caller-defined space; tags are updated alongside
// row operations so the invariant  row_i = sum_j tag_i[j] * (original j-th
// generator)  holds throughout.
class Echelon {
  public:
    // Fully reduce v against the rows.  If combo is non-null it accumulates
    // the tag-space combination that was subtracted from v.
    void reduce(SVec& v, SVec* combo = nullptr) const;
    // Reduce then insert unless v vanished; returns false if v reduced to zero.
    bool insert(SVec v, SVec tag = {});

    int rank() const { return static_cast<int>(rows_.size()); }
    // Sorted pivot columns.
    std::vector<int> pivots() const;
    // Sorted non-pivot columns among 0..n-1.
    std::vector<int> complement(int n) const;

    const std::vector<SVec>& rows() const { return rows_; }
    const std::vector<SVec>& tags() const { return tags_; }

  private:
    std::vector<SVec> rows_;
    std::vector<SVec> tags_;
    std::map<int, int> pivot_row_; // pivot column -> index into rows_
};

int rank(const SparseMat& A);

// Particular solution of A x = b, or nullopt when b is outside the column
// space.  The solution is supported on the lexicographically earliest
// independent column set (free variables zero); when allowed_cols is given,
// only those columns may carry nonzero entries.
std::optional<SVec> solve(const SparseMat& A, const SVec& b,
                          const std::vector<int>* allowed_cols = nullptr);

// Deterministic kernel basis of A.
std::vector<SVec> kernel(const SparseMat& A);

} // namespace hopfcalc
