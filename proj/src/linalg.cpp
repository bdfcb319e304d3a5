#include "hopfcalc/linalg.hpp"

#include <algorithm>

namespace hopfcalc {

SVec svec_from_map(const std::map<int, Rational>& m) {
    SVec v;
    v.reserve(m.size());
    for (const auto& [i, c] : m)
        if (!c.is_zero()) v.emplace_back(i, c);
    return v;
}

Rational svec_coeff(const SVec& v, int idx) {
    auto it = std::lower_bound(v.begin(), v.end(), idx,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != v.end() && it->first == idx) return it->second;
    return Rational(0);
}

SVec svec_axpy(const SVec& a, const Rational& s, const SVec& b) {
    SVec out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            Rational c = s * b[j].second;
            if (!c.is_zero()) out.emplace_back(b[j].first, c);
            ++j;
        } else {
            Rational c = a[i].second + s * b[j].second;
            if (!c.is_zero()) out.emplace_back(a[i].first, c);
            ++i, ++j;
        }
    }
    return out;
}

void svec_scale(SVec& v, const Rational& s) {
    if (s.is_zero()) {
        v.clear();
        return;
    }
    for (auto& [i, c] : v) c *= s;
}

SVec SparseMat::apply(const SVec& x) const {
    std::map<int, Rational> acc;
    for (const auto& [j, xj] : x)
        for (const auto& [i, a] : col.at(j)) acc[i] += a * xj;
    return svec_from_map(acc);
}

// Scale to a primitive integer vector with positive leading coefficient.
// Returns the factor applied (needed to keep tags consistent).
static Rational normalize_primitive(SVec& v) {
    if (v.empty()) return Rational(1);
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [i, c] : v) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
        den_lcm = l;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), c.num().get_mpz_t());
        num_gcd = g;
    }
    Rational s(mpq_class(den_lcm) / mpq_class(num_gcd));
    if ((v.front().second * s).sign() < 0) s = -s;
    svec_scale(v, s);
    return s;
}

void Echelon::reduce(SVec& v, SVec* combo) const {
    std::map<int, Rational> acc;
    size_t pos = 0;
    while (pos < v.size()) {
        auto it = pivot_row_.find(v[pos].first);
        if (it == pivot_row_.end()) {
            ++pos;
            continue;
        }
        const SVec& r = rows_[it->second];
        Rational lambda = v[pos].second / r.front().second;
        v = svec_axpy(v, -lambda, r);
        if (combo) {
            for (const auto& [i, c] : tags_[it->second]) acc[i] += lambda * c;
        }
        // entries before pos are untouched (pivot is the row's first entry)
    }
    if (combo) *combo = svec_from_map(acc);
}

bool Echelon::insert(SVec v, SVec tag) {
    SVec combo;
    reduce(v, tag.empty() ? nullptr : &combo);
    if (v.empty()) return false;
    if (!combo.empty()) tag = svec_axpy(tag, Rational(-1), combo);
    Rational s = normalize_primitive(v);
    svec_scale(tag, s);
    int p = v.front().first;
    // full reduction: clear column p from existing rows
    for (size_t r = 0; r < rows_.size(); ++r) {
        Rational c = svec_coeff(rows_[r], p);
        if (c.is_zero()) continue;
        Rational lambda = c / v.front().second;
        rows_[r] = svec_axpy(rows_[r], -lambda, v);
        tags_[r] = svec_axpy(tags_[r], -lambda, tag);
        Rational s2 = normalize_primitive(rows_[r]);
        svec_scale(tags_[r], s2);
    }
    pivot_row_[p] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    tags_.push_back(std::move(tag));
    return true;
}

std::vector<int> Echelon::pivots() const {
    std::vector<int> out;
    out.reserve(pivot_row_.size());
    for (const auto& [p, _] : pivot_row_) out.push_back(p);
    return out;
}

std::vector<int> Echelon::complement(int n) const {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
        if (!pivot_row_.count(j)) out.push_back(j);
    return out;
}

int rank(const SparseMat& A) {
    Echelon e;
    for (const SVec& c : A.col) e.insert(c);
    return e.rank();
}

std::optional<SVec> solve(const SparseMat& A, const SVec& b,
                          const std::vector<int>* allowed_cols) {
    Echelon e;
    auto insert_col = [&](int j) { e.insert(A.col[j], SVec{{j, Rational(1)}}); };
    if (allowed_cols) {
        for (int j : *allowed_cols) insert_col(j);
    } else {
        for (int j = 0; j < A.cols; ++j) insert_col(j);
    }
    SVec r = b, combo;
    e.reduce(r, &combo);
    if (!r.empty()) return std::nullopt;
    return combo;
}

std::vector<SVec> kernel(const SparseMat& A) {
    Echelon e;
    std::vector<SVec> out;
    for (int j = 0; j < A.cols; ++j) {
        SVec v = A.col[j], combo;
        e.reduce(v, &combo);
        if (v.empty()) {
            out.push_back(svec_axpy(SVec{{j, Rational(1)}}, Rational(-1), combo));
        } else {
            // re-insert with reduction already done: insert handles it
            e.insert(A.col[j], SVec{{j, Rational(1)}});
        }
    }
    return out;
}

} // namespace hopfcalc
