#pragma once
#include "hopfcalc/model.hpp"

// Recurring test models.
namespace testbed {

using hopfcalc::Element;
using hopfcalc::Model;
using hopfcalc::Rational;

inline Element one(int id) {
    return Element{{id, Rational(1)}};
}

// Minimal Sullivan model of S^2: generators x(2), y(3) with d y = x^2.
inline Model free_s2() {
    Model m = Model::make_free("Ms2", {{"x", 2}, {"y", 3}});
    m.set_diff(*m.find_basis("y"), one(m.monomial_id({2, 0})));
    return m;
}

// Two-stage model with the rational homotopy of CP^2: x(2), y(5), d y = x^3.
inline Model free_cp2() {
    Model m = Model::make_free("Mcp2", {{"x", 2}, {"y", 5}});
    m.set_diff(*m.find_basis("y"), one(m.monomial_id({3, 0})));
    return m;
}

// Formal model of configurations of three points: a_ij in degree 2 with
// a12*a23 = p, a23*a31 = q, a31*a12 = -p-q (the three-term product relation),
// zero differential, everything above degree 4 truncated.
inline Model conf3() {
    Model m = Model::make_table(
        "Conf3", {{"a12", 2}, {"a23", 2}, {"a31", 2}, {"p", 4}, {"q", 4}});
    int a12 = *m.find_basis("a12");
    int a23 = *m.find_basis("a23");
    int a31 = *m.find_basis("a31");
    int p = *m.find_basis("p");
    int q = *m.find_basis("q");
    m.set_product(a12, a23, one(p));
    m.set_product(a23, a31, one(q));
    Element r;
    r[p] = Rational(-1);
    r[q] = Rational(-1);
    m.set_product(a31, a12, r);
    return m;
}

// Table model with symbols in every degree 1..5, nonzero differentials and
// products, and the cohomology of S^5 (fundamental class w5).  Not
// one-connected, which exercises the piece-level code paths.
inline Model table_s5() {
    Model m = Model::make_table("T5", {{"e1", 1},
                                       {"u2", 2},
                                       {"c2", 2},
                                       {"v3", 3},
                                       {"h3", 3},
                                       {"j4", 4},
                                       {"k4", 4},
                                       {"w5", 5},
                                       {"l5", 5}});
    auto id = [&](const char* s) { return *m.find_basis(s); };
    m.set_diff(id("e1"), one(id("c2")));
    m.set_diff(id("u2"), one(id("v3")));
    Element dh;
    dh[id("k4")] = Rational(1);
    dh[id("j4")] = Rational(-1);
    m.set_diff(id("h3"), dh);
    m.set_diff(id("j4"), one(id("l5")));
    m.set_diff(id("k4"), one(id("l5")));
    m.set_product(id("u2"), id("c2"), one(id("k4")));
    m.set_product(id("v3"), id("c2"), one(id("l5")));
    m.set_product(id("e1"), id("u2"), one(id("h3")));
    m.set_product(id("e1"), id("v3"), one(id("j4")));
    return m;
}

} // namespace testbed
