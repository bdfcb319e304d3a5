#include "hopfcalc/bar.hpp"

namespace hopfcalc {

void bar_add_scaled(BarChain& into, const BarChain& c, const Rational& k) {
    if (k.is_zero())
        return;
    for (const auto& [w, v] : c) {
        auto it = into.find(w);
        if (it == into.end()) {
            into.emplace(w, v * k);
        } else {
            it->second += v * k;
            if (it->second.is_zero())
                into.erase(it);
        }
    }
}

void bar_tensor_add_scaled(BarTensor& into, const BarTensor& t,
                           const Rational& k) {
    if (k.is_zero())
        return;
    for (const auto& [w, v] : t) {
        auto it = into.find(w);
        if (it == into.end()) {
            into.emplace(w, v * k);
        } else {
            it->second += v * k;
            if (it->second.is_zero())
                into.erase(it);
        }
    }
}

int bar_internal_degree(const Model& m, const BarWord& w) {
    int d = 0;
    for (int id : w)
        d += m.degree(id);
    return d;
}

int bar_total_degree(const Model& m, const BarWord& w) {
    return bar_internal_degree(m, w) - bar_weight(w);
}

int lowered_prefix(const Model& m, const BarWord& w, int count) {
    int e = 0;
    for (int i = 0; i < count; ++i)
        e += m.degree(w[i]) - 1;
    return e;
}

BarChain d_internal(const Model& m, const BarChain& c) {
    BarChain out;
    for (const auto& [w, coeff] : c) {
        int eps = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            Element dx = m.diff(w[i]);
            if (!dx.empty()) {
                Rational s = coeff * Rational((eps & 1) ? 1 : -1);
                for (const auto& [id, cc] : dx) {
                    BarWord nw = w;
                    nw[i] = id;
                    BarChain one{{std::move(nw), Rational(1)}};
                    bar_add_scaled(out, one, s * cc);
                }
            }
            eps += m.degree(w[i]) - 1;
        }
    }
    return out;
}

BarChain d_external(const Model& m, const BarChain& c) {
    BarChain out;
    for (const auto& [w, coeff] : c) {
        int eps = 0;
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            eps += m.degree(w[i]) - 1;
            Element prod = m.mul(w[i], w[i + 1]);
            if (prod.empty())
                continue;
            Rational s = coeff * Rational((eps & 1) ? 1 : -1);
            for (const auto& [id, cc] : prod) {
                BarWord nw;
                nw.reserve(w.size() - 1);
                nw.insert(nw.end(), w.begin(), w.begin() + i);
                nw.push_back(id);
                nw.insert(nw.end(), w.begin() + i + 2, w.end());
                BarChain one{{std::move(nw), Rational(1)}};
                bar_add_scaled(out, one, s * cc);
            }
        }
    }
    return out;
}

BarChain d_total(const Model& m, const BarChain& c) {
    BarChain out = d_internal(m, c);
    bar_add_scaled(out, d_external(m, c), Rational(1));
    return out;
}

BarTensor coproduct(const BarChain& c) {
    BarTensor out;
    for (const auto& [w, coeff] : c)
        for (size_t i = 1; i < w.size(); ++i) {
            BarWord left(w.begin(), w.begin() + i);
            BarWord right(w.begin() + i, w.end());
            BarTensor one{{{std::move(left), std::move(right)}, Rational(1)}};
            bar_tensor_add_scaled(out, one, coeff);
        }
    return out;
}

namespace {

void shuffle_rec(const Model& m, const BarWord& a, const BarWord& b,
                 const std::vector<int>& a_suffix, size_t i, size_t j,
                 BarWord& acc, int sign, BarChain& out) {
    if (i == a.size() && j == b.size()) {
        BarChain one{{acc, Rational(1)}};
        bar_add_scaled(out, one, Rational(sign));
        return;
    }
    if (i < a.size()) {
        acc.push_back(a[i]);
        shuffle_rec(m, a, b, a_suffix, i + 1, j, acc, sign, out);
        acc.pop_back();
    }
    if (j < b.size()) {
        // b[j] jumps over every remaining letter of a.
        int s = sign;
        if ((m.degree(b[j]) - 1) & 1)
            if (a_suffix[i] & 1)
                s = -s;
        acc.push_back(b[j]);
        shuffle_rec(m, a, b, a_suffix, i, j + 1, acc, s, out);
        acc.pop_back();
    }
}

} // namespace

BarChain shuffle_words(const Model& m, const BarWord& a, const BarWord& b) {
    std::vector<int> a_suffix(a.size() + 1, 0);
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        a_suffix[i] = a_suffix[i + 1] + m.degree(a[i]) - 1;
    BarChain out;
    BarWord acc;
    acc.reserve(a.size() + b.size());
    shuffle_rec(m, a, b, a_suffix, 0, 0, acc, 1, out);
    return out;
}

BarChain shuffle(const Model& m, const BarChain& a, const BarChain& b) {
    BarChain out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b)
            bar_add_scaled(out, shuffle_words(m, wa, wb), ca * cb);
    return out;
}

BarChain word_of_elements(const std::vector<Element>& slots) {
    BarChain out;
    for (const auto& e : slots)
        if (e.empty())
            return out;
    BarWord acc(slots.size());
    auto rec = [&](auto&& self, size_t i, const Rational& c) -> void {
        if (i == slots.size()) {
            BarChain one{{acc, Rational(1)}};
            bar_add_scaled(out, one, c);
            return;
        }
        for (const auto& [id, v] : slots[i]) {
            acc[i] = id;
            self(self, i + 1, c * v);
        }
    };
    rec(rec, 0, Rational(1));
    return out;
}

} // namespace hopfcalc
