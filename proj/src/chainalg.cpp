#include "hopfcalc/chainalg.hpp"

#include <algorithm>
#include <climits>

namespace hopfcalc {

ChainContext::ChainContext(const Model* m, Flavor f, long cap, int weight_cap)
    : m_(m), flavor_(f), cap_(cap), relations_(m) {
    if (!m)
        throw input_error("chain context needs a model");
    if (cap_ < 1)
        throw input_error("dimension cap must be positive");
    weight_cap_ = weight_cap < 0 ? INT_MAX : weight_cap;
    mindeg_ = m->min_positive_degree();
    if (f == Flavor::eil && !m->one_connected())
        throw input_error(
            "tree class complexes need a model with no degree-1 symbols");
}

const PieceBasis& ChainContext::piece(int weight, int internal) {
    auto key = std::make_pair(weight, internal);
    auto hit = pieces_.find(key);
    if (hit != pieces_.end())
        return hit->second;
    PieceBasis pb;
    pb.weight = weight;
    pb.internal = internal;
    if (weight >= 1 && internal >= weight && mindeg_ != INT_MAX) {
        if (flavor_ == Flavor::bar) {
            BarWord cur(weight);
            auto rec = [&](auto&& self, int slot, int remaining) -> void {
                int left = weight - slot;
                if (left == 0) {
                    if (remaining == 0) {
                        if (static_cast<long>(pb.words.size()) >= cap_)
                            throw resource_error(
                                "piece (weight " + std::to_string(weight) +
                                ", internal degree " +
                                std::to_string(internal) +
                                ") exceeds cap " + std::to_string(cap_));
                        pb.words.push_back(cur);
                    }
                    return;
                }
                int dmax = remaining - (left - 1) * mindeg_;
                for (int d = mindeg_; d <= dmax; ++d)
                    for (int id : m_->basis_of_degree(d)) {
                        cur[slot] = id;
                        self(self, slot + 1, remaining - d);
                    }
            };
            rec(rec, 0, internal);
            for (size_t i = 0; i < pb.words.size(); ++i)
                pb.word_index.emplace(pb.words[i], static_cast<int>(i));
        } else {
            // Non-decreasing letter sequences in (degree, id) order.
            std::vector<int> cur;
            std::vector<std::vector<int>> multisets;
            auto rec = [&](auto&& self, int slot, int remaining, int mind,
                           int minid) -> void {
                int left = weight - slot;
                if (left == 0) {
                    if (remaining == 0)
                        multisets.push_back(cur);
                    return;
                }
                int dmax = remaining - (left - 1) * mindeg_;
                for (int d = std::max(mindeg_, mind); d <= dmax; ++d)
                    for (int id : m_->basis_of_degree(d)) {
                        if (d == mind && id < minid)
                            continue;
                        cur.push_back(id);
                        self(self, slot + 1, remaining - d, d, id);
                        cur.pop_back();
                    }
            };
            rec(rec, 0, internal, 0, 0);
            for (const auto& msraw : multisets) {
                std::vector<int> ms = msraw;
                std::sort(ms.begin(), ms.end());
                const RelationSpace& sp = relations_.space(ms);
                for (int pos : sp.complement) {
                    if (static_cast<long>(pb.trees.size()) >= cap_)
                        throw resource_error(
                            "piece (weight " + std::to_string(weight) +
                            ", internal degree " + std::to_string(internal) +
                            ") exceeds cap " + std::to_string(cap_));
                    pb.trees.push_back(sp.classes[sp.roots[pos]]);
                }
            }
            for (size_t i = 0; i < pb.trees.size(); ++i)
                pb.tree_index.emplace(pb.trees[i], static_cast<int>(i));
        }
    }
    return pieces_.emplace(key, std::move(pb)).first->second;
}

const ChainContext::Flat& ChainContext::flat(int total) {
    auto hit = flats_.find(total);
    if (hit != flats_.end())
        return hit->second;
    Flat fl;
    fl.total = total;
    if (mindeg_ != INT_MAX && total >= 0) {
        int wmax;
        if (mindeg_ >= 2)
            wmax = std::min(weight_cap_, total / (mindeg_ - 1));
        else if (weight_cap_ != INT_MAX)
            wmax = weight_cap_;
        else
            throw input_error("a model with degree-1 symbols needs a weight "
                              "cap for total-degree slices");
        for (int w = 1; w <= wmax; ++w) {
            const PieceBasis& pb = piece(w, total + w);
            for (int i = 0; i < pb.dim(); ++i) {
                if (static_cast<long>(fl.items.size()) >= cap_)
                    throw resource_error(
                        "total-degree " + std::to_string(total) +
                        " slice exceeds cap " + std::to_string(cap_));
                fl.pos.emplace(std::make_pair(w, i),
                               static_cast<int>(fl.items.size()));
                fl.items.emplace_back(w, i);
            }
        }
    }
    return flats_.emplace(total, std::move(fl)).first->second;
}

const SparseMat& ChainContext::d_flat(int g) {
    auto hit = dmats_.find(g);
    if (hit != dmats_.end())
        return hit->second;
    const Flat& src = flat(g);
    const Flat& dst = flat(g + 1);
    SparseMat mat(dst.dim(), src.dim());
    for (int j = 0; j < src.dim(); ++j) {
        auto [w, local] = src.items[j];
        const PieceBasis& pb = piece(w, g + w);
        std::map<int, Rational> colmap;
        if (flavor_ == Flavor::bar) {
            BarChain one{{pb.words[local], Rational(1)}};
            for (const auto& [word, c] : d_total(*m_, one)) {
                int wn = bar_weight(word);
                int in = bar_internal_degree(*m_, word);
                int loc = piece(wn, in).word_index.at(word);
                colmap[dst.pos.at({wn, loc})] += c;
            }
        } else {
            GraphChain one{{pb.trees[local], Rational(1)}};
            GraphChain dc = quotient_reduce(relations_, d_graph(*m_, one));
            for (const auto& [tree, c] : dc) {
                int wn = graph_weight(tree);
                int in = graph_internal_degree(*m_, tree);
                int loc = piece(wn, in).tree_index.at(tree);
                colmap[dst.pos.at({wn, loc})] += c;
            }
        }
        SVec col;
        for (const auto& [r, c] : colmap)
            if (!c.is_zero())
                col.emplace_back(r, c);
        mat.col[j] = std::move(col);
    }
    return dmats_.emplace(g, std::move(mat)).first->second;
}

int ChainContext::homology_rank(int g) {
    auto drank = [&](int gg) {
        auto hit = dranks_.find(gg);
        if (hit != dranks_.end())
            return hit->second;
        int r = rank(d_flat(gg));
        dranks_.emplace(gg, r);
        return r;
    };
    int dim = flat(g).dim();
    int out = dim - drank(g);
    if (g > 0)
        out -= drank(g - 1);
    return out;
}

SVec ChainContext::coords(int g, const BarChain& c) {
    if (flavor_ != Flavor::bar)
        throw input_error("word chain in a tree-class context");
    std::map<int, Rational> acc;
    for (const auto& [word, coeff] : c) {
        int w = bar_weight(word);
        int n = bar_internal_degree(*m_, word);
        if (n - w != g)
            throw input_error("chain is not homogeneous of total degree " +
                              std::to_string(g));
        if (w > weight_cap_)
            throw input_error("chain exceeds the weight cap");
        int local = piece(w, n).word_index.at(word);
        acc[flat(g).pos.at({w, local})] += coeff;
    }
    return svec_from_map(acc);
}

SVec ChainContext::coords(int g, const GraphChain& c) {
    if (flavor_ != Flavor::eil)
        throw input_error("tree chain in a word context");
    GraphChain red = quotient_reduce(relations_, c);
    std::map<int, Rational> acc;
    for (const auto& [tree, coeff] : red) {
        int w = graph_weight(tree);
        int n = graph_internal_degree(*m_, tree);
        if (n - w != g)
            throw input_error("chain is not homogeneous of total degree " +
                              std::to_string(g));
        if (w > weight_cap_)
            throw input_error("chain exceeds the weight cap");
        int local = piece(w, n).tree_index.at(tree);
        acc[flat(g).pos.at({w, local})] += coeff;
    }
    return svec_from_map(acc);
}

BarChain ChainContext::bar_chain(int g, const SVec& v) {
    if (flavor_ != Flavor::bar)
        throw input_error("word chain in a tree-class context");
    BarChain out;
    const Flat& fl = flat(g);
    for (const auto& [idx, c] : v) {
        auto [w, local] = fl.items[idx];
        out[piece(w, g + w).words[local]] += c;
    }
    return out;
}

GraphChain ChainContext::graph_chain(int g, const SVec& v) {
    if (flavor_ != Flavor::eil)
        throw input_error("tree chain in a word context");
    GraphChain out;
    const Flat& fl = flat(g);
    for (const auto& [idx, c] : v) {
        auto [w, local] = fl.items[idx];
        out[piece(w, g + w).trees[local]] += c;
    }
    return out;
}

void ChainContext::ensure_package(int g) {
    if (packs_.count(g))
        return;
    if (g > 0)
        ensure_package(g - 1);
    Pack p;
    if (g > 0) {
        const Pack& prev = packs_.at(g - 1);
        const SparseMat& dn = d_flat(g - 1);
        for (int u : prev.complement)
            p.im.insert(dn.col[u], SVec{{u, Rational(1)}});
    }
    for (SVec& k : kernel(d_flat(g)))
        p.ker.insert(std::move(k));
    p.complement = p.ker.complement(flat(g).dim());
    packs_.emplace(g, std::move(p));
}

SVec ChainContext::harmonic(int g, const SVec& v) {
    ensure_package(g);
    const Pack& p = packs_.at(g);
    SVec r = v;
    p.im.reduce(r);
    SVec residue = r;
    p.ker.reduce(residue);
    // r minus its part outside the cycles.
    SVec out = svec_axpy(r, Rational(-1), residue);
    return out;
}

SVec ChainContext::homotopy_s(int g, const SVec& v) {
    ensure_package(g);
    const Pack& p = packs_.at(g);
    SVec r = v;
    SVec combo;
    p.im.reduce(r, &combo);
    return combo;
}

const SparseMat& ChainContext::d_int_matrix(int weight, int internal) {
    auto key = std::make_pair(weight, internal);
    auto hit = int_mats_.find(key);
    if (hit != int_mats_.end())
        return hit->second;
    const PieceBasis& src = piece(weight, internal);
    const PieceBasis& dst = piece(weight, internal + 1);
    SparseMat mat(dst.dim(), src.dim());
    for (int j = 0; j < src.dim(); ++j) {
        std::map<int, Rational> colmap;
        if (flavor_ == Flavor::bar) {
            BarChain one{{src.words[j], Rational(1)}};
            for (const auto& [word, c] : d_internal(*m_, one))
                colmap[dst.word_index.at(word)] += c;
        } else {
            GraphChain one{{src.trees[j], Rational(1)}};
            GraphChain dc =
                quotient_reduce(relations_, d_graph_internal(*m_, one));
            for (const auto& [tree, c] : dc)
                colmap[dst.tree_index.at(tree)] += c;
        }
        SVec col;
        for (const auto& [r, c] : colmap)
            if (!c.is_zero())
                col.emplace_back(r, c);
        mat.col[j] = std::move(col);
    }
    return int_mats_.emplace(key, std::move(mat)).first->second;
}

std::optional<BarChain> ChainContext::internal_preimage(int weight,
                                                        int internal,
                                                        const BarChain& c) {
    const PieceBasis& dst = piece(weight, internal);
    std::map<int, Rational> acc;
    for (const auto& [word, coeff] : c)
        acc[dst.word_index.at(word)] += coeff;
    auto sol = solve(d_int_matrix(weight, internal - 1), svec_from_map(acc));
    if (!sol)
        return std::nullopt;
    const PieceBasis& src = piece(weight, internal - 1);
    BarChain out;
    for (const auto& [idx, v] : *sol)
        out[src.words[idx]] += v;
    return out;
}

std::optional<GraphChain>
ChainContext::internal_preimage(int weight, int internal, const GraphChain& c) {
    GraphChain red = quotient_reduce(relations_, c);
    const PieceBasis& dst = piece(weight, internal);
    std::map<int, Rational> acc;
    for (const auto& [tree, coeff] : red)
        acc[dst.tree_index.at(tree)] += coeff;
    auto sol = solve(d_int_matrix(weight, internal - 1), svec_from_map(acc));
    if (!sol)
        return std::nullopt;
    const PieceBasis& src = piece(weight, internal - 1);
    GraphChain out;
    for (const auto& [idx, v] : *sol)
        out[src.trees[idx]] += v;
    return out;
}

BarTensor tensor_of(const BarChain& a, const BarChain& b) {
    BarTensor out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            Rational v = ca * cb;
            if (!v.is_zero())
                out[{wa, wb}] += v;
        }
    return out;
}

GraphTensor tensor_of(const GraphChain& a, const GraphChain& b) {
    GraphTensor out;
    for (const auto& [ta, ca] : a)
        for (const auto& [tb, cb] : b) {
            Rational v = ca * cb;
            if (!v.is_zero())
                out[{ta, tb}] += v;
        }
    return out;
}

BarKunneth closed_kunneth_adjust(ChainContext& ctx, const BarTensor& z) {
    BarKunneth out;
    for (const auto& [pair, c] : z) {
        const auto& [w1, w2] = pair;
        int g1 = bar_total_degree(*ctx.model(), w1);
        int g2 = bar_total_degree(*ctx.model(), w2);
        BarChain left{{w1, Rational(1)}};
        BarChain right{{w2, Rational(1)}};
        SVec v1 = ctx.coords(g1, left);
        SVec v2 = ctx.coords(g2, right);
        BarChain ip1 = ctx.bar_chain(g1, ctx.harmonic(g1, v1));
        BarChain ip2 = ctx.bar_chain(g2, ctx.harmonic(g2, v2));
        BarChain s1 = ctx.bar_chain(g1 - 1, ctx.homotopy_s(g1, v1));
        BarChain s2 = ctx.bar_chain(g2 - 1, ctx.homotopy_s(g2, v2));
        bar_tensor_add_scaled(out.adjusted, tensor_of(ip1, ip2), c);
        bar_tensor_add_scaled(out.certificate, tensor_of(s1, right), c);
        bar_tensor_add_scaled(out.certificate, tensor_of(ip1, s2),
                              c * Rational((g1 & 1) ? -1 : 1));
    }
    return out;
}

GraphKunneth closed_kunneth_adjust(ChainContext& ctx, const GraphTensor& z) {
    GraphKunneth out;
    for (const auto& [pair, c] : z) {
        const auto& [t1, t2] = pair;
        int g1 = graph_total_degree(*ctx.model(), t1);
        int g2 = graph_total_degree(*ctx.model(), t2);
        GraphChain left{{t1, Rational(1)}};
        GraphChain right{{t2, Rational(1)}};
        SVec v1 = ctx.coords(g1, left);
        SVec v2 = ctx.coords(g2, right);
        GraphChain ip1 = ctx.graph_chain(g1, ctx.harmonic(g1, v1));
        GraphChain ip2 = ctx.graph_chain(g2, ctx.harmonic(g2, v2));
        GraphChain s1 = ctx.graph_chain(g1 - 1, ctx.homotopy_s(g1, v1));
        GraphChain s2 = ctx.graph_chain(g2 - 1, ctx.homotopy_s(g2, v2));
        graph_tensor_add_scaled(out.adjusted, tensor_of(ip1, ip2), c);
        graph_tensor_add_scaled(out.certificate, tensor_of(s1, right), c);
        graph_tensor_add_scaled(out.certificate, tensor_of(ip1, s2),
                                c * Rational((g1 & 1) ? -1 : 1));
    }
    return out;
}

} // namespace hopfcalc
