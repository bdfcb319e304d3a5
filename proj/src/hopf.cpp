#include "hopfcalc/hopf.hpp"

#include <algorithm>
#include <climits>

namespace hopfcalc {

namespace {

SparseMat diff_matrix(const Model& m, int k) {
    const auto& src = m.basis_of_degree(k);
    const auto& dst = m.basis_of_degree(k + 1);
    std::map<int, int> pos;
    for (size_t i = 0; i < dst.size(); ++i)
        pos.emplace(dst[i], static_cast<int>(i));
    SparseMat A(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (size_t j = 0; j < src.size(); ++j) {
        std::map<int, Rational> col;
        for (const auto& [id, c] : m.diff(src[j]))
            col[pos.at(id)] += c;
        A.col[j] = svec_from_map(col);
    }
    return A;
}

} // namespace

int model_cohomology_rank(const Model& m, int k) {
    if (k < 1)
        throw input_error("cohomology is computed in positive degrees");
    int dim = static_cast<int>(m.basis_of_degree(k).size());
    int out = dim - rank(diff_matrix(m, k));
    if (k > 1)
        out -= rank(diff_matrix(m, k - 1));
    return out;
}

SphereTarget make_sphere_target(const Model& m, const std::string& name) {
    auto id = m.find_basis(name);
    if (!id)
        throw input_error("no basis symbol '" + name + "' in model " +
                          m.name());
    int n = m.degree(*id);
    if (n < 2)
        throw input_error("fundamental class must have degree >= 2");
    if (!elem_is_zero(m.diff(*id)))
        throw input_error("fundamental class '" + name + "' is not closed");
    int horizon;
    if (m.kind() == Model::Kind::table) {
        horizon = 1;
        for (int i = 0; i < m.basis_count(); ++i)
            horizon = std::max(horizon, m.degree(i) + 1);
    } else {
        horizon = std::max(m.validation_depth, 2 * n + 2);
    }
    for (int k = 1; k <= horizon; ++k) {
        int h = model_cohomology_rank(m, k);
        if (k == n ? h != 1 : h != 0)
            throw input_error("cohomology of " + m.name() +
                              " is not a sphere: rank " + std::to_string(h) +
                              " in degree " + std::to_string(k));
    }
    for (int b : m.basis_of_degree(n - 1))
        if (!svec_coeff(svec_from_map(m.diff(b)), *id).is_zero())
            throw input_error("differential hits the fundamental class");
    return {&m, *id, n};
}

int BracketExpr::sphere_dim() const {
    if (is_leaf())
        return target.dim;
    return left->sphere_dim() + right->sphere_dim() - 1;
}

std::string BracketExpr::str(const Model& base) const {
    if (is_leaf()) {
        if (leaf_symbol >= 0)
            return base.basis_name(leaf_symbol);
        return map ? map->name() : "?";
    }
    return "[" + left->str(base) + "," + right->str(base) + "]";
}

BracketExpr leaf_expr(const Morphism* f, SphereTarget t) {
    if (!f || !t.model)
        throw input_error("bracket leaf needs a map and a target");
    if (f->tgt() != t.model)
        throw input_error("bracket leaf map does not land in its target");
    BracketExpr e;
    e.map = f;
    e.target = t;
    return e;
}

BracketExpr collapse_leaf(const Model& base, int symbol) {
    int n = base.degree(symbol);
    auto model = std::make_shared<Model>(sphere_cohomology_model(n));
    SphereTarget t = make_sphere_target(*model, "w");
    auto f = std::make_shared<Morphism>("collapse:" + base.basis_name(symbol),
                                        &base, model.get());
    f->set_image(symbol, Element{{t.fundamental, Rational(1)}});
    ValidationReport rep = f->validate();
    if (!rep.ok())
        throw input_error("collapse onto '" + base.basis_name(symbol) +
                          "' is not an algebra chain map:\n" + rep.str());
    BracketExpr e;
    e.map = f.get();
    e.target = t;
    e.leaf_symbol = symbol;
    e.owned_model = model;
    e.owned_map = f;
    return e;
}

BracketExpr bracket_expr(BracketExpr l, BracketExpr r) {
    BracketExpr e;
    e.left = std::make_unique<BracketExpr>(std::move(l));
    e.right = std::make_unique<BracketExpr>(std::move(r));
    return e;
}

PairEnv::PairEnv(const Model* base, long cap)
    : base_(base), cap_(cap), base_relations_(base) {
    if (!base)
        throw input_error("pairing needs a base model");
}

ChainContext& PairEnv::word_ctx(int weight_cap) {
    auto it = word_ctxs_.find(weight_cap);
    if (it == word_ctxs_.end())
        it = word_ctxs_
                 .emplace(weight_cap, std::make_unique<ChainContext>(
                                          base_, Flavor::bar, cap_, weight_cap))
                 .first;
    return *it->second;
}

ChainContext& PairEnv::tree_ctx(int weight_cap) {
    auto it = tree_ctxs_.find(weight_cap);
    if (it == tree_ctxs_.end())
        it = tree_ctxs_
                 .emplace(weight_cap, std::make_unique<ChainContext>(
                                          base_, Flavor::eil, cap_, weight_cap))
                 .first;
    return *it->second;
}

ChainContext& PairEnv::sphere_ctx(const Model* s, Flavor f) {
    auto key = std::make_pair(s, f);
    auto it = sphere_ctxs_.find(key);
    if (it == sphere_ctxs_.end())
        it = sphere_ctxs_
                 .emplace(key, std::make_unique<ChainContext>(s, f, cap_))
                 .first;
    return *it->second;
}

BarChain pullback(const Morphism& f, const BarChain& c) {
    BarChain out;
    for (const auto& [word, coeff] : c) {
        std::vector<Element> slots;
        slots.reserve(word.size());
        for (int id : word)
            slots.push_back(f.apply(id));
        bar_add_scaled(out, word_of_elements(slots), coeff);
    }
    return out;
}

GraphChain pullback(const Morphism& f, const GraphChain& c) {
    GraphChain out;
    const Model& tgt = *f.tgt();
    for (const auto& [tree, coeff] : c) {
        std::vector<Element> slots;
        slots.reserve(tree.labels.size());
        for (int id : tree.labels)
            slots.push_back(f.apply(id));
        std::vector<int> labels(tree.labels.size());
        auto rec = [&](auto&& self, size_t i, const Rational& acc) -> void {
            if (i == slots.size()) {
                Tree nt;
                nt.labels = labels;
                nt.edges = tree.edges;
                graph_add_tree(out, tgt, nt, acc);
                return;
            }
            for (const auto& [id, v] : slots[i]) {
                labels[i] = id;
                self(self, i + 1, acc * v);
            }
        };
        rec(rec, 0, coeff);
    }
    return out;
}

BarReduction reduce_to_weight_one(ChainContext& ctx, const BarChain& c) {
    const Model& m = *ctx.model();
    BarReduction r;
    BarChain cur = c;
    for (;;) {
        int wmax = 0;
        for (const auto& [word, coeff] : cur)
            wmax = std::max(wmax, bar_weight(word));
        if (wmax <= 1)
            break;
        std::map<int, BarChain> comps;
        for (const auto& [word, coeff] : cur)
            if (bar_weight(word) == wmax)
                comps[bar_internal_degree(m, word)][word] = coeff;
        for (const auto& [n, comp] : comps) {
            auto b = ctx.internal_preimage(wmax, n, comp);
            if (!b) {
                r.stuck = {wmax, n};
                return r;
            }
            bar_add_scaled(r.certificate, *b, Rational(1));
            bar_add_scaled(cur, d_total(m, *b), Rational(-1));
        }
    }
    r.weight_one = std::move(cur);
    r.ok = true;
    return r;
}

GraphReduction reduce_to_weight_one(ChainContext& ctx, const GraphChain& c) {
    const Model& m = *ctx.model();
    GraphReduction r;
    GraphChain cur = quotient_reduce(ctx.relations(), c);
    for (;;) {
        int wmax = 0;
        for (const auto& [tree, coeff] : cur)
            wmax = std::max(wmax, graph_weight(tree));
        if (wmax <= 1)
            break;
        std::map<int, GraphChain> comps;
        for (const auto& [tree, coeff] : cur)
            if (graph_weight(tree) == wmax)
                comps[graph_internal_degree(m, tree)][tree] = coeff;
        for (const auto& [n, comp] : comps) {
            auto b = ctx.internal_preimage(wmax, n, comp);
            if (!b) {
                r.stuck = {wmax, n};
                return r;
            }
            graph_add_scaled(r.certificate, *b, Rational(1));
            graph_add_scaled(cur, d_graph(m, *b), Rational(-1));
            cur = quotient_reduce(ctx.relations(), cur);
        }
    }
    r.weight_one = std::move(cur);
    r.ok = true;
    return r;
}

Rational integrate(const SphereTarget& t, const BarChain& weight_one) {
    auto it = weight_one.find(BarWord{t.fundamental});
    return it == weight_one.end() ? Rational(0) : it->second;
}

Rational integrate(const SphereTarget& t, const GraphChain& weight_one) {
    Tree single;
    single.labels = {t.fundamental};
    auto it = weight_one.find(single);
    return it == weight_one.end() ? Rational(0) : it->second;
}

BarChain degree_part(const Model& m, const BarChain& c, int total) {
    BarChain out;
    for (const auto& [word, coeff] : c)
        if (bar_total_degree(m, word) == total)
            out.emplace(word, coeff);
    return out;
}

GraphChain degree_part(const Model& m, const GraphChain& c, int total) {
    GraphChain out;
    for (const auto& [tree, coeff] : c)
        if (graph_total_degree(m, tree) == total)
            out.emplace(tree, coeff);
    return out;
}

namespace {

int max_weight(const BarChain& c) {
    int w = 0;
    for (const auto& [word, coeff] : c)
        w = std::max(w, bar_weight(word));
    return w;
}

int max_weight(const GraphChain& c) {
    int w = 0;
    for (const auto& [tree, coeff] : c)
        w = std::max(w, graph_weight(tree));
    return w;
}

Rational eval_expr(PairEnv& env, const BarChain& gamma, const BracketExpr& e);
Rational eval_expr(PairEnv& env, const GraphChain& gamma,
                   const BracketExpr& e);

Rational eval_whitehead(PairEnv& env, const BarChain& gamma,
                        const BracketExpr& u, const BracketExpr& v) {
    if (gamma.empty())
        return Rational(0);
    const Model& m = *env.base();
    ChainContext& ctx = env.word_ctx(std::max(max_weight(gamma), 1));
    Rational total;
    for (const auto& [pair, c] : coproduct(gamma)) {
        const auto& [w1, w2] = pair;
        int g1 = bar_total_degree(m, w1);
        int g2 = bar_total_degree(m, w2);
        BarChain A = ctx.bar_chain(
            g1, ctx.harmonic(g1, ctx.coords(g1, BarChain{{w1, Rational(1)}})));
        BarChain B = ctx.bar_chain(
            g2, ctx.harmonic(g2, ctx.coords(g2, BarChain{{w2, Rational(1)}})));
        if (A.empty() || B.empty())
            continue;
        Rational au = eval_expr(env, A, u);
        Rational bv = eval_expr(env, B, v);
        Rational av = eval_expr(env, A, v);
        Rational bu = eval_expr(env, B, u);
        Rational term = au * bv;
        Rational flip = av * bu;
        if (!((g1 & 1) && (g2 & 1)))
            flip = -flip;
        term += flip;
        total += c * term;
    }
    return total;
}

Rational eval_whitehead(PairEnv& env, const GraphChain& gamma,
                        const BracketExpr& u, const BracketExpr& v) {
    if (gamma.empty())
        return Rational(0);
    const Model& m = *env.base();
    ChainContext& ctx = env.tree_ctx(std::max(max_weight(gamma), 1));
    GraphChain red = quotient_reduce(ctx.relations(), gamma);
    Rational total;
    for (const auto& [pair, c] : cobracket(m, red)) {
        const auto& [t1, t2] = pair;
        int g1 = graph_total_degree(m, t1);
        int g2 = graph_total_degree(m, t2);
        GraphChain A = ctx.graph_chain(
            g1,
            ctx.harmonic(g1, ctx.coords(g1, GraphChain{{t1, Rational(1)}})));
        GraphChain B = ctx.graph_chain(
            g2,
            ctx.harmonic(g2, ctx.coords(g2, GraphChain{{t2, Rational(1)}})));
        if (A.empty() || B.empty())
            continue;
        total += c * eval_expr(env, A, u) * eval_expr(env, B, v);
    }
    return total;
}

Rational eval_expr(PairEnv& env, const BarChain& gamma, const BracketExpr& e) {
    if (!e.is_leaf())
        return eval_whitehead(env, gamma, *e.left, *e.right);
    if (e.map->src() != env.base())
        throw input_error("bracket leaf maps out of a different model");
    BarChain part = degree_part(*env.base(), gamma, e.target.dim - 1);
    if (part.empty())
        return Rational(0);
    BarChain pulled = pullback(*e.map, part);
    if (pulled.empty())
        return Rational(0);
    ChainContext& sctx = env.sphere_ctx(e.target.model, Flavor::bar);
    BarReduction red = reduce_to_weight_one(sctx, pulled);
    if (!red.ok)
        throw input_error(
            "reduction stalls at weight " + std::to_string(red.stuck.first) +
            ", internal degree " + std::to_string(red.stuck.second));
    return integrate(e.target, red.weight_one);
}

Rational eval_expr(PairEnv& env, const GraphChain& gamma,
                   const BracketExpr& e) {
    if (!e.is_leaf())
        return eval_whitehead(env, gamma, *e.left, *e.right);
    if (e.map->src() != env.base())
        throw input_error("bracket leaf maps out of a different model");
    GraphChain part = degree_part(*env.base(), gamma, e.target.dim - 1);
    if (part.empty())
        return Rational(0);
    GraphChain pulled = pullback(*e.map, part);
    if (pulled.empty())
        return Rational(0);
    ChainContext& sctx = env.sphere_ctx(e.target.model, Flavor::eil);
    GraphReduction red = reduce_to_weight_one(sctx, pulled);
    if (!red.ok)
        throw input_error(
            "reduction stalls at weight " + std::to_string(red.stuck.first) +
            ", internal degree " + std::to_string(red.stuck.second));
    return integrate(e.target, red.weight_one);
}

} // namespace

Rational hopf_pair(PairEnv& env, const BarChain& gamma, const BracketExpr& e) {
    if (!d_total(*env.base(), gamma).empty())
        throw input_error("chain is not closed");
    return eval_expr(env, gamma, e);
}

Rational hopf_pair(PairEnv& env, const GraphChain& gamma,
                   const BracketExpr& e) {
    GraphChain dg = d_graph(*env.base(), gamma);
    if (!quotient_reduce(env.base_relations(), dg).empty())
        throw input_error("chain is not closed");
    return eval_expr(env, gamma, e);
}

Rational whitehead_pair(PairEnv& env, const BarChain& gamma,
                        const BracketExpr& u, const BracketExpr& v) {
    if (!d_total(*env.base(), gamma).empty())
        throw input_error("chain is not closed");
    return eval_whitehead(env, gamma, u, v);
}

Rational whitehead_pair(PairEnv& env, const GraphChain& gamma,
                        const BracketExpr& u, const BracketExpr& v) {
    GraphChain dg = d_graph(*env.base(), gamma);
    if (!quotient_reduce(env.base_relations(), dg).empty())
        throw input_error("chain is not closed");
    return eval_whitehead(env, gamma, u, v);
}

namespace {

struct FlatBracket {
    struct Node {
        int lo, mid, hi;
    };
    std::vector<Node> nodes;
    std::vector<int> leaf_symbol;
};

std::pair<int, int> flatten(const BracketExpr& e, FlatBracket& fb) {
    if (e.is_leaf()) {
        if (e.leaf_symbol < 0)
            throw input_error(
                "this pairing needs bracket leaves given by basis symbols");
        int idx = static_cast<int>(fb.leaf_symbol.size());
        fb.leaf_symbol.push_back(e.leaf_symbol);
        return {idx, idx + 1};
    }
    auto [lo, mid] = flatten(*e.left, fb);
    auto [mid2, hi] = flatten(*e.right, fb);
    (void)mid2;
    fb.nodes.push_back({lo, mid, hi});
    return {lo, hi};
}

} // namespace

Rational config_pair(const Model& base, const GraphChain& c,
                     const BracketExpr& b) {
    FlatBracket fb;
    flatten(b, fb);
    int k = static_cast<int>(fb.leaf_symbol.size());
    Rational total;
    for (const auto& [tree, coeff] : c) {
        int n = graph_weight(tree);
        if (n != k)
            continue;
        std::vector<int> lowered(n);
        for (int v = 0; v < n; ++v)
            lowered[v] = base.degree(tree.labels[v]) - 1;
        std::vector<int> assign(n, -1); // vertex -> leaf position
        std::vector<char> used(n, 0);
        auto place = [&](auto&& self, int v) -> Rational {
            if (v == n) {
                // Each edge must land on a distinct fork.
                std::vector<char> taken(fb.nodes.size(), 0);
                int sign = 1;
                for (const auto& [s, t] : tree.edges) {
                    int ls = assign[s], lt = assign[t];
                    int found = -1;
                    for (size_t j = 0; j < fb.nodes.size(); ++j) {
                        const auto& nd = fb.nodes[j];
                        bool sl = ls >= nd.lo && ls < nd.mid;
                        bool sr = ls >= nd.mid && ls < nd.hi;
                        bool tl = lt >= nd.lo && lt < nd.mid;
                        bool tr = lt >= nd.mid && lt < nd.hi;
                        if (sl && tr) {
                            found = static_cast<int>(j);
                            break;
                        }
                        if (sr && tl) {
                            found = static_cast<int>(j);
                            sign = -sign;
                            break;
                        }
                    }
                    if (found < 0 || taken[found])
                        return Rational(0);
                    taken[found] = 1;
                }
                std::vector<int> perm(n); // leaf position -> vertex
                for (int vv = 0; vv < n; ++vv)
                    perm[assign[vv]] = vv;
                return Rational(sign * koszul_sign(perm, lowered));
            }
            Rational acc;
            for (int pos = 0; pos < n; ++pos) {
                if (used[pos] || fb.leaf_symbol[pos] != tree.labels[v])
                    continue;
                used[pos] = 1;
                assign[v] = pos;
                acc += self(self, v + 1);
                used[pos] = 0;
                assign[v] = -1;
            }
            return acc;
        };
        total += coeff * place(place, 0);
    }
    return total;
}

namespace {

bool lexless(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                        b.end());
}

BracketExpr standard_bracket(const Model& base,
                             const std::vector<int>& symbols,
                             const std::vector<int>& word) {
    if (word.size() == 1)
        return collapse_leaf(base, symbols[word[0]]);
    // Split before the lexicographically least proper suffix.
    size_t best = 1;
    for (size_t i = 2; i < word.size(); ++i) {
        std::vector<int> cand(word.begin() + i, word.end());
        std::vector<int> cur(word.begin() + best, word.end());
        if (lexless(cand, cur))
            best = i;
    }
    std::vector<int> u(word.begin(), word.begin() + best);
    std::vector<int> v(word.begin() + best, word.end());
    return bracket_expr(standard_bracket(base, symbols, u),
                        standard_bracket(base, symbols, v));
}

} // namespace

std::vector<BracketExpr> lyndon_brackets(const Model& base,
                                         const std::vector<int>& symbols) {
    int k = static_cast<int>(symbols.size());
    if (k < 1)
        throw input_error("bracket basis needs at least one symbol");
    std::vector<BracketExpr> out;
    std::vector<int> rest;
    for (int i = 1; i < k; ++i)
        rest.push_back(i);
    do {
        std::vector<int> word{0};
        word.insert(word.end(), rest.begin(), rest.end());
        out.push_back(standard_bracket(base, symbols, word));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

} // namespace hopfcalc
