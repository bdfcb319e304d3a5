#include "hopfcalc/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace hopfcalc {

void graph_add_scaled(GraphChain& into, const GraphChain& c, const Rational& k) {
    if (k.is_zero())
        return;
    for (const auto& [t, v] : c) {
        auto it = into.find(t);
        if (it == into.end()) {
            into.emplace(t, v * k);
        } else {
            it->second += v * k;
            if (it->second.is_zero())
                into.erase(it);
        }
    }
}

void graph_tensor_add_scaled(GraphTensor& into, const GraphTensor& t,
                             const Rational& k) {
    if (k.is_zero())
        return;
    for (const auto& [key, v] : t) {
        auto it = into.find(key);
        if (it == into.end()) {
            into.emplace(key, v * k);
        } else {
            it->second += v * k;
            if (it->second.is_zero())
                into.erase(it);
        }
    }
}

int graph_internal_degree(const Model& m, const Tree& t) {
    int d = 0;
    for (int id : t.labels)
        d += m.degree(id);
    return d;
}

int graph_total_degree(const Model& m, const Tree& t) {
    return graph_internal_degree(m, t) - graph_weight(t);
}

int graph_lowered_degree(const Model& m, const Tree& t) {
    return graph_internal_degree(m, t) - graph_weight(t);
}

namespace {

// Per vertex: (neighbor, true when the edge leaves this vertex).
using Adjacency = std::vector<std::vector<std::pair<int, bool>>>;

Adjacency adjacency(const Tree& t) {
    Adjacency adj(t.labels.size());
    for (const auto& [s, d] : t.edges) {
        adj[s].emplace_back(d, true);
        adj[d].emplace_back(s, false);
    }
    return adj;
}

std::vector<int> tree_centers(const Tree& t, const Adjacency& adj) {
    int n = static_cast<int>(t.labels.size());
    if (n == 1)
        return {0};
    std::vector<int> deg(n);
    for (int v = 0; v < n; ++v)
        deg[v] = static_cast<int>(adj[v].size());
    std::vector<int> layer;
    std::vector<char> removed(n, 0);
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1)
            layer.push_back(v);
    int remaining = n;
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : layer) {
            removed[v] = 1;
            --remaining;
            for (auto [u, out] : adj[v])
                if (!removed[u] && --deg[u] == 1)
                    next.push_back(u);
        }
        layer = std::move(next);
    }
    std::vector<int> c;
    for (int v = 0; v < n; ++v)
        if (!removed[v])
            c.push_back(v);
    return c;
}

struct Encoder {
    const Model& m;
    const Tree& t;
    const Adjacency& adj;
    // Children in canonical (encoding-sorted) order, filled per root choice.
    std::vector<std::vector<int>> kids;
    bool zero = false;

    Encoder(const Model& mm, const Tree& tt, const Adjacency& aa)
        : m(mm), t(tt), adj(aa), kids(tt.labels.size()) {}

    struct Res {
        std::string enc;
        int lowered;
    };

    Res encode(int v, int parent, char flag) {
        std::vector<std::pair<Res, int>> ks;
        for (auto [u, out] : adj[v])
            if (u != parent)
                ks.emplace_back(encode(u, v, out ? '>' : '<'), u);
        std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
            return a.first.enc < b.first.enc;
        });
        int lowered = m.degree(t.labels[v]) - 1;
        std::string enc;
        enc += flag;
        enc += std::to_string(t.labels[v]);
        enc += ";(";
        kids[v].clear();
        for (size_t i = 0; i < ks.size(); ++i) {
            if (i + 1 < ks.size() && ks[i].first.enc == ks[i + 1].first.enc &&
                (ks[i].first.lowered & 1))
                zero = true;
            lowered += ks[i].first.lowered;
            enc += ks[i].first.enc;
            kids[v].push_back(ks[i].second);
        }
        enc += ')';
        return {std::move(enc), lowered};
    }

    void dfs(int v, std::vector<int>& order) const {
        order.push_back(v);
        for (int u : kids[v])
            dfs(u, order);
    }
};

Tree rebuild(const Tree& t, const std::vector<int>& order, int* sign_out,
             const Model& m) {
    int n = static_cast<int>(t.labels.size());
    std::vector<int> lowered(n);
    for (int v = 0; v < n; ++v)
        lowered[v] = m.degree(t.labels[v]) - 1;
    *sign_out = koszul_sign(order, lowered);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i)
        pos[order[i]] = i;
    Tree out;
    out.labels.resize(n);
    for (int i = 0; i < n; ++i)
        out.labels[i] = t.labels[order[i]];
    out.edges.reserve(t.edges.size());
    for (const auto& [s, d] : t.edges)
        out.edges.emplace_back(pos[s], pos[d]);
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

} // namespace

void validate_tree(const Model& m, const Tree& t) {
    int n = static_cast<int>(t.labels.size());
    if (n == 0)
        throw input_error("empty graph");
    for (int id : t.labels)
        m.degree(id); // throws on bad ids
    if (static_cast<int>(t.edges.size()) != n - 1)
        throw input_error("a tree on " + std::to_string(n) +
                          " vertices needs exactly " + std::to_string(n - 1) +
                          " edges");
    for (const auto& [s, d] : t.edges) {
        if (s < 0 || s >= n || d < 0 || d >= n)
            throw input_error("edge endpoint out of range");
        if (s == d)
            throw input_error("self loops are not allowed");
    }
    Adjacency adj = adjacency(t);
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto [u, out] : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++cnt;
                q.push_back(u);
            }
    }
    if (cnt != n)
        throw input_error("graph is not connected");
}

std::pair<Tree, int> canonize(const Model& m, const Tree& t) {
    int n = static_cast<int>(t.labels.size());
    if (n == 1)
        return {t, 1};
    Adjacency adj = adjacency(t);
    std::vector<int> cs = tree_centers(t, adj);
    Encoder enc(m, t, adj);
    std::vector<int> order;
    order.reserve(n);
    if (cs.size() == 1) {
        enc.encode(cs[0], -1, '.');
        enc.dfs(cs[0], order);
    } else {
        int c1 = cs[0], c2 = cs[1];
        Encoder::Res r1 = enc.encode(c1, c2, '.');
        Encoder::Res r2 = enc.encode(c2, c1, '.');
        bool c1_to_c2 = false;
        for (auto [u, out] : adj[c1])
            if (u == c2)
                c1_to_c2 = out;
        std::string a = r1.enc + "|" + (c1_to_c2 ? ">" : "<") + r2.enc;
        std::string b = r2.enc + "|" + (c1_to_c2 ? "<" : ">") + r1.enc;
        if (a <= b) {
            enc.dfs(c1, order);
            enc.dfs(c2, order);
        } else {
            enc.dfs(c2, order);
            enc.dfs(c1, order);
        }
    }
    int sign = 1;
    Tree out = rebuild(t, order, &sign, m);
    if (enc.zero)
        sign = 0;
    return {out, sign};
}

void graph_add_tree(GraphChain& into, const Model& m, const Tree& t,
                    const Rational& c) {
    if (c.is_zero())
        return;
    auto [ct, sign] = canonize(m, t);
    if (sign == 0)
        return;
    Rational v = c * Rational(sign);
    auto it = into.find(ct);
    if (it == into.end()) {
        into.emplace(std::move(ct), v);
    } else {
        it->second += v;
        if (it->second.is_zero())
            into.erase(it);
    }
}

GraphChain phi(const Model& m, const BarChain& c) {
    GraphChain out;
    for (const auto& [w, coeff] : c) {
        Tree t;
        t.labels = w;
        for (size_t i = 0; i + 1 < w.size(); ++i)
            t.edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
        graph_add_tree(out, m, t, coeff);
    }
    return out;
}

GraphChain d_graph_internal(const Model& m, const GraphChain& c) {
    GraphChain out;
    for (const auto& [t, coeff] : c) {
        int eps = 0;
        for (size_t i = 0; i < t.labels.size(); ++i) {
            Element dx = m.diff(t.labels[i]);
            if (!dx.empty()) {
                Rational s = coeff * Rational((eps & 1) ? 1 : -1);
                for (const auto& [id, cc] : dx) {
                    Tree nt = t;
                    nt.labels[i] = id;
                    graph_add_tree(out, m, nt, s * cc);
                }
            }
            eps += m.degree(t.labels[i]) - 1;
        }
    }
    return out;
}

GraphChain d_graph_external(const Model& m, const GraphChain& c) {
    GraphChain out;
    for (const auto& [t, coeff] : c) {
        int n = static_cast<int>(t.labels.size());
        std::vector<int> prefix(n + 1, 0);
        for (int i = 0; i < n; ++i)
            prefix[i + 1] = prefix[i] + m.degree(t.labels[i]) - 1;
        for (size_t e = 0; e < t.edges.size(); ++e) {
            int s = t.edges[e].first, d = t.edges[e].second;
            int ld = prefix[d + 1] - prefix[d];
            int kappa, eps;
            if (d > s) {
                kappa = ld * (prefix[d] - prefix[s + 1]);
                eps = prefix[s + 1];
            } else {
                kappa = ld * (prefix[s + 1] - prefix[d + 1]);
                eps = prefix[s + 1] - ld;
            }
            int par = (eps & 1 ? 1 : 0) + (kappa & 1 ? 1 : 0) + 1;
            Element prod = m.mul(t.labels[s], t.labels[d]);
            if (prod.empty())
                continue;
            Rational base = coeff * Rational((par & 1) ? -1 : 1);
            for (const auto& [pid, pc] : prod) {
                Tree nt;
                nt.labels.reserve(n - 1);
                auto re = [&](int v) { return v - (v > d ? 1 : 0); };
                for (int i = 0; i < n; ++i) {
                    if (i == d)
                        continue;
                    nt.labels.push_back(i == s ? pid : t.labels[i]);
                }
                for (size_t f = 0; f < t.edges.size(); ++f) {
                    if (f == e)
                        continue;
                    auto [a, b] = t.edges[f];
                    if (a == d)
                        a = s;
                    if (b == d)
                        b = s;
                    nt.edges.emplace_back(re(a), re(b));
                }
                graph_add_tree(out, m, nt, base * pc);
            }
        }
    }
    return out;
}

GraphChain d_graph(const Model& m, const GraphChain& c) {
    GraphChain out = d_graph_internal(m, c);
    graph_add_scaled(out, d_graph_external(m, c), Rational(1));
    return out;
}

namespace {

Tree subtree(const Tree& t, const std::vector<int>& verts) {
    std::vector<int> pos(t.labels.size(), -1);
    for (size_t i = 0; i < verts.size(); ++i)
        pos[verts[i]] = static_cast<int>(i);
    Tree s;
    s.labels.reserve(verts.size());
    for (int v : verts)
        s.labels.push_back(t.labels[v]);
    for (const auto& [a, b] : t.edges)
        if (pos[a] >= 0 && pos[b] >= 0)
            s.edges.emplace_back(pos[a], pos[b]);
    return s;
}

} // namespace

GraphTensor cobracket(const Model& m, const GraphChain& c) {
    GraphTensor out;
    for (const auto& [t, coeff] : c) {
        int n = static_cast<int>(t.labels.size());
        std::vector<int> lowered(n);
        for (int v = 0; v < n; ++v)
            lowered[v] = m.degree(t.labels[v]) - 1;
        Adjacency adj = adjacency(t);
        for (size_t e = 0; e < t.edges.size(); ++e) {
            int s = t.edges[e].first, d = t.edges[e].second;
            // Component of the source once edge e is cut.
            std::vector<char> side(n, 0);
            std::deque<int> q{s};
            side[s] = 1;
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                for (auto [u, outg] : adj[v]) {
                    (void)outg;
                    if ((v == s && u == d) || (v == d && u == s))
                        continue;
                    if (!side[u]) {
                        side[u] = 1;
                        q.push_back(u);
                    }
                }
            }
            std::vector<int> c1, c2;
            for (int v = 0; v < n; ++v)
                (side[v] ? c1 : c2).push_back(v);
            std::vector<int> perm = c1;
            perm.insert(perm.end(), c2.begin(), c2.end());
            int kappa = koszul_sign(perm, lowered);
            int d1 = 0, d2 = 0;
            for (int v : c1)
                d1 += lowered[v];
            for (int v : c2)
                d2 += lowered[v];
            auto [t1, s1] = canonize(m, subtree(t, c1));
            auto [t2, s2] = canonize(m, subtree(t, c2));
            if (s1 == 0 || s2 == 0)
                continue;
            Rational base = coeff * Rational(kappa * s1 * s2);
            GraphTensor one{{{t1, t2}, Rational(1)}};
            graph_tensor_add_scaled(out, one, base);
            GraphTensor two{{{t2, t1}, Rational(1)}};
            graph_tensor_add_scaled(out, two,
                                    base * Rational((d1 & 1) && (d2 & 1) ? 1 : -1));
        }
    }
    return out;
}

std::vector<int> label_multiset(const Tree& t) {
    std::vector<int> ms = t.labels;
    std::sort(ms.begin(), ms.end());
    return ms;
}

const std::vector<Tree>&
RelationCache::structural(const std::vector<int>& sorted_labels) {
    auto hit = structural_.find(sorted_labels);
    if (hit != structural_.end())
        return hit->second;
    std::vector<Tree> out;
    int k = static_cast<int>(sorted_labels.size());
    if (k == 0)
        throw input_error("empty label multiset");
    if (k == 1) {
        Tree t;
        t.labels = sorted_labels;
        out.push_back(std::move(t));
        return structural_.emplace(sorted_labels, std::move(out)).first->second;
    }
    std::map<Tree, char> seen;
    for (int i = 0; i < k; ++i) {
        if (i > 0 && sorted_labels[i] == sorted_labels[i - 1])
            continue;
        int leaf_label = sorted_labels[i];
        std::vector<int> sub = sorted_labels;
        sub.erase(sub.begin() + i);
        const std::vector<Tree>& smaller = structural(sub);
        for (const Tree& s : smaller) {
            for (int v = 0; v < k - 1; ++v)
                for (int dir = 0; dir < 2; ++dir) {
                    Tree t = s;
                    t.labels.push_back(leaf_label);
                    if (dir == 0)
                        t.edges.emplace_back(v, k - 1);
                    else
                        t.edges.emplace_back(k - 1, v);
                    Tree canon = canonize(*m_, t).first;
                    seen.emplace(std::move(canon), 1);
                }
        }
    }
    out.reserve(seen.size());
    for (auto& [t, flag] : seen)
        out.push_back(t);
    return structural_.emplace(sorted_labels, std::move(out)).first->second;
}

namespace {

struct SignedUF {
    std::vector<int> parent, sign;
    std::vector<char> zr; // zero flag, valid at roots
    explicit SignedUF(int n) : parent(n), sign(n, 1), zr(n, 0) {
        for (int i = 0; i < n; ++i)
            parent[i] = i;
    }
    std::pair<int, int> find(int x) {
        if (parent[x] == x)
            return {x, 1};
        auto [r, s] = find(parent[x]);
        parent[x] = r;
        sign[x] *= s;
        return {r, sign[x]};
    }
    void mark_zero(int x) { zr[find(x).first] = 1; }
    // Impose e_a = s * e_b.
    void unite(int a, int b, int s) {
        auto [ra, sa] = find(a);
        auto [rb, sb] = find(b);
        if (ra == rb) {
            if (sa != s * sb)
                zr[ra] = 1;
            return;
        }
        parent[rb] = ra;
        sign[rb] = sa * s * sb;
        zr[ra] |= zr[rb];
    }
};

} // namespace

const RelationSpace&
RelationCache::space(const std::vector<int>& sorted_labels) {
    auto hit = spaces_.find(sorted_labels);
    if (hit != spaces_.end())
        return hit->second;
    const Model& m = *m_;
    RelationSpace sp;
    for (const Tree& t : structural(sorted_labels))
        if (canonize(m, t).second != 0)
            sp.classes.push_back(t);
    int nc = static_cast<int>(sp.classes.size());
    for (int i = 0; i < nc; ++i)
        sp.index.emplace(sp.classes[i], i);

    SignedUF uf(nc);
    for (int i = 0; i < nc; ++i) {
        const Tree& t = sp.classes[i];
        for (size_t e = 0; e < t.edges.size(); ++e) {
            Tree r = t;
            std::swap(r.edges[e].first, r.edges[e].second);
            auto [rc, rs] = canonize(m, r);
            if (rs == 0) {
                uf.mark_zero(i);
                continue;
            }
            // t + rs * rc = 0 in the quotient.
            uf.unite(i, sp.index.at(rc), -rs);
        }
    }
    sp.uf_root.resize(nc);
    sp.uf_sign.resize(nc);
    sp.zero.assign(nc, 0);
    for (int i = 0; i < nc; ++i) {
        auto [r, s] = uf.find(i);
        sp.uf_root[i] = r;
        sp.uf_sign[i] = s;
        sp.zero[i] = uf.zr[r];
        if (!sp.zero[i] && r == i)
            sp.roots.push_back(i);
    }
    for (size_t p = 0; p < sp.roots.size(); ++p)
        sp.root_pos.emplace(sp.roots[p], static_cast<int>(p));

    auto fold = [&](std::map<int, Rational>& acc, int cls, const Rational& c) {
        if (sp.zero[cls])
            return;
        int pos = sp.root_pos.at(sp.uf_root[cls]);
        Rational v = c * Rational(sp.uf_sign[cls]);
        auto it = acc.find(pos);
        if (it == acc.end()) {
            acc.emplace(pos, v);
        } else {
            it->second += v;
            if (it->second.is_zero())
                acc.erase(it);
        }
    };

    for (int i = 0; i < nc; ++i) {
        const Tree& t = sp.classes[i];
        for (size_t e1 = 0; e1 < t.edges.size(); ++e1)
            for (size_t e2 = 0; e2 < t.edges.size(); ++e2) {
                if (e1 == e2 || t.edges[e1].second != t.edges[e2].first)
                    continue;
                int a = t.edges[e1].first;
                int cv = t.edges[e2].second;
                std::map<int, Rational> acc;
                fold(acc, i, Rational(1));
                Tree t1 = t;
                t1.edges[e1] = {cv, a};
                auto [c1, s1] = canonize(m, t1);
                if (s1 != 0)
                    fold(acc, sp.index.at(c1), Rational(s1));
                Tree t2 = t;
                t2.edges[e2] = {cv, a};
                auto [c2, s2] = canonize(m, t2);
                if (s2 != 0)
                    fold(acc, sp.index.at(c2), Rational(s2));
                if (!acc.empty())
                    sp.rotations.insert(svec_from_map(acc));
            }
    }
    sp.complement = sp.rotations.complement(static_cast<int>(sp.roots.size()));
    return spaces_.emplace(sorted_labels, std::move(sp)).first->second;
}

SVec RelationSpace::reduce_coords(const SVec& coords_over_classes) const {
    std::map<int, Rational> acc;
    for (const auto& [cls, c] : coords_over_classes) {
        if (zero[cls])
            continue;
        int pos = root_pos.at(uf_root[cls]);
        Rational v = c * Rational(uf_sign[cls]);
        auto it = acc.find(pos);
        if (it == acc.end()) {
            acc.emplace(pos, v);
        } else {
            it->second += v;
            if (it->second.is_zero())
                acc.erase(it);
        }
    }
    SVec v = svec_from_map(acc);
    rotations.reduce(v);
    return v;
}

GraphChain quotient_reduce(RelationCache& cache, const GraphChain& c) {
    std::map<std::vector<int>, std::map<int, Rational>> groups;
    for (const auto& [t, coeff] : c) {
        const RelationSpace& sp = cache.space(label_multiset(t));
        groups[label_multiset(t)][sp.index.at(t)] += coeff;
    }
    GraphChain out;
    for (const auto& [ms, coords] : groups) {
        const RelationSpace& sp = cache.space(ms);
        std::map<int, Rational> clean;
        for (const auto& [i, v] : coords)
            if (!v.is_zero())
                clean.emplace(i, v);
        SVec reduced = sp.reduce_coords(svec_from_map(clean));
        for (const auto& [pos, v] : reduced) {
            const Tree& rep = sp.classes[sp.roots[pos]];
            auto it = out.find(rep);
            if (it == out.end()) {
                out.emplace(rep, v);
            } else {
                it->second += v;
                if (it->second.is_zero())
                    out.erase(it);
            }
        }
    }
    return out;
}

GraphChain homotopy_h(const Model& m, const GraphChain& c) {
    if (m.kind() != Model::Kind::free)
        throw input_error("the splitting operator needs a free model");
    GraphChain out;
    for (const auto& [t, coeff] : c) {
        int n = static_cast<int>(t.labels.size());
        long total_len = 0;
        std::vector<int> len(n);
        for (int v = 0; v < n; ++v) {
            const auto& ex = m.monomial_exponents(t.labels[v]);
            for (int e : ex)
                len[v] += e;
            total_len += len[v];
        }
        if (total_len == n)
            continue;
        std::vector<int> prefix(n + 1, 0);
        for (int v = 0; v < n; ++v)
            prefix[v + 1] = prefix[v] + m.degree(t.labels[v]) - 1;
        Rational inv_n(1, total_len);
        for (int v = 0; v < n; ++v) {
            if (len[v] < 2)
                continue;
            const auto ex = m.monomial_exponents(t.labels[v]);
            int run = 0; // degree of the factors before the current generator
            for (int g = 0; g < static_cast<int>(ex.size()); ++g) {
                if (ex[g] == 0)
                    continue;
                int gdeg = m.generator_degree(g);
                int par = (gdeg & 1 ? 1 + (run & 1) : 0) + (prefix[v] & 1);
                int mult = (gdeg & 1) ? 1 : ex[g];
                std::vector<int> rest = ex;
                rest[g] -= 1;
                int rid = m.monomial_id(rest);
                int gid = m.generator_monomial(g);
                Tree nt;
                nt.labels.reserve(n + 1);
                for (int i = 0; i < v; ++i)
                    nt.labels.push_back(t.labels[i]);
                nt.labels.push_back(gid);
                nt.labels.push_back(rid);
                for (int i = v + 1; i < n; ++i)
                    nt.labels.push_back(t.labels[i]);
                auto shift = [&](int i) { return i + (i >= v ? 1 : 0); };
                for (const auto& [a, b] : t.edges)
                    nt.edges.emplace_back(shift(a), shift(b));
                nt.edges.emplace_back(v, v + 1);
                Rational term = coeff * inv_n * Rational(mult) *
                                Rational((par & 1) ? -1 : 1);
                graph_add_tree(out, m, nt, term);
                run += ex[g] * gdeg;
            }
        }
    }
    return out;
}

} // namespace hopfcalc
