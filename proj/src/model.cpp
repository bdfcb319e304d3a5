#include "hopfcalc/model.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace hopfcalc {

namespace {
constexpr size_t kBasisCap = 500000;
} // namespace

int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees) {
    int sign = 1;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j] && (degrees[perm[i]] & 1) && (degrees[perm[j]] & 1))
                sign = -sign;
    return sign;
}

void elem_add_scaled(Element& into, const Element& e, const Rational& c) {
    if (c.is_zero())
        return;
    for (const auto& [id, v] : e) {
        auto it = into.find(id);
        if (it == into.end()) {
            into.emplace(id, v * c);
        } else {
            it->second += v * c;
            if (it->second.is_zero())
                into.erase(it);
        }
    }
}

bool elem_is_zero(const Element& e) { return e.empty(); }

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < issues.size(); ++i) {
        if (i)
            os << '\n';
        os << issues[i];
    }
    return os.str();
}

Model Model::make_table(std::string name,
                        std::vector<std::pair<std::string, int>> basis) {
    Model m;
    m.kind_ = Kind::table;
    m.name_ = std::move(name);
    m.table_basis_ = std::move(basis);
    return m;
}

Model Model::make_free(std::string name,
                       std::vector<std::pair<std::string, int>> generators) {
    Model m;
    m.kind_ = Kind::free;
    m.name_ = std::move(name);
    for (const auto& [gname, deg] : generators)
        if (deg <= 0)
            throw input_error("free generator '" + gname +
                              "' must have positive degree");
    std::sort(generators.begin(), generators.end());
    m.gens_ = std::move(generators);
    return m;
}

void Model::set_product(int a, int b, Element value) {
    if (kind_ != Kind::table)
        throw input_error("products of a free model are not assignable");
    products_[{a, b}] = std::move(value);
}

void Model::set_diff(int basis_or_gen, Element value) {
    if (kind_ == Kind::free) {
        const auto& e = monomial_exponents(basis_or_gen);
        int total = 0;
        for (int x : e)
            total += x;
        if (total != 1)
            throw input_error("free model differential must be set on generators");
    }
    diffs_[basis_or_gen] = std::move(value);
}

int Model::basis_count() const {
    if (kind_ == Kind::table)
        return static_cast<int>(table_basis_.size());
    return static_cast<int>(mono_exps_.size());
}

int Model::degree(int id) const {
    if (kind_ == Kind::table) {
        if (id < 0 || id >= static_cast<int>(table_basis_.size()))
            throw input_error("basis id out of range");
        return table_basis_[id].second;
    }
    if (id < 0 || id >= static_cast<int>(mono_degree_.size()))
        throw input_error("basis id out of range");
    return mono_degree_[id];
}

std::string Model::basis_name(int id) const {
    if (kind_ == Kind::table) {
        if (id < 0 || id >= static_cast<int>(table_basis_.size()))
            throw input_error("basis id out of range");
        return table_basis_[id].first;
    }
    const auto& exps = monomial_exponents(id);
    if (std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; }))
        return "1";
    std::ostringstream os;
    bool first = true;
    for (size_t g = 0; g < exps.size(); ++g) {
        if (exps[g] == 0)
            continue;
        if (!first)
            os << '*';
        first = false;
        os << gens_[g].first;
        if (exps[g] > 1)
            os << '^' << exps[g];
    }
    return os.str();
}

std::optional<int> Model::find_basis(const std::string& name) const {
    if (kind_ == Kind::table) {
        for (size_t i = 0; i < table_basis_.size(); ++i)
            if (table_basis_[i].first == name)
                return static_cast<int>(i);
        return std::nullopt;
    }
    for (size_t g = 0; g < gens_.size(); ++g)
        if (gens_[g].first == name)
            return generator_monomial(static_cast<int>(g));
    return std::nullopt;
}

bool Model::one_connected() const {
    if (kind_ == Kind::table) {
        for (const auto& [n, d] : table_basis_)
            if (d < 2)
                return false;
        return true;
    }
    for (const auto& [n, d] : gens_)
        if (d < 2)
            return false;
    return true;
}

int Model::min_positive_degree() const {
    int m = INT_MAX;
    if (kind_ == Kind::table) {
        for (const auto& [n, d] : table_basis_)
            m = std::min(m, d);
    } else {
        for (const auto& [n, d] : gens_)
            m = std::min(m, d);
    }
    return m;
}

void Model::ensure_degree(int d) const {
    if (kind_ != Kind::free)
        return;
    std::vector<int> exps(gens_.size(), 0);
    auto emit = [&](int deg) {
        auto [it, fresh] = mono_index_.emplace(exps, static_cast<int>(mono_exps_.size()));
        if (!fresh)
            return;
        mono_exps_.push_back(exps);
        mono_degree_.push_back(deg);
        by_degree_[deg].push_back(it->second);
        if (mono_exps_.size() > kBasisCap)
            throw resource_error("free model basis exceeds " +
                                 std::to_string(kBasisCap) + " monomials");
    };
    // Exponent vectors of fixed total degree in ascending lex order, so ids
    // are assigned in graded-lex order as the enumerated range grows.
    auto rec = [&](auto&& self, size_t g, int remaining, int deg) -> void {
        if (g == gens_.size()) {
            if (remaining == 0)
                emit(deg);
            return;
        }
        int gd = gens_[g].second;
        int maxe = remaining / gd;
        if ((gd & 1) && maxe > 1)
            maxe = 1;
        for (int e = 0; e <= maxe; ++e) {
            exps[g] = e;
            self(self, g + 1, remaining - e * gd, deg);
        }
        exps[g] = 0;
    };
    while (enumerated_degree_ < d) {
        ++enumerated_degree_;
        rec(rec, 0, enumerated_degree_, enumerated_degree_);
    }
}

const std::vector<int>& Model::basis_of_degree(int d) const {
    if (kind_ == Kind::table) {
        auto it = by_degree_.find(d);
        if (it != by_degree_.end())
            return it->second;
        auto& v = by_degree_[d];
        for (size_t i = 0; i < table_basis_.size(); ++i)
            if (table_basis_[i].second == d)
                v.push_back(static_cast<int>(i));
        return v;
    }
    if (d > 0)
        ensure_degree(d);
    return by_degree_[d];
}

int Model::generator_monomial(int g) const {
    if (kind_ != Kind::free || g < 0 || g >= static_cast<int>(gens_.size()))
        throw input_error("generator index out of range");
    ensure_degree(gens_[g].second);
    std::vector<int> exps(gens_.size(), 0);
    exps[g] = 1;
    return mono_index_.at(exps);
}

int Model::monomial_id(const std::vector<int>& exponents) const {
    if (kind_ != Kind::free)
        throw input_error("monomials only exist in free models");
    if (exponents.size() != gens_.size())
        throw input_error("monomial exponent count mismatch");
    int deg = 0;
    for (size_t g = 0; g < exponents.size(); ++g) {
        if (exponents[g] < 0)
            throw input_error("negative exponent");
        if ((gens_[g].second & 1) && exponents[g] > 1)
            throw input_error("odd generator '" + gens_[g].first + "' squared");
        deg += exponents[g] * gens_[g].second;
    }
    if (deg == 0)
        throw input_error("the unit is not a basis monomial");
    ensure_degree(deg);
    return mono_index_.at(exponents);
}

const std::vector<int>& Model::monomial_exponents(int id) const {
    if (kind_ != Kind::free || id < 0 ||
        id >= static_cast<int>(mono_exps_.size()))
        throw input_error("monomial id out of range");
    return mono_exps_[id];
}

Element Model::mul(int a, int b) const {
    if (kind_ == Kind::table) {
        auto it = products_.find({a, b});
        if (it != products_.end())
            return it->second;
        it = products_.find({b, a});
        if (it == products_.end())
            return {};
        Element r;
        Rational sign((degree(a) & 1) && (degree(b) & 1) ? -1 : 1);
        elem_add_scaled(r, it->second, sign);
        return r;
    }
    const auto& ea = monomial_exponents(a);
    const auto& eb = monomial_exponents(b);
    std::vector<int> es(gens_.size());
    long crossings = 0;
    for (size_t i = 0; i < gens_.size(); ++i) {
        es[i] = ea[i] + eb[i];
        if ((gens_[i].second & 1) && es[i] > 1)
            return {};
    }
    // Each generator factor of b passes every higher-index factor of a.
    for (size_t j = 0; j < gens_.size(); ++j) {
        if (!(gens_[j].second & 1) || eb[j] == 0)
            continue;
        for (size_t i = j + 1; i < gens_.size(); ++i)
            if (gens_[i].second & 1)
                crossings += static_cast<long>(eb[j]) * ea[i];
    }
    int id = monomial_id(es);
    Element r;
    r[id] = Rational((crossings & 1) ? -1 : 1);
    return r;
}

Element Model::diff(int a) const {
    if (kind_ == Kind::table) {
        auto it = diffs_.find(a);
        return it == diffs_.end() ? Element{} : it->second;
    }
    auto cached = diff_cache_.find(a);
    if (cached != diff_cache_.end())
        return cached->second;
    const auto& exps = monomial_exponents(a);
    int total = 0;
    for (int e : exps)
        total += e;
    Element result;
    if (total == 1) {
        auto it = diffs_.find(a);
        if (it != diffs_.end())
            result = it->second;
    } else {
        size_t g = 0;
        while (exps[g] == 0)
            ++g;
        std::vector<int> rest = exps;
        rest[g] -= 1;
        int gid = generator_monomial(static_cast<int>(g));
        int rid = monomial_id(rest);
        Element dg = diff(gid);
        Element dr = diff(rid);
        Element left = mul(dg, Element{{rid, Rational(1)}});
        Element right = mul(Element{{gid, Rational(1)}}, dr);
        result = left;
        elem_add_scaled(result, right,
                        Rational((gens_[g].second & 1) ? -1 : 1));
    }
    diff_cache_[a] = result;
    return result;
}

Element Model::mul(const Element& a, const Element& b) const {
    Element r;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b)
            elem_add_scaled(r, mul(ia, ib), ca * cb);
    return r;
}

Element Model::diff(const Element& a) const {
    Element r;
    for (const auto& [id, c] : a)
        elem_add_scaled(r, diff(id), c);
    return r;
}

std::string Model::render(const Element& e) const {
    if (e.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [id, c] : e) {
        Rational a = c;
        if (first) {
            if (a.sign() < 0) {
                os << '-';
                a = -a;
            }
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
            if (a.sign() < 0)
                a = -a;
        }
        if (!a.is_one())
            os << a.str() << '*';
        os << basis_name(id);
        first = false;
    }
    return os.str();
}

namespace {

// Degree of a homogeneous element; nullopt for mixed degrees, -1 for zero.
std::optional<int> homo_degree(const Model& m, const Element& e) {
    int deg = -1;
    for (const auto& [id, c] : e) {
        int d = m.degree(id);
        if (deg == -1)
            deg = d;
        else if (deg != d)
            return std::nullopt;
    }
    return deg;
}

} // namespace

ValidationReport Model::validate() const {
    ValidationReport rep;
    auto add = [&](const std::string& s) { rep.issues.push_back(s); };

    if (kind_ == Kind::table) {
        for (size_t i = 0; i < table_basis_.size(); ++i) {
            for (size_t j = i + 1; j < table_basis_.size(); ++j)
                if (table_basis_[i].first == table_basis_[j].first)
                    add("duplicate basis symbol '" + table_basis_[i].first + "'");
            if (table_basis_[i].second < 1)
                add("basis symbol '" + table_basis_[i].first +
                    "' has degree < 1");
        }
        if (!rep.ok())
            return rep; // degree bookkeeping below assumes a sane basis

        int n = basis_count();
        for (const auto& [key, val] : products_) {
            auto [a, b] = key;
            auto hd = homo_degree(*this, val);
            if (!hd || (*hd != -1 && *hd != degree(a) + degree(b)))
                add("product " + basis_name(a) + "*" + basis_name(b) +
                    " is not homogeneous of degree " +
                    std::to_string(degree(a) + degree(b)));
            auto rev = products_.find({b, a});
            if (rev != products_.end() && a <= b) {
                Element want;
                Rational sign((degree(a) & 1) && (degree(b) & 1) ? -1 : 1);
                elem_add_scaled(want, val, sign);
                if (want != rev->second)
                    add("products " + basis_name(a) + "*" + basis_name(b) +
                        " and " + basis_name(b) + "*" + basis_name(a) +
                        " violate graded commutativity");
            }
            if (a == b && (degree(a) & 1) && !val.empty())
                add("odd symbol '" + basis_name(a) + "' has nonzero square");
        }
        for (const auto& [id, val] : diffs_) {
            auto hd = homo_degree(*this, val);
            if (!hd || (*hd != -1 && *hd != degree(id) + 1))
                add("d(" + basis_name(id) +
                    ") is not homogeneous of degree " +
                    std::to_string(degree(id) + 1));
        }
        if (!rep.ok())
            return rep;

        for (int i = 0; i < n; ++i)
            if (!elem_is_zero(diff(diff(i))))
                add("d(d(" + basis_name(i) + ")) != 0");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Element lhs = diff(mul(i, j));
                Element rhs = mul(diff(i), Element{{j, Rational(1)}});
                elem_add_scaled(rhs, mul(Element{{i, Rational(1)}}, diff(j)),
                                Rational((degree(i) & 1) ? -1 : 1));
                if (lhs != rhs)
                    add("Leibniz fails on " + basis_name(i) + ", " +
                        basis_name(j));
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Element lhs = mul(mul(i, j), Element{{k, Rational(1)}});
                    Element rhs = mul(Element{{i, Rational(1)}}, mul(j, k));
                    if (lhs != rhs)
                        add("associativity fails on " + basis_name(i) + ", " +
                            basis_name(j) + ", " + basis_name(k));
                }
        return rep;
    }

    for (size_t i = 0; i < gens_.size(); ++i)
        for (size_t j = i + 1; j < gens_.size(); ++j)
            if (gens_[i].first == gens_[j].first)
                add("duplicate generator '" + gens_[i].first + "'");
    if (!rep.ok())
        return rep;
    for (const auto& [id, val] : diffs_) {
        auto hd = homo_degree(*this, val);
        if (!hd || (*hd != -1 && *hd != degree(id) + 1))
            add("d(" + basis_name(id) + ") is not homogeneous of degree " +
                std::to_string(degree(id) + 1));
    }
    if (!rep.ok())
        return rep;
    for (int d = 1; d <= validation_depth; ++d)
        for (int id : basis_of_degree(d))
            if (!elem_is_zero(diff(diff(id))))
                add("d(d(" + basis_name(id) + ")) != 0");
    return rep;
}

ValidationReport validate_model(const Model& m) { return m.validate(); }

Model sphere_model(int n) {
    if (n < 2)
        throw input_error("sphere dimension must be at least 2");
    if (n & 1)
        return Model::make_free("S" + std::to_string(n), {{"w", n}});
    Model m = Model::make_free("S" + std::to_string(n),
                               {{"w", n}, {"ww", 2 * n - 1}});
    int w = *m.find_basis("w");
    m.set_diff(*m.find_basis("ww"), m.mul(w, w));
    return m;
}

Model sphere_cohomology_model(int n) {
    if (n < 2)
        throw input_error("sphere dimension must be at least 2");
    return Model::make_table("HS" + std::to_string(n), {{"w", n}});
}

Model wedge_model(const std::vector<int>& degrees,
                  std::vector<std::string> names) {
    if (!names.empty() && names.size() != degrees.size())
        throw input_error("wedge name count mismatch");
    std::vector<std::pair<std::string, int>> basis;
    for (size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 2)
            throw input_error("wedge summand dimension must be at least 2");
        std::string nm = names.empty() ? "g" + std::to_string(i + 1) : names[i];
        basis.emplace_back(nm, degrees[i]);
    }
    return Model::make_table("wedge", std::move(basis));
}

Morphism::Morphism(std::string name, const Model* src, const Model* tgt)
    : name_(std::move(name)), src_(src), tgt_(tgt) {
    if (!src || !tgt)
        throw input_error("morphism requires source and target models");
}

void Morphism::set_image(int src_basis_or_gen, Element value) {
    if (src_->kind() == Model::Kind::free) {
        const auto& e = src_->monomial_exponents(src_basis_or_gen);
        int total = 0;
        for (int x : e)
            total += x;
        if (total != 1)
            throw input_error("morphism images must be set on generators");
    }
    images_[src_basis_or_gen] = std::move(value);
    apply_cache_.clear();
}

Element Morphism::apply(int basis_id) const {
    if (src_->kind() == Model::Kind::table) {
        auto it = images_.find(basis_id);
        return it == images_.end() ? Element{} : it->second;
    }
    auto cached = apply_cache_.find(basis_id);
    if (cached != apply_cache_.end())
        return cached->second;
    const auto& exps = src_->monomial_exponents(basis_id);
    int total = 0;
    for (int e : exps)
        total += e;
    Element result;
    if (total == 1) {
        auto it = images_.find(basis_id);
        if (it != images_.end())
            result = it->second;
    } else {
        size_t g = 0;
        while (exps[g] == 0)
            ++g;
        std::vector<int> rest = exps;
        rest[g] -= 1;
        int gid = src_->generator_monomial(static_cast<int>(g));
        int rid = src_->monomial_id(rest);
        result = tgt_->mul(apply(gid), apply(rid));
    }
    apply_cache_[basis_id] = result;
    return result;
}

Element Morphism::apply(const Element& e) const {
    Element r;
    for (const auto& [id, c] : e)
        elem_add_scaled(r, apply(id), c);
    return r;
}

ValidationReport Morphism::validate() const {
    ValidationReport rep;
    auto add = [&](const std::string& s) { rep.issues.push_back(s); };
    for (const auto& [id, val] : images_) {
        auto hd = homo_degree(*tgt_, val);
        if (!hd || (*hd != -1 && *hd != src_->degree(id)))
            add("image of '" + src_->basis_name(id) +
                "' is not homogeneous of degree " +
                std::to_string(src_->degree(id)));
    }
    if (!rep.ok())
        return rep;
    if (src_->kind() == Model::Kind::table) {
        int n = src_->basis_count();
        for (int i = 0; i < n; ++i) {
            Element lhs = apply(src_->diff(i));
            Element rhs = tgt_->diff(apply(i));
            if (lhs != rhs)
                add("does not commute with d on '" + src_->basis_name(i) + "'");
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Element lhs = apply(src_->mul(i, j));
                Element rhs = tgt_->mul(apply(i), apply(j));
                if (lhs != rhs)
                    add("not multiplicative on " + src_->basis_name(i) + ", " +
                        src_->basis_name(j));
            }
    } else {
        for (int g = 0; g < src_->generator_count(); ++g) {
            int gid = src_->generator_monomial(g);
            Element lhs = apply(src_->diff(gid));
            Element rhs = tgt_->diff(apply(gid));
            if (lhs != rhs)
                add("does not commute with d on '" + src_->generator_name(g) +
                    "'");
        }
    }
    return rep;
}

ValidationReport validate_morphism(const Morphism& f) { return f.validate(); }

Morphism compose(const Morphism& outer, const Morphism& inner,
                 const std::string& name) {
    if (inner.tgt() != outer.src())
        throw input_error("composition middle models differ");
    Morphism r(name, inner.src(), outer.tgt());
    const Model* s = inner.src();
    if (s->kind() == Model::Kind::table) {
        for (int i = 0; i < s->basis_count(); ++i) {
            Element img = outer.apply(inner.apply(i));
            if (!elem_is_zero(img))
                r.set_image(i, std::move(img));
        }
    } else {
        for (int g = 0; g < s->generator_count(); ++g) {
            int gid = s->generator_monomial(g);
            Element img = outer.apply(inner.apply(gid));
            if (!elem_is_zero(img))
                r.set_image(gid, std::move(img));
        }
    }
    return r;
}

} // namespace hopfcalc
