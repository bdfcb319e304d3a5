#include "hopfcalc/formats.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace hopfcalc {

namespace {

bool is_ident(const std::string& s) {
    if (s.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return s != "tree";
}

bool rational_literal(const std::string& s) {
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s[0])))
        return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '/')
            return false;
    return true;
}

int parse_int(const std::string& s, int line) {
    size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw parse_error("expected an integer, got '" + s + "'", line);
    return v;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string strip_ws(const std::string& s) {
    std::string out;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            out += ch;
    return out;
}

struct LineReader {
    std::istream& in;
    int lineno = 0;
    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos)
                raw.erase(hash);
            auto b = raw.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                continue;
            auto e = raw.find_last_not_of(" \t\r");
            out = raw.substr(b, e - b + 1);
            return true;
        }
        return false;
    }
};

// A letter: a basis symbol (table) or a monomial `x^2*y` (free).
// Returns -1 when the monomial is zero (an odd generator squared).
int parse_letter(const Model& m, const std::string& text, int line) {
    if (text.empty())
        throw parse_error("empty symbol", line);
    if (m.kind() == Model::Kind::table) {
        if (!is_ident(text))
            throw parse_error("expected a basis symbol, got '" + text + "'",
                              line);
        auto id = m.find_basis(text);
        if (!id)
            throw parse_error("unknown symbol '" + text + "'", line);
        return *id;
    }
    std::vector<int> exps(m.generator_count(), 0);
    for (const std::string& factor : split_on(text, '*')) {
        std::string name = factor;
        int exp = 1;
        auto caret = factor.find('^');
        if (caret != std::string::npos) {
            name = factor.substr(0, caret);
            exp = parse_int(factor.substr(caret + 1), line);
            if (exp < 1)
                throw parse_error("exponent must be positive in '" + factor +
                                      "'",
                                  line);
        }
        int g = -1;
        for (int i = 0; i < m.generator_count(); ++i)
            if (m.generator_name(i) == name)
                g = i;
        if (g < 0)
            throw parse_error("unknown generator '" + name + "'", line);
        exps[g] += exp;
    }
    for (int g = 0; g < m.generator_count(); ++g)
        if ((m.generator_degree(g) & 1) && exps[g] > 1)
            return -1;
    return m.monomial_id(exps);
}

// Splits an expression into (sign, term-text) pairs at top-level +/-.
std::vector<std::pair<int, std::string>> split_terms(const std::string& text,
                                                     int line) {
    std::string s = strip_ws(text);
    if (s.empty())
        throw parse_error("empty expression", line);
    std::vector<std::pair<int, std::string>> out;
    int sign = 1;
    size_t start = 0;
    int depth = 0;
    auto flush = [&](size_t end, int next_sign) {
        if (end == start) {
            if (!out.empty() || sign < 0 || next_sign == 0)
                throw parse_error("empty term", line);
        } else {
            out.emplace_back(sign, s.substr(start, end - start));
        }
        sign = next_sign;
    };
    for (size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '{')
            ++depth;
        else if (ch == '}')
            --depth;
        else if (depth == 0 && (ch == '+' || ch == '-')) {
            if (ch == '-' && i + 1 < s.size() && s[i + 1] == '>')
                throw parse_error("'->' outside a tree", line);
            flush(i, ch == '+' ? 1 : -1);
            start = i + 1;
        }
    }
    if (depth != 0)
        throw parse_error("unbalanced braces", line);
    flush(s.size(), 0);
    return out;
}

// Detaches a leading rational coefficient factor, if present.
Rational take_coeff(std::string& term, int line) {
    (void)line;
    auto star = term.find('*');
    if (star == std::string::npos)
        return Rational(1);
    std::string head = term.substr(0, star);
    if (!rational_literal(head))
        return Rational(1);
    term = term.substr(star + 1);
    return Rational::parse(head);
}

Tree parse_tree_term(const Model& m, const std::string& text, int line,
                     bool& zero) {
    zero = false;
    const std::string prefix = "tree{";
    if (text.rfind(prefix, 0) != 0 || text.back() != '}')
        throw parse_error("expected tree{...}, got '" + text + "'", line);
    std::string inner = text.substr(prefix.size(),
                                    text.size() - prefix.size() - 1);
    auto semi = inner.find(';');
    std::string vpart = semi == std::string::npos ? inner
                                                  : inner.substr(0, semi);
    std::string epart = semi == std::string::npos ? std::string()
                                                  : inner.substr(semi + 1);
    Tree t;
    std::map<std::string, int> slot;
    for (const std::string& v : split_on(vpart, ',')) {
        auto colon = v.find(':');
        if (colon == std::string::npos)
            throw parse_error("expected vertex:label in '" + v + "'", line);
        std::string vname = v.substr(0, colon);
        if (!is_ident(vname))
            throw parse_error("bad vertex name '" + vname + "'", line);
        if (!slot.emplace(vname, static_cast<int>(t.labels.size())).second)
            throw parse_error("duplicate vertex '" + vname + "'", line);
        int id = parse_letter(m, v.substr(colon + 1), line);
        if (id < 0)
            zero = true;
        t.labels.push_back(id);
    }
    if (!epart.empty()) {
        for (const std::string& e : split_on(epart, ',')) {
            auto arrow = e.find("->");
            if (arrow == std::string::npos)
                throw parse_error("expected src->dst in '" + e + "'", line);
            auto s = slot.find(e.substr(0, arrow));
            auto d = slot.find(e.substr(arrow + 2));
            if (s == slot.end() || d == slot.end())
                throw parse_error("edge uses an undeclared vertex in '" + e +
                                      "'",
                                  line);
            t.edges.emplace_back(s->second, d->second);
        }
    }
    return t;
}

} // namespace

Element parse_poly(const Model& m, const std::string& text, int line) {
    Element out;
    for (auto& [sign, term] : split_terms(text, line)) {
        std::string body = term;
        Rational coeff = take_coeff(body, line) * Rational(sign);
        if (rational_literal(body)) {
            if (Rational::parse(body).is_zero())
                continue;
            throw parse_error("a term needs at least one symbol", line);
        }
        if (m.kind() == Model::Kind::table && body.find('*') != std::string::npos)
            throw parse_error(
                "table polynomials are linear in basis symbols: '" + body +
                    "'",
                line);
        int id = parse_letter(m, body, line);
        if (id < 0)
            continue;
        elem_add_scaled(out, Element{{id, Rational(1)}}, coeff);
    }
    return out;
}

BarChain parse_bar_expr(const Model& m, const std::string& text) {
    BarChain out;
    for (auto& [sign, term] : split_terms(text, 0)) {
        std::string body = term;
        Rational coeff = take_coeff(body, 0) * Rational(sign);
        if (rational_literal(body)) {
            if (Rational::parse(body).is_zero())
                continue;
            throw parse_error("a term needs at least one symbol");
        }
        BarWord word;
        bool zero = false;
        for (const std::string& letter : split_on(body, '|')) {
            int id = parse_letter(m, letter, 0);
            if (id < 0)
                zero = true;
            word.push_back(id);
        }
        if (zero)
            continue;
        bar_add_scaled(out, BarChain{{word, Rational(1)}}, coeff);
    }
    return out;
}

GraphChain parse_graph_expr(const Model& m, const std::string& text) {
    GraphChain out;
    for (auto& [sign, term] : split_terms(text, 0)) {
        std::string body = term;
        Rational coeff = take_coeff(body, 0) * Rational(sign);
        if (rational_literal(body)) {
            if (Rational::parse(body).is_zero())
                continue;
            throw parse_error("a term needs at least one symbol");
        }
        bool zero = false;
        Tree t = parse_tree_term(m, body, 0, zero);
        if (zero)
            continue;
        validate_tree(m, t);
        graph_add_tree(out, m, t, coeff);
    }
    return out;
}

bool expr_is_graph(const std::string& text) {
    return strip_ws(text).find("tree{") != std::string::npos;
}

BracketExpr parse_bracket_expr(const Model& base, const std::string& text) {
    std::string s = strip_ws(text);
    size_t pos = 0;
    auto rec = [&](auto&& self) -> BracketExpr {
        if (pos < s.size() && s[pos] == '[') {
            ++pos;
            BracketExpr l = self(self);
            if (pos >= s.size() || s[pos] != ',')
                throw parse_error("expected ',' in bracket expression");
            ++pos;
            BracketExpr r = self(self);
            if (pos >= s.size() || s[pos] != ']')
                throw parse_error("expected ']' in bracket expression");
            ++pos;
            return bracket_expr(std::move(l), std::move(r));
        }
        size_t start = pos;
        while (pos < s.size() && s[pos] != ',' && s[pos] != ']' &&
               s[pos] != '[')
            ++pos;
        std::string name = s.substr(start, pos - start);
        if (!is_ident(name))
            throw parse_error("expected a symbol name, got '" + name + "'");
        auto id = base.find_basis(name);
        if (!id)
            throw parse_error("unknown symbol '" + name + "'");
        return collapse_leaf(base, *id);
    };
    BracketExpr e = rec(rec);
    if (pos != s.size())
        throw parse_error("trailing input in bracket expression");
    return e;
}

namespace {

// Shared sum printer: positive-form term texts joined by signed separators.
std::string print_sum(const std::vector<std::pair<Rational, std::string>>& terms) {
    if (terms.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, body] : terms) {
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
        os << body;
        first = false;
    }
    return os.str();
}

} // namespace

std::string print_poly(const Model& m, const Element& e) {
    return m.render(e);
}

std::string print_bar(const Model& m, const BarChain& c) {
    std::vector<std::pair<Rational, std::string>> terms;
    for (const auto& [word, coeff] : c) {
        std::string body;
        for (size_t i = 0; i < word.size(); ++i) {
            if (i)
                body += '|';
            body += m.basis_name(word[i]);
        }
        terms.emplace_back(coeff, body);
    }
    return print_sum(terms);
}

std::string print_graph(const Model& m, const GraphChain& c) {
    std::vector<std::pair<Rational, std::string>> terms;
    for (const auto& [tree, coeff] : c) {
        std::ostringstream os;
        os << "tree{";
        for (size_t v = 0; v < tree.labels.size(); ++v) {
            if (v)
                os << ", ";
            os << 'v' << v + 1 << ':' << m.basis_name(tree.labels[v]);
        }
        if (!tree.edges.empty()) {
            os << "; ";
            for (size_t e = 0; e < tree.edges.size(); ++e) {
                if (e)
                    os << ", ";
                os << 'v' << tree.edges[e].first + 1 << "->" << 'v'
                   << tree.edges[e].second + 1;
            }
        }
        os << '}';
        terms.emplace_back(coeff, os.str());
    }
    return print_sum(terms);
}

Model parse_model(std::istream& in) {
    LineReader lr{in};
    std::string line;
    std::string name;
    bool have_kind = false;
    Model::Kind kind = Model::Kind::table;
    int truncate = 0;
    std::vector<std::pair<std::string, int>> symbols;
    std::set<std::string> seen;
    struct DLine {
        int line;
        std::string sym, poly;
    };
    struct PLine {
        int line;
        std::string a, b, poly;
    };
    std::vector<DLine> dlines;
    std::vector<PLine> plines;
    while (lr.next(line)) {
        auto tok = split_ws(line);
        const std::string& kw = tok[0];
        if (kw == "model") {
            if (!name.empty())
                throw parse_error("duplicate model line", lr.lineno);
            if (tok.size() != 2 || !is_ident(tok[1]))
                throw parse_error("expected: model <name>", lr.lineno);
            name = tok[1];
        } else if (kw == "kind") {
            if (have_kind)
                throw parse_error("duplicate kind line", lr.lineno);
            if (tok.size() != 2 || (tok[1] != "free" && tok[1] != "table"))
                throw parse_error("expected: kind free|table", lr.lineno);
            kind = tok[1] == "free" ? Model::Kind::free : Model::Kind::table;
            have_kind = true;
        } else if (kw == "truncate") {
            if (tok.size() != 2)
                throw parse_error("expected: truncate <N>", lr.lineno);
            truncate = parse_int(tok[1], lr.lineno);
            if (truncate < 1)
                throw parse_error("truncate needs a positive degree",
                                  lr.lineno);
        } else if (kw == "generator" || kw == "basis") {
            if (!have_kind)
                throw parse_error("declare kind before symbols", lr.lineno);
            bool want_free = kw == "generator";
            if (want_free != (kind == Model::Kind::free))
                throw parse_error(want_free
                                      ? "'generator' only fits kind free"
                                      : "'basis' only fits kind table",
                                  lr.lineno);
            if (tok.size() != 4 || tok[2] != "degree")
                throw parse_error("expected: " + kw + " <name> degree <d>",
                                  lr.lineno);
            if (!is_ident(tok[1]))
                throw parse_error("bad symbol name '" + tok[1] + "'",
                                  lr.lineno);
            if (!seen.insert(tok[1]).second)
                throw parse_error("duplicate symbol '" + tok[1] + "'",
                                  lr.lineno);
            symbols.emplace_back(tok[1], parse_int(tok[3], lr.lineno));
        } else if (kw == "d") {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw parse_error("expected: d <name> = <poly>", lr.lineno);
            auto lhs = split_ws(line.substr(0, eq));
            if (lhs.size() != 2)
                throw parse_error("expected: d <name> = <poly>", lr.lineno);
            dlines.push_back({lr.lineno, lhs[1], line.substr(eq + 1)});
        } else if (kw == "product") {
            if (!have_kind || kind != Model::Kind::table)
                throw parse_error("products are given only for table models",
                                  lr.lineno);
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw parse_error("expected: product <a> <b> = <poly>",
                                  lr.lineno);
            auto lhs = split_ws(line.substr(0, eq));
            if (lhs.size() != 3)
                throw parse_error("expected: product <a> <b> = <poly>",
                                  lr.lineno);
            plines.push_back({lr.lineno, lhs[1], lhs[2], line.substr(eq + 1)});
        } else {
            throw parse_error("unknown directive '" + kw + "'", lr.lineno);
        }
    }
    if (name.empty() || !have_kind)
        throw parse_error("missing 'model <name>' or 'kind' line",
                          std::max(lr.lineno, 1));
    Model m = kind == Model::Kind::free ? Model::make_free(name, symbols)
                                        : Model::make_table(name, symbols);
    if (truncate > 0)
        m.validation_depth = truncate;
    for (const auto& p : plines) {
        auto a = m.find_basis(p.a);
        auto b = m.find_basis(p.b);
        if (!a || !b)
            throw parse_error("unknown symbol '" + (a ? p.b : p.a) + "'",
                              p.line);
        m.set_product(*a, *b, parse_poly(m, p.poly, p.line));
    }
    for (const auto& d : dlines) {
        auto id = m.find_basis(d.sym);
        if (!id)
            throw parse_error("unknown symbol '" + d.sym + "'", d.line);
        m.set_diff(*id, parse_poly(m, d.poly, d.line));
    }
    return m;
}

Model parse_model_file(const std::string& path) {
    if (path == "-")
        return parse_model(std::cin);
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    return parse_model(in);
}

MorphismFile parse_morphism(std::istream& in) {
    LineReader lr{in};
    std::string line;
    MorphismFile mf;
    bool have_header = false;
    while (lr.next(line)) {
        if (!have_header) {
            auto tok = split_ws(line);
            if (tok.size() != 6 || tok[0] != "morphism" || tok[2] != "from" ||
                tok[4] != "to" || !is_ident(tok[1]))
                throw parse_error(
                    "expected: morphism <name> from <model> to <model>",
                    lr.lineno);
            mf.name = tok[1];
            mf.from = tok[3];
            mf.to = tok[5];
            have_header = true;
            continue;
        }
        auto arrow = line.find("->");
        if (arrow == std::string::npos)
            throw parse_error("expected: <generator> -> <poly>", lr.lineno);
        auto lhs = split_ws(line.substr(0, arrow));
        if (lhs.size() != 1 || !is_ident(lhs[0]))
            throw parse_error("expected a generator name before '->'",
                              lr.lineno);
        mf.images.push_back({lr.lineno, lhs[0], line.substr(arrow + 2)});
    }
    if (!have_header)
        throw parse_error("missing morphism header line",
                          std::max(lr.lineno, 1));
    return mf;
}

MorphismFile parse_morphism_file(const std::string& path) {
    if (path == "-")
        return parse_morphism(std::cin);
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    return parse_morphism(in);
}

Morphism bind_morphism(const MorphismFile& mf, const Model* src,
                       const Model* tgt) {
    Morphism f(mf.name, src, tgt);
    std::set<std::string> seen;
    for (const auto& im : mf.images) {
        if (!seen.insert(im.gen).second)
            throw parse_error("duplicate image for '" + im.gen + "'", im.line);
        auto id = src->find_basis(im.gen);
        if (!id)
            throw parse_error("unknown symbol '" + im.gen + "'", im.line);
        f.set_image(*id, parse_poly(*tgt, im.poly, im.line));
    }
    return f;
}

} // namespace hopfcalc
