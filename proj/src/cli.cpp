#include "hopfcalc/cli.hpp"

#include "hopfcalc/chainalg.hpp"
#include "hopfcalc/errors.hpp"
#include "hopfcalc/formats.hpp"
#include "hopfcalc/hopf.hpp"
#include "hopfcalc/model.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hopfcalc {

namespace {

std::string slurp(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in)
            throw parse_error("cannot open '" + path + "'");
        os << in.rdbuf();
    }
    return os.str();
}

long resolve_cap(long flag_cap) {
    if (flag_cap > 0)
        return flag_cap;
    if (const char* env = std::getenv("HOPFCALC_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (!end || *end != '\0' || v < 1)
            throw input_error("HOPFCALC_CAP must be a positive integer");
        return v;
    }
    return kDefaultCap;
}

Model load_model_checked(const std::string& path) {
    Model m = parse_model_file(path);
    ValidationReport rep = m.validate();
    if (!rep.ok())
        throw input_error("model " + m.name() + " is invalid:\n" + rep.str());
    return m;
}

std::string first_keyword(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (ls >> kw)
            return kw;
    }
    return "";
}

int cmd_validate(std::ostream& out, const std::string& path,
                 const std::vector<std::string>& model_paths) {
    std::string text = slurp(path);
    std::istringstream stream(text);
    if (first_keyword(text) == "morphism") {
        MorphismFile mf = parse_morphism(stream);
        std::deque<Model> models;
        const Model *src = nullptr, *tgt = nullptr;
        for (const auto& mp : model_paths) {
            models.push_back(load_model_checked(mp));
            if (models.back().name() == mf.from)
                src = &models.back();
            if (models.back().name() == mf.to)
                tgt = &models.back();
        }
        if (!src || !tgt)
            throw input_error("model '" + (src ? mf.to : mf.from) +
                              "' not supplied; pass it with --model");
        Morphism f = bind_morphism(mf, src, tgt);
        ValidationReport rep = f.validate();
        if (!rep.ok()) {
            out << "invalid\n" << rep.str() << "\n";
            return 1;
        }
        out << "valid\n";
        return 0;
    }
    Model m = parse_model(stream);
    ValidationReport rep = m.validate();
    if (!rep.ok()) {
        out << "invalid\n" << rep.str() << "\n";
        return 1;
    }
    out << "valid" << (m.one_connected() ? ", one-connected" : "") << "\n";
    return 0;
}

void cmd_homology(std::ostream& out, const std::string& model_path,
                  const std::string& complex, int max_degree, long cap) {
    Model m = load_model_checked(model_path);
    if (!m.one_connected())
        throw input_error("homology tables need a one-connected model");
    Flavor fl = complex == "bar" ? Flavor::bar : Flavor::eil;
    ChainContext ctx(&m, fl, cap);
    for (int g = 1; g <= max_degree; ++g)
        out << g << '\t' << ctx.homology_rank(g) << '\n';
}

void cmd_hopf(std::ostream& out, const std::string& model_path,
              const std::string& morphism_path, const std::string& cocycle,
              int sphere_n, long cap) {
    Model base = load_model_checked(model_path);
    if (sphere_n < 2)
        throw input_error("sphere dimension must be at least 2");
    Model s = sphere_model(sphere_n);
    MorphismFile mf = parse_morphism_file(morphism_path);
    if (mf.from != base.name())
        throw input_error("morphism is from '" + mf.from +
                          "' but the model file defines '" + base.name() +
                          "'");
    if (mf.to != s.name())
        throw input_error("morphism must land in the standard sphere model '" +
                          s.name() + "'");
    Morphism f = bind_morphism(mf, &base, &s);
    ValidationReport rep = f.validate();
    if (!rep.ok())
        throw input_error("morphism " + f.name() + " is invalid:\n" +
                          rep.str());
    SphereTarget t = make_sphere_target(s, "w");
    PairEnv env(&base, cap);
    BracketExpr leaf = leaf_expr(&f, t);
    Rational v = expr_is_graph(cocycle)
                     ? hopf_pair(env, parse_graph_expr(base, cocycle), leaf)
                     : hopf_pair(env, parse_bar_expr(base, cocycle), leaf);
    out << v.str() << '\n';
}

void cmd_pair(std::ostream& out, const std::string& model_path,
              const std::string& cocycle, const std::string& bracket,
              long cap) {
    Model base = load_model_checked(model_path);
    BracketExpr b = parse_bracket_expr(base, bracket);
    PairEnv env(&base, cap);
    Rational v = expr_is_graph(cocycle)
                     ? hopf_pair(env, parse_graph_expr(base, cocycle), b)
                     : hopf_pair(env, parse_bar_expr(base, cocycle), b);
    out << v.str() << '\n';
}

void cmd_reduce(std::ostream& out, const std::string& model_path,
                const std::string& cocycle, const std::string& fundamental,
                long cap) {
    Model m = load_model_checked(model_path);
    std::string fname = fundamental;
    if (fname.empty()) {
        // Default to the unique symbol of minimal positive degree.
        std::vector<std::string> best;
        int bestdeg = 0;
        auto consider = [&](const std::string& nm, int d) {
            if (d < 1)
                return;
            if (best.empty() || d < bestdeg) {
                best = {nm};
                bestdeg = d;
            } else if (d == bestdeg) {
                best.push_back(nm);
            }
        };
        if (m.kind() == Model::Kind::free) {
            for (int g = 0; g < m.generator_count(); ++g)
                consider(m.generator_name(g), m.generator_degree(g));
        } else {
            for (int id = 0; id < m.basis_count(); ++id)
                consider(m.basis_name(id), m.degree(id));
        }
        if (best.size() != 1)
            throw input_error(
                "cannot pick a fundamental class; pass --fundamental");
        fname = best[0];
    }
    make_sphere_target(m, fname); // rejects non-sphere models
    if (expr_is_graph(cocycle)) {
        GraphChain gamma = parse_graph_expr(m, cocycle);
        ChainContext ctx(&m, Flavor::eil, cap);
        if (!quotient_reduce(ctx.relations(), d_graph(m, gamma)).empty())
            throw input_error("cocycle is not closed");
        GraphReduction red = reduce_to_weight_one(ctx, gamma);
        if (!red.ok)
            throw input_error(
                "not a sphere-model cocycle in the expected degree (stuck at "
                "weight " +
                std::to_string(red.stuck.first) + ", internal degree " +
                std::to_string(red.stuck.second) + ")");
        out << "weight-one: " << print_graph(m, red.weight_one) << '\n';
        out << "certificate: " << print_graph(m, red.certificate) << '\n';
    } else {
        BarChain gamma = parse_bar_expr(m, cocycle);
        ChainContext ctx(&m, Flavor::bar, cap);
        if (!d_total(m, gamma).empty())
            throw input_error("cocycle is not closed");
        BarReduction red = reduce_to_weight_one(ctx, gamma);
        if (!red.ok)
            throw input_error(
                "not a sphere-model cocycle in the expected degree (stuck at "
                "weight " +
                std::to_string(red.stuck.first) + ", internal degree " +
                std::to_string(red.stuck.second) + ")");
        out << "weight-one: " << print_bar(m, red.weight_one) << '\n';
        out << "certificate: " << print_bar(m, red.certificate) << '\n';
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"exact Hopf invariants for rational homotopy models"};
    app.require_subcommand(1);

    int rc = 0;

    auto* validate = app.add_subcommand(
        "validate", "check a model or morphism file");
    std::string v_path;
    std::vector<std::string> v_models;
    validate->add_option("path", v_path, "model or morphism file ('-' stdin)")
        ->required();
    validate->add_option("--model", v_models,
                         "model file resolving a morphism's endpoints");
    validate->callback([&] { rc = cmd_validate(out, v_path, v_models); });

    auto* homology = app.add_subcommand(
        "homology", "total-degree homology ranks of a complex");
    std::string h_model, h_complex;
    int h_max = 0;
    long h_cap = 0;
    homology->add_option("model", h_model, "model file ('-' stdin)")
        ->required();
    homology->add_option("--complex", h_complex, "bar or eil")
        ->required()
        ->check(CLI::IsMember({"bar", "eil"}));
    homology->add_option("--max-degree", h_max, "top total degree")
        ->required()
        ->check(CLI::PositiveNumber);
    homology->add_option("--cap", h_cap, "piece-dimension cap");
    homology->callback(
        [&] { cmd_homology(out, h_model, h_complex, h_max, resolve_cap(h_cap)); });

    auto* hopf = app.add_subcommand(
        "hopf", "Hopf invariant of a cocycle along a morphism to a sphere");
    std::string p_model, p_morphism, p_cocycle;
    int p_sphere = 0;
    long p_cap = 0;
    hopf->add_option("model", p_model, "base model file ('-' stdin)")
        ->required();
    hopf->add_option("morphism", p_morphism, "morphism file into S<n>")
        ->required();
    hopf->add_option("--cocycle", p_cocycle, "bar or tree expression")
        ->required();
    hopf->add_option("--sphere", p_sphere, "sphere dimension n")->required();
    hopf->add_option("--cap", p_cap, "piece-dimension cap");
    hopf->callback([&] {
        cmd_hopf(out, p_model, p_morphism, p_cocycle, p_sphere,
                 resolve_cap(p_cap));
    });

    auto* pair = app.add_subcommand(
        "pair", "pair a cocycle with an iterated Whitehead bracket");
    std::string q_model, q_cocycle, q_bracket;
    long q_cap = 0;
    pair->add_option("model", q_model, "base model file ('-' stdin)")
        ->required();
    pair->add_option("--cocycle", q_cocycle, "bar or tree expression")
        ->required();
    pair->add_option("--bracket", q_bracket,
                     "bracket over basis symbols, e.g. [g1,[g2,g3]]")
        ->required();
    pair->add_option("--cap", q_cap, "piece-dimension cap");
    pair->callback(
        [&] { cmd_pair(out, q_model, q_cocycle, q_bracket, resolve_cap(q_cap)); });

    auto* reduce = app.add_subcommand(
        "reduce", "rewrite a sphere-model cocycle in weight one");
    std::string r_model, r_cocycle, r_fundamental;
    long r_cap = 0;
    reduce->add_option("model", r_model, "sphere model file ('-' stdin)")
        ->required();
    reduce->add_option("--cocycle", r_cocycle, "bar or tree expression")
        ->required();
    reduce->add_option("--fundamental", r_fundamental,
                       "fundamental class symbol");
    reduce->add_option("--cap", r_cap, "piece-dimension cap");
    reduce->callback([&] {
        cmd_reduce(out, r_model, r_cocycle, r_fundamental, resolve_cap(r_cap));
    });

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const resource_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return rc;
}

} // namespace hopfcalc
