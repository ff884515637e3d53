#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bvw/cohomology.hpp"
#include "bvw/quant.hpp"
#include "bvw/report.hpp"

using namespace bvw;

namespace {

Trunc truncation_from_env()
{
    const char* e = std::getenv("BVW_TRUNCATION");
    if (!e) return Trunc{};
    std::string s(e);
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw error("BVW_TRUNCATION must look like \"Kh,Kl\"");
    Trunc tr;
    try {
        tr.kh = std::stoi(s.substr(0, comma));
        tr.kl = std::stoi(s.substr(comma + 1));
    } catch (const std::exception&) {
        throw error("BVW_TRUNCATION must look like \"Kh,Kl\"");
    }
    if (tr.kh < 0 || tr.kl < 0)
        throw error("BVW_TRUNCATION orders must be nonnegative");
    return tr;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/* rebuild the lattice machinery on the model's own algebra (the generator
   layout of build_lattice is deterministic, so the indices line up) */
LatticeOps lattice_ops(const Model& m, Trunc tr)
{
    if (!m.lattice.active())
        throw error("this command needs a lattice model");
    LatticeOps L = build_lattice(m.lattice, tr);
    L.alg = m.alg;
    return L;
}

Poly ghost_vector_field(const Model& m, const Symmetry& s)
{
    Poly X(m.alg);
    for (auto& [f, coef] : s.rho)
        X += coef * Poly::generator(m.alg, m.alg->gen(f).pair);
    return X;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"BV antifield workbench"};
    app.require_subcommand(1);

    std::string model_path, format = "text";
    int gh = 0, max_deg = 0, order = -1;
    std::string diff = "s", kind = "causal", lhs, rhs, obs = "1";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--model", model_path, "model file")->required();
        sub->add_option("--format", format, "text or json-lines")
            ->check(CLI::IsMember({"text", "json-lines"}));
        return sub;
    };

    common(app.add_subcommand("check-cme", "classical master equation"));
    common(app.add_subcommand("symmetries", "classify declared symmetries"));
    common(app.add_subcommand("extend", "extended action"));
    common(app.add_subcommand("gauge-fix", "apply the gauge fermion"));
    common(app.add_subcommand("brst-table", "gauge-fixed differential rows"));

    auto* coh = common(app.add_subcommand("cohomology", "truncated cohomology"));
    coh->add_option("--gh", gh, "ghost number")->required();
    coh->add_option("--max-deg", max_deg, "degree truncation")->required();
    coh->add_option("--diff", diff, "differential")
        ->check(CLI::IsMember({"s", "delta", "gamma"}));

    auto* prop = common(app.add_subcommand("propagator", "lattice propagator"));
    prop->add_option("--kind", kind, "propagator kind")
        ->check(CLI::IsMember({"retarded", "advanced", "causal", "dirac"}));

    auto* brk = common(app.add_subcommand("bracket", "antibracket of two expressions"));
    brk->add_option("--lhs", lhs, "left expression")->required();
    brk->add_option("--rhs", rhs, "right expression")->required();

    auto* st = common(app.add_subcommand("star", "star product"));
    st->add_option("--lhs", lhs, "left expression")->required();
    st->add_option("--rhs", rhs, "right expression")->required();

    auto* tp = common(app.add_subcommand("tprod", "time-ordered product"));
    tp->add_option("--lhs", lhs, "left expression")->required();
    tp->add_option("--rhs", rhs, "right expression")->required();

    auto* sm = common(app.add_subcommand("smatrix", "formal S-matrix"));
    sm->add_option("--order", order, "coupling order");

    auto* mo = common(app.add_subcommand("moller", "classical retarded moller map"));
    mo->add_option("--order", order, "coupling order");
    mo->add_option("--obs", obs, "observable expression")->required();

    common(app.add_subcommand("qme", "quantum master equation"));

    auto* qb = common(app.add_subcommand("qbv", "quantum BV operator"));
    qb->add_option("--obs", obs, "observable expression");

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        Trunc tr = truncation_from_env();
        ParsedModel pm = parse_model(slurp(model_path), tr);
        const Model& m = pm.model;

        Report rep;
        rep.command = cmd;
        rep.model_hash = fnv1a_hex(pm.canonical);
        int exit_code = 0;

        if (cmd == "check-cme") {
            auto res = check_cme(m);
            rep.add("holds", res.holds);
            rep.add("residual", res.residual.str());
            exit_code = res.holds ? 0 : 1;
        } else if (cmd == "symmetries") {
            for (auto& s : m.symmetries) {
                auto chk = is_symmetry(m, ghost_vector_field(m, s));
                rep.add(s.name, std::string("ghost=") + m.alg->gen(s.ghost).id +
                                    " symmetry=" + (chk.symmetry ? "true" : "false") +
                                    " trivial=" + (chk.trivial ? "true" : "false"));
            }
        } else if (cmd == "extend") {
            rep.add("extended_action", build_extended_action(m).str());
        } else if (cmd == "gauge-fix") {
            Poly fixed = gauge_fix(m, build_extended_action(m));
            auto ex = expand_by_ta(m, fixed);
            rep.add("transformed", fixed.str());
            rep.add("gauge_fixed_action", ex.gauge_fixed_action.str());
        } else if (cmd == "brst-table") {
            Poly fixed = gauge_fix(m, build_extended_action(m));
            auto ex = expand_by_ta(m, fixed);
            for (auto& [g, img] : ex.brst)
                rep.add(m.alg->gen(g).id, img.str());
        } else if (cmd == "cohomology") {
            rep.command += " --gh " + std::to_string(gh) + " --max-deg " +
                           std::to_string(max_deg) + " --diff " + diff;
            DiffKind k = diff == "delta" ? DiffKind::delta
                         : diff == "gamma" ? DiffKind::gamma
                                           : DiffKind::s;
            auto res = cohomology_dim(m, k, gh, max_deg);
            rep.add("ghost_number", res.ghost_number);
            rep.add("max_degree", res.max_degree);
            rep.add("dim_kernel", res.dim_kernel);
            rep.add("dim_image", res.dim_image);
            rep.add("dim", res.dim_cohomology);
            Json reps = Json::array();
            for (auto& p : res.representatives) reps.push_back(p.str());
            rep.add("representatives", reps);
        } else if (cmd == "propagator") {
            rep.command += " --kind " + kind;
            LatticeOps L = lattice_ops(m, tr);
            const Mat& mat = kind == "retarded" ? L.ret
                             : kind == "advanced" ? L.adv
                             : kind == "dirac"    ? L.dir
                                                  : L.cau;
            rep.add("kind", kind);
            rep.add("matrix", mat_json(mat));
        } else if (cmd == "bracket") {
            rep.command += " --lhs " + lhs + " --rhs " + rhs;
            rep.add("value",
                    antibracket(parse_expression(lhs, m), parse_expression(rhs, m))
                        .str());
        } else if (cmd == "star" || cmd == "tprod") {
            rep.command += " --lhs " + lhs + " --rhs " + rhs;
            LatticeOps L = lattice_ops(m, tr);
            Poly a = parse_expression(lhs, m), b = parse_expression(rhs, m);
            rep.add("value",
                    (cmd == "star" ? star(L, a, b) : tprod(L, a, b)).str());
        } else if (cmd == "smatrix") {
            if (order < 0) order = tr.kl;
            rep.command += " --order " + std::to_string(order);
            LatticeOps L = lattice_ops(m, tr);
            rep.add("order", order);
            rep.add("smatrix", smatrix(L, m.interaction, order).str());
        } else if (cmd == "moller") {
            if (order < 0) order = tr.kl;
            rep.command += " --order " + std::to_string(order) + " --obs " + obs;
            LatticeOps L = lattice_ops(m, tr);
            Poly G = parse_expression(obs, m);
            rep.add("order", order);
            rep.add("value", classical_moller(L, m.interaction, G, order).str());
        } else if (cmd == "qme") {
            LatticeOps L = lattice_ops(m, tr);
            auto q = check_qme(L, m.action, m.interaction);
            rep.add("holds", q.holds);
            rep.add("agree", q.agree);
            rep.add("residual", q.residual.str());
            rep.add("smatrix_residual", q.smatrix_residual.str());
            exit_code = q.holds ? 0 : 1;
        } else if (cmd == "qbv") {
            rep.command += " --obs " + obs;
            LatticeOps L = lattice_ops(m, tr);
            auto b = quantum_bv(L, m.action, m.interaction, parse_expression(obs, m));
            rep.add("value", b.value.str());
            rep.add("qbv0", b.qbv0.str());
            rep.add("qme_holds", b.qme_holds);
            if (!b.qme_holds)
                rep.add("warning",
                        "quantum master equation violated; the closed forms "
                        "of the operator can disagree");
        }

        std::cout << emit(rep, format);
        return exit_code;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
