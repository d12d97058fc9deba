#include "mqg/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mqg/parser.hpp"
#include "mqg/qmatrix.hpp"
#include "mqg/report.hpp"

namespace mqg {

namespace {

struct CommonOpts {
    std::string format = "text";
    std::string out_file;
    std::string params;
    bool one_param = false;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "output format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", opts.out_file, "write the report to a file");
    cmd->add_option("--params", opts.params, "rational point, e.g. q=2,q13=1/2,r1=3");
    cmd->add_flag("--one-param", opts.one_param, "substitute q_ij := q into every rule");
    cmd->add_flag("--serial", opts.serial, "disable the OpenMP task pool");
}

EvalContext parse_eval_context(const std::string& text) {
    EvalContext ctx;
    if (text.empty()) return ctx;
    ctx.active = true;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--params", "expected key=value: " + item);
        std::string key = item.substr(0, eq);
        Rational value(item.substr(eq + 1));
        value.canonicalize();
        if (key == "q") {
            ctx.params[ParamSymbol::q()] = value;
        } else if (key.size() == 3 && key[0] == 'q' && std::isdigit(static_cast<unsigned char>(key[1]))) {
            ctx.params[ParamSymbol::qij(key[1] - '0', key[2] - '0')] = value;
        } else if (key.size() >= 2 && key[0] == 'r') {
            ctx.r_values[std::stoi(key.substr(1))] = value;
        } else {
            throw CLI::ValidationError("--params", "unknown key: " + key);
        }
    }
    return ctx;
}

void substitute_rules(PresetAlgebra& alg, const ParamSubstitution& subst) {
    for (auto& [key, rule] : alg.rules) {
        NCPoly rhs;
        for (auto& [w, c] : rule.rhs.terms) rhs.add_term(w, substitute_params(c, subst));
        rule.rhs = std::move(rhs);
    }
}

NCPoly substitute_poly(const NCPoly& p, const ParamSubstitution& subst) {
    if (subst.empty()) return p;
    NCPoly out;
    for (auto& [w, c] : p.terms) out.add_term(w, substitute_params(c, subst));
    return out;
}

int finish(Report& report, const CommonOpts& opts, std::ostream& out) {
    std::string text = opts.format == "json" ? report.to_json().dump(2) + "\n" : report.to_text();
    if (!opts.out_file.empty()) {
        std::ofstream f(opts.out_file);
        f << text;
    } else {
        out << text;
    }
    return report.exit_code();
}

json poly_payload(const NCPoly& p, const EvalContext& eval) {
    json j{{"poly", ncpoly_to_json(p)}, {"text", p.to_string()}};
    if (eval.active) {
        json values = json::array();
        for (auto& [w, c] : p.terms) {
            json entry{{"word", word_to_string(w)}};
            attach_value(entry, c, eval);
            values.push_back(entry);
        }
        j["values"] = values;
    }
    return j;
}

std::vector<int> parse_index_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

BasisVector parse_vec(const std::string& text, int n) {
    const int gens = n * (n - 1) / 2;
    BasisVector v;
    v.yexp.assign(gens, 0);
    v.weights = symbolic_weights(n);
    if (text.find('=') == std::string::npos) {
        auto list = parse_index_list(text);
        if (static_cast<int>(list.size()) != gens)
            throw CLI::ValidationError("--vec", "expected " + std::to_string(gens) + " exponents");
        v.yexp = list;
        return v;
    }
    if (n != 3) throw CLI::ValidationError("--vec", "named exponents are defined for rank 3");
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--vec", "expected key=value");
        std::string key = item.substr(0, eq);
        int val = std::stoi(item.substr(eq + 1));
        if (key == "j")
            v.yexp[0] = val;
        else if (key == "n")
            v.yexp[1] = val;
        else if (key == "l")
            v.yexp[2] = val;
        else
            throw CLI::ValidationError("--vec", "unknown exponent name: " + key);
    }
    return v;
}

void report_rep_checks(Report& report, const std::vector<RepCheck>& checks) {
    for (auto& c : checks) {
        json payload;
        if (!c.detail.empty()) payload[c.status == "recorded" ? "measured" : "residual"] = c.detail;
        report.add(c.name, c.status, payload);
    }
}

std::string command_echo(const std::vector<std::string>& args) {
    std::string s = "mqg";
    for (auto& a : args) s += " " + a;
    return s;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact engine for multiparameter quantum GL(n), its flag manifold, and the dual-algebra representations"};
    app.require_subcommand(1);

    CommonOpts opts;
    Report report;
    // option storage must outlive subcommand setup and live per invocation
    int qm_n = 2, qm_deg = 3, qm_len = 5, qm_trials = 1000;
    std::uint64_t qm_seed = 1;
    std::string qm_rows, qm_cols, qm_expr;
    bool qm_normal = false;
    int yf_n = 3, yf_len = 5, yf_trials = 1000;
    std::uint64_t yf_seed = 1;
    bool yf_split = false;
    std::string yf_expr;
    int rp_n = 3, rp_degree = 3;
    bool rp_split = false, rp_closed3 = false, rp_restricted = false;
    std::string rp_gen, rp_vec;
    std::string expr, lhs, rhs;
    report.command = command_echo(args);
    int rc = 0;
    auto run = [&](auto&& fn) { return [&, fn]() { fn(); rc = finish(report, opts, out); }; };

    // ---- coeff ----------------------------------------------------------
    auto* coeff = app.add_subcommand("coeff", "scalar arithmetic");
    {
        auto* show = coeff->add_subcommand("show", "parse and reprint a coefficient");
        show->add_option("expr", expr, "coefficient expression")->required();
        add_common(show, opts);
        show->callback(run([&]() {
            EvalContext eval = parse_eval_context(opts.params);
            Coefficient c = parse_coefficient(expr);
            json payload{{"coef", coeff_to_json(c)}, {"text", c.to_string()}};
            attach_value(payload, c, eval);
            report.add("coefficient", "recorded", payload);
        }));

        auto* eq = coeff->add_subcommand("eq", "decide exact equality of two coefficients");
        eq->add_option("lhs", lhs)->required();
        eq->add_option("rhs", rhs)->required();
        add_common(eq, opts);
        eq->callback(run([&]() {
            Coefficient a = parse_coefficient(lhs), b = parse_coefficient(rhs);
            report.add("coefficients equal", coeff_eq(a, b) ? "pass" : "fail",
                       json{{"lhs", a.to_string()}, {"rhs", b.to_string()}});
        }));
    }

    // ---- qmatrix --------------------------------------------------------
    auto* qm = app.add_subcommand("qmatrix", "multiparameter quantum matrix algebra");
    {
        auto* rules = qm->add_subcommand("rules", "list the oriented rewrite rules");
        rules->add_option("--n", qm_n, "rank")->required();
        add_common(rules, opts);
        rules->callback(run([&]() {
            MatrixAlgebra m = build_matrix_algebra(qm_n);
            if (opts.one_param) substitute_rules(m.alg, one_param_substitution(qm_n));
            for (auto& [key, rule] : m.alg.rules)
                report.add(rule.hi.to_string() + "*" + rule.lo.to_string(), "recorded",
                           json{{"rhs", rule.rhs.to_string()}});
        }));

        auto* mnr = qm->add_subcommand("minor", "quantum minor");
        mnr->add_option("--n", qm_n, "rank")->required();
        mnr->add_option("--rows", qm_rows)->required();
        mnr->add_option("--cols", qm_cols)->required();
        mnr->add_flag("--normal", qm_normal, "normal-order the result");
        add_common(mnr, opts);
        mnr->callback(run([&]() {
            EvalContext eval = parse_eval_context(opts.params);
            MatrixAlgebra m = build_matrix_algebra(qm_n);
            NCPoly p = minor(IndexSet(parse_index_list(qm_rows), parse_index_list(qm_cols), qm_n), m,
                             qm_normal);
            report.add("minor", "recorded", poly_payload(p, eval));
        }));

        auto* cop = qm->add_subcommand("check-coproduct", "bialgebra residuals");
        cop->add_option("--n", qm_n, "rank")->required();
        cop->add_option("--deg", qm_deg, "extra homomorphism word length");
        add_common(cop, opts);
        cop->callback(run([&]() {
            CoproductReport r = coproduct_check(qm_n, qm_deg, !opts.serial);
            for (auto& e : r.relations) {
                bool ok = e.residual.is_zero() && e.counit_residual.is_zero();
                json payload;
                if (!ok) payload["residual"] = e.residual.to_string();
                report.add("coproduct residual: " + e.relation, ok ? "pass" : "fail", payload);
            }
            int hom_ok = 0;
            for (auto& w : r.homomorphism_checks)
                if (w.ok) ++hom_ok;
            report.add("coproduct commutes with reduction",
                       hom_ok == static_cast<int>(r.homomorphism_checks.size()) ? "pass" : "fail",
                       json{{"checked", r.homomorphism_checks.size()}});
        }));

        auto* conf = qm->add_subcommand("confluence", "randomized reduction strategies agree");
        conf->add_option("--n", qm_n, "rank")->required();
        conf->add_option("--len", qm_len, "maximum word length");
        conf->add_option("--trials", qm_trials);
        conf->add_option("--seed", qm_seed)->required();
        add_common(conf, opts);
        conf->callback(run([&]() {
            MatrixAlgebra m = build_matrix_algebra(qm_n);
            auto r = confluence_check(m.alg, qm_len, qm_trials, qm_seed, !opts.serial);
            json payload{{"trials", r.trials}, {"counterexamples", r.counterexamples.size()}};
            for (auto& ce : r.counterexamples)
                payload["words"].push_back(word_to_string(ce.word));
            report.add("confluence " + m.alg.name, r.passed() ? "pass" : "fail", payload);
        }));

        auto* prof = qm->add_subcommand("profile", "commutation scalars against every generator");
        prof->add_option("--n", qm_n, "rank")->required();
        prof->add_option("expr", qm_expr)->required();
        add_common(prof, opts);
        prof->callback(run([&]() {
            MatrixAlgebra m = build_matrix_algebra(qm_n);
            NCPoly x = parse_expr(qm_expr, m.alg);
            if (opts.one_param) {
                ParamSubstitution sub = one_param_substitution(qm_n);
                substitute_rules(m.alg, sub);
                x = substitute_poly(x, sub);
            }
            for (auto& [g, mu] : commutation_profile(x, m)) {
                report.add("profile vs " + g.to_string(), "recorded",
                           json{{"mu", mu ? mu->to_string() : "absent"}});
            }
        }));

        auto* ov = qm->add_subcommand("overlaps", "resolve every overlap ambiguity");
        ov->add_option("--n", qm_n, "rank")->required();
        add_common(ov, opts);
        ov->callback(run([&]() {
            MatrixAlgebra m = build_matrix_algebra(qm_n);
            auto r = overlap_check(m.alg, !opts.serial);
            report.add("overlap ambiguities resolve in " + m.alg.name,
                       r.passed() ? "pass" : "fail", json{{"overlaps", r.overlaps}});
        }));

        auto* gauss = qm->add_subcommand("gauss2", "rank-2 Gauss decomposition probe");
        add_common(gauss, opts);
        gauss->callback(run([&]() {
            GaussReport r = gauss_residual_n2();
            report.add("a21 candidate residual", r.residual_a21.is_zero() ? "pass" : "fail",
                       json{{"residual", r.residual_a21.to_string()}});
            report.add("a22 candidate residual (generic parameters)", "recorded",
                       json{{"residual", r.residual_a22.to_string()}});
            report.add("a22 candidate residual at the classical point",
                       r.a22_classical_zero ? "pass" : "fail");
        }));
    }

    // ---- yflag ----------------------------------------------------------
    auto* yf = app.add_subcommand("yflag", "quantum flag manifold algebra");
    {
        auto* rules = yf->add_subcommand("rules", "list the oriented rewrite rules");
        rules->add_option("--n", yf_n, "rank")->required();
        rules->add_flag("--split", yf_split);
        add_common(rules, opts);
        rules->callback(run([&]() {
            FlagAlgebra f = build_flag_algebra(yf_n, yf_split);
            if (opts.one_param) substitute_rules(f.alg, one_param_substitution(yf_n));
            for (auto& [key, rule] : f.alg.rules)
                report.add(rule.hi.to_string() + "*" + rule.lo.to_string(), "recorded",
                           json{{"rhs", rule.rhs.to_string()}});
        }));

        auto* nf = yf->add_subcommand("nf", "normal form of an expression");
        nf->add_option("--n", yf_n, "rank")->required();
        nf->add_flag("--split", yf_split);
        nf->add_option("expr", yf_expr)->required();
        add_common(nf, opts);
        nf->callback(run([&]() {
            EvalContext eval = parse_eval_context(opts.params);
            FlagAlgebra f = build_flag_algebra(yf_n, yf_split);
            ParamSubstitution extra = opts.one_param ? one_param_substitution(yf_n) : ParamSubstitution{};
            if (opts.one_param) substitute_rules(f.alg, extra);
            NCPoly p = substitute_poly(parse_expr(yf_expr, f.alg), extra);
            if (f.split) p = substitute_poly(p, f.subst);
            report.add("normal form", "recorded", poly_payload(normal_form(p, f.alg), eval));
        }));

        auto* res = yf->add_subcommand("residuals", "defining relation residuals");
        res->add_option("--n", yf_n, "rank")->required();
        res->add_flag("--split", yf_split);
        add_common(res, opts);
        res->callback(run([&]() {
            FlagAlgebra f = build_flag_algebra(yf_n, yf_split);
            for (auto& e : relation_residuals(f).entries) {
                json payload = json::object();
                if (!e.residual.is_zero()) payload["residual"] = e.residual.to_string();
                report.add(e.relation, e.residual.is_zero() ? "pass" : "fail", payload);
            }
        }));

        auto* ov = yf->add_subcommand("overlaps", "resolve every overlap ambiguity");
        ov->add_option("--n", yf_n, "rank")->required();
        ov->add_flag("--split", yf_split);
        add_common(ov, opts);
        ov->callback(run([&]() {
            FlagAlgebra f = build_flag_algebra(yf_n, yf_split);
            auto r = overlap_check(f.alg, !opts.serial);
            report.add("overlap ambiguities resolve in " + f.alg.name,
                       r.passed() ? "pass" : "fail", json{{"overlaps", r.overlaps}});
        }));

        auto* conf = yf->add_subcommand("confluence", "randomized reduction strategies agree");
        conf->add_option("--n", yf_n, "rank")->required();
        conf->add_flag("--split", yf_split);
        conf->add_option("--len", yf_len, "maximum word length");
        conf->add_option("--trials", yf_trials);
        conf->add_option("--seed", yf_seed)->required();
        add_common(conf, opts);
        conf->callback(run([&]() {
            FlagAlgebra f = build_flag_algebra(yf_n, yf_split);
            auto r = confluence_check(f.alg, yf_len, yf_trials, yf_seed, !opts.serial);
            json payload{{"trials", r.trials}, {"counterexamples", r.counterexamples.size()}};
            for (auto& ce : r.counterexamples)
                payload["words"].push_back(word_to_string(ce.word));
            report.add("confluence " + f.alg.name, r.passed() ? "pass" : "fail", payload);
        }));
    }

    // ---- rep ------------------------------------------------------------
    auto* rp = app.add_subcommand("rep", "dual-algebra representation engine");
    {
        auto* actc = rp->add_subcommand("act", "apply one generator to a basis vector");
        actc->add_option("--n", rp_n, "rank")->required();
        actc->add_option("--gen", rp_gen, "e.g. K1, X+1, X-2, P1, Qinv2")->required();
        actc->add_option("--vec", rp_vec, "j=1,n=0,l=2 or a comma list of exponents")->required();
        actc->add_flag("--split", rp_split);
        actc->add_flag("--closed3", rp_closed3);
        actc->add_flag("--restricted", rp_restricted);
        add_common(actc, opts);
        actc->callback(run([&]() {
            EvalContext eval = parse_eval_context(opts.params);
            GeneratorAction g = GeneratorAction::parse(rp_gen);
            BasisVector v = parse_vec(rp_vec, rp_n);
            ModuleElement ev = ModuleElement::basis(v, rp_n);
            if (rp_restricted) ev = restrict_element(ev);
            ModuleElement result = rp_closed3 ? act_closed3(g, ev, rp_split)
                                              : act(g, ev, build_flag_algebra(rp_n, rp_split));
            json payload{{"result", module_to_json(result)}, {"text", result.to_string()}};
            if (eval.active) {
                json values = json::array();
                for (auto& [e, c] : result.terms) {
                    json entry{{"exps", e}};
                    attach_value(entry, c, eval);
                    values.push_back(entry);
                }
                payload["values"] = values;
            }
            report.add("action of " + g.to_string(), "recorded", payload);
        }));

        auto* ver = rp->add_subcommand("verify", "operator relation suite");
        ver->add_option("--n", rp_n, "rank")->required();
        ver->add_option("--degree", rp_degree)->required();
        ver->add_flag("--split", rp_split);
        ver->add_flag("--closed3", rp_closed3);
        add_common(ver, opts);
        ver->callback(run([&]() {
            auto r = verify_relations(rp_n, rp_degree, rp_closed3, rp_split, !opts.serial);
            report_rep_checks(report, r.checks);
        }));

        auto* wd = rp->add_subcommand("welldef", "derivation rule respects the relations");
        wd->add_option("--n", rp_n, "rank")->required();
        wd->add_option("--degree", rp_degree)->required();
        add_common(wd, opts);
        wd->callback(run([&]() {
            auto r = well_definedness(rp_n, rp_degree, !opts.serial);
            for (auto& c : r.checks)
                if (c.status == "fail")
                    report.add(c.name, "fail", json{{"residual", c.detail}});
            report.add("derivation rule well-defined",
                       r.fails == 0 ? "pass" : "fail",
                       json{{"checked", r.checks.size()}, {"failed", r.fails}});
        }));

        auto* cmp = rp->add_subcommand("compare", "engine vs closed-form oracle, up to one scalar");
        cmp->add_option("--n", rp_n, "rank (must be 3)")->required();
        cmp->add_option("--degree", rp_degree)->required();
        add_common(cmp, opts);
        cmp->callback(run([&]() {
            if (rp_n != 3) throw RankNot3Error();
            FlagAlgebra f = build_flag_algebra(3, true);
            auto exps = enumerate_basis(3, rp_degree);
            std::vector<BasisVector> basis;
            for (auto& e : exps) basis.push_back({e, symbolic_weights(3)});
            for (ActionKind kind : {ActionKind::K, ActionKind::Kinv, ActionKind::Xplus,
                                    ActionKind::Xminus, ActionKind::Phalf, ActionKind::Pneghalf,
                                    ActionKind::Qhalf, ActionKind::Qneghalf}) {
                for (int i = 1; i <= 2; ++i) {
                    GeneratorAction g{kind, i};
                    auto pc = compare_up_to_phase(
                        [&](const ModuleElement& v) { return act(g, v, f); },
                        [&](const ModuleElement& v) { return act_closed3(g, v, true); }, basis, 3);
                    json payload;
                    if (pc.mu)
                        payload["mu"] = pc.mu->to_string();
                    else
                        payload["diagnostics"] = pc.detail;
                    bool diagonal_kind = action_is_diagonal(kind);
                    bool ok = pc.mu.has_value() && (!diagonal_kind || pc.mu->is_one());
                    report.add("phase of " + g.to_string(), ok ? "pass" : "fail", payload);
                }
            }
        }));
    }

    try {
        std::vector<const char*> argv;
        argv.push_back("mqg");
        for (auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const SyntaxError& e) {
        err << "syntax error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownGeneratorError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

}  // namespace mqg
