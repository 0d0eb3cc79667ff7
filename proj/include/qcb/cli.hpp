#pragma once

#include "qcb/io.hpp"
#include "qcb/peterson.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qcb::cli {

// Exit statuses: 0 success, 1 mathematical negative, 2 usage/parse error.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;

struct Options {
    bool json = false;
    std::optional<long> seed;
    int jobs = 1;
    std::string convention = "shift1";

    HbarConvention conv() const {
        if (convention == "classical") return HbarConvention::Classical;
        if (convention == "shift0") return HbarConvention::Shift0;
        if (convention == "shift1") return HbarConvention::Shift1;
        throw InputError("unknown convention: " + convention);
    }
};

inline void emit(std::ostream& out, const Options& opt, const Json& doc,
                 const std::vector<std::string>& text_lines) {
    if (opt.json) {
        Json j = doc;
        if (opt.seed) j["seed"] = *opt.seed;
        out << j.dump(2) << "\n";
    } else {
        if (opt.seed) out << "# seed: " << *opt.seed << "\n";
        for (auto& l : text_lines) out << l << "\n";
    }
}

inline std::string coweight_str(const Coweight& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

inline std::shared_ptr<const GaugeTheory> load_theory(const std::string& path) {
    return std::make_shared<const GaugeTheory>(theory_from_json(load_json_file(path)));
}

// ---------------------------------------------------------------- gauge

inline int cmd_gauge_info(std::ostream& out, const Options& opt, const std::string& theory_file,
                          const std::string& lambda_str) {
    auto T = load_theory(theory_file);
    Json j;
    std::vector<std::string> lines;
    j["rank"] = T->rank;
    j["matter"] = T->matter;
    j["flavour_rank"] = T->flavour_rank;
    j["gluable"] = is_gluable(*T);
    lines.push_back("rank: " + std::to_string(T->rank));
    lines.push_back("matter weights: " + std::to_string(T->matter.size()));
    lines.push_back("flavour rank: " + std::to_string(T->flavour_rank));
    lines.push_back(std::string("gluable: ") + (is_gluable(*T) ? "yes" : "no"));
    if (!lambda_str.empty()) {
        Coweight lam = parse_int_list(lambda_str);
        Polynomial e = euler_S(*T, lam, opt.conv());
        j["lambda"] = lam;
        j["d_lambda"] = d_lambda(*T, lam);
        j["euler"] = e.str();
        lines.push_back("d_lambda" + coweight_str(lam) + ": " + std::to_string(d_lambda(*T, lam)));
        lines.push_back("e(S_t^lambda) [" + std::string(convention_name(opt.conv())) +
                        "]: " + e.str());
    }
    emit(out, opt, j, lines);
    return kOk;
}

inline int cmd_gauge_gluable(std::ostream& out, const Options& opt,
                             const std::string& theory_file) {
    auto T = load_theory(theory_file);
    bool g = is_gluable(*T);
    emit(out, opt, Json{{"gluable", g}},
         {std::string("gluable: ") + (g ? "yes" : "no")});
    return g ? kOk : kNegative;
}

// -------------------------------------------------------------- coulomb

inline int cmd_member(std::ostream& out, const Options& opt, const std::string& theory_file,
                      const std::vector<std::string>& exprs) {
    auto T = load_theory(theory_file);
    Space s = T->space();
    std::vector<MembershipResult> results(exprs.size(), MembershipResult{});
    std::vector<DiffOp> parsed;
    for (auto& e : exprs) parsed.push_back(parse_diffop(e, T, s));

    int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || exprs.size() <= 1) {
        for (std::size_t i = 0; i < parsed.size(); ++i)
            results[i] = membership(parsed[i], opt.conv());
    } else {
        std::vector<std::future<void>> futures;
        std::size_t chunk = (parsed.size() + jobs - 1) / jobs;
        for (int w = 0; w < jobs; ++w) {
            std::size_t lo = w * chunk, hi = std::min(parsed.size(), lo + chunk);
            if (lo >= hi) break;
            futures.push_back(std::async(std::launch::async, [&, lo, hi]() {
                for (std::size_t i = lo; i < hi; ++i)
                    results[i] = membership(parsed[i], opt.conv());
            }));
        }
        for (auto& f : futures) f.get();
    }

    bool all = true;
    Json arr = Json::array();
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& r = results[i];
        all = all && r.member;
        Json j;
        j["input"] = exprs[i];
        j["member"] = r.member;
        if (r.member) {
            Json w = Json::array();
            std::string wtxt;
            for (auto& [lam, q] : r.witness) {
                Polynomial e = euler_S(*T, lam, opt.conv(), s);
                w.push_back(Json{{"lambda", lam},
                                 {"quotient", q.str()},
                                 {"basis_coeff", e.str()}});
                if (!wtxt.empty()) wtxt += " + ";
                wtxt += "(" + q.str() + ")*(" + e.str() + "*z" + coweight_str(lam) + ")";
            }
            j["witness"] = w;
            lines.push_back("member: yes  witness: " + (wtxt.empty() ? "0" : wtxt));
        } else {
            Json f = Json::array();
            std::string ftxt;
            for (auto& lam : r.failures) {
                f.push_back(lam);
                if (!ftxt.empty()) ftxt += ", ";
                ftxt += "z" + coweight_str(lam);
            }
            j["reason"] = "coefficient not divisible by the matter Euler class";
            j["failures"] = f;
            lines.push_back("member: no  fails at: " + ftxt);
        }
        arr.push_back(std::move(j));
    }
    emit(out, opt, arr.size() == 1 ? arr[0] : Json{{"results", arr}}, lines);
    return all ? kOk : kNegative;
}

inline int cmd_mult(std::ostream& out, const Options& opt, const std::string& theory_file,
                    const std::string& e1, const std::string& e2) {
    auto T = load_theory(theory_file);
    Space s = T->space();
    DiffOp p = twisted_product(parse_diffop(e1, T, s), parse_diffop(e2, T, s));
    emit(out, opt, Json{{"product", p.str()}}, {p.str()});
    return kOk;
}

inline int cmd_poisson(std::ostream& out, const Options& opt, const std::string& theory_file,
                       const std::string& e1, const std::string& e2) {
    auto T = load_theory(theory_file);
    Space s = T->space();
    DiffOp p = poisson_bracket(parse_diffop(e1, T, s), parse_diffop(e2, T, s));
    emit(out, opt, Json{{"bracket", p.str()}}, {p.str()});
    return kOk;
}

inline int cmd_coprod(std::ostream& out, const Options& opt, const std::string& theory_file,
                      int split, const std::string& expr) {
    auto T = load_theory(theory_file);
    Space s = T->space();
    DiffOp x = parse_diffop(expr, T, s);
    if (split < 0 || static_cast<std::size_t>(split) > T->matter.size())
        throw InputError("split mismatch: need 0 <= split <= number of matter weights");
    TensorDiffOp delta = coproduct(x);
    Json j;
    std::vector<std::string> lines;
    Json terms = Json::array();
    std::string txt;
    for (auto& [k, c] : delta) {
        terms.push_back(Json{{"left_lambda", k.first},
                             {"right_lambda", k.second},
                             {"coeff", c.str()}});
        if (!txt.empty()) txt += " + ";
        txt += "(" + c.str() + ")*z" + coweight_str(k.first) + " (x) z" + coweight_str(k.second);
    }
    j["coproduct"] = terms;
    lines.push_back("coproduct: " + (txt.empty() ? "0" : txt));
    CoproductFactors f = coproduct_factors(x, static_cast<std::size_t>(split), opt.conv());
    j["factors_in_subalgebras"] = f.compatible;
    if (f.compatible) {
        Json pairs = Json::array();
        for (auto& [l, r] : f.pairs) {
            pairs.push_back(Json{{"left", l.str()}, {"right", r.str()}});
            lines.push_back("factored: (" + l.str() + ") (x) (" + r.str() + ")");
        }
        j["factored"] = pairs;
    } else {
        lines.push_back("factored: input is not in the split membership subalgebra");
    }
    emit(out, opt, j, lines);
    return kOk;
}

inline int cmd_glue_check(std::ostream& out, const Options& opt, const std::string& theory_file,
                          const std::string& expr) {
    auto T = load_theory(theory_file);
    Space s = T->space();
    DiffOp x = parse_diffop(expr, T, s);
    LargestSubspaceResult r = largest_subspace_check(x, opt.conv());
    MembershipResult m = membership(x, opt.conv());
    Json j;
    j["largest_subspace"] = r.in_subspace;
    j["member"] = m.member;
    j["agree"] = r.in_subspace == m.member;
    std::vector<std::string> lines;
    lines.push_back(std::string("largest-subspace: ") + (r.in_subspace ? "yes" : "no"));
    lines.push_back(std::string("membership:       ") + (m.member ? "yes" : "no"));
    emit(out, opt, j, lines);
    return r.in_subspace ? kOk : kNegative;
}

// ------------------------------------------------------------- peterson

inline int cmd_peterson(std::ostream& out, const Options& opt, const std::string& root_file,
                        const std::string& parabolic_str, const std::string& lambda_str,
                        const std::string& matter_file, const std::string& rho_str,
                        const std::string& sign) {
    RootDatum datum = root_datum_from_json(load_json_file(root_file));
    IntVec subset_ll = parse_int_list(parabolic_str);
    std::vector<int> subset(subset_ll.begin(), subset_ll.end());
    for (auto& i : subset) i -= 1; // 1-based simple-root indices on the CLI
    Parabolic P(datum, subset);
    Coweight lam = parse_int_list(lambda_str);
    Space s = make_space(datum.rank(), 0);

    Json j;
    std::vector<std::string> lines;
    if (!matter_file.empty()) {
        GaugeTheory T = theory_from_json(load_json_file(matter_file));
        if (rho_str.empty()) throw InputError("matter Peterson needs --rho");
        bool positive = sign != "negative";
        MatterPetersonResult r =
            matter_peterson(datum, P, T, parse_int_list(rho_str), positive, lam, s);
        j["n0"] = r.n0;
        j["shifted_lambda"] = r.shifted_lambda;
        lines.push_back("n0: " + std::to_string(r.n0));
        lines.push_back("shifted lambda: " + coweight_str(r.shifted_lambda));
        lam = r.shifted_lambda;
    }
    bool allowed = is_p_allowed(datum, P, lam);
    QHClass img = psi_flag(datum, P, lam, s);
    j["allowed"] = allowed;
    if (!img.is_zero()) {
        auto& [key, c] = *img.terms.begin();
        std::vector<std::string> nov;
        for (auto& x : key.first) nov.push_back(x.str());
        Json novikov = Json::array();
        for (auto& x : key.first) novikov.push_back(std::stoll(x.str()));
        j["novikov"] = novikov;
        j["schubert_word"] = key.second;
    } else {
        j["novikov"] = nullptr;
        j["schubert_word"] = nullptr;
    }
    lines.push_back(std::string("allowed: ") + (allowed ? "true" : "false"));
    lines.push_back("image: " + img.str());
    emit(out, opt, j, lines);
    return kOk;
}

// ---------------------------------------------------------------- shift

inline int cmd_shift_eval(std::ostream& out, const Options& opt, const std::string& model_file,
                          const std::string& lambda_str, const std::string& expr,
                          bool untwisted) {
    FixedPointModel m = model_from_json(load_json_file(model_file));
    Coweight lam = parse_int_list(lambda_str);
    LocalizedClass alpha;
    for (int k = 0; k < m.points; ++k)
        alpha.values.push_back(parse_novikov(expr, m.space, m.curve_rank));
    LocalizedClass result = shift_S(m, lam, alpha, !untwisted);
    Json j = class_to_json(result, m.rank, m.curve_rank);
    std::vector<std::string> lines;
    for (int k = 0; k < m.points; ++k)
        lines.push_back("point " + std::to_string(k + 1) + ": " + result.values[k].str());
    emit(out, opt, j, lines);
    return kOk;
}

inline int cmd_shift_module_check(std::ostream& out, const Options& opt,
                                  const std::string& model_file, const std::string& lambda_str,
                                  const std::string& mu_str) {
    FixedPointModel m = model_from_json(load_json_file(model_file));
    bool ok = module_check(m, parse_int_list(lambda_str), parse_int_list(mu_str));
    emit(out, opt, Json{{"module_property", ok}},
         {std::string("module property: ") + (ok ? "holds" : "fails")});
    return ok ? kOk : kNegative;
}

inline int cmd_shift_assemble(std::ostream& out, const Options& opt,
                              const std::string& table_file, const std::string& expr) {
    OperatorTable t = table_from_json(load_json_file(table_file));
    auto pure = std::make_shared<const GaugeTheory>(t.rank, std::vector<IntVec>{});
    DiffOp gamma = parse_diffop(expr, pure, t.space);
    for (auto& [lam, c] : gamma.terms())
        if (!t.entries.count(lam))
            throw InputError("missing table entry for " + coweight_str(lam));
    LocalizedClass result = assemble_shift(gamma, t);
    std::size_t out_rank = t.novikov_map ? t.novikov_map->out_rank : t.curve_rank;
    Json j = class_to_json(result, t.rank, out_rank);
    std::vector<std::string> lines;
    for (int k = 0; k < t.points; ++k)
        lines.push_back("point " + std::to_string(k + 1) + ": " + result.values[k].str());
    emit(out, opt, j, lines);
    return kOk;
}

inline int cmd_shift_limit(std::ostream& out, const Options& opt, const std::string& model_file,
                           const std::string& class_file) {
    FixedPointModel m = model_from_json(load_json_file(model_file));
    Space cs;
    std::size_t curve_rank = 0;
    LocalizedClass cls = class_from_json(load_json_file(class_file), cs, curve_rank);
    if (static_cast<int>(cls.values.size()) != m.points)
        throw InputError("class and model point counts differ");
    // Re-parse the class in the model's space for exact arithmetic.
    if (*cs != *m.space) throw InputError("class and model variable spaces differ");
    try {
        NoneqLimit lim = noneq_limit(m, cls);
        Json j;
        std::vector<std::string> lines;
        if (lim.used_basis) {
            Json terms = Json::array();
            std::string txt;
            for (auto& [e, coeffs] : lim.coefficients) {
                Json entry;
                entry["q"] = e;
                Json cj = Json::array();
                for (std::size_t i = 0; i < coeffs.size(); ++i)
                    cj.push_back(Json{{"basis", lim.basis_names[i]}, {"coeff", coeffs[i].str()}});
                entry["coeffs"] = cj;
                terms.push_back(std::move(entry));
                std::string piece;
                for (std::size_t i = 0; i < coeffs.size(); ++i) {
                    if (coeffs[i].is_zero()) continue;
                    if (!piece.empty()) piece += " + ";
                    piece += "(" + coeffs[i].str() + ")*" + lim.basis_names[i];
                }
                if (!txt.empty()) txt += " + ";
                std::string qs = "q[";
                for (std::size_t i = 0; i < e.size(); ++i)
                    qs += (i ? "," : "") + std::to_string(e[i]);
                qs += "]";
                txt += qs + "*(" + piece + ")";
            }
            j["limit"] = terms;
            lines.push_back("limit: " + (txt.empty() ? "0" : txt));
        } else {
            std::vector<std::string> vals;
            for (auto& v : lim.values) vals.push_back(v.str());
            j["values"] = vals;
            for (int k = 0; k < m.points; ++k)
                lines.push_back("point " + std::to_string(k + 1) + ": " + vals[k]);
        }
        emit(out, opt, j, lines);
        return kOk;
    } catch (const MathError& e) {
        emit(out, opt, Json{{"ok", false}, {"reason", e.what()}},
             {std::string("reason: ") + e.what()});
        return kNegative;
    }
}

inline int cmd_seidel(std::ostream& out, const Options& opt, const std::string& theory_file,
                      const std::string& lambda_str) {
    auto T = load_theory(theory_file);
    Space s = T->space();
    Coweight lam = parse_int_list(lambda_str);
    auto [q, mono] = seidel_linear_rep(*T, lam, s);
    Json j;
    j["novikov"] = q;
    j["monomial"] = mono.str();
    emit(out, opt, j, {"q^" + coweight_str(q) + " * (" + mono.str() + ")"});
    return kOk;
}

// ------------------------------------------------------------ dispatcher

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations in quantized Coulomb branch algebras and shift operators"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_flag("--json", opt.json, "emit one JSON document");
    long seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "seed recorded in output headers");
    app.add_option("--jobs", opt.jobs, "fan-out for batch checks");
    app.add_option("--convention", opt.convention, "h-convention: classical, shift0, shift1")
        ->check(CLI::IsMember({"classical", "shift0", "shift1"}));

    std::string theory_file, root_file, model_file, table_file, class_file;
    std::string lambda_str, mu_str, rho_str, parabolic_str = "[]", sign = "positive";
    std::string matter_file;
    std::vector<std::string> exprs;
    int split = 0;
    bool untwisted = false;

    int rc = kOk;
    auto wrap = [&](auto fn) {
        return [&, fn]() {
            if (*seed_opt) opt.seed = seed_val;
            rc = fn();
        };
    };

    auto* gauge = app.add_subcommand("gauge", "gauge theory data");
    auto* ginfo = gauge->add_subcommand("info", "summary, d_lambda, Euler classes");
    ginfo->add_option("--theory", theory_file)->required();
    ginfo->add_option("--lambda", lambda_str);
    ginfo->callback(wrap([&]() { return cmd_gauge_info(out, opt, theory_file, lambda_str); }));
    auto* ggl = gauge->add_subcommand("gluable", "gluability of the matter representation");
    ggl->add_option("--theory", theory_file)->required();
    ggl->callback(wrap([&]() { return cmd_gauge_gluable(out, opt, theory_file); }));

    auto* coulomb = app.add_subcommand("coulomb", "the quantized Coulomb branch algebra");
    auto* cmem = coulomb->add_subcommand("member", "membership with witness");
    cmem->add_option("--theory", theory_file)->required();
    cmem->add_option("expr", exprs, "algebra elements")->required();
    cmem->callback(wrap([&]() { return cmd_member(out, opt, theory_file, exprs); }));
    auto* cmul = coulomb->add_subcommand("mult", "twisted convolution product");
    cmul->add_option("--theory", theory_file)->required();
    cmul->add_option("expr", exprs)->expected(2);
    cmul->callback(wrap([&]() { return cmd_mult(out, opt, theory_file, exprs[0], exprs[1]); }));
    auto* cpo = coulomb->add_subcommand("poisson", "Poisson bracket of classical representatives");
    cpo->add_option("--theory", theory_file)->required();
    cpo->add_option("expr", exprs)->expected(2);
    cpo->callback(wrap([&]() { return cmd_poisson(out, opt, theory_file, exprs[0], exprs[1]); }));
    auto* ccp = coulomb->add_subcommand("coprod", "coproduct and split re-expression");
    ccp->add_option("--theory", theory_file)->required();
    ccp->add_option("--split", split, "size of the first summand")->required();
    ccp->add_option("expr", exprs)->expected(1);
    ccp->callback(wrap([&]() { return cmd_coprod(out, opt, theory_file, split, exprs[0]); }));
    auto* cgc = coulomb->add_subcommand("glue-check", "largest-subspace (gluing) criterion");
    cgc->add_option("--theory", theory_file)->required();
    cgc->add_option("expr", exprs)->expected(1);
    cgc->callback(wrap([&]() { return cmd_glue_check(out, opt, theory_file, exprs[0]); }));

    auto* pet = app.add_subcommand("peterson", "flag-variety Seidel image of [C_{<=lambda}]");
    pet->add_option("--root", root_file)->required();
    pet->add_option("--parabolic", parabolic_str, "1-based simple-root indices, e.g. [1,2]");
    pet->add_option("--lambda", lambda_str)->required();
    pet->add_option("--matter", matter_file, "gauge theory for the matter variant");
    pet->add_option("--rho", rho_str, "central cocharacter");
    pet->add_option("--sign", sign)->check(CLI::IsMember({"positive", "negative"}));
    pet->callback(wrap([&]() {
        return cmd_peterson(out, opt, root_file, parabolic_str, lambda_str, matter_file, rho_str,
                            sign);
    }));

    auto* shift = app.add_subcommand("shift", "Givental-space shift operators");
    auto* sev = shift->add_subcommand("eval", "apply S_lambda to a class");
    sev->add_option("--model", model_file)->required();
    sev->add_option("--lambda", lambda_str)->required();
    sev->add_option("expr", exprs, "class expression, default 1");
    sev->add_flag("--untwisted", untwisted, "skip the Phi twist");
    sev->callback(wrap([&]() {
        return cmd_shift_eval(out, opt, model_file, lambda_str,
                              exprs.empty() ? std::string("1") : exprs[0], untwisted);
    }));
    auto* smc = shift->add_subcommand("module-check", "S_{lambda+mu} = S_lambda o S_mu");
    smc->add_option("--model", model_file)->required();
    smc->add_option("--lambda", lambda_str)->required();
    smc->add_option("--mu", mu_str)->required();
    smc->callback(wrap(
        [&]() { return cmd_shift_module_check(out, opt, model_file, lambda_str, mu_str); }));
    auto* sas = shift->add_subcommand("assemble", "assemble sum c_lambda S_lambda from a table");
    sas->add_option("--table", table_file)->required();
    sas->add_option("expr", exprs)->expected(1);
    sas->callback(wrap([&]() { return cmd_shift_assemble(out, opt, table_file, exprs[0]); }));
    auto* sli = shift->add_subcommand("limit", "non-equivariant limit of a localized class");
    sli->add_option("--model", model_file)->required();
    sli->add_option("--class", class_file)->required();
    sli->callback(wrap([&]() { return cmd_shift_limit(out, opt, model_file, class_file); }));

    auto* sei = app.add_subcommand("seidel", "abelian Seidel image of a basis element");
    sei->add_option("--theory", theory_file)->required();
    sei->add_option("--lambda", lambda_str)->required();
    sei->callback(wrap([&]() { return cmd_seidel(out, opt, theory_file, lambda_str); }));

    for (auto* group : {gauge, coulomb, shift}) {
        group->fallthrough();
        for (auto* sub : group->get_subcommands({})) sub->fallthrough();
    }
    pet->fallthrough();
    sei->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends print through CLI11.
            std::ostringstream os;
            os << app.help();
            out << os.str();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: syntax error " << e.what() << " (line 1)\n";
        return kUsage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const MathError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "internal error: " << e.what() << "\n";
        return kUsage;
    }
    return rc;
}

} // namespace qcb::cli
