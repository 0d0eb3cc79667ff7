#include "qcb/cli.hpp"
#include "qcb/parser.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace qcb;
using qcb::testing::rand_int;

namespace {

std::string demo(const char* name) { return std::string(QCB_DEMO_DIR "/") + name; }

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = qcb::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("expression parsing") {
    auto T = std::make_shared<const GaugeTheory>(GaugeTheory(2, {{0, 0}, {1, -1}, {-1, 1}}));
    Space s = T->space();
    SECTION("the GL2 example class") {
        DiffOp x = parse_diffop("(a1-a2)*z[1,0] - (a1-a2)*z[0,1]", T, s);
        Polynomial a1 = Polynomial::variable(s, 0), a2 = Polynomial::variable(s, 1);
        DiffOp expect = DiffOp::term(T, s, {1, 0}, RationalFunction(a1 - a2)) +
                        DiffOp::term(T, s, {0, 1}, RationalFunction(a2 - a1));
        CHECK(x == expect);
    }
    SECTION("z[0,0] is the unit") {
        auto one = std::make_shared<const GaugeTheory>(GaugeTheory(1, {{1}}));
        DiffOp x = parse_diffop("z[0]", one, one->space());
        CHECK(x == DiffOp::t_power(one, one->space(), {0}));
    }
    SECTION("truncated z-monomial: error at column 8") {
        auto one = std::make_shared<const GaugeTheory>(GaugeTheory(1, {{1}}));
        try {
            parse_diffop("a1 + z[1", one, one->space());
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.column() == 8);
        }
    }
    SECTION("multiplication is twisted") {
        auto one = std::make_shared<const GaugeTheory>(GaugeTheory(1, {{1}}));
        Space s1 = one->space();
        Polynomial a = Polynomial::variable(s1, 0), h = Polynomial::hbar(s1);
        CHECK(parse_diffop("z[1]*a1", one, s1) ==
              DiffOp::term(one, s1, {1}, RationalFunction(a + h)));
        CHECK(parse_diffop("a1*z[1]", one, s1) ==
              DiffOp::term(one, s1, {1}, RationalFunction(a)));
    }
    SECTION("powers, division, unary minus") {
        CHECK(parse_rational("-a1^2/2", make_space(1)) ==
              RationalFunction(Polynomial::variable(make_space(1), 0).pow(2) * Rat(-1, 2)));
        CHECK(parse_rational("1/(a1-h)", make_space(1)).den() ==
              Polynomial::variable(make_space(1), 0) - Polynomial::hbar(make_space(1)));
        auto one = std::make_shared<const GaugeTheory>(GaugeTheory(1, {{1}}));
        CHECK(parse_diffop("z[2]^-1", one, one->space()) ==
              DiffOp::t_power(one, one->space(), {-2}));
    }
    SECTION("error cases") {
        auto one = std::make_shared<const GaugeTheory>(GaugeTheory(1, {{1}}));
        Space s1 = one->space();
        CHECK_THROWS_AS(parse_diffop("b1 + 2", one, s1), ParseError);   // unknown identifier
        CHECK_THROWS_AS(parse_diffop("z[1,2]", one, s1), ParseError);   // arity
        CHECK_THROWS_AS(parse_diffop("a1/0", one, s1), MathError);      // zero denominator
        CHECK_THROWS_AS(parse_diffop("a1/z[1]", one, s1), ParseError);  // non-scalar divisor
        CHECK_THROWS_AS(parse_diffop("q[1]", one, s1), ParseError);     // q not allowed
        CHECK_THROWS_AS(parse_diffop("(a1", one, s1), ParseError);
    }
}

TEST_CASE("print/parse round trip on random values") {
    auto T = std::make_shared<const GaugeTheory>(GaugeTheory(2, {{1, 0}, {0, -1}}));
    Space s = T->space();
    for (int i = 0; i < 1000; ++i) {
        DiffOp x(T, s);
        int terms = static_cast<int>(rand_int(0, 3));
        for (int t = 0; t < terms; ++t)
            x.add(testing::random_coweight(2, 3),
                  testing::random_rational_function(s));
        DiffOp back = parse_diffop(x.str(), T, s);
        CHECK(back == x);
    }
}

TEST_CASE("novikov print/parse round trip") {
    Space s = make_space(2);
    for (int i = 0; i < 200; ++i) {
        NovikovSum n(s, 3);
        int terms = static_cast<int>(rand_int(0, 3));
        for (int t = 0; t < terms; ++t) {
            NExp e(3);
            for (auto& x : e) x = rand_int(-3, 3);
            n.add(e, testing::random_rational_function(s));
        }
        CHECK(parse_novikov(n.str(), s, 3) == n);
    }
}

TEST_CASE("cli membership") {
    SECTION("witness on success") {
        auto r = run_cli({"coulomb", "member", "--theory", demo("u1_one_flavour.json"),
                          "--convention", "classical", "a1*z[-1]"});
        CHECK(r.code == 0);
        CHECK(r.out.find("member: yes") != std::string::npos);
        CHECK(r.out.find("witness") != std::string::npos);
    }
    SECTION("mathematical negative exits 1") {
        auto r = run_cli({"coulomb", "member", "--theory", demo("u1_one_flavour.json"),
                          "z[-1]"});
        CHECK(r.code == 1);
        CHECK(r.out.find("member: no") != std::string::npos);
    }
    SECTION("batch with --jobs keeps input order") {
        auto seq = run_cli({"coulomb", "member", "--theory", demo("u1_one_flavour.json"),
                            "--convention", "classical", "a1*z[-1]", "z[-1]", "z[2]",
                            "a1^2*z[-2]"});
        auto par = run_cli({"--jobs", "3", "coulomb", "member", "--theory",
                            demo("u1_one_flavour.json"), "--convention", "classical",
                            "a1*z[-1]", "z[-1]", "z[2]", "a1^2*z[-2]"});
        CHECK(seq.code == 1);
        CHECK(par.code == 1);
        CHECK(seq.out == par.out);
    }
    SECTION("byte-identical reruns") {
        std::vector<std::string> args{"coulomb", "member", "--theory",
                                      demo("gl2_adjoint.json"), "--json",
                                      "(a1-a2)*z[1,0] - (a1-a2)*z[0,1]"};
        auto r1 = run_cli(args);
        auto r2 = run_cli(args);
        CHECK(r1.out == r2.out);
    }
}

TEST_CASE("cli algebra commands") {
    SECTION("mult") {
        auto r = run_cli({"coulomb", "mult", "--theory", demo("u1_one_flavour.json"),
                          "a1*z[-1]", "a1*z[-1]"});
        CHECK(r.code == 0);
        CHECK(r.out.find("z[-2]") != std::string::npos);
    }
    SECTION("poisson") {
        auto r = run_cli({"coulomb", "poisson", "--theory", demo("u1_one_flavour.json"),
                          "z[1]", "a1"});
        CHECK(r.code == 0);
        CHECK(r.out.find("z[1]") != std::string::npos);
    }
    SECTION("coprod") {
        auto r = run_cli({"coulomb", "coprod", "--theory", demo("gl2_adjoint.json"),
                          "--split", "2", "z[1,1]"});
        CHECK(r.code == 0);
        CHECK(r.out.find("(x)") != std::string::npos);
    }
    SECTION("glue-check") {
        auto yes = run_cli({"coulomb", "glue-check", "--theory", demo("u1_one_flavour.json"),
                            "--convention", "classical", "a1*z[-1]"});
        CHECK(yes.code == 0);
        auto no = run_cli({"coulomb", "glue-check", "--theory", demo("u1_one_flavour.json"),
                           "z[-1]"});
        CHECK(no.code == 1);
    }
    SECTION("gauge info and gluable") {
        auto r = run_cli({"gauge", "info", "--theory", demo("gl2_adjoint.json"),
                          "--lambda", "[1,0]"});
        CHECK(r.code == 0);
        CHECK(r.out.find("d_lambda[1,0]: 1") != std::string::npos);
        auto g = run_cli({"gauge", "gluable", "--theory", demo("gl2_adjoint.json")});
        CHECK(g.code == 1);
        auto g2 = run_cli({"gauge", "gluable", "--theory", demo("gl2_adjoint_dilation.json")});
        CHECK(g2.code == 0);
    }
}

TEST_CASE("cli peterson") {
    auto r = run_cli({"--json", "peterson", "--root", demo("sl2_root.json"), "--parabolic", "[]",
                      "--lambda", "[1]"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("allowed") == true);
    CHECK(j.at("novikov") == Json::array({-1}));
    CHECK(j.at("schubert_word") == Json::array({1}));
}

TEST_CASE("cli shift commands") {
    SECTION("eval") {
        auto r = run_cli({"shift", "eval", "--model", demo("p1_model.json"), "--lambda",
                          "[1,0]"});
        CHECK(r.code == 0);
        CHECK(r.out.find("point 1") != std::string::npos);
    }
    SECTION("module-check") {
        auto r = run_cli({"shift", "module-check", "--model", demo("p1_model.json"),
                          "--lambda", "[2,0]", "--mu", "[-1,1]"});
        CHECK(r.code == 0);
    }
    SECTION("assemble then limit") {
        auto r = run_cli({"--json", "shift", "assemble", "--table",
                          demo("tstar_p1_table_noq.json"), "(a1-a2)^2*z[1,0]"});
        REQUIRE(r.code == 0);
        std::string tmp = "/tmp/qcb_test_class.json";
        {
            std::ofstream f(tmp);
            f << r.out;
        }
        auto lim = run_cli({"shift", "limit", "--model", demo("tstar_p1_model.json"),
                            "--class", tmp});
        CHECK(lim.code == 0);
        CHECK(lim.out.find("h)*x") != std::string::npos);
        // A class with a genuine pole exits 1 with a reason.
        auto asm2 = run_cli({"--json", "shift", "assemble", "--table",
                             demo("tstar_p1_table_noq.json"), "z[1,0]"});
        REQUIRE(asm2.code == 0);
        {
            std::ofstream f(tmp);
            f << asm2.out;
        }
        auto bad = run_cli({"shift", "limit", "--model", demo("tstar_p1_model.json"),
                            "--class", tmp});
        CHECK(bad.code == 1);
        CHECK(bad.out.find("reason") != std::string::npos);
    }
    SECTION("seidel") {
        auto r = run_cli({"--json", "seidel", "--theory", demo("u1_one_flavour.json"),
                          "--lambda", "[1]"});
        CHECK(r.code == 0);
        Json j = Json::parse(r.out);
        CHECK(j.at("monomial") == "a1");
    }
}

TEST_CASE("cli error handling") {
    SECTION("unknown verb exits 2") {
        auto r = run_cli({"frobnicate"});
        CHECK(r.code == 2);
    }
    SECTION("syntax errors exit 2 with position") {
        auto r = run_cli({"coulomb", "member", "--theory", demo("u1_one_flavour.json"),
                          "a1 + z[1"});
        CHECK(r.code == 2);
        CHECK(r.err.find("column 8") != std::string::npos);
    }
    SECTION("schema violations fail fast") {
        std::string tmp = "/tmp/qcb_bad_theory.json";
        {
            std::ofstream f(tmp);
            f << "{\"rank\": 2, \"matter\": [[1]]}";
        }
        auto r = run_cli({"coulomb", "member", "--theory", tmp, "z[0,0]"});
        CHECK(r.code == 2);
        auto g = run_cli({"gauge", "info", "--theory", "/nonexistent.json"});
        CHECK(g.code == 2);
    }
    SECTION("seed is recorded in the output header") {
        auto r = run_cli({"--seed", "42", "gauge", "info", "--theory",
                          demo("u1_one_flavour.json")});
        CHECK(r.out.find("# seed: 42") != std::string::npos);
        auto j = run_cli({"--seed", "42", "--json", "gauge", "info", "--theory",
                          demo("u1_one_flavour.json")});
        CHECK(Json::parse(j.out).at("seed") == 42);
    }
}
