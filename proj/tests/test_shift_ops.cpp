#include "qcb/io.hpp"
#include "qcb/shift_ops.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

using namespace qcb;
using qcb::testing::rand_int;

namespace {

std::string demo(const char* name) { return std::string(QCB_DEMO_DIR "/") + name; }

FixedPointModel p1_model() { return model_from_json(load_json_file(demo("p1_model.json"))); }

FixedPointModel tstar_p1_model() {
    return model_from_json(load_json_file(demo("tstar_p1_model.json")));
}

OperatorTable tstar_table() { return table_from_json(load_json_file(demo("tstar_p1_table.json"))); }

/// Model of P1 x P1 under a rank-2 torus scaling the two factors.
FixedPointModel p1xp1_model() {
    FixedPointModel m;
    m.rank = 2;
    m.points = 4;
    m.curve_rank = 8;
    m.space = make_space(2, 0);
    // Points: (0,0), (0,inf), (inf,0), (inf,inf).
    m.tangent_weights = {{{1, 0}, {0, 1}},
                         {{1, 0}, {0, -1}},
                         {{-1, 0}, {0, 1}},
                         {{-1, 0}, {0, -1}}};
    for (int i = 0; i < 2; ++i) {
        std::vector<NExp> per_point;
        for (int k = 0; k < 4; ++k) {
            NExp e(8, 0);
            e[4 * i + k] = 1;
            per_point.push_back(e);
        }
        m.basis_sections.push_back(per_point);
    }
    Polynomial a1 = Polynomial::variable(m.space, 0), a2 = Polynomial::variable(m.space, 1);
    Polynomial zero = Polynomial::zero(m.space);
    m.divisors.push_back({"x1",
                          {RationalFunction(zero), RationalFunction(zero), RationalFunction(-a1),
                           RationalFunction(-a1)},
                          {0, 0, -1, -1, 0, 0, 0, 0}});
    m.divisors.push_back({"x2",
                          {RationalFunction(zero), RationalFunction(-a2), RationalFunction(zero),
                           RationalFunction(-a2)},
                          {0, 0, 0, 0, 0, -1, 0, -1}});
    m.validate();
    return m;
}

FixedPointModel random_model() {
    FixedPointModel m;
    m.rank = static_cast<int>(rand_int(1, 2));
    m.points = static_cast<int>(rand_int(1, 3));
    m.curve_rank = static_cast<std::size_t>(rand_int(1, 3));
    m.space = make_space(m.rank, 0);
    for (int k = 0; k < m.points; ++k) {
        std::vector<IntVec> ws;
        int nw = static_cast<int>(rand_int(1, 3));
        for (int j = 0; j < nw; ++j) {
            IntVec w(m.rank, 0);
            while (std::all_of(w.begin(), w.end(), [](long long x) { return x == 0; }))
                for (auto& x : w) x = rand_int(-2, 2);
            ws.push_back(w);
        }
        m.tangent_weights.push_back(ws);
    }
    for (int i = 0; i < m.rank; ++i) {
        std::vector<NExp> per_point;
        for (int k = 0; k < m.points; ++k) {
            NExp e(m.curve_rank);
            for (auto& x : e) x = rand_int(-2, 2);
            per_point.push_back(e);
        }
        m.basis_sections.push_back(per_point);
    }
    m.validate();
    return m;
}

} // namespace

TEST_CASE("euler_delta") {
    Space s = make_space(2);
    Polynomial u = Polynomial::variable(s, 0) - Polynomial::variable(s, 1);
    Polynomial h = Polynomial::hbar(s);
    SECTION("single weight, pairing 1") {
        CHECK(euler_delta(s, {{1, -1}}, {1, 0}) == RationalFunction(u));
    }
    SECTION("pairing 0 contributes 1") {
        CHECK(euler_delta(s, {{1, -1}}, {1, 1}).is_one());
    }
    SECTION("pairing -2 divides by (u-h)(u-2h)") {
        RationalFunction expect(Polynomial::one(s), (u - h) * (u - h * Rat(2)));
        CHECK(euler_delta(s, {{1, -1}}, {-2, 0}) == expect);
    }
    SECTION("zero weight rejected") {
        CHECK_THROWS_AS(euler_delta(s, {{0, 0}}, {1, 0}), InputError);
    }
}

TEST_CASE("shift_S on the P1 model") {
    FixedPointModel m = p1_model();
    Space s = m.space;
    Polynomial u = Polynomial::variable(s, 0) - Polynomial::variable(s, 1);
    Polynomial h = Polynomial::hbar(s);
    SECTION("S_(1,0) of 1") {
        LocalizedClass r = shift_S(m, {1, 0}, LocalizedClass::unit(m));
        NovikovSum expect1 = NovikovSum::monomial(s, {1, 0, 0, 0}, RationalFunction(u));
        NovikovSum expect2 = NovikovSum::monomial(
            s, {0, 1, 0, 0}, RationalFunction(Polynomial::one(s), -u - h));
        CHECK(r.values[0] == expect1);
        CHECK(r.values[1] == expect2);
    }
    SECTION("S_0 is the identity") {
        LocalizedClass one = LocalizedClass::unit(m);
        CHECK(shift_S(m, {0, 0}, one) == one);
        for (auto& d : m.divisors) {
            LocalizedClass c;
            for (int k = 0; k < m.points; ++k)
                c.values.push_back(NovikovSum::scalar(s, m.curve_rank, d.values[k]));
            CHECK(shift_S(m, {0, 0}, c) == c);
        }
    }
    SECTION("twisted linearity: S(P a) = Phi(P) S(a)") {
        for (int i = 0; i < 40; ++i) {
            RationalFunction P = RationalFunction(testing::random_polynomial(s));
            Coweight lam{rand_int(-2, 2), rand_int(-2, 2)};
            LocalizedClass one = LocalizedClass::unit(m);
            LocalizedClass Pa;
            for (int k = 0; k < m.points; ++k)
                Pa.values.push_back(NovikovSum::scalar(s, m.curve_rank, P));
            LocalizedClass lhs = shift_S(m, lam, Pa);
            LocalizedClass rhs = shift_S(m, lam, one);
            RationalFunction shifted = phi_shift(P, lam);
            for (int k = 0; k < m.points; ++k) rhs.values[k] = rhs.values[k] * shifted;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("module property") {
    SECTION("P1 exhaustive |lambda|, |mu| <= 3") {
        FixedPointModel m = p1_model();
        for (long long a = -3; a <= 3; ++a)
            for (long long b = -3; b <= 3; ++b)
                CHECK(module_check(m, {a, 0}, {b, 0}));
        CHECK(module_check(m, {1, 0}, {0, 1}));
        CHECK(module_check(m, {0, 0}, {0, 0}));
        CHECK(module_check(m, {1, 0}, {1, 0}));
    }
    SECTION("P1 x P1 spot checks") {
        FixedPointModel m = p1xp1_model();
        CHECK(module_check(m, {1, 0}, {0, 1}));
        CHECK(module_check(m, {2, -1}, {-1, 1}));
    }
    SECTION("random models") {
        for (int i = 0; i < 30; ++i) {
            FixedPointModel m = random_model();
            Coweight lam(m.rank), mu(m.rank);
            for (auto& x : lam) x = rand_int(-2, 2);
            for (auto& x : mu) x = rand_int(-2, 2);
            CHECK(module_check(m, lam, mu));
        }
    }
}

TEST_CASE("assembler reproduces the GL2 / T*P1 values") {
    OperatorTable t = tstar_table();
    FixedPointModel m = tstar_p1_model();
    auto pure = std::make_shared<const GaugeTheory>(2, std::vector<IntVec>{});
    SECTION("(a1-a2)(z1 - z2) maps to (qG-qG')(2x+a1+a2) - (qG+qG')h") {
        DiffOp gamma = parse_diffop("(a1-a2)*z[1,0] - (a1-a2)*z[0,1]", pure, t.space);
        LocalizedClass got = assemble_shift(gamma, t);
        // Expected class restricted to the fixed points x = -a1, -a2.
        Space s = t.space;
        Polynomial a1 = Polynomial::variable(s, 0), a2 = Polynomial::variable(s, 1);
        Polynomial h = Polynomial::hbar(s);
        auto expect_at = [&](const Polynomial& x) {
            NovikovSum v(s, 2);
            v.add({1, 0}, RationalFunction(x * Rat(2) + a1 + a2 - h));
            v.add({0, 1}, RationalFunction(-(x * Rat(2) + a1 + a2) - h));
            return v;
        };
        CHECK(got.values[0] == expect_at(-a1));
        CHECK(got.values[1] == expect_at(-a2));
    }
    SECTION("central monomials: z1 z2 and its inverse") {
        DiffOp g1 = parse_diffop("z[1,1]", pure, t.space);
        LocalizedClass c1 = assemble_shift(g1, t);
        NovikovSum qq =
            NovikovSum::monomial(t.space, {1, 1}, RationalFunction::one(t.space));
        CHECK(c1.values[0] == qq);
        CHECK(c1.values[1] == qq);
        DiffOp g2 = parse_diffop("z[-1,-1]", pure, t.space);
        LocalizedClass c2 = assemble_shift(g2, t);
        NovikovSum qqi =
            NovikovSum::monomial(t.space, {-1, -1}, RationalFunction::one(t.space));
        CHECK(c2.values[0] == qqi);
        CHECK(c2.values[1] == qqi);
    }
    SECTION("missing entry raises") {
        DiffOp g = parse_diffop("z[2,0]", pure, t.space);
        CHECK_THROWS_AS(assemble_shift(g, t), InputError);
    }
}

TEST_CASE("non-equivariant limits") {
    OperatorTable t = tstar_table();
    FixedPointModel m = tstar_p1_model();
    auto pure = std::make_shared<const GaugeTheory>(2, std::vector<IntVec>{});
    Space s = t.space;
    SECTION("(a1-a2)^2 z1 limits to (q0 - qinf) h x") {
        DiffOp gamma = parse_diffop("(a1-a2)^2*z[1,0]", pure, s);
        LocalizedClass cls = assemble_shift(gamma, t, NovikovMap::identity(4));
        NoneqLimit lim = noneq_limit(m, cls);
        REQUIRE(lim.used_basis);
        REQUIRE(lim.coefficients.size() == 2);
        Polynomial h = Polynomial::hbar(s);
        auto& c0 = lim.coefficients.at({1, 0, 0, 0});
        CHECK(c0[0].is_zero());
        CHECK(c0[1] == RationalFunction(h));
        auto& ci = lim.coefficients.at({0, 1, 0, 0});
        CHECK(ci[0].is_zero());
        CHECK(ci[1] == RationalFunction(-h));
    }
    SECTION("z1 + z2 at h = 0 gives -qG - qG'") {
        DiffOp gamma = parse_diffop("z[1,0] + z[0,1]", pure, s);
        LocalizedClass cls = assemble_shift(gamma, t);
        NoneqLimit lim = noneq_limit(m, cls);
        REQUIRE(lim.used_basis);
        std::size_t hi = s->hbar_index();
        auto at_h0 = [&](const RationalFunction& c) {
            return substitute(c, {{hi, RationalFunction::zero(s)}});
        };
        CHECK(at_h0(lim.coefficients.at({1, 0})[0]) == RationalFunction::constant(s, -1));
        CHECK(at_h0(lim.coefficients.at({1, 0})[1]).is_zero());
        CHECK(at_h0(lim.coefficients.at({0, 1})[0]) == RationalFunction::constant(s, -1));
        CHECK(at_h0(lim.coefficients.at({0, 1})[1]).is_zero());
    }
    SECTION("unscaled S_(1,0)(1) has no limit") {
        DiffOp gamma = parse_diffop("z[1,0]", pure, s);
        LocalizedClass cls = assemble_shift(gamma, t, NovikovMap::identity(4));
        CHECK_THROWS_AS(noneq_limit(m, cls), MathError);
    }
    SECTION("pointwise route without a basis") {
        FixedPointModel nobasis = m;
        nobasis.basis.clear();
        DiffOp gamma = parse_diffop("(a1-a2)^2*z[1,0]", pure, s);
        LocalizedClass cls = assemble_shift(gamma, t, NovikovMap::identity(4));
        NoneqLimit lim = noneq_limit(nobasis, cls);
        CHECK_FALSE(lim.used_basis);
        REQUIRE(lim.values.size() == 2);
    }
}

TEST_CASE("Weyl equivariance of the assembler on the GL2 example") {
    OperatorTable t = tstar_table();
    auto pure = std::make_shared<const GaugeTheory>(2, std::vector<IntVec>{});
    RootDatum gl2(2, {{1, -1}}, {{1, -1}});
    const WeylElement& s_refl = gl2.weyl()[1];
    Space s = t.space;

    // The reflection swaps the fixed points, swaps a1 <-> a2, swaps the two
    // cocharacters, and permutes the section classes accordingly.
    auto act_rf = [&](const RationalFunction& c) {
        return RationalFunction(c.num().substitute_equiv_linear(s_refl.matrix),
                                c.den().substitute_equiv_linear(s_refl.matrix));
    };
    auto act_nexp = [&](const NExp& e) {
        return NExp{e[3], e[2], e[1], e[0]};
    };
    auto act_class = [&](const LocalizedClass& c) {
        LocalizedClass out;
        out.values = {NovikovSum(s, 4), NovikovSum(s, 4)};
        for (int k = 0; k < 2; ++k)
            for (auto& [e, coeff] : c.values[k].terms())
                out.values[1 - k].add(act_nexp(e), act_rf(coeff));
        return out;
    };

    OperatorTable wt = t;
    wt.entries.clear();
    for (auto& [lam, cls] : t.entries) {
        Coweight wl = gl2.act(s_refl, lam);
        wt.entries.emplace(wl, act_class(cls));
    }

    NovikovMap id4 = NovikovMap::identity(4);
    for (const char* expr :
         {"(a1-a2)*z[1,0]", "z[0,1]", "(a1-a2)*z[1,0] - (a1-a2)*z[0,1]", "z[1,1]"}) {
        DiffOp gamma = parse_diffop(expr, pure, s);
        DiffOp wgamma = weyl_apply(gamma, gl2, s_refl);
        LocalizedClass lhs = assemble_shift(wgamma, wt, id4);
        LocalizedClass rhs = act_class(assemble_shift(gamma, t, id4));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("abelian Seidel representation") {
    SECTION("rank 1, matter {(1)}") {
        GaugeTheory T(1, {{1}});
        Space s = T.space();
        Polynomial a = Polynomial::variable(s, 0);
        auto [q1, m1] = seidel_linear_rep(T, {1}, s);
        CHECK(q1 == Coweight{1});
        CHECK(m1 == a);
        auto [q2, m2] = seidel_linear_rep(T, {-1}, s);
        CHECK(m2.is_one());
        auto [q3, m3] = seidel_linear_rep(T, {0}, s);
        CHECK(m3.is_one());
    }
    SECTION("multiplicativity through the membership witness") {
        for (int i = 0; i < 60; ++i) {
            GaugeTheory T = testing::random_theory(2, 4);
            Space s = T.space();
            auto Tp = std::make_shared<const GaugeTheory>(T);
            Coweight lam = testing::random_coweight(T.rank, 2);
            Coweight mu = testing::random_coweight(T.rank, 2);
            DiffOp prod = twisted_product(basis_element(Tp, s, lam, HbarConvention::Classical),
                                          basis_element(Tp, s, mu, HbarConvention::Classical));
            auto mem = membership(prod, HbarConvention::Classical);
            REQUIRE(mem.member);
            Coweight sum(lam.size());
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = lam[k] + mu[k];
            // Psi(b_lam * b_mu) at h = 0: quotient * Psi(b_sum).
            auto [qs, ms] = seidel_linear_rep(T, sum, s);
            Polynomial quotient =
                mem.witness.at(sum).substitute_var(s->hbar_index(), Polynomial::zero(s));
            auto [ql, ml] = seidel_linear_rep(T, lam, s);
            auto [qm, mm] = seidel_linear_rep(T, mu, s);
            CHECK(quotient * ms == ml * mm);
        }
    }
    SECTION("dual-theory identity with sign") {
        for (int i = 0; i < 60; ++i) {
            GaugeTheory T = testing::random_theory(2, 4);
            Space s = T.space();
            Coweight lam = testing::random_coweight(T.rank, 2);
            auto [q, mono] = seidel_linear_rep(T, lam, s);
            Polynomial dual = euler_S(dualize(T), lam, HbarConvention::Classical, s);
            long long exponent = 0;
            for (std::size_t j = 0; j < T.matter.size(); ++j) {
                long long p = T.matter_pairing(j, lam);
                if (p > 0) exponent += p;
            }
            Rat sign = (exponent % 2 == 0) ? 1 : -1;
            CHECK(mono == dual * sign);
        }
    }
}

TEST_CASE("noneq limit of scaled X = N operator values") {
    for (int i = 0; i < 40; ++i) {
        GaugeTheory T = testing::random_theory(2, 3);
        bool ok = true;
        for (auto& w : T.matter)
            if (std::all_of(w.begin(), w.end(), [](long long x) { return x == 0; })) ok = false;
        if (!ok || T.matter.empty()) continue;
        FixedPointModel m = FixedPointModel::from_theory(T);
        Coweight lam = testing::random_coweight(T.rank, 2);
        // c = euler times a random polynomial is in the algebra; the scaled
        // operator value has a non-equivariant limit.
        Polynomial c = euler_S(T, lam, HbarConvention::Shift1, m.space) *
                       testing::random_nonzero_polynomial(m.space, 2, 1);
        LocalizedClass val = shift_S(m, lam, LocalizedClass::unit(m));
        for (auto& v : val.values) v = v * RationalFunction(c);
        CHECK_NOTHROW(noneq_limit(m, val));
    }
}

TEST_CASE("connection commute check") {
    SECTION("consistent data: the Givental matrix on X = N") {
        GaugeTheory T(1, {{1}});
        FixedPointModel m = FixedPointModel::from_theory(T);
        Polynomial a = Polynomial::variable(m.space, 0);
        FixedPointModel::Divisor D{"a", {RationalFunction(a)}, {1}};
        OperatorMatrix prod{{NovikovSum::scalar(m.space, 1, RationalFunction(a))}};
        std::map<Coweight, OperatorMatrix> ops;
        for (long long l = -2; l <= 2; ++l) ops.emplace(Coweight{l}, shift_matrix(m, {l}));
        CHECK(connection_commute_check(m, D, prod, ops));
    }
    SECTION("zero divisor commutes with anything") {
        GaugeTheory T(1, {{1}});
        FixedPointModel m = FixedPointModel::from_theory(T);
        FixedPointModel::Divisor D{"0", {RationalFunction::zero(m.space)}, {0}};
        OperatorMatrix prod{{NovikovSum(m.space, 1)}};
        std::map<Coweight, OperatorMatrix> ops{{Coweight{1}, shift_matrix(m, {1})}};
        CHECK(connection_commute_check(m, D, prod, ops));
    }
    SECTION("identity operator commutes") {
        FixedPointModel m = tstar_p1_model();
        const auto* x = m.find_divisor("x");
        REQUIRE(x);
        OperatorMatrix prod(2, std::vector<NovikovSum>(2, NovikovSum(m.space, 4)));
        for (int k = 0; k < 2; ++k) prod[k][k].add(NExp(4, 0), x->values[k]);
        std::map<Coweight, OperatorMatrix> ops{{Coweight{0, 0}, shift_matrix(m, {0, 0})}};
        CHECK(connection_commute_check(m, *x, prod, ops));
    }
    SECTION("inconsistent pairing data is detected") {
        GaugeTheory T(1, {{1}});
        FixedPointModel m = FixedPointModel::from_theory(T);
        Polynomial a = Polynomial::variable(m.space, 0);
        FixedPointModel::Divisor D{"a", {RationalFunction(a)}, {5}}; // wrong pairing
        OperatorMatrix prod{{NovikovSum::scalar(m.space, 1, RationalFunction(a))}};
        std::map<Coweight, OperatorMatrix> ops{{Coweight{1}, shift_matrix(m, {1})}};
        CHECK_FALSE(connection_commute_check(m, D, prod, ops));
    }
    SECTION("T*P1 with the classical product matrix") {
        FixedPointModel m = tstar_p1_model();
        const auto* x = m.find_divisor("x");
        REQUIRE(x);
        OperatorMatrix prod(2, std::vector<NovikovSum>(2, NovikovSum(m.space, 4)));
        for (int k = 0; k < 2; ++k) prod[k][k].add(NExp(4, 0), x->values[k]);
        std::map<Coweight, OperatorMatrix> ops;
        for (long long a = -1; a <= 1; ++a)
            for (long long b = -1; b <= 1; ++b)
                ops.emplace(Coweight{a, b}, shift_matrix(m, {a, b}));
        CHECK(connection_commute_check(m, *x, prod, ops));
    }
}

TEST_CASE("model io validation") {
    SECTION("cocycle violations are rejected") {
        Json j = load_json_file(demo("p1_model.json"));
        j["sections"]["[1,1]"] = Json::array({Json::array({9, 0, 0, 0}), Json::array({0, 0, 0, 0})});
        CHECK_THROWS_AS(model_from_json(j), InputError);
        j["sections"]["[1,1]"] =
            Json::array({Json::array({1, 0, 1, 0}), Json::array({0, 1, 0, 1})});
        CHECK_NOTHROW(model_from_json(j));
    }
    SECTION("missing basis cocharacter rejected") {
        Json j = load_json_file(demo("p1_model.json"));
        j["sections"].erase("[0,1]");
        CHECK_THROWS_AS(model_from_json(j), InputError);
    }
}
