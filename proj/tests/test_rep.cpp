#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqg/rep.hpp"

using namespace mqg;

namespace {

Coefficient mono(std::initializer_list<std::pair<ParamSymbol, int>> factors) {
    ParamMonomial m;
    for (auto& [s, e] : factors) m = m * ParamMonomial::power(s, ExponentForm::constant(e));
    return Coefficient::from_monomial(m);
}

ParamSymbol Q12() { return ParamSymbol::qij(1, 2); }
ParamSymbol Q13() { return ParamSymbol::qij(1, 3); }
ParamSymbol Q23() { return ParamSymbol::qij(2, 3); }

ExponentForm r1() { return ExponentForm::label(1); }
ExponentForm r2() { return ExponentForm::label(2); }

BasisVector vec3(int j, int n, int l) { return BasisVector{{j, n, l}, symbolic_weights(3)}; }

ModuleElement one_term(int j, int n, int l, const Coefficient& c) {
    ModuleElement e = ModuleElement::zero(3, symbolic_weights(3));
    e.add_term({j, n, l}, c);
    return e;
}

}  // namespace

TEST_CASE("generator action names round-trip") {
    for (const char* name : {"K1", "Kinv2", "X+1", "X-2", "P1", "Pinv2", "Q2", "Qinv1"}) {
        CHECK(GeneratorAction::parse(name).to_string() == name);
    }
    CHECK_THROWS_AS(GeneratorAction::parse("Z3"), BadGeneratorError);
}

TEST_CASE("single power actions, diagonal family") {
    // K_1 (Y_21)^k = q^k (Y_21)^k
    for (int k : {1, 2, 5}) {
        NCPoly img = act_power({ActionKind::K, 1}, GenSymbol::y(2, 1), k, 3);
        REQUIRE(img.terms.size() == 1);
        CHECK(coeff_eq(img.terms.begin()->second,
                       Coefficient::from_monomial(ParamMonomial::q_power(ExponentForm::constant(k)))));
    }
    // action on the unit
    CHECK(act_power({ActionKind::K, 1}, GenSymbol::y(2, 1), 0, 3) == NCPoly::unit());
    CHECK(act_power({ActionKind::Xplus, 1}, GenSymbol::y(2, 1), 0, 3).is_zero());
    // inverses really invert
    for (auto kind : {ActionKind::K, ActionKind::Phalf, ActionKind::Qhalf}) {
        auto inv_kind = kind == ActionKind::K
                            ? ActionKind::Kinv
                            : (kind == ActionKind::Phalf ? ActionKind::Pneghalf : ActionKind::Qneghalf);
        NCPoly a = act_power({kind, 2}, GenSymbol::y(3, 1), 3, 3);
        NCPoly b = act_power({inv_kind, 2}, GenSymbol::y(3, 1), 3, 3);
        CHECK(coeff_mul(a.terms.begin()->second, b.terms.begin()->second).is_one());
    }
}

TEST_CASE("single power actions, raising and lowering") {
    // X-_1 (Y_21)^k = -q^-1 q12^-1 [k]_q (Y_21)^{k-1}
    for (int k : {1, 3}) {
        NCPoly img = act_power({ActionKind::Xminus, 1}, GenSymbol::y(2, 1), k, 3);
        REQUIRE(img.terms.size() == 1);
        CHECK(img.terms.begin()->first == Word(static_cast<std::size_t>(k - 1), GenSymbol::y(2, 1)));
        Coefficient expected =
            coeff_neg(coeff_mul(qbracket(ExponentForm::constant(k)),
                                mono({{ParamSymbol::q(), -1}, {Q12(), -1}})));
        CHECK(coeff_eq(img.terms.begin()->second, expected));
    }
    // X+_2 (Y_31)^k = 0 and X-_1 kills Y_31, Y_32
    CHECK(act_power({ActionKind::Xplus, 2}, GenSymbol::y(3, 1), 2, 3).is_zero());
    CHECK(act_power({ActionKind::Xminus, 1}, GenSymbol::y(3, 1), 2, 3).is_zero());
    CHECK(act_power({ActionKind::Xminus, 1}, GenSymbol::y(3, 2), 2, 3).is_zero());
    // X+_1 (Y_21)^k = q q12 [k]_q (Y_21)^{k+1}
    {
        NCPoly img = act_power({ActionKind::Xplus, 1}, GenSymbol::y(2, 1), 2, 3);
        REQUIRE(img.terms.size() == 1);
        CHECK(img.terms.begin()->first == Word(3, GenSymbol::y(2, 1)));
        CHECK(coeff_eq(img.terms.begin()->second,
                       coeff_mul(qbracket(ExponentForm::constant(2)),
                                 mono({{ParamSymbol::q(), 1}, {Q12(), 1}}))));
    }
    // X-_2 (Y_32)^k = -q^-1 q23^-1 [k]_q (Y_32)^{k-1}: the adjacent letter drops out
    {
        NCPoly img = act_power({ActionKind::Xminus, 2}, GenSymbol::y(3, 2), 2, 3);
        REQUIRE(img.terms.size() == 1);
        CHECK(img.terms.begin()->first == Word(1, GenSymbol::y(3, 2)));
        CHECK(coeff_eq(img.terms.begin()->second,
                       coeff_neg(coeff_mul(qbracket(ExponentForm::constant(2)),
                                           mono({{ParamSymbol::q(), -1}, {Q23(), -1}})))));
    }
    // X-_2 (Y_31)^k: forced by the defining relations to carry q23^{(k-2)/2}
    {
        NCPoly img = act_power({ActionKind::Xminus, 2}, GenSymbol::y(3, 1), 1, 3);
        REQUIRE(img.terms.size() == 1);
        CHECK(img.terms.begin()->first == Word{GenSymbol::y(2, 1)});
        Coefficient expected = coeff_neg(Coefficient::from_monomial(
            ParamMonomial::q_power(ExponentForm::constant(-1)) *
            ParamMonomial::power(Q12(), ExponentForm::half_constant(1)) *
            ParamMonomial::power(Q13(), ExponentForm::half_constant(-1)) *
            ParamMonomial::power(Q23(), ExponentForm::half_constant(-1))));
        CHECK(coeff_eq(img.terms.begin()->second, expected));
    }
}

TEST_CASE("determinant tail actions") {
    // X- kills the tail
    CHECK(act_dpower({ActionKind::Xminus, 1}, 1, r1(), 3).scalar.is_zero());
    CHECK(act_dpower({ActionKind::Xminus, 2}, 2, r2(), 3).scalar.is_zero());
    // K_i D_j^r = q^{-r delta_ij / 2} D_j^r
    {
        auto d = act_dpower({ActionKind::K, 1}, 1, r1(), 3);
        CHECK(coeff_eq(d.scalar, Coefficient::from_monomial(ParamMonomial::q_power((-r1()).halved()))));
        CHECK(!d.emitted.has_value());
        CHECK(act_dpower({ActionKind::K, 2}, 1, r1(), 3).scalar.is_one());
    }
    // P_1^{1/2} D_1^{r_1} = (q^2/q12)^{-r_1/2} D_1^{r_1}
    {
        auto d = act_dpower({ActionKind::Phalf, 1}, 1, r1(), 3);
        Coefficient expected = Coefficient::from_monomial(
            ParamMonomial::q_power(-r1()) * ParamMonomial::power(Q12(), r1().halved()));
        CHECK(coeff_eq(d.scalar, expected));
    }
    // X+_1 D_1^{r_1} = -q q12^{1 - r_1/2} [r_1]_q Y_21 D_1^{r_1}
    {
        auto d = act_dpower({ActionKind::Xplus, 1}, 1, r1(), 3);
        REQUIRE(d.emitted.has_value());
        CHECK(*d.emitted == GenSymbol::y(2, 1));
        Coefficient expected = coeff_neg(coeff_mul(
            qbracket(r1()),
            ParamMonomial::q_power(ExponentForm::constant(1)) *
                ParamMonomial::power(Q12(), ExponentForm::constant(1) - r1().halved())));
        CHECK(coeff_eq(d.scalar, expected));
        CHECK(act_dpower({ActionKind::Xplus, 1}, 2, r2(), 3).scalar.is_zero());
    }
}

TEST_CASE("module action at the origin") {
    FlagAlgebra f = build_flag_algebra(3);
    ModuleElement v000 = ModuleElement::basis(vec3(0, 0, 0), 3);
    // K_1 v = q^{-r_1/2} v
    {
        ModuleElement got = act({ActionKind::K, 1}, v000, f);
        CHECK(got.equals(one_term(0, 0, 0, Coefficient::from_monomial(
                                               ParamMonomial::q_power((-r1()).halved())))));
    }
    // X-_i v = 0
    CHECK(act({ActionKind::Xminus, 1}, v000, f).is_zero());
    CHECK(act({ActionKind::Xminus, 2}, v000, f).is_zero());
    // X+_1 v_000 = -q^{1+r_2} q12^{1 - r_1/2 - r_2} [r_1]_q v_100
    {
        ModuleElement got = act({ActionKind::Xplus, 1}, v000, f);
        Coefficient expected = coeff_neg(coeff_mul(
            qbracket(r1()), ParamMonomial::q_power(ExponentForm::constant(1) + r2()) *
                                ParamMonomial::power(
                                    Q12(), ExponentForm::constant(1) - r1().halved() - r2())));
        CHECK(got.equals(one_term(1, 0, 0, expected)));
    }
    // X+_2 v_000 = -q (q12/q13)^{(r_2-r_1)/2} q23^{1 - r_2/2} [r_2]_q v_001
    {
        ModuleElement got = act({ActionKind::Xplus, 2}, v000, f);
        ExponentForm half_diff = (r2() - r1()).halved();
        Coefficient expected = coeff_neg(coeff_mul(
            qbracket(r2()),
            ParamMonomial::q_power(ExponentForm::constant(1)) *
                ParamMonomial::power(Q12(), half_diff) * ParamMonomial::power(Q13(), -half_diff) *
                ParamMonomial::power(Q23(), ExponentForm::constant(1) - r2().halved())));
        CHECK(got.equals(one_term(0, 0, 1, expected)));
    }
}

TEST_CASE("closed-form table at rank 3") {
    CHECK_THROWS_AS(act_closed3({ActionKind::K, 1}, BasisVector{{0, 0}, symbolic_weights(3)}),
                    RankNot3Error);
    // K_2 v_jnl = q^{l + (n-j-r_2)/2} v_jnl
    {
        ModuleElement got = act_closed3({ActionKind::K, 2}, vec3(1, 2, 3));
        ExponentForm e = ExponentForm::half_constant(2 * 3 + 2 - 1) - r2().halved();
        CHECK(got.equals(one_term(1, 2, 3, Coefficient::from_monomial(ParamMonomial::q_power(e)))));
    }
    // X-_1 v_jnl = -(q^{l+1}/q12) (q13/(q12 q23))^{(l+n)/2} [j]_q v_{j-1,n,l}
    {
        ModuleElement got = act_closed3({ActionKind::Xminus, 1}, vec3(2, 1, 1));
        Coefficient expected = coeff_neg(coeff_mul(
            qbracket(ExponentForm::constant(2)),
            ParamMonomial::q_power(ExponentForm::constant(2)) *
                ParamMonomial::power(Q12(), ExponentForm::constant(-2)) *
                ParamMonomial::power(Q13(), ExponentForm::constant(1)) *
                ParamMonomial::power(Q23(), ExponentForm::constant(-1))));
        CHECK(got.equals(one_term(1, 1, 1, expected)));
    }
    // X+_1 v_000 = q12 [-r_1]_q v_100
    {
        ModuleElement got = act_closed3({ActionKind::Xplus, 1}, vec3(0, 0, 0));
        Coefficient expected = coeff_mul(qbracket(-r1()), mono({{Q12(), 1}}));
        CHECK(got.equals(one_term(1, 0, 0, expected)));
    }
    // X+_2 v_000 = q23 [r_2]_q v_001
    {
        ModuleElement got = act_closed3({ActionKind::Xplus, 2}, vec3(0, 0, 0));
        Coefficient expected = coeff_mul(qbracket(r2()), mono({{Q23(), 1}}));
        CHECK(got.equals(one_term(0, 0, 1, expected)));
    }
}

TEST_CASE("origin commutator value under the closed form") {
    // [X+_1, X-_1] v_000 = -q [r_1]_q v_000
    auto Xp = [](const ModuleElement& m) { return act_closed3({ActionKind::Xplus, 1}, m); };
    auto Xm = [](const ModuleElement& m) { return act_closed3({ActionKind::Xminus, 1}, m); };
    ModuleElement v = ModuleElement::basis(vec3(0, 0, 0), 3);
    ModuleElement bracket = Xp(Xm(v)) - Xm(Xp(v));
    Coefficient expected =
        coeff_neg(coeff_mul(qbracket(r1()), mono({{ParamSymbol::q(), 1}})));
    CHECK(bracket.equals(one_term(0, 0, 0, expected)));
}

TEST_CASE("weight conservation and degree bookkeeping") {
    FlagAlgebra f = build_flag_algebra(3, true);
    auto exps = enumerate_basis(3, 3);
    for (auto& e : exps) {
        ModuleElement v = ModuleElement::basis(BasisVector{e, symbolic_weights(3)}, 3);
        for (auto kind : {ActionKind::K, ActionKind::Xplus, ActionKind::Xminus, ActionKind::Phalf,
                          ActionKind::Qhalf}) {
            for (int i = 1; i <= 2; ++i) {
                ModuleElement img = act({kind, i}, v, f);
                CHECK(img.weights == v.weights);
                if (action_is_diagonal(kind)) {
                    for (auto& [e2, c] : img.terms) CHECK(e2 == e);
                }
            }
        }
    }
}

TEST_CASE("restriction commutes with the action") {
    FlagAlgebra f = build_flag_algebra(3, true);
    auto exps = enumerate_basis(3, 3);
    for (auto& e : exps) {
        ModuleElement v = ModuleElement::basis(BasisVector{e, symbolic_weights(3)}, 3);
        ModuleElement r = restrict_element(v);
        CHECK(restrict_element(r).restricted);
        for (auto kind : {ActionKind::K, ActionKind::Xplus, ActionKind::Xminus}) {
            for (int i = 1; i <= 2; ++i) {
                ModuleElement lhs = act({kind, i}, r, f);
                ModuleElement rhs = restrict_element(act({kind, i}, v, f));
                CHECK(lhs.restricted == rhs.restricted);
                CHECK(lhs.equals(rhs));
            }
        }
    }
}

TEST_CASE("well-definedness across the defining relations") {
    CHECK(well_definedness(3, 3, false).fails == 0);
    CHECK(well_definedness(4, 2, false).fails == 0);
}

TEST_CASE("the X-_2 value on Y_31 is forced by the chain relation") {
    // Apply the twisted derivation for X-_2 to both sides of
    //   Y32 Y21 = (A/q^2) Y21 Y32 + q^-1 lam Y31,   A = q12 q23 / q13,
    // leaving the single-letter value X-_2(Y31) = c * Y21 open.  Matching the
    // two sides forces c = -q^-1 (q12/(q13 q23))^{1/2}; the value with
    // (q12 q23/q13)^{1/2} instead (as the rank-3 display prints it) does not
    // descend to the quotient.
    GeneratorAction xm{ActionKind::Xminus, 2};
    GeneratorAction qh{ActionKind::Qhalf, 2}, qnh{ActionKind::Qneghalf, 2};
    auto eigen = [&](const GeneratorAction& g, GenSymbol y) {
        NCPoly p = act_power(g, y, 1, 3);
        REQUIRE(p.terms.size() == 1);
        return p.terms.begin()->second;
    };
    GenSymbol y21 = GenSymbol::y(2, 1), y31 = GenSymbol::y(3, 1), y32 = GenSymbol::y(3, 2);
    Coefficient A = mono({{Q12(), 1}, {Q23(), 1}, {Q13(), -1}});
    Coefficient xm_y32 = act_power(xm, y32, 1, 3).terms.begin()->second;  // scalar, the letter drops

    // image of the left side
    auto lhs_image = [&]() {
        return coeff_mul(xm_y32, eigen(qnh, y21));  // X-(Y32) Qinv(Y21) + Q(Y32) X-(Y21 -> 0)
    };
    // image of the right side, with the Y31 letter value c left open
    auto rhs_image = [&](const Coefficient& c) {
        Coefficient first = coeff_mul(coeff_mul(A, mono({{ParamSymbol::q(), -2}})),
                                      coeff_mul(eigen(qh, y21), xm_y32));
        Coefficient second = coeff_mul(coeff_mul(Coefficient::lambda(), mono({{ParamSymbol::q(), -1}})), c);
        return coeff_add(first, second);
    };

    Coefficient engine_c = act_power(xm, y31, 1, 3).terms.begin()->second;
    CHECK(coeff_eq(lhs_image(), rhs_image(engine_c)));

    Coefficient printed_c = coeff_neg(Coefficient::from_monomial(
        ParamMonomial::q_power(ExponentForm::constant(-1)) *
        ParamMonomial::power(Q12(), ExponentForm::half_constant(1)) *
        ParamMonomial::power(Q23(), ExponentForm::half_constant(1)) *
        ParamMonomial::power(Q13(), ExponentForm::half_constant(-1))));
    CHECK(!coeff_eq(lhs_image(), rhs_image(printed_c)));
}

TEST_CASE("verification suite, closed form") {
    // The closed-form table is transcribed exactly as printed.  Its i = 1
    // ladder behaves, and the commutator normalization comes out as mu = q;
    // the i = 2 ladder is internally inconsistent (the mixed bracket and the
    // [X+_2, X-_2] diagonality fail, and the Serre residuals are nonzero).
    // The derivation engine passes all of these; see the neighboring case.
    RepVerifyReport r = verify_relations(3, 3, true, true, false);
    CHECK(r.fails == 2);
    int mixed_fail = 0, diag2_fail = 0;
    for (auto& c : r.checks) {
        if (c.status != "fail") continue;
        if (c.name == "mixed raising/lowering brackets vanish") ++mixed_fail;
        if (c.name == "bracket [X+_2, X-_2] diagonal") ++diag2_fail;
    }
    CHECK(mixed_fail == 1);
    CHECK(diag2_fail == 1);
    REQUIRE(r.bracket_mu.count(1));
    // the discovered normalization reproduces the hand value at the origin
    CHECK(coeff_eq(r.bracket_mu.at(1), mono({{ParamSymbol::q(), 1}})));
    CHECK(!r.serre_all_zero);
}

TEST_CASE("verification suite, derivation engine") {
    RepVerifyReport r = verify_relations(3, 3, false, true, false);
    CHECK(r.fails == 0);
    CHECK(r.serre_all_zero);
}

TEST_CASE("verification suite, derivation engine at rank 4") {
    RepVerifyReport r = verify_relations(4, 2, false, false, true);
    CHECK(r.fails == 0);
    CHECK(r.serre_all_zero);
}

TEST_CASE("phase comparison between the two engines") {
    FlagAlgebra f = build_flag_algebra(3, true);
    auto exps = enumerate_basis(3, 2);
    std::vector<BasisVector> basis;
    for (auto& e : exps) basis.push_back({e, symbolic_weights(3)});
    auto compare = [&](ActionKind kind, int i) {
        GeneratorAction g{kind, i};
        return compare_up_to_phase(
            [&f, g](const ModuleElement& v) { return act(g, v, f); },
            [g](const ModuleElement& v) { return act_closed3(g, v, true); }, basis, 3);
    };
    // diagonal operators agree exactly
    for (auto kind : {ActionKind::K, ActionKind::Kinv, ActionKind::Phalf, ActionKind::Pneghalf,
                      ActionKind::Qhalf, ActionKind::Qneghalf}) {
        for (int i = 1; i <= 2; ++i) {
            auto pc = compare(kind, i);
            REQUIRE(pc.mu.has_value());
            CHECK(pc.mu->is_one());
        }
    }
    // i = 1 ladders agree up to one fixed scalar
    for (auto kind : {ActionKind::Xplus, ActionKind::Xminus}) {
        auto pc = compare(kind, 1);
        CHECK(pc.mu.has_value());
    }
}
