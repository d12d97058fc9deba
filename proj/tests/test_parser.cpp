#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mqg/parser.hpp"
#include "mqg/qmatrix.hpp"
#include "mqg/yflag.hpp"

using namespace mqg;

TEST_CASE("words and products") {
    FlagAlgebra f = build_flag_algebra(3);
    NCPoly p = parse_expr("Y[3,2]*Y[2,1]", f.alg);
    CHECK(p == NCPoly::from_word({GenSymbol::y(3, 2), GenSymbol::y(2, 1)}));
    // juxtaposition is multiplication
    CHECK(parse_expr("Y[3,2]Y[2,1]", f.alg) == p);
    CHECK(parse_expr("Y[2,1]^3", f.alg) == NCPoly::from_word(Word(3, GenSymbol::y(2, 1))));
}

TEST_CASE("coefficient atoms") {
    MatrixAlgebra m = build_matrix_algebra(2);
    NCPoly p = parse_expr("q^(1/2)*a[1,1] - lam*a[1,2]", m.alg);
    REQUIRE(p.terms.size() == 2);
    CHECK(coeff_eq(p.terms.at({GenSymbol::a(1, 1)}),
                   Coefficient::from_monomial(ParamMonomial::q_power(ExponentForm::half_constant(1)))));
    CHECK(coeff_eq(p.terms.at({GenSymbol::a(1, 2)}), coeff_neg(Coefficient::lambda())));
}

TEST_CASE("generator validation against the context") {
    FlagAlgebra f = build_flag_algebra(3);
    CHECK_THROWS_AS(parse_expr("Y[2,3]", f.alg), UnknownGeneratorError);
    CHECK_THROWS_AS(parse_expr("a[1,1]", f.alg), UnknownGeneratorError);
    CHECK_THROWS_AS(parse_expr("Y[2,1]^-1", f.alg), NegativeGeneratorPowerError);
}

TEST_CASE("syntax errors carry positions") {
    FlagAlgebra f = build_flag_algebra(3);
    CHECK_THROWS_AS(parse_expr("Y[3,2]*", f.alg), SyntaxError);
    CHECK_THROWS_AS(parse_expr("(q + ", f.alg), SyntaxError);
    CHECK_THROWS_AS(parse_expr("w", f.alg), SyntaxError);
    try {
        parse_expr("q ^^ 2", f.alg);
        CHECK(false);
    } catch (const SyntaxError& e) {
        CHECK(e.position >= 2);
    }
}

TEST_CASE("scalar syntax") {
    Coefficient c = parse_coefficient("q13^(1/2)*q13^(1/2)");
    CHECK(coeff_eq(c, Coefficient::from_monomial(
                          ParamMonomial::power(ParamSymbol::qij(1, 3), ExponentForm::constant(1)))));
    // z1 is q^{r_1}
    CHECK(coeff_eq(parse_coefficient("z1"),
                   Coefficient::from_monomial(ParamMonomial::q_power(ExponentForm::label(1)))));
    CHECK(coeff_eq(parse_coefficient("q^(r1)"), parse_coefficient("z1")));
    // lam^-1 builds the bracket denominator
    CHECK(coeff_eq(parse_coefficient("(q^2 - q^-2)*lam^-1"), qbracket(ExponentForm::constant(2))));
    CHECK(coeff_eq(parse_coefficient("3/2*q^(1/2 - r1)*q13^2"),
                   Coefficient::from_monomial(
                       ParamMonomial::q_power(ExponentForm::half_constant(1) - ExponentForm::label(1)) *
                           ParamMonomial::power(ParamSymbol::qij(1, 3), ExponentForm::constant(2)),
                       Rational(3, 2))));
    CHECK_THROWS_AS(parse_coefficient("q^(1/3)"), SyntaxError);
    CHECK_THROWS_AS(parse_coefficient("Y[2,1]"), SyntaxError);
}

TEST_CASE("print then parse round-trips") {
    FlagAlgebra f = build_flag_algebra(3);
    std::uint64_t s = 314;
    for (int t = 0; t < 25; ++t) {
        Word w(1 + splitmix64(s) % 4);
        for (auto& g : w) g = f.alg.alphabet[splitmix64(s) % f.alg.alphabet.size()];
        NCPoly nf = normal_form(NCPoly::from_word(w), f.alg);
        NCPoly reparsed = parse_expr(nf.to_string(), f.alg);
        REQUIRE(reparsed.terms.size() == nf.terms.size());
        auto it = nf.terms.begin();
        auto jt = reparsed.terms.begin();
        for (; it != nf.terms.end(); ++it, ++jt) {
            CHECK(it->first == jt->first);
            CHECK(coeff_eq(it->second, jt->second));
        }
    }
    // coefficients with brackets and symbolic weights
    for (auto c : {qbracket(ExponentForm::constant(3) - ExponentForm::label(1)),
                   coeff_mul(qbracket(ExponentForm::label(2)),
                             Coefficient::from_monomial(
                                 ParamMonomial::power(ParamSymbol::qij(1, 2),
                                                      ExponentForm::half_constant(-3)),
                                 Rational(-5, 3)))}) {
        CHECK(coeff_eq(parse_coefficient(c.to_string()), c));
    }
}
