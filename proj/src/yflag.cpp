#include "mqg/yflag.hpp"

namespace mqg {

namespace {

Coefficient mono(std::initializer_list<std::pair<ParamSymbol, int>> factors) {
    ParamMonomial m;
    for (auto& [s, e] : factors) m = m * ParamMonomial::power(s, ExponentForm::constant(e));
    return Coefficient::from_monomial(m);
}

ParamSymbol qs(int i, int j) { return ParamSymbol::qij(i, j); }
ParamSymbol q() { return ParamSymbol::q(); }

// q^-1 * lambda, the lower-order coefficient shared by the chain relations
// (the printed u^-1(u - u^-1) with u read as q).
Coefficient qinv_lambda() {
    return coeff_mul(Coefficient::lambda(), ParamMonomial::q_power(ExponentForm::constant(-1)));
}

struct FamilyRelation {
    std::string text;
    NCPoly lhs, rhs;
};

// The six defining relation families on indices i < j < k < l, as printed.
// The rule table stores each solved for its out-of-order product.
std::vector<FamilyRelation> instantiate_relations(int n) {
    std::vector<FamilyRelation> rels;
    auto Y = [](int r, int c) { return GenSymbol::y(r, c); };
    auto word = [](std::initializer_list<GenSymbol> gs) { return NCPoly::from_word(Word(gs)); };

    for (int k = 1; k <= n; ++k)
        for (int j = 1; j < k; ++j)
            for (int i = 1; i < j; ++i) {
                // (a)  Y_kj Y_ki = (q_ij q_jk / q_ik) Y_ki Y_kj
                rels.push_back({"Y[" + std::to_string(k) + "," + std::to_string(j) + "]*Y[" +
                                    std::to_string(k) + "," + std::to_string(i) + "] (same row)",
                                word({Y(k, j), Y(k, i)}),
                                word({Y(k, i), Y(k, j)})
                                    .scaled(mono({{qs(i, j), 1}, {qs(j, k), 1}, {qs(i, k), -1}}))});
                // (b)  Y_ki Y_ji = (q_ij q_jk / q_ik) Y_ji Y_ki
                rels.push_back({"Y[" + std::to_string(k) + "," + std::to_string(i) + "]*Y[" +
                                    std::to_string(j) + "," + std::to_string(i) + "] (same column)",
                                word({Y(k, i), Y(j, i)}),
                                word({Y(j, i), Y(k, i)})
                                    .scaled(mono({{qs(i, j), 1}, {qs(j, k), 1}, {qs(i, k), -1}}))});
                // (c)  Y_kj Y_ji = (p_ij p_jk / p_ik) Y_ji Y_kj + q^-1 lam Y_ki
                rels.push_back(
                    {"Y[" + std::to_string(k) + "," + std::to_string(j) + "]*Y[" +
                         std::to_string(j) + "," + std::to_string(i) + "] (chain)",
                     word({Y(k, j), Y(j, i)}),
                     word({Y(j, i), Y(k, j)})
                             .scaled(mono({{qs(i, j), 1}, {qs(j, k), 1}, {qs(i, k), -1}, {q(), -2}})) +
                         word({Y(k, i)}).scaled(qinv_lambda())});
            }

    for (int l = 1; l <= n; ++l)
        for (int k = 1; k < l; ++k)
            for (int j = 1; j < k; ++j)
                for (int i = 1; i < j; ++i) {
                    // (d)  Y_li Y_kj = (q_ik q_kl / (q_ij q_jl)) Y_kj Y_li
                    rels.push_back(
                        {"Y[" + std::to_string(l) + "," + std::to_string(i) + "]*Y[" +
                             std::to_string(k) + "," + std::to_string(j) + "] (disjoint, nested)",
                         word({Y(l, i), Y(k, j)}),
                         word({Y(k, j), Y(l, i)})
                             .scaled(mono({{qs(i, k), 1}, {qs(k, l), 1}, {qs(i, j), -1}, {qs(j, l), -1}}))});
                    // (e)  (q_jl/(q_jk q_kl)) Y_lj Y_ki
                    //        = (p_ij p_jl / p_il) Y_ki Y_lj + q^-1 lam Y_kj Y_li
                    rels.push_back(
                        {"Y[" + std::to_string(l) + "," + std::to_string(j) + "]*Y[" +
                             std::to_string(k) + "," + std::to_string(i) + "] (interleaved)",
                         word({Y(l, j), Y(k, i)})
                             .scaled(mono({{qs(j, l), 1}, {qs(j, k), -1}, {qs(k, l), -1}})),
                         word({Y(k, i), Y(l, j)})
                                 .scaled(mono({{qs(i, j), 1}, {qs(j, l), 1}, {qs(i, l), -1}, {q(), -2}})) +
                             word({Y(k, j), Y(l, i)}).scaled(qinv_lambda())});
                    // (f)  Y_lk Y_ji = (q_ik q_jl / (q_il q_jk)) Y_ji Y_lk
                    rels.push_back(
                        {"Y[" + std::to_string(l) + "," + std::to_string(k) + "]*Y[" +
                             std::to_string(j) + "," + std::to_string(i) + "] (disjoint, stacked)",
                         word({Y(l, k), Y(j, i)}),
                         word({Y(j, i), Y(l, k)})
                             .scaled(mono({{qs(i, k), 1}, {qs(j, l), 1}, {qs(i, l), -1}, {qs(j, k), -1}}))});
                }
    return rels;
}

NCPoly substituted(const NCPoly& p, const ParamSubstitution& subst) {
    if (subst.empty()) return p;
    NCPoly out;
    for (auto& [w, c] : p.terms) out.add_term(w, substitute_params(c, subst));
    return out;
}

}  // namespace

ParamSubstitution split_substitution_n3() {
    ParamMonomial repl = ParamMonomial::q_power(ExponentForm::constant(2)) *
                         ParamMonomial::power(ParamSymbol::qij(1, 3), ExponentForm::constant(-1));
    return {{ParamSymbol::qij(1, 2), repl}, {ParamSymbol::qij(2, 3), repl}};
}

ParamSubstitution one_param_substitution(int n) {
    ParamSubstitution s;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            s[ParamSymbol::qij(i, j)] = ParamMonomial::q_power(ExponentForm::constant(1));
    return s;
}

FlagAlgebra build_flag_algebra(int n, bool split) {
    if (n < 2) throw RankTooSmallError("build_flag_algebra: rank must be >= 2");
    if (split && n != 3) throw SplitUndefinedError();

    FlagAlgebra f;
    f.n = n;
    f.split = split;
    if (split) f.subst = split_substitution_n3();
    f.alg.n = n;
    f.alg.name = "Y(" + std::to_string(n) + (split ? ",split)" : ")");
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j < i; ++j) f.alg.alphabet.push_back(GenSymbol::y(i, j));
    std::sort(f.alg.alphabet.begin(), f.alg.alphabet.end());

    // Orient each relation family for its out-of-order product.  Every
    // printed coefficient is an invertible monomial, so solving for the
    // left-hand product is exact.
    for (auto& rel : instantiate_relations(n)) {
        // lhs is mu * [hi, lo]; rhs is the normal-ordered side.
        if (rel.lhs.terms.size() != 1) throw std::logic_error("flag relation lhs not a single word");
        auto& [lw, lc] = *rel.lhs.terms.begin();
        auto inv = coeff_div_exact(Coefficient::one(), lc);
        if (!inv) throw std::logic_error("flag relation coefficient not invertible");
        NCPoly rhs = substituted(rel.rhs.scaled(*inv), f.subst);
        f.alg.add_rule(lw[0], lw[1], std::move(rhs));
    }
    f.alg.validate();
    return f;
}

RelationResidualReport relation_residuals(const FlagAlgebra& f) {
    RelationResidualReport report;
    for (auto& rel : instantiate_relations(f.n)) {
        NCPoly lhs = substituted(rel.lhs, f.subst);
        NCPoly rhs = substituted(rel.rhs, f.subst);
        report.entries.push_back({rel.text, normal_form(lhs - rhs, f.alg)});
    }
    return report;
}

}  // namespace mqg
