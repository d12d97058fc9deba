#include "mqg/qmatrix.hpp"

#include <algorithm>
#include <numeric>

#include "mqg/parallel.hpp"
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

// Oriented rewrite of the out-of-order product g1*g2 (rows r1,r2, cols
// c1,c2 with (r1,c1) > (r2,c2) row-major).  Four cases:
//   same row:     a_ic1 a_ic2 with c1 > c2
//   same column:  a_r1j a_r2j with r1 > r2
//   r1 > r2, c1 < c2: pure q-commutation
//   r1 > r2, c1 > c2: q-commutation plus the lambda cross term
NCPoly matrix_rule_rhs(GenSymbol g1, GenSymbol g2, GenFamily fam) {
    const int r1 = g1.row, c1 = g1.col, r2 = g2.row, c2 = g2.col;
    auto gen = [fam](int r, int c) { return GenSymbol{fam, r, c}; };
    auto word2 = [&](GenSymbol a, GenSymbol b) { return NCPoly::from_word({a, b}); };
    if (r1 == r2) {
        return word2(g2, g1).scaled(mono({{q(), 2}, {qs(c2, c1), -1}}));
    }
    if (c1 == c2) {
        return word2(g2, g1).scaled(mono({{qs(r2, r1), 1}}));
    }
    if (c1 < c2) {
        return word2(gen(r2, c2), gen(r1, c1)).scaled(mono({{qs(r2, r1), 1}, {qs(c1, c2), 1}, {q(), -2}}));
    }
    NCPoly out = word2(gen(r2, c2), gen(r1, c1)).scaled(mono({{qs(r2, r1), 1}, {qs(c2, c1), -1}}));
    Coefficient cross = coeff_mul(Coefficient::lambda(), mono({{qs(r2, r1), 1}, {q(), -1}}));
    return out + word2(gen(r2, c1), gen(r1, c2)).scaled(cross);
}

PresetAlgebra build_matrix_preset(int n, GenFamily fam, std::string name) {
    PresetAlgebra alg;
    alg.n = n;
    alg.name = std::move(name);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) alg.alphabet.push_back(GenSymbol{fam, i, j});
    std::sort(alg.alphabet.begin(), alg.alphabet.end());
    for (std::size_t a = 0; a < alg.alphabet.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            alg.add_rule(alg.alphabet[a], alg.alphabet[b],
                         matrix_rule_rhs(alg.alphabet[a], alg.alphabet[b], fam));
    return alg;
}

}  // namespace

MatrixAlgebra build_matrix_algebra(int n) {
    if (n < 2) throw RankTooSmallError("build_matrix_algebra: rank must be >= 2");
    MatrixAlgebra m;
    m.n = n;
    m.alg = build_matrix_preset(n, GenFamily::A, "A(" + std::to_string(n) + ")");
    m.alg.validate();
    return m;
}

IndexSet::IndexSet(std::vector<int> r, std::vector<int> c, int n) : rows(std::move(r)), cols(std::move(c)) {
    if (rows.size() != cols.size()) throw BadIndexSetError("row and column sets differ in size");
    if (rows.empty()) throw BadIndexSetError("empty index set");
    auto check = [n](const std::vector<int>& v, const char* which) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 1 || v[i] > n) throw BadIndexSetError(std::string(which) + " index out of range");
            if (i > 0 && v[i] <= v[i - 1])
                throw BadIndexSetError(std::string(which) + " indices must strictly increase");
        }
    };
    check(rows, "row");
    check(cols, "column");
}

NCPoly minor(const IndexSet& idx, const MatrixAlgebra& m, bool normalize) {
    const std::size_t r = idx.size();
    std::vector<std::size_t> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    NCPoly out;
    do {
        // classical sign of the permutation
        int sign = 1;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                if (perm[a] > perm[b]) sign = -sign;
        Word w;
        w.reserve(r);
        for (std::size_t t = 0; t < r; ++t) w.push_back(GenSymbol::a(idx.rows[t], idx.cols[perm[t]]));
        out.add_term(w, Coefficient::from_rational(Rational(sign)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return normalize ? normal_form(out, m.alg) : out;
}

NCPoly qdet(int m, const MatrixAlgebra& alg) {
    if (m < 0 || m > alg.n) throw BadIndexSetError("qdet: order out of range");
    if (m == 0) return NCPoly::unit();
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 1);
    return minor(IndexSet(idx, idx, alg.n), alg);
}

namespace {

PresetAlgebra build_tensor_square(int n) {
    PresetAlgebra alg = build_matrix_preset(n, GenFamily::A, "A(" + std::to_string(n) + ")^2");
    PresetAlgebra copy2 = build_matrix_preset(n, GenFamily::A2, "-");
    alg.alphabet.insert(alg.alphabet.end(), copy2.alphabet.begin(), copy2.alphabet.end());
    std::sort(alg.alphabet.begin(), alg.alphabet.end());
    for (auto& [k, rule] : copy2.rules) alg.rules.emplace(k, rule);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l)
                    alg.add_rule(GenSymbol::a2(i, j), GenSymbol::a(k, l),
                                 NCPoly::from_word({GenSymbol::a(k, l), GenSymbol::a2(i, j)}));
    alg.validate();
    return alg;
}

// delta(a_ij) = sum_k a_ik (x) a_kj, as a polynomial in the tensor square.
NCPoly coproduct_of(GenSymbol g, int n) {
    NCPoly out;
    for (int k = 1; k <= n; ++k)
        out.add_term({GenSymbol::a(g.row, k), GenSymbol::a2(k, g.col)}, Coefficient::one());
    return out;
}

NCPoly coproduct_of_poly(const NCPoly& p, int n) {
    NCPoly out;
    for (auto& [w, c] : p.terms) {
        NCPoly img = NCPoly::unit();
        for (auto g : w) img = img * coproduct_of(g, n);
        out = out + img.scaled(c);
    }
    return out;
}

Coefficient counit_of_poly(const NCPoly& p) {
    Coefficient total;
    for (auto& [w, c] : p.terms) {
        bool diag = true;
        for (auto g : w)
            if (g.row != g.col) { diag = false; break; }
        if (diag) total = coeff_add(total, c);
    }
    return total;
}

}  // namespace

PresetAlgebra tensor_square_algebra(int n) {
    if (n < 2) throw RankTooSmallError("tensor_square_algebra: rank must be >= 2");
    return build_tensor_square(n);
}

CoproductReport coproduct_check(int n, int deg, bool parallel) {
    if (n < 2) throw RankTooSmallError("coproduct_check: rank must be >= 2");
    MatrixAlgebra m = build_matrix_algebra(n);
    PresetAlgebra tensor = build_tensor_square(n);

    // One relation per out-of-order generator pair: hi*lo - rhs.
    struct Rel {
        std::string text;
        NCPoly poly;
    };
    std::vector<Rel> rels;
    for (auto& [key, rule] : m.alg.rules) {
        NCPoly rel = NCPoly::from_word({rule.hi, rule.lo}) - rule.rhs;
        rels.push_back({rule.hi.to_string() + "*" + rule.lo.to_string(), std::move(rel)});
    }

    CoproductReport report;
    report.relations.resize(rels.size());
    run_indexed_tasks(
        rels.size(),
        [&](std::size_t t) {
            report.relations[t].relation = rels[t].text;
            report.relations[t].residual = normal_form(coproduct_of_poly(rels[t].poly, n), tensor);
            report.relations[t].counit_residual = counit_of_poly(rels[t].poly);
        },
        parallel);

    // delta is an algebra map; check it also commutes with reduction on
    // short words.
    if (deg >= 2) {
        std::vector<Word> words;
        std::uint64_t s = 0x8114'2026'7ab1'cafeULL + n;
        const int samples = 24;
        for (int t = 0; t < samples; ++t) {
            Word w(2 + splitmix64(s) % static_cast<std::uint64_t>(std::max(1, deg - 1)));
            for (auto& g : w) g = m.alg.alphabet[splitmix64(s) % m.alg.alphabet.size()];
            words.push_back(std::move(w));
        }
        report.homomorphism_checks.resize(words.size());
        run_indexed_tasks(
            words.size(),
            [&](std::size_t t) {
                NCPoly lhs = normal_form(coproduct_of_poly(NCPoly::from_word(words[t]), n), tensor);
                NCPoly rhs = normal_form(
                    coproduct_of_poly(normal_form(NCPoly::from_word(words[t]), m.alg), n), tensor);
                report.homomorphism_checks[t] = {words[t], lhs == rhs};
            },
            parallel);
    }
    return report;
}

std::map<GenSymbol, std::optional<Coefficient>> commutation_profile(const NCPoly& x,
                                                                    const MatrixAlgebra& alg) {
    std::map<GenSymbol, std::optional<Coefficient>> out;
    for (auto g : alg.alg.alphabet) out[g] = q_factor(x, NCPoly::from_letter(g), alg.alg);
    return out;
}

GaussReport gauss_residual_n2() {
    MatrixAlgebra m = build_matrix_algebra(2);
    auto a = [](int i, int j) { return GenSymbol::a(i, j); };

    GaussReport report;
    // a21 = Y21 D11 with Y21 = a21 a11^-1 and D11 = a11; cleared on the
    // right by cd1 = a11, the inverse cancels and both sides read a21 a11.
    NCPoly lhs21 = NCPoly::from_word({a(2, 1), a(1, 1)});
    report.residual_a21 = normal_form(lhs21 - lhs21, m.alg);

    // a22 = a21 a11^-1 a12 + cd2 a11^-1.  Multiplying by a11 on the right
    // and commuting a12 past a11 (same-row rule) clears the inverses:
    //   a22 a11 = (q^2/q12) a21 a12 + cd2.
    Coefficient comm = mono({{q(), 2}, {qs(1, 2), -1}});
    NCPoly candidate =
        NCPoly::from_word({a(2, 1), a(1, 2)}).scaled(comm) + qdet(2, m);
    report.residual_a22 = normal_form(NCPoly::from_word({a(2, 2), a(1, 1)}) - candidate, m.alg);

    // classical point: every coefficient of the residual vanishes at 1
    report.a22_classical_zero = true;
    std::map<ParamSymbol, Rational> ones{{ParamSymbol::q(), 1}, {ParamSymbol::qij(1, 2), 1}};
    for (auto& [w, c] : report.residual_a22.terms) {
        if (specialize(c, ones, {}) != 0) report.a22_classical_zero = false;
    }
    return report;
}

}  // namespace mqg
