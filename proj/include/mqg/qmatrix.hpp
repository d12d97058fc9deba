#pragma once

#include "mqg/ncpoly.hpp"

namespace mqg {

struct BadIndexSetError : std::runtime_error {
    explicit BadIndexSetError(const std::string& what) : std::runtime_error(what) {}
};

// Strictly increasing row/column index sets of equal size.
struct IndexSet {
    std::vector<int> rows, cols;
    IndexSet(std::vector<int> r, std::vector<int> c, int n);
    std::size_t size() const { return rows.size(); }
};

// Quantum matrix algebra on a_ij with the four oriented commutation families.
struct MatrixAlgebra {
    int n = 0;
    PresetAlgebra alg;
};

MatrixAlgebra build_matrix_algebra(int n);

// Quantum minor: the signed permutation sum with classical signs, columns
// permuted, so that minor({1..m},{1..m}) reproduces the principal quantum
// determinant term by term.
NCPoly minor(const IndexSet& idx, const MatrixAlgebra& m, bool normalize = false);

// Principal quantum determinant of the upper-left m x m block; qdet(0) = 1.
NCPoly qdet(int m, const MatrixAlgebra& alg);

struct CoproductReport {
    struct Entry {
        std::string relation;
        NCPoly residual;       // in the tensor-square algebra
        Coefficient counit_residual;
    };
    std::vector<Entry> relations;
    struct WordCheck {
        Word word;
        bool ok = false;
    };
    std::vector<WordCheck> homomorphism_checks;  // delta(NF(w)) vs NF(delta(w))
    bool passed() const {
        for (auto& e : relations)
            if (!e.residual.is_zero() || !e.counit_residual.is_zero()) return false;
        for (auto& w : homomorphism_checks)
            if (!w.ok) return false;
        return true;
    }
};

// Substitutes the comultiplication into every defining relation inside the
// tensor-square algebra and reduces; also checks the counit on each relation
// and, up to the given degree, that comultiplication commutes with reduction
// on sample words.
CoproductReport coproduct_check(int n, int deg, bool parallel = true);

// Two commuting copies of the matrix algebra; the comultiplication check
// reduces inside this algebra.
PresetAlgebra tensor_square_algebra(int n);

// Per generator g: scalar mu with NF(x g) = mu NF(g x), or absent.
std::map<GenSymbol, std::optional<Coefficient>> commutation_profile(const NCPoly& x,
                                                                    const MatrixAlgebra& alg);

struct GaussReport {
    NCPoly residual_a21;       // must be zero
    NCPoly residual_a22;       // reported verbatim
    bool a22_classical_zero = false;
};

// Denominator-cleared Gauss decomposition probe at rank 2.
GaussReport gauss_residual_n2();

}  // namespace mqg
