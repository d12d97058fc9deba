#pragma once

#include "mqg/ncpoly.hpp"

namespace mqg {

struct SplitUndefinedError : std::runtime_error {
    SplitUndefinedError()
        : std::runtime_error("splitting constraint is only defined for rank 3") {}
};

// Quantum flag manifold algebra on Y_ij, i > j.  Rules cover every
// out-of-order generator pair; with split set, the rank-3 constraint
// q12 = q23 = q^2/q13 is substituted into every rule coefficient.
struct FlagAlgebra {
    int n = 0;
    bool split = false;
    PresetAlgebra alg;

    // Substitution applied to rule coefficients (empty unless split).
    ParamSubstitution subst;
};

FlagAlgebra build_flag_algebra(int n, bool split = false);

// The rank-3 splitting substitution q12 -> q^2/q13, q23 -> q^2/q13.
ParamSubstitution split_substitution_n3();

// One-parameter substitution q_ij := q for all i < j at rank n.
ParamSubstitution one_param_substitution(int n);

struct RelationResidualReport {
    struct Entry {
        std::string relation;  // printed LHS = RHS
        NCPoly residual;       // NF(LHS - RHS)
    };
    std::vector<Entry> entries;
    bool all_zero() const {
        for (auto& e : entries)
            if (!e.residual.is_zero()) return false;
        return true;
    }
};

// Re-instantiates the defining relations (independently of the oriented rule
// table) and reduces LHS - RHS to normal form.
RelationResidualReport relation_residuals(const FlagAlgebra& f);

}  // namespace mqg
