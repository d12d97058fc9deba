#pragma once

#include "mqg/ncpoly.hpp"

namespace mqg {

struct SyntaxError : std::runtime_error {
    std::size_t position;
    SyntaxError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};
struct NegativeGeneratorPowerError : std::runtime_error {
    NegativeGeneratorPowerError()
        : std::runtime_error("generator powers must be nonnegative integers") {}
};

// Grammar: atoms  a[i,j] | Y[i,j] | D[m] | q | qIJ | q[i,j] | zI | lam | rational,
// operators  + - * ^ ( )  with ^ tightest, juxtaposition meaning *.
// Exponents on parameter atoms may be integers, half-integer fractions, or
// parenthesized affine forms in the weight labels (e.g. q^(1/2 - r1));
// generator atoms take nonnegative integer powers only.
NCPoly parse_expr(const std::string& src, const PresetAlgebra& context);

// Same grammar restricted to scalar atoms.
Coefficient parse_coefficient(const std::string& src);

}  // namespace mqg
