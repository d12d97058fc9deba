#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqg/exponent.hpp"

namespace mqg {

using Rational = mpq_class;

struct DivisionByZeroLambda : std::runtime_error {
    DivisionByZeroLambda() : std::runtime_error("lambda evaluates to zero under a positive lambda power") {}
};
struct NonRationalRoot : std::runtime_error {
    explicit NonRationalRoot(const std::string& what) : std::runtime_error(what) {}
};

// One of the n(n-1)/2 + 1 deformation parameters: q itself, or q_ij with i < j.
struct ParamSymbol {
    int i = 0, j = 0;  // (0,0) means q

    static ParamSymbol q() { return {}; }
    static ParamSymbol qij(int i, int j) {
        if (!(0 < i && i < j)) throw std::logic_error("ParamSymbol: need 0 < i < j");
        ParamSymbol s;
        s.i = i;
        s.j = j;
        return s;
    }
    bool is_q() const { return i == 0; }
    auto operator<=>(const ParamSymbol&) const = default;
    std::string to_string() const {
        if (is_q()) return "q";
        if (j <= 9) return "q" + std::to_string(i) + std::to_string(j);
        return "q[" + std::to_string(i) + "," + std::to_string(j) + "]";
    }
};

// Invertible monomial in the parameters; exponents are affine forms in the
// weight labels.  Canonical: no zero-exponent entries.
struct ParamMonomial {
    std::map<ParamSymbol, ExponentForm> exps;

    ParamMonomial() = default;  // the unit monomial 1

    static ParamMonomial power(ParamSymbol s, const ExponentForm& e) {
        ParamMonomial m;
        if (!e.is_zero()) m.exps.emplace(s, e);
        return m;
    }
    static ParamMonomial power(ParamSymbol s, HalfInt h) { return power(s, ExponentForm(h)); }
    static ParamMonomial q_power(const ExponentForm& e) { return power(ParamSymbol::q(), e); }

    bool is_one() const { return exps.empty(); }

    ParamMonomial operator*(const ParamMonomial& o) const {
        ParamMonomial m = *this;
        for (auto& [s, e] : o.exps) {
            auto it = m.exps.find(s);
            if (it == m.exps.end()) {
                m.exps.emplace(s, e);
            } else {
                auto sum = it->second + e;
                if (sum.is_zero())
                    m.exps.erase(it);
                else
                    it->second = sum;
            }
        }
        return m;
    }
    ParamMonomial inverse() const {
        ParamMonomial m;
        for (auto& [s, e] : exps) m.exps.emplace(s, -e);
        return m;
    }
    ParamMonomial pow_halfint(HalfInt h) const;  // raise to a half-integer power

    auto operator<=>(const ParamMonomial&) const = default;
    std::string to_string() const;
};

// Exact scalar: a rational-coefficient Laurent polynomial in the parameters
// (exponents affine in the weight labels) divided by lambda^lambda_pow,
// lambda = q - 1/q.  Canonical: no zero numerator terms; the zero value keeps
// lambda_pow = 0.  Equality is decided by cross-multiplying lambda powers, so
// no polynomial division happens during arithmetic.
struct Coefficient {
    std::map<ParamMonomial, Rational> num;
    int lambda_pow = 0;

    Coefficient() = default;

    static Coefficient zero() { return {}; }
    static Coefficient one() { return from_rational(1); }
    static Coefficient from_rational(const Rational& r) {
        Coefficient c;
        if (r != 0) c.num.emplace(ParamMonomial{}, r);
        return c;
    }
    static Coefficient from_monomial(const ParamMonomial& m, const Rational& r = 1) {
        Coefficient c;
        if (r != 0) c.num.emplace(m, r);
        return c;
    }
    // lambda = q - 1/q
    static Coefficient lambda();
    // 1 / lambda^k
    static Coefficient lambda_inverse_power(int k) {
        Coefficient c = one();
        c.lambda_pow = k;
        return c;
    }

    bool is_zero() const { return num.empty(); }
    bool is_one() const { return lambda_pow == 0 && num.size() == 1 && num.begin()->first.is_one() && num.begin()->second == 1; }
    // Single numerator term and no lambda power: a (signed) rational multiple
    // of an invertible monomial.
    bool is_term() const { return lambda_pow == 0 && num.size() == 1; }

    // structural equality; value equality is coeff_eq
    bool operator==(const Coefficient&) const = default;

    std::string to_string() const;
};

Coefficient coeff_add(const Coefficient& a, const Coefficient& b);
Coefficient coeff_neg(const Coefficient& a);
Coefficient coeff_sub(const Coefficient& a, const Coefficient& b);
Coefficient coeff_mul(const Coefficient& a, const Coefficient& b);
Coefficient coeff_mul(const Coefficient& a, const Rational& r);
Coefficient coeff_mul(const Coefficient& a, const ParamMonomial& m);
bool coeff_eq(const Coefficient& a, const Coefficient& b);

inline Coefficient operator+(const Coefficient& a, const Coefficient& b) { return coeff_add(a, b); }
inline Coefficient operator-(const Coefficient& a, const Coefficient& b) { return coeff_sub(a, b); }
inline Coefficient operator-(const Coefficient& a) { return coeff_neg(a); }
inline Coefficient operator*(const Coefficient& a, const Coefficient& b) { return coeff_mul(a, b); }

// q-bracket [h]_q = (q^h - q^-h) / lambda, kept with lambda_pow = 1.
Coefficient qbracket(const ExponentForm& h);
// The lambda-free expansion sum_{s=0}^{k-1} q^{k-1-2s} of [k]_q, k >= 0.
Coefficient qint_sum(std::int64_t k);

// Exact evaluation at a rational point.  Every parameter needs a nonzero
// value; every label appearing in an exponent needs a value.  Fractional
// exponents demand exact rational roots.  If lambda vanishes at the point,
// the lambda power must first cancel exactly against the numerator.
Rational specialize(const Coefficient& c,
                    const std::map<ParamSymbol, Rational>& assignment,
                    const std::map<int, Rational>& r_values);

// Substitute integer/half-integer values for some weight labels, keeping the
// result symbolic in the remaining ones.
Coefficient substitute_weights(const Coefficient& c, const std::map<int, HalfInt>& values);

// Substitute parameter symbols by monomials (e.g. the n = 3 splitting
// constraint, or q_ij := q).  Replacement monomials must not mention the
// substituted symbols.
using ParamSubstitution = std::map<ParamSymbol, ParamMonomial>;
Coefficient substitute_params(const Coefficient& c, const ParamSubstitution& subst);

// Try to clear the lambda power by exact polynomial division of the
// numerator.  Returns a lambda_pow = 0 value when the division is exact.
std::optional<Coefficient> lambda_reduce(const Coefficient& c);

// Exact division a / b, when the quotient exists in the ring.
std::optional<Coefficient> coeff_div_exact(const Coefficient& a, const Coefficient& b);

// Parameter shorthands: q' = 1/q, q'_ij = q_ij / q^2, p_ij = q_ij / q^2,
// p'_ij = q'_ij / q'^2 = q_ij.  Exposed as ready-made monomials.
ParamMonomial shorthand_p(int i, int j);
ParamMonomial shorthand_p_prime(int i, int j);
ParamMonomial shorthand_q_prime();
ParamMonomial shorthand_qij_prime(int i, int j);

std::string rational_to_string(const Rational& r);

}  // namespace mqg
