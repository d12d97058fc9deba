#include "mqg/coeff.hpp"

#include <algorithm>
#include <set>

namespace mqg {

std::string rational_to_string(const Rational& r) { return r.get_str(); }

ParamMonomial ParamMonomial::pow_halfint(HalfInt h) const {
    ParamMonomial m;
    if (h.is_zero()) return m;
    for (auto& [s, e] : exps) {
        // (doubled/2) * (doubled/2) lives on the quarter lattice; demand the
        // product lands back on half-integers.
        ExponentForm f;
        auto scale = [&](HalfInt a) {
            std::int64_t prod = a.doubled * h.doubled;
            if (prod % 2 != 0)
                throw std::logic_error("ParamMonomial: power leaves the half-integer lattice");
            return HalfInt{prod / 2};
        };
        f.const_part = scale(e.const_part);
        for (auto& [i, a] : e.r_coeffs) {
            HalfInt v = scale(a);
            if (!v.is_zero()) f.r_coeffs[i] = v;
        }
        if (!f.is_zero()) m.exps.emplace(s, f);
    }
    return m;
}

std::string ParamMonomial::to_string() const {
    if (exps.empty()) return "1";
    std::string s;
    for (auto& [sym, e] : exps) {
        if (!s.empty()) s += "*";
        s += sym.to_string();
        if (e == ExponentForm::constant(1)) continue;
        if (e.is_constant() && e.const_part.is_integer()) {
            s += "^" + std::to_string(e.const_part.as_integer());
        } else {
            s += "^(" + e.to_string() + ")";
        }
    }
    return s;
}

Coefficient Coefficient::lambda() {
    Coefficient c;
    c.num.emplace(ParamMonomial::q_power(ExponentForm::constant(1)), Rational(1));
    c.num.emplace(ParamMonomial::q_power(ExponentForm::constant(-1)), Rational(-1));
    return c;
}

std::string Coefficient::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (auto& [m, r] : num) {
        const bool neg = r < 0;
        Rational mag = neg ? Rational(-r) : r;
        if (s.empty()) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        if (m.is_one()) {
            s += mag.get_str();
        } else if (mag == 1) {
            s += m.to_string();
        } else {
            s += mag.get_str() + "*" + m.to_string();
        }
    }
    if (lambda_pow > 0) return "(" + s + ")*lam^-" + std::to_string(lambda_pow);
    return s;
}

namespace {

void add_term(std::map<ParamMonomial, Rational>& num, const ParamMonomial& m, const Rational& r) {
    if (r == 0) return;
    auto it = num.find(m);
    if (it == num.end()) {
        num.emplace(m, r);
    } else {
        it->second += r;
        if (it->second == 0) num.erase(it);
    }
}

using NumMap = std::map<ParamMonomial, Rational>;

NumMap mul_maps(const NumMap& a, const NumMap& b) {
    NumMap out;
    for (auto& [ma, ra] : a)
        for (auto& [mb, rb] : b) add_term(out, ma * mb, ra * rb);
    return out;
}

// Multiply a numerator by lambda^d = (q - 1/q)^d.
NumMap mul_lambda_pow(NumMap m, int d) {
    const ParamMonomial qp = ParamMonomial::q_power(ExponentForm::constant(1));
    const ParamMonomial qm = ParamMonomial::q_power(ExponentForm::constant(-1));
    for (int t = 0; t < d; ++t) {
        NumMap out;
        for (auto& [mono, r] : m) {
            add_term(out, mono * qp, r);
            add_term(out, mono * qm, -r);
        }
        m = std::move(out);
    }
    return m;
}

// Total group order used for leading-term division: coordinatewise
// lexicographic over the union of symbols, each exponent compared as the
// vector (r-coefficients..., constant).  Translation-invariant, unlike the
// container ordering on maps.
int cmp_form_division(const ExponentForm& a, const ExponentForm& b) {
    std::set<int> labels;
    for (auto& [i, _] : a.r_coeffs) labels.insert(i);
    for (auto& [i, _] : b.r_coeffs) labels.insert(i);
    for (int i : labels) {
        auto fa = a.r_coeffs.count(i) ? a.r_coeffs.at(i) : HalfInt{};
        auto fb = b.r_coeffs.count(i) ? b.r_coeffs.at(i) : HalfInt{};
        if (fa != fb) return fa < fb ? -1 : 1;
    }
    if (a.const_part != b.const_part) return a.const_part < b.const_part ? -1 : 1;
    return 0;
}

int cmp_mono_division(const ParamMonomial& a, const ParamMonomial& b) {
    std::set<ParamSymbol> syms;
    for (auto& [s, _] : a.exps) syms.insert(s);
    for (auto& [s, _] : b.exps) syms.insert(s);
    for (auto& s : syms) {
        ExponentForm fa = a.exps.count(s) ? a.exps.at(s) : ExponentForm{};
        ExponentForm fb = b.exps.count(s) ? b.exps.at(s) : ExponentForm{};
        int c = cmp_form_division(fa, fb);
        if (c != 0) return c;
    }
    return 0;
}

NumMap::const_iterator leading_term(const NumMap& m) {
    auto best = m.begin();
    for (auto it = std::next(m.begin()); it != m.end(); ++it)
        if (cmp_mono_division(it->first, best->first) > 0) best = it;
    return best;
}

// Exact division of Laurent polynomials over the monomial group.  Monomials
// are units, so the greedy elimination either terminates with remainder zero
// or keeps producing strictly smaller leading terms forever; the cap cuts the
// inexact case off.
std::optional<NumMap> divide_maps(NumMap p, const NumMap& d, std::size_t cap = 20000) {
    if (d.empty()) return std::nullopt;
    NumMap quot;
    auto dlead = leading_term(d);
    std::size_t steps = 0;
    while (!p.empty()) {
        if (++steps > cap) return std::nullopt;
        auto plead = leading_term(p);
        ParamMonomial qm = plead->first * dlead->first.inverse();
        Rational qr = plead->second / dlead->second;
        add_term(quot, qm, qr);
        for (auto& [m, r] : d) add_term(p, qm * m, -(qr * r));
    }
    return quot;
}

}  // namespace

Coefficient coeff_add(const Coefficient& a, const Coefficient& b) {
    Coefficient out;
    out.lambda_pow = std::max(a.lambda_pow, b.lambda_pow);
    out.num = mul_lambda_pow(a.num, out.lambda_pow - a.lambda_pow);
    for (auto& [m, r] : mul_lambda_pow(b.num, out.lambda_pow - b.lambda_pow)) add_term(out.num, m, r);
    if (out.num.empty()) out.lambda_pow = 0;
    return out;
}

Coefficient coeff_neg(const Coefficient& a) {
    Coefficient out = a;
    for (auto& [m, r] : out.num) r = -r;
    return out;
}

Coefficient coeff_sub(const Coefficient& a, const Coefficient& b) { return coeff_add(a, coeff_neg(b)); }

Coefficient coeff_mul(const Coefficient& a, const Coefficient& b) {
    Coefficient out;
    out.num = mul_maps(a.num, b.num);
    out.lambda_pow = a.lambda_pow + b.lambda_pow;
    if (out.num.empty()) out.lambda_pow = 0;
    return out;
}

Coefficient coeff_mul(const Coefficient& a, const Rational& r) {
    if (r == 0) return {};
    Coefficient out = a;
    for (auto& [m, c] : out.num) c *= r;
    return out;
}

Coefficient coeff_mul(const Coefficient& a, const ParamMonomial& m) {
    Coefficient out;
    out.lambda_pow = a.lambda_pow;
    for (auto& [mono, r] : a.num) out.num.emplace(mono * m, r);
    return out;
}

bool coeff_eq(const Coefficient& a, const Coefficient& b) {
    if (a.lambda_pow == b.lambda_pow) return a.num == b.num;
    return mul_lambda_pow(a.num, b.lambda_pow) == mul_lambda_pow(b.num, a.lambda_pow);
}

Coefficient qbracket(const ExponentForm& h) {
    Coefficient c;
    if (h.is_zero()) return c;
    c.lambda_pow = 1;
    add_term(c.num, ParamMonomial::q_power(h), Rational(1));
    add_term(c.num, ParamMonomial::q_power(-h), Rational(-1));
    if (c.num.empty()) c.lambda_pow = 0;  // h = -h cannot happen for h != 0, but stay canonical
    return c;
}

Coefficient qint_sum(std::int64_t k) {
    Coefficient c;
    for (std::int64_t s = 0; s < k; ++s)
        add_term(c.num, ParamMonomial::q_power(ExponentForm::constant(k - 1 - 2 * s)), Rational(1));
    return c;
}

namespace {

Rational eval_form(const ExponentForm& f, const std::map<int, Rational>& r_values) {
    Rational v(f.const_part.doubled, 2);
    v.canonicalize();
    for (auto& [i, a] : f.r_coeffs) {
        auto it = r_values.find(i);
        if (it == r_values.end())
            throw std::invalid_argument("specialize: no value for weight label r" + std::to_string(i));
        Rational coeff(a.doubled, 2);
        coeff.canonicalize();
        v += coeff * it->second;
    }
    return v;
}

mpz_class pow_z(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// base^(p/s) when it exists as a rational; otherwise NonRationalRoot.
Rational pow_rational_exact(const Rational& base, const Rational& exp) {
    if (base == 0) throw std::invalid_argument("specialize: zero base");
    mpz_class p = exp.get_num(), s = exp.get_den();
    Rational root = base;
    if (s != 1) {
        if (!s.fits_ulong_p()) throw NonRationalRoot("root index too large");
        unsigned long si = s.get_ui();
        if (base < 0 && si % 2 == 0)
            throw NonRationalRoot("even root of a negative value: " + base.get_str() + "^" + exp.get_str());
        mpz_class rn, rd;
        if (!mpz_root(rn.get_mpz_t(), mpz_class(base.get_num()).get_mpz_t(), si) ||
            !mpz_root(rd.get_mpz_t(), mpz_class(base.get_den()).get_mpz_t(), si))
            throw NonRationalRoot("no exact rational root: " + base.get_str() + "^" + exp.get_str());
        root = Rational(rn, rd);
        root.canonicalize();
    }
    if (!p.fits_slong_p()) throw std::invalid_argument("specialize: exponent too large");
    long pi = p.get_si();
    bool neg = pi < 0;
    unsigned long mag = neg ? static_cast<unsigned long>(-pi) : static_cast<unsigned long>(pi);
    Rational out(pow_z(root.get_num(), mag), pow_z(root.get_den(), mag));
    out.canonicalize();
    if (neg) {
        if (out == 0) throw std::invalid_argument("specialize: inverting zero");
        out = 1 / out;
    }
    return out;
}

}  // namespace

Rational specialize(const Coefficient& c,
                    const std::map<ParamSymbol, Rational>& assignment,
                    const std::map<int, Rational>& r_values) {
    auto value_of = [&](const ParamSymbol& s) {
        auto it = assignment.find(s);
        if (it == assignment.end())
            throw std::invalid_argument("specialize: no value for " + s.to_string());
        if (it->second == 0) throw std::invalid_argument("specialize: zero value for " + s.to_string());
        return it->second;
    };
    auto eval_num = [&](const NumMap& num) {
        Rational total(0);
        for (auto& [mono, r] : num) {
            Rational term = r;
            for (auto& [sym, form] : mono.exps)
                term *= pow_rational_exact(value_of(sym), eval_form(form, r_values));
            total += term;
        }
        return total;
    };
    if (c.lambda_pow == 0) return eval_num(c.num);
    Rational qv = value_of(ParamSymbol::q());
    Rational lam = qv - 1 / qv;
    if (lam != 0) {
        Rational denom = lam;
        for (int t = 1; t < c.lambda_pow; ++t) denom *= lam;
        return eval_num(c.num) / denom;
    }
    auto reduced = lambda_reduce(c);
    if (!reduced) throw DivisionByZeroLambda();
    return eval_num(reduced->num);
}

Coefficient substitute_weights(const Coefficient& c, const std::map<int, HalfInt>& values) {
    Coefficient out;
    out.lambda_pow = c.lambda_pow;
    for (auto& [mono, r] : c.num) {
        ParamMonomial m;
        for (auto& [sym, form] : mono.exps) {
            ExponentForm f;
            f.const_part = form.const_part;
            for (auto& [i, a] : form.r_coeffs) {
                auto it = values.find(i);
                if (it == values.end()) {
                    auto jt = f.r_coeffs.find(i);
                    if (jt == f.r_coeffs.end())
                        f.r_coeffs.emplace(i, a);
                    else {
                        jt->second += a;
                        if (jt->second.is_zero()) f.r_coeffs.erase(jt);
                    }
                } else {
                    std::int64_t prod = a.doubled * it->second.doubled;
                    if (prod % 2 != 0)
                        throw std::logic_error("substitute_weights: value leaves the half-integer lattice");
                    f.const_part += HalfInt{prod / 2};
                }
            }
            if (!f.is_zero()) m.exps.emplace(sym, f);
        }
        add_term(out.num, m, r);
    }
    if (out.num.empty()) out.lambda_pow = 0;
    return out;
}

Coefficient substitute_params(const Coefficient& c, const ParamSubstitution& subst) {
    Coefficient out;
    out.lambda_pow = c.lambda_pow;
    for (auto& [mono, r] : c.num) {
        ParamMonomial m;
        for (auto& [sym, form] : mono.exps) {
            auto it = subst.find(sym);
            if (it == subst.end()) {
                m = m * ParamMonomial::power(sym, form);
                continue;
            }
            // replacement^form: replacement exponents must be constant
            for (auto& [s2, e2] : it->second.exps) {
                if (!e2.is_constant())
                    throw std::logic_error("substitute_params: replacement exponent must be constant");
                std::int64_t prod2 = e2.const_part.doubled;  // doubled value of the constant
                // form * const: doubled arithmetic, demand half-integer result
                ExponentForm f;
                auto scale = [&](HalfInt a) {
                    std::int64_t prod = a.doubled * prod2;
                    if (prod % 2 != 0)
                        throw std::logic_error("substitute_params: power leaves the half-integer lattice");
                    return HalfInt{prod / 2};
                };
                f.const_part = scale(form.const_part);
                for (auto& [i, a] : form.r_coeffs) {
                    HalfInt v = scale(a);
                    if (!v.is_zero()) f.r_coeffs[i] = v;
                }
                m = m * ParamMonomial::power(s2, f);
            }
        }
        add_term(out.num, m, r);
    }
    if (out.num.empty()) out.lambda_pow = 0;
    return out;
}

std::optional<Coefficient> lambda_reduce(const Coefficient& c) {
    if (c.lambda_pow == 0) return c;
    NumMap p = c.num;
    for (int t = 0; t < c.lambda_pow; ++t) {
        auto q = divide_maps(std::move(p), Coefficient::lambda().num);
        if (!q) return std::nullopt;
        p = std::move(*q);
    }
    Coefficient out;
    out.num = std::move(p);
    return out;
}

std::optional<Coefficient> coeff_div_exact(const Coefficient& a, const Coefficient& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Coefficient::zero();
    auto q = divide_maps(a.num, b.num);
    if (!q) return std::nullopt;
    Coefficient out;
    out.num = std::move(*q);
    int lp = a.lambda_pow - b.lambda_pow;
    if (lp >= 0) {
        out.lambda_pow = lp;
    } else {
        out.num = mul_lambda_pow(std::move(out.num), -lp);
    }
    if (out.num.empty()) out.lambda_pow = 0;
    if (!coeff_eq(coeff_mul(out, b), a)) return std::nullopt;
    return out;
}

ParamMonomial shorthand_p(int i, int j) {
    return ParamMonomial::power(ParamSymbol::qij(i, j), ExponentForm::constant(1)) *
           ParamMonomial::q_power(ExponentForm::constant(-2));
}

// p'_ij = q'_ij / q'^2 with q' = 1/q and q'_ij = q_ij/q^2, hence p'_ij = q_ij.
ParamMonomial shorthand_p_prime(int i, int j) {
    return ParamMonomial::power(ParamSymbol::qij(i, j), ExponentForm::constant(1));
}

ParamMonomial shorthand_q_prime() { return ParamMonomial::q_power(ExponentForm::constant(-1)); }

ParamMonomial shorthand_qij_prime(int i, int j) { return shorthand_p(i, j); }

}  // namespace mqg
