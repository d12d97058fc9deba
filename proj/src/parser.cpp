#include "mqg/parser.hpp"

#include <cctype>
#include <optional>

namespace mqg {

namespace {

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;

    explicit Lexer(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw SyntaxError(std::string("expected '") + c + "'", pos);
    }
    std::optional<std::int64_t> try_number() {
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) return std::nullopt;
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        return std::stoll(src.substr(start, pos - start));
    }
    std::optional<std::string> try_name() {
        skip_ws();
        if (pos >= src.size() || !std::isalpha(static_cast<unsigned char>(src[pos]))) return std::nullopt;
        std::size_t start = pos;
        ++pos;
        while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) ++pos;
        return src.substr(start, pos - start);
    }
};

struct Parser {
    Lexer lex;
    const PresetAlgebra* context;  // null: scalars only

    Parser(const std::string& s, const PresetAlgebra* ctx) : lex(s), context(ctx) {}

    NCPoly parse() {
        NCPoly p = parse_sum();
        if (!lex.done()) throw SyntaxError("unexpected trailing input", lex.pos);
        return p;
    }

    NCPoly parse_sum() {
        bool neg = false;
        if (lex.accept('-'))
            neg = true;
        else
            lex.accept('+');
        NCPoly acc = parse_product();
        if (neg) acc = acc.scaled(coeff_neg(Coefficient::one()));
        for (;;) {
            if (lex.accept('+')) {
                acc = acc + parse_product();
            } else if (lex.accept('-')) {
                acc = acc - parse_product();
            } else {
                return acc;
            }
        }
    }

    NCPoly parse_product() {
        NCPoly acc = parse_factor();
        for (;;) {
            if (lex.accept('*')) {
                acc = acc * parse_factor();
                continue;
            }
            // juxtaposition: another factor begins immediately
            char c = lex.peek();
            if (c == '(' || std::isalnum(static_cast<unsigned char>(c))) {
                acc = acc * parse_factor();
                continue;
            }
            return acc;
        }
    }

    NCPoly parse_factor() {
        NCPoly base = parse_primary();
        if (!lex.accept('^')) return base;
        ExponentForm e = parse_exponent();
        return apply_power(base, e);
    }

    NCPoly parse_primary() {
        if (lex.accept('(')) {
            NCPoly p = parse_sum();
            lex.expect(')');
            return p;
        }
        std::size_t at = lex.pos;
        if (auto num = lex.try_number()) {
            Rational r(*num);
            if (lex.accept('/')) {
                auto den = lex.try_number();
                if (!den || *den == 0) throw SyntaxError("bad rational literal", lex.pos);
                r = Rational(*num, *den);
                r.canonicalize();
            }
            return NCPoly::from_word({}, Coefficient::from_rational(r));
        }
        if (auto name = lex.try_name()) return parse_named(*name, at);
        throw SyntaxError("expected an atom", lex.pos);
    }

    NCPoly parse_named(const std::string& name, std::size_t at) {
        if (name == "lam") return NCPoly::from_word({}, Coefficient::lambda());
        if (name == "q")
            return scalar(ParamMonomial::q_power(ExponentForm::constant(1)));
        if (name == "a" || name == "Y" || name == "D") return parse_generator(name, at);
        if (name.size() >= 2 && name[0] == 'z') {
            int label = parse_int_suffix(name.substr(1), at);
            return scalar(ParamMonomial::q_power(ExponentForm::label(label)));
        }
        if (name[0] == 'q') {
            // q[i,j] or qIJ with single-digit indices
            if (name.size() == 1 && lex.peek() == '[') {
                auto [i, j] = parse_bracket_pair();
                return scalar(ParamMonomial::power(make_qij(i, j, at), ExponentForm::constant(1)));
            }
            if (name.size() == 3 && std::isdigit(static_cast<unsigned char>(name[1])) &&
                std::isdigit(static_cast<unsigned char>(name[2]))) {
                return scalar(ParamMonomial::power(make_qij(name[1] - '0', name[2] - '0', at),
                                                   ExponentForm::constant(1)));
            }
        }
        throw SyntaxError("unknown atom '" + name + "'", at);
    }

    static NCPoly scalar(const ParamMonomial& m) {
        return NCPoly::from_word({}, Coefficient::from_monomial(m));
    }

    ParamSymbol make_qij(int i, int j, std::size_t at) {
        if (!(0 < i && i < j)) throw SyntaxError("parameter indices must satisfy i < j", at);
        return ParamSymbol::qij(i, j);
    }

    int parse_int_suffix(const std::string& s, std::size_t at) {
        if (s.empty()) throw SyntaxError("missing label index", at);
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw SyntaxError("bad label index", at);
        return std::stoi(s);
    }

    std::pair<int, int> parse_bracket_pair() {
        lex.expect('[');
        auto i = lex.try_number();
        if (!i) throw SyntaxError("expected an index", lex.pos);
        lex.expect(',');
        auto j = lex.try_number();
        if (!j) throw SyntaxError("expected an index", lex.pos);
        lex.expect(']');
        return {static_cast<int>(*i), static_cast<int>(*j)};
    }

    NCPoly parse_generator(const std::string& family, std::size_t at) {
        if (!context) throw SyntaxError("generators are not allowed here", at);
        GenSymbol g;
        if (family == "D") {
            lex.expect('[');
            auto m = lex.try_number();
            if (!m) throw SyntaxError("expected an index", lex.pos);
            lex.expect(']');
            g = GenSymbol::d(static_cast<int>(*m));
        } else {
            auto [i, j] = parse_bracket_pair();
            g = family == "a" ? GenSymbol::a(i, j) : GenSymbol::y(i, j);
        }
        if (!context->contains(g)) throw UnknownGeneratorError(g.to_string());
        return NCPoly::from_letter(g);
    }

    // Exponent: INT | -INT | INT/INT | '(' affine ')'
    ExponentForm parse_exponent() {
        if (lex.accept('(')) {
            ExponentForm e = parse_affine();
            lex.expect(')');
            return e;
        }
        bool neg = lex.accept('-');
        auto num = lex.try_number();
        if (!num) throw SyntaxError("expected an exponent", lex.pos);
        HalfInt h = parse_fraction_tail(*num);
        return ExponentForm(neg ? -h : h);
    }

    HalfInt parse_fraction_tail(std::int64_t num) {
        if (lex.accept('/')) {
            auto den = lex.try_number();
            if (!den || (*den != 1 && *den != 2))
                throw SyntaxError("exponent denominator must be 1 or 2", lex.pos);
            return *den == 1 ? HalfInt::whole(num) : HalfInt::half(num);
        }
        return HalfInt::whole(num);
    }

    ExponentForm parse_affine() {
        ExponentForm acc;
        bool first = true;
        for (;;) {
            bool neg = false;
            if (lex.accept('-'))
                neg = true;
            else if (!lex.accept('+') && !first)
                break;
            first = false;
            ExponentForm term = parse_affine_term();
            acc = neg ? acc - term : acc + term;
            char c = lex.peek();
            if (c != '+' && c != '-') break;
        }
        return acc;
    }

    ExponentForm parse_affine_term() {
        if (auto num = lex.try_number()) {
            HalfInt h = parse_fraction_tail(*num);
            if (lex.accept('*')) {
                int label = parse_rlabel();
                return ExponentForm::label(label, h);
            }
            return ExponentForm(h);
        }
        return ExponentForm::label(parse_rlabel());
    }

    int parse_rlabel() {
        std::size_t at = lex.pos;
        auto name = lex.try_name();
        if (!name || name->size() < 2 || (*name)[0] != 'r')
            throw SyntaxError("expected a weight label rK", at);
        return parse_int_suffix(name->substr(1), at);
    }

    NCPoly apply_power(const NCPoly& base, const ExponentForm& e) {
        // plain nonnegative integer powers work for everything
        if (e.is_constant() && e.const_part.is_integer() && e.const_part.doubled >= 0) {
            std::int64_t k = e.const_part.as_integer();
            NCPoly acc = NCPoly::unit();
            for (std::int64_t t = 0; t < k; ++t) acc = acc * base;
            return acc;
        }
        // everything else needs an invertible scalar base
        if (base.terms.size() != 1 || !base.terms.begin()->first.empty()) {
            if (!base.terms.empty() && !base.terms.begin()->first.empty())
                throw NegativeGeneratorPowerError();
            throw SyntaxError("cannot raise this expression to a non-integer power", lex.pos);
        }
        const Coefficient& c = base.terms.begin()->second;
        // lam^-k encodes the lambda denominator
        if (coeff_eq(c, Coefficient::lambda()) && e.is_constant() && e.const_part.is_integer()) {
            std::int64_t k = e.const_part.as_integer();
            if (k < 0) return NCPoly::from_word({}, Coefficient::lambda_inverse_power(static_cast<int>(-k)));
        }
        if (!c.is_term()) throw SyntaxError("cannot raise a sum to this power", lex.pos);
        auto& [mono, r] = *c.num.begin();
        if (e.is_constant() && e.const_part.is_integer()) {
            std::int64_t k = e.const_part.as_integer();  // negative integer
            Rational rp(1);
            for (std::int64_t t = 0; t < -k; ++t) rp /= r;
            return NCPoly::from_word({}, Coefficient::from_monomial(mono.pow_halfint(HalfInt::whole(k)), rp));
        }
        if (r != 1) throw SyntaxError("fractional powers need a monomial base", lex.pos);
        // monomial^form: scale each constant exponent by the form
        ParamMonomial out;
        for (auto& [sym, f] : mono.exps) {
            if (!f.is_constant())
                throw SyntaxError("cannot raise a symbolic power to another symbolic power", lex.pos);
            ExponentForm g;
            auto scale = [&](HalfInt a) {
                std::int64_t prod = a.doubled * f.const_part.doubled;
                if (prod % 2 != 0) throw SyntaxError("exponent leaves the half-integer lattice", lex.pos);
                return HalfInt{prod / 2};
            };
            g.const_part = scale(e.const_part);
            for (auto& [lab, a] : e.r_coeffs) {
                HalfInt v = scale(a);
                if (!v.is_zero()) g.r_coeffs[lab] = v;
            }
            if (!g.is_zero()) out = out * ParamMonomial::power(sym, g);
        }
        return NCPoly::from_word({}, Coefficient::from_monomial(out));
    }
};

}  // namespace

NCPoly parse_expr(const std::string& src, const PresetAlgebra& context) {
    Parser p(src, &context);
    return p.parse();
}

Coefficient parse_coefficient(const std::string& src) {
    Parser p(src, nullptr);
    NCPoly poly = p.parse();
    if (poly.is_zero()) return Coefficient::zero();
    if (poly.terms.size() != 1 || !poly.terms.begin()->first.empty())
        throw SyntaxError("expected a scalar expression", 0);
    return poly.terms.begin()->second;
}

}  // namespace mqg
