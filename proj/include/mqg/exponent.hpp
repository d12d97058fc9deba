#pragma once

#include <map>
#include <string>

#include "mqg/halfint.hpp"

namespace mqg {

// Affine-linear form  c + sum_i a_i * r_i  in the formal weight labels r_i,
// with half-integer coefficients.  Used as the exponent of a deformation
// parameter.  Canonical: r_coeffs holds no zero entries.
struct ExponentForm {
    HalfInt const_part;
    std::map<int, HalfInt> r_coeffs;  // label index (1-based) -> coefficient

    ExponentForm() = default;
    explicit ExponentForm(HalfInt c) : const_part(c) {}

    static ExponentForm constant(std::int64_t k) { return ExponentForm(HalfInt::whole(k)); }
    static ExponentForm half_constant(std::int64_t d) { return ExponentForm(HalfInt::half(d)); }
    // The pure label r_i.
    static ExponentForm label(int i, HalfInt coeff = HalfInt::whole(1)) {
        ExponentForm f;
        if (!coeff.is_zero()) f.r_coeffs[i] = coeff;
        return f;
    }

    bool is_zero() const { return const_part.is_zero() && r_coeffs.empty(); }
    bool is_constant() const { return r_coeffs.empty(); }

    ExponentForm operator-() const {
        ExponentForm f;
        f.const_part = -const_part;
        for (auto& [i, a] : r_coeffs) f.r_coeffs[i] = -a;
        return f;
    }
    ExponentForm operator+(const ExponentForm& o) const {
        ExponentForm f = *this;
        f.const_part += o.const_part;
        for (auto& [i, a] : o.r_coeffs) {
            auto it = f.r_coeffs.find(i);
            if (it == f.r_coeffs.end()) {
                f.r_coeffs.emplace(i, a);
            } else {
                it->second += a;
                if (it->second.is_zero()) f.r_coeffs.erase(it);
            }
        }
        return f;
    }
    ExponentForm operator-(const ExponentForm& o) const { return *this + (-o); }
    ExponentForm operator*(std::int64_t k) const {
        ExponentForm f;
        if (k == 0) return f;
        f.const_part = const_part * k;
        for (auto& [i, a] : r_coeffs) f.r_coeffs[i] = a * k;
        return f;
    }
    // Halve the form; every coefficient must stay a half-integer over 2,
    // i.e. we only halve forms whose doubled entries are even.
    ExponentForm halved() const;

    auto operator<=>(const ExponentForm&) const = default;

    std::string to_string() const;
};

inline ExponentForm ExponentForm::halved() const {
    ExponentForm f;
    if (const_part.doubled % 2 != 0)
        throw std::logic_error("ExponentForm: cannot halve " + to_string());
    f.const_part = HalfInt{const_part.doubled / 2};
    for (auto& [i, a] : r_coeffs) {
        if (a.doubled % 2 != 0)
            throw std::logic_error("ExponentForm: cannot halve " + to_string());
        f.r_coeffs[i] = HalfInt{a.doubled / 2};
    }
    return f;
}

inline std::string ExponentForm::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    auto append = [&s](HalfInt a, const std::string& var) {
        const bool neg = a.doubled < 0;
        HalfInt mag = neg ? -a : a;
        if (s.empty()) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        if (var.empty()) {
            s += mag.to_string();
        } else if (mag == HalfInt::whole(1)) {
            s += var;
        } else {
            s += mag.to_string() + "*" + var;
        }
    };
    if (!const_part.is_zero()) append(const_part, "");
    for (auto& [i, a] : r_coeffs) append(a, "r" + std::to_string(i));
    return s;
}

}  // namespace mqg
