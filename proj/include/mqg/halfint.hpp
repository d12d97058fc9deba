#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mqg {

// Half-integer stored as twice its value, so 1/2-steps stay exact.
struct HalfInt {
    std::int64_t doubled = 0;

    HalfInt() = default;
    constexpr explicit HalfInt(std::int64_t d) : doubled(d) {}

    static constexpr HalfInt whole(std::int64_t k) { return HalfInt{2 * k}; }
    static constexpr HalfInt half(std::int64_t d) { return HalfInt{d}; }

    bool is_zero() const { return doubled == 0; }
    bool is_integer() const { return doubled % 2 == 0; }
    std::int64_t as_integer() const {
        if (!is_integer()) throw std::logic_error("HalfInt: not an integer: " + to_string());
        return doubled / 2;
    }

    HalfInt operator-() const { return HalfInt{-doubled}; }
    HalfInt operator+(HalfInt o) const { return HalfInt{doubled + o.doubled}; }
    HalfInt operator-(HalfInt o) const { return HalfInt{doubled - o.doubled}; }
    HalfInt& operator+=(HalfInt o) { doubled += o.doubled; return *this; }
    // Scale by an integer (half * half would leave the half-integer lattice).
    HalfInt operator*(std::int64_t k) const { return HalfInt{doubled * k}; }

    auto operator<=>(const HalfInt&) const = default;

    std::string to_string() const {
        if (is_integer()) return std::to_string(doubled / 2);
        return std::to_string(doubled) + "/2";
    }
};

inline HalfInt operator*(std::int64_t k, HalfInt h) { return h * k; }

}  // namespace mqg
