#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqg/coeff.hpp"

namespace mqg {

struct UnknownGeneratorError : std::runtime_error {
    explicit UnknownGeneratorError(const std::string& g)
        : std::runtime_error("unknown generator: " + g) {}
};
struct RankTooSmallError : std::runtime_error {
    explicit RankTooSmallError(const std::string& what) : std::runtime_error(what) {}
};

// Generator families.  A: quantum matrix entries a_ij.  Y: flag coordinates
// Y_ij, i > j.  A2: the second tensor copy used by the coproduct check.
// D: the quantum determinant tails (no rewrite rules; display and basis
// bookkeeping only).  The enumerator order fixes the global generator order:
// D sorts after everything else.
enum class GenFamily : std::uint8_t { A = 0, Y = 1, A2 = 2, D = 3 };

struct GenSymbol {
    GenFamily family = GenFamily::A;
    int row = 0;
    int col = 0;  // unused for D

    static GenSymbol a(int i, int j) { return {GenFamily::A, i, j}; }
    static GenSymbol a2(int i, int j) { return {GenFamily::A2, i, j}; }
    static GenSymbol y(int i, int j) { return {GenFamily::Y, i, j}; }
    static GenSymbol d(int m) { return {GenFamily::D, m, 0}; }

    auto operator<=>(const GenSymbol&) const = default;
    std::string to_string() const {
        switch (family) {
            case GenFamily::A: return "a[" + std::to_string(row) + "," + std::to_string(col) + "]";
            case GenFamily::A2: return "b[" + std::to_string(row) + "," + std::to_string(col) + "]";
            case GenFamily::Y: return "Y[" + std::to_string(row) + "," + std::to_string(col) + "]";
            case GenFamily::D: return "D[" + std::to_string(row) + "]";
        }
        return "?";
    }
};

// Word in the free monoid on the generators; empty = 1.
using Word = std::vector<GenSymbol>;

std::string word_to_string(const Word& w);

// (degree, lexicographic) well-order used by the rewriting termination
// argument and by canonical output ordering.
bool word_less(const Word& a, const Word& b);

// A word is normal when adjacent letters never decrease.
bool word_is_normal(const Word& w);

struct NCPoly {
    std::map<Word, Coefficient, decltype(&word_less)> terms{&word_less};

    NCPoly() = default;

    static NCPoly zero() { return {}; }
    static NCPoly unit() { return from_word({}); }
    static NCPoly from_word(const Word& w, const Coefficient& c = Coefficient::one());
    static NCPoly from_letter(GenSymbol g, const Coefficient& c = Coefficient::one()) {
        return from_word({g}, c);
    }

    bool is_zero() const { return terms.empty(); }
    void add_term(const Word& w, const Coefficient& c);

    NCPoly operator+(const NCPoly& o) const;
    NCPoly operator-(const NCPoly& o) const;
    NCPoly operator*(const NCPoly& o) const;  // word concatenation, bilinear
    NCPoly scaled(const Coefficient& c) const;

    // value equality: same words, coefficients equal up to lambda-power
    // cross multiplication
    bool operator==(const NCPoly& o) const {
        if (terms.size() != o.terms.size()) return false;
        auto it = terms.begin();
        auto jt = o.terms.begin();
        for (; it != terms.end(); ++it, ++jt)
            if (it->first != jt->first || !coeff_eq(it->second, jt->second)) return false;
        return true;
    }

    std::string to_string() const;
};

// Oriented rule  hi*lo -> rhs  with hi > lo; every word of rhs is normal and
// strictly below [hi, lo] in the (degree, lex) order.
struct RewriteRule {
    GenSymbol hi, lo;
    NCPoly rhs;
};

struct PresetAlgebra {
    int n = 0;
    std::string name;
    std::vector<GenSymbol> alphabet;  // sorted
    std::map<std::pair<GenSymbol, GenSymbol>, RewriteRule> rules;

    bool contains(GenSymbol g) const;
    const RewriteRule& rule_for(GenSymbol hi, GenSymbol lo) const;
    void add_rule(GenSymbol hi, GenSymbol lo, NCPoly rhs);
    // Rule-table completeness + rhs normality/descent; throws on violation.
    void validate() const;
};

// Reduce to the normal form modulo the algebra's rules.  The chooser picks
// which out-of-order position to rewrite next (given the word and the count
// of out-of-order positions, returns an index below that count); the default
// always picks the leftmost one.
using PositionChooser = std::function<std::size_t(const Word&, std::size_t)>;

NCPoly normal_form(const NCPoly& p, const PresetAlgebra& alg);
NCPoly normal_form(const NCPoly& p, const PresetAlgebra& alg, const PositionChooser& choose);

struct ConfluenceReport {
    int trials = 0;
    int max_len = 0;
    std::uint64_t seed = 0;
    struct Counterexample {
        Word word;
        NCPoly nf_a, nf_b;
    };
    std::vector<Counterexample> counterexamples;
    bool passed() const { return counterexamples.empty(); }
};

// Reduces seeded random words with independently randomized strategies and
// collects any words whose normal forms disagree.
ConfluenceReport confluence_check(const PresetAlgebra& alg, int max_len, int trials,
                                  std::uint64_t seed, bool parallel = true);

struct OverlapReport {
    std::size_t overlaps = 0;
    std::vector<Word> divergent;  // critical words whose two resolutions differ
    bool passed() const { return divergent.empty(); }
};

// Exhaustive local-confluence check.  Every rule rewrites a two-letter word,
// so the only one-step divergences that do not commute for trivial reasons
// sit inside a three-letter word a b c with both adjacent pairs reducible.
// Resolving each such overlap both ways and reducing to normal form proves,
// together with the termination order, that reduction is confluent.
OverlapReport overlap_check(const PresetAlgebra& alg, bool parallel = true);

// Scalar mu with NF(x*y) = mu * NF(y*x), when one exists.
std::optional<Coefficient> q_factor(const NCPoly& x, const NCPoly& y, const PresetAlgebra& alg);

// Deterministic stream of 64-bit values for seeded suites.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace mqg
