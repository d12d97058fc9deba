#pragma once

#include <functional>

#include "mqg/yflag.hpp"

namespace mqg {

struct BadGeneratorError : std::runtime_error {
    explicit BadGeneratorError(const std::string& what) : std::runtime_error(what) {}
};
struct RankNot3Error : std::runtime_error {
    RankNot3Error() : std::runtime_error("closed-form action table requires rank 3") {}
};

// The eight dual-algebra operators acting on the module: K_i and its inverse,
// the raising/lowering X+-_i, and the half powers of the group-like P_i, Q_i
// that appear as their twisted-derivation companions.
enum class ActionKind { K, Kinv, Xplus, Xminus, Phalf, Pneghalf, Qhalf, Qneghalf };

struct GeneratorAction {
    ActionKind kind = ActionKind::K;
    int i = 1;  // 1..n-1

    std::string to_string() const;
    static GeneratorAction parse(const std::string& name);
};

bool action_is_diagonal(ActionKind k);

// Weight labels r_1..r_{n-1} as exponent forms; symbolic by default,
// constants after substitution.
using Weights = std::vector<ExponentForm>;
Weights symbolic_weights(int n);

// Normal-ordered monomial  prod Y^m  times the fixed determinant tail
// D_1^{r_1}..D_{n-1}^{r_{n-1}}.  Exponents are indexed by the row-major
// generator order of the flag algebra.
struct BasisVector {
    std::vector<int> yexp;  // size n(n-1)/2
    Weights weights;        // size n-1
    int total_degree() const {
        int d = 0;
        for (int e : yexp) d += e;
        return d;
    }
    std::string to_string(bool restricted = false) const;
};

struct ModuleElement {
    int n = 0;
    Weights weights;
    std::map<std::vector<int>, Coefficient> terms;
    bool restricted = false;  // determinant tail dropped from the printed form

    static ModuleElement zero(int n, Weights w) { return {n, std::move(w), {}, false}; }
    static ModuleElement basis(const BasisVector& v, int n);

    bool is_zero() const { return terms.empty(); }
    void add_term(const std::vector<int>& e, const Coefficient& c);
    ModuleElement operator+(const ModuleElement& o) const;
    ModuleElement operator-(const ModuleElement& o) const;
    ModuleElement scaled(const Coefficient& c) const;
    bool equals(const ModuleElement& o) const;
    std::string to_string() const;
};

// Cartan matrix and the Q_{is} coefficient table.
struct CartanData {
    int n = 0;
    explicit CartanData(int n_) : n(n_) {}
    int cartan(int i, int j) const { return i == j ? 2 : (i + 1 == j || j + 1 == i ? -1 : 0); }
    ParamMonomial Q(int i, int s) const;  // 1 <= i <= n-1, 1 <= s <= n
};

// Action of one operator on a single Y power, exactly as the single-block
// formulas state it; k = 0 falls back to the action on the unit.
NCPoly act_power(const GeneratorAction& g, GenSymbol y, int k, int n);

// Action on one determinant power D_j^r with symbolic exponent r.
struct DPowerAction {
    Coefficient scalar;                // zero Coefficient means the action kills the block
    std::optional<GenSymbol> emitted;  // Y letter placed left of the tail, if any
};
DPowerAction act_dpower(const GeneratorAction& g, int j, const ExponentForm& r, int n);

// Full module action via the twisted derivation rule across the ordered
// factors, reduced to the module basis with the flag algebra's rules.  When
// the algebra carries the splitting substitution it is applied to every
// emitted coefficient.
ModuleElement act(const GeneratorAction& g, const ModuleElement& v, const FlagAlgebra& f);

// Independent oracle: the rank-3 closed-form action table, transcribed
// directly; no rewriting involved.
ModuleElement act_closed3(const GeneratorAction& g, const BasisVector& v, bool split = false);
ModuleElement act_closed3(const GeneratorAction& g, const ModuleElement& v, bool split = false);

ModuleElement restrict_element(const ModuleElement& v);

using Engine = std::function<ModuleElement(const GeneratorAction&, const ModuleElement&)>;
Engine make_act_engine(const FlagAlgebra& f);
Engine make_closed3_engine(bool split);

// Twisted-derivation action letter by letter on free words (no determinant
// tail); used to check that the action descends to the quotient algebra.
NCPoly leibniz_on_word(const GeneratorAction& g, const Word& w, int n);
NCPoly leibniz_on_poly(const GeneratorAction& g, const NCPoly& p, int n);

std::vector<std::vector<int>> enumerate_basis(int n, int max_degree);

// Twisted-derivation action on a single normal word through the power
// formulas (factors grouped into powers); no reduction applied.
NCPoly block_leibniz_on_word(const GeneratorAction& g, const Word& w, int n);

// op_a = mu * op_b across the whole basis, mu a fixed signed monomial
// (single ring term); absent when no uniform scalar exists.
using ModuleOp = std::function<ModuleElement(const ModuleElement&)>;
struct PhaseComparison {
    std::optional<Coefficient> mu;
    std::string detail;  // diagnostic ratios when non-uniform
};
PhaseComparison compare_up_to_phase(const ModuleOp& op_a, const ModuleOp& op_b,
                                    const std::vector<BasisVector>& basis, int n);

struct RepCheck {
    std::string name;
    std::string status;  // pass | fail | recorded
    std::string detail;
};

struct RepVerifyReport {
    std::vector<RepCheck> checks;
    // discovered commutator normalization per index i: eigenvalue of
    // [X+_i, X-_i] equals mu_i * [2 * (K_i exponent)]_q on every basis vector
    std::map<int, Coefficient> bracket_mu;
    bool serre_all_zero = true;
    int fails = 0;
    void add(std::string name, bool ok, std::string detail = "");
    void record(std::string name, std::string detail);
};

RepVerifyReport verify_relations(int n, int degree, bool use_closed3, bool split,
                                 bool parallel = true);

struct WellDefinednessReport {
    std::vector<RepCheck> checks;
    int fails = 0;
};

WellDefinednessReport well_definedness(int n, int degree, bool parallel = true);

}  // namespace mqg
