#include "mqg/ncpoly.hpp"

#include <algorithm>
#include <deque>

#include "mqg/parallel.hpp"

namespace mqg {

std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        if (!s.empty()) s += "*";
        s += w[i].to_string();
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool word_is_normal(const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i + 1] < w[i]) return false;
    return true;
}

NCPoly NCPoly::from_word(const Word& w, const Coefficient& c) {
    NCPoly p;
    p.add_term(w, c);
    return p;
}

void NCPoly::add_term(const Word& w, const Coefficient& c) {
    if (c.is_zero()) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
        terms.emplace(w, c);
    } else {
        it->second = coeff_add(it->second, c);
        if (it->second.is_zero()) terms.erase(it);
    }
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
    NCPoly out = *this;
    for (auto& [w, c] : o.terms) out.add_term(w, c);
    return out;
}

NCPoly NCPoly::operator-(const NCPoly& o) const {
    NCPoly out = *this;
    for (auto& [w, c] : o.terms) out.add_term(w, coeff_neg(c));
    return out;
}

NCPoly NCPoly::operator*(const NCPoly& o) const {
    NCPoly out;
    for (auto& [wa, ca] : terms)
        for (auto& [wb, cb] : o.terms) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out.add_term(w, coeff_mul(ca, cb));
        }
    return out;
}

NCPoly NCPoly::scaled(const Coefficient& c) const {
    NCPoly out;
    for (auto& [w, t] : terms) out.add_term(w, coeff_mul(t, c));
    return out;
}

std::string NCPoly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (auto& [w, c] : terms) {
        if (!s.empty()) s += " + ";
        if (c.is_one()) {
            s += word_to_string(w);
        } else if (w.empty()) {
            s += "(" + c.to_string() + ")";
        } else {
            s += "(" + c.to_string() + ")*" + word_to_string(w);
        }
    }
    return s;
}

bool PresetAlgebra::contains(GenSymbol g) const {
    return std::binary_search(alphabet.begin(), alphabet.end(), g);
}

const RewriteRule& PresetAlgebra::rule_for(GenSymbol hi, GenSymbol lo) const {
    auto it = rules.find({hi, lo});
    if (it == rules.end())
        throw std::logic_error(name + ": no rule for " + hi.to_string() + "*" + lo.to_string());
    return it->second;
}

void PresetAlgebra::add_rule(GenSymbol hi, GenSymbol lo, NCPoly rhs) {
    if (!(lo < hi)) throw std::logic_error("add_rule: need hi > lo");
    rules[{hi, lo}] = RewriteRule{hi, lo, std::move(rhs)};
}

void PresetAlgebra::validate() const {
    for (std::size_t a = 0; a < alphabet.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (!rules.count({alphabet[a], alphabet[b]}))
                throw std::logic_error(name + ": missing rule for " + alphabet[a].to_string() +
                                       "*" + alphabet[b].to_string());
    for (auto& [key, rule] : rules) {
        const Word lhs{rule.hi, rule.lo};
        for (auto& [w, c] : rule.rhs.terms) {
            if (!word_is_normal(w))
                throw std::logic_error(name + ": rule rhs word not normal: " + word_to_string(w));
            if (!word_less(w, lhs))
                throw std::logic_error(name + ": rule rhs does not descend: " + word_to_string(w));
            for (auto g : w)
                if (!contains(g)) throw UnknownGeneratorError(g.to_string());
        }
    }
}

namespace {

std::size_t leftmost_chooser(const Word&, std::size_t) { return 0; }

}  // namespace

NCPoly normal_form(const NCPoly& p, const PresetAlgebra& alg) {
    return normal_form(p, alg, leftmost_chooser);
}

NCPoly normal_form(const NCPoly& p, const PresetAlgebra& alg, const PositionChooser& choose) {
    for (auto& [w, c] : p.terms)
        for (auto g : w)
            if (!alg.contains(g)) throw UnknownGeneratorError(g.to_string());

    NCPoly out;
    // Worklist of pending terms.  Every rewrite strictly decreases the
    // (degree, lex) order of the touched word, so this terminates.
    std::deque<std::pair<Word, Coefficient>> pending(p.terms.begin(), p.terms.end());
    while (!pending.empty()) {
        auto [w, c] = std::move(pending.front());
        pending.pop_front();
        if (c.is_zero()) continue;

        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i + 1] < w[i]) positions.push_back(i);
        if (positions.empty()) {
            out.add_term(w, c);
            continue;
        }
        std::size_t pos = positions[choose(w, positions.size()) % positions.size()];
        const RewriteRule& rule = alg.rule_for(w[pos], w[pos + 1]);
        for (auto& [rw, rc] : rule.rhs.terms) {
            Word nw;
            nw.reserve(w.size() - 2 + rw.size());
            nw.insert(nw.end(), w.begin(), w.begin() + pos);
            nw.insert(nw.end(), rw.begin(), rw.end());
            nw.insert(nw.end(), w.begin() + pos + 2, w.end());
            pending.emplace_back(std::move(nw), coeff_mul(c, rc));
        }
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ConfluenceReport confluence_check(const PresetAlgebra& alg, int max_len, int trials,
                                  std::uint64_t seed, bool parallel) {
    if (max_len < 3) throw std::invalid_argument("confluence_check: max_len must be >= 3");
    ConfluenceReport report;
    report.trials = trials;
    report.max_len = max_len;
    report.seed = seed;

    struct Outcome {
        bool bad = false;
        ConfluenceReport::Counterexample ce;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(trials));

    run_indexed_tasks(
        static_cast<std::size_t>(trials),
        [&](std::size_t t) {
            std::uint64_t s = seed ^ (0xa076'1d64'78bd'642fULL * (t + 1));
            Word w(2 + splitmix64(s) % static_cast<std::uint64_t>(max_len - 1));
            for (auto& g : w) g = alg.alphabet[splitmix64(s) % alg.alphabet.size()];

            std::uint64_t sa = s ^ 0x5851'f42d'4c95'7f2dULL;
            std::uint64_t sb = s ^ 0x1405'7b7e'f767'814fULL;
            auto random_chooser = [](std::uint64_t& st) {
                return [&st](const Word&, std::size_t count) {
                    return static_cast<std::size_t>(splitmix64(st) % count);
                };
            };
            NCPoly nf_a = normal_form(NCPoly::from_word(w), alg, random_chooser(sa));
            NCPoly nf_b = normal_form(NCPoly::from_word(w), alg, random_chooser(sb));
            NCPoly nf_ref = normal_form(NCPoly::from_word(w), alg);
            if (!(nf_a == nf_b) || !(nf_a == nf_ref)) {
                outcomes[t].bad = true;
                outcomes[t].ce = {w, nf_a, nf_b == nf_a ? nf_ref : nf_b};
            }
        },
        parallel);

    for (auto& o : outcomes)
        if (o.bad) report.counterexamples.push_back(o.ce);
    return report;
}

OverlapReport overlap_check(const PresetAlgebra& alg, bool parallel) {
    std::vector<Word> critical;
    for (auto a : alg.alphabet)
        for (auto b : alg.alphabet) {
            if (!(b < a)) continue;
            for (auto c : alg.alphabet) {
                if (!(c < b)) continue;
                critical.push_back({a, b, c});
            }
        }
    OverlapReport report;
    report.overlaps = critical.size();
    std::vector<char> bad(critical.size(), 0);
    run_indexed_tasks(
        critical.size(),
        [&](std::size_t t) {
            const Word& w = critical[t];
            // resolve the left redex first, then the right one
            const RewriteRule& left = alg.rule_for(w[0], w[1]);
            const RewriteRule& right = alg.rule_for(w[1], w[2]);
            NCPoly via_left = left.rhs * NCPoly::from_letter(w[2]);
            NCPoly via_right = NCPoly::from_letter(w[0]) * right.rhs;
            if (!(normal_form(via_left, alg) == normal_form(via_right, alg))) bad[t] = 1;
        },
        parallel);
    for (std::size_t t = 0; t < critical.size(); ++t)
        if (bad[t]) report.divergent.push_back(critical[t]);
    return report;
}

std::optional<Coefficient> q_factor(const NCPoly& x, const NCPoly& y, const PresetAlgebra& alg) {
    NCPoly xy = normal_form(x * y, alg);
    NCPoly yx = normal_form(y * x, alg);
    if (xy.is_zero() && yx.is_zero()) return Coefficient::one();
    if (xy.is_zero() || yx.is_zero()) return std::nullopt;
    if (xy.terms.size() != yx.terms.size()) return std::nullopt;
    std::optional<Coefficient> mu;
    auto it = xy.terms.begin();
    auto jt = yx.terms.begin();
    for (; it != xy.terms.end(); ++it, ++jt) {
        if (it->first != jt->first) return std::nullopt;
        auto ratio = coeff_div_exact(it->second, jt->second);
        if (!ratio) return std::nullopt;
        if (!mu)
            mu = *ratio;
        else if (!coeff_eq(*mu, *ratio))
            return std::nullopt;
    }
    return mu;
}

}  // namespace mqg
