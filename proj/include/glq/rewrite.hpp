// Terminating rewriting system for the quantum-group relations.
//
// Every relation of the calculus is quadratic and grade-preserving, and each
// one can be oriented so that a single word (the key) rewrites to a
// combination of strictly smaller words in the graded-lexicographic order.
// Normalization by leftmost-innermost replacement therefore terminates, and
// once local confluence of the key overlaps is checked (Newman's lemma) the
// normal forms are canonical: two elements are equal in the algebra iff
// their normal forms coincide, up to the inverse-determinant identity
// z D = 1 which equal_mod_det handles by clearing z.
//
// Rule groups mirror the tables of the calculus: coordinate relations, the
// four cross-commutation families with first and second differentials, the
// Maurer-Cartan form tables, and the centrality of z. The form tables and
// the differential tables do not mix (the calculus defines no commutation
// between a Maurer-Cartan form and a differential), so they are shipped as
// separate closed rule sets.

#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "glq/algebra.hpp"
#include "glq/cyclotomic.hpp"

namespace glq {

enum class CalcCase { I, II };

// Which of the two admissible calculi is active and at which parameter
// point. P1 = q^{p1_exp} with p1_exp in {1,2}; P2 = q^{p2_exp} with p2_exp
// in {0,2}. The second-order tables exist only in Case I and only at the
// two points (P1,P2) = (q^2,1) and (q,q^2).
struct CalculusConfig {
    CalcCase kase = CalcCase::I;
    int p1_exp = 2;
    int p2_exp = 0;

    void validate() const {
        if (p1_exp != 1 && p1_exp != 2)
            throw std::invalid_argument("P1 must be q or q2");
        if (p2_exp != 0 && p2_exp != 2)
            throw std::invalid_argument("P2 must be 1 or q2");
    }

    CycNum p1() const { return q_power(p1_exp); }
    CycNum p2() const { return q_power(p2_exp); }
    CycNum p1_inv() const { return q_power(-p1_exp); }
    CycNum p2_inv() const { return q_power(-p2_exp); }

    // The two parameter points where the consistency conditions of the
    // first-order calculus hold.
    bool admissible_point() const {
        return (p1_exp == 2 && p2_exp == 0) || (p1_exp == 1 && p2_exp == 2);
    }
    // Only P1 = q2, P2 = 1 carries the full second-order calculus. At the
    // other admissible point the squares table collapses the 2-form sector,
    // and the forced consequences (d2g*b*g = 0 and its relatives) are not
    // expressible by quadratic exchange rules: the coordinate/second-order
    // cross table cannot exist there.
    bool second_order_available() const {
        return kase == CalcCase::I && p1_exp == 2 && p2_exp == 0;
    }

    std::string p1_str() const { return p1_exp == 1 ? "q" : "q2"; }
    std::string p2_str() const { return p2_exp == 0 ? "1" : "q2"; }
    std::string describe() const {
        return std::string("case ") + (kase == CalcCase::I ? "I" : "II") +
               ", P1=" + p1_str() + ", P2=" + p2_str();
    }

    friend bool operator==(const CalculusConfig&, const CalculusConfig&) = default;
};

enum class RuleGroup {
    Coord,       // relations among the matrix coordinates
    Central,     // z commutes with every letter
    CoordDiff1,  // coordinate x first differential
    Diff1Diff1,  // first differential exchange
    Diff1Diff2,  // first x second differential
    CoordDiff2,  // coordinate x second differential
    Diff2Diff2,  // second differential exchange
    Diff1Sq,     // products of first differentials collapsing to second ones
    FormCoord,   // Maurer-Cartan form x coordinate
    FormForm,    // Maurer-Cartan form exchange
};

inline constexpr RuleGroup kAllRuleGroups[] = {
    RuleGroup::Coord,      RuleGroup::Central,    RuleGroup::CoordDiff1,
    RuleGroup::Diff1Diff1, RuleGroup::Diff1Diff2, RuleGroup::CoordDiff2,
    RuleGroup::Diff2Diff2, RuleGroup::Diff1Sq,    RuleGroup::FormCoord,
    RuleGroup::FormForm,
};

inline const char* group_id(RuleGroup g) {
    switch (g) {
        case RuleGroup::Coord: return "coordinate";
        case RuleGroup::Central: return "central";
        case RuleGroup::CoordDiff1: return "coordinate-diff1";
        case RuleGroup::Diff1Diff1: return "diff1-diff1";
        case RuleGroup::Diff1Diff2: return "diff1-diff2";
        case RuleGroup::CoordDiff2: return "coordinate-diff2";
        case RuleGroup::Diff2Diff2: return "diff2-diff2";
        case RuleGroup::Diff1Sq: return "diff1-squares";
        case RuleGroup::FormCoord: return "form-coordinate";
        case RuleGroup::FormForm: return "form-form";
    }
    return "?";
}

inline RuleGroup group_from_id(const std::string& id) {
    for (RuleGroup g : kAllRuleGroups)
        if (id == group_id(g)) return g;
    throw std::invalid_argument("unknown rule group \"" + id + "\"");
}

// Table identifier a rule group was transcribed from; shown in dumps and
// reports so a failure can be traced back to its source table.
inline std::string group_cite(RuleGroup g, CalcCase kase) {
    switch (g) {
        case RuleGroup::Coord: return "defining-relations";
        case RuleGroup::Central: return "determinant-inverse-central";
        case RuleGroup::CoordDiff1:
            return kase == CalcCase::I ? "first-order.case-I" : "first-order.case-II";
        case RuleGroup::Diff1Diff1: return "one-form-exchange";
        case RuleGroup::Diff1Diff2: return "one-two-exchange";
        case RuleGroup::CoordDiff2: return "coordinate-two-form";
        case RuleGroup::Diff2Diff2: return "two-form-exchange";
        case RuleGroup::Diff1Sq: return "one-form-squares";
        case RuleGroup::FormCoord: return "mc-form-coordinate";
        case RuleGroup::FormForm: return "mc-form-exchange";
    }
    return "?";
}

struct MissingRuleError : std::runtime_error {
    Gen x, y;
    MissingRuleError(Gen x_, Gen y_)
        : std::runtime_error(std::string("no rule covers the descending pair ") +
                             gen_name(x_) + "*" + gen_name(y_) +
                             "; the active rule groups do not define this commutation"),
          x(x_), y(y_) {}
};

struct RewriteRule {
    Gen x, y;     // key: the two-letter word x*y
    Element rhs;  // strictly smaller words of the same grade
    RuleGroup group;
};

// A set of oriented quadratic rules with an O(1) key table. The letter rank
// is the termination order; the default rank is the generator id order, and
// the auxiliary rewriters (differentials on the right, forms on the left)
// use a permuted rank.
class RuleSet {
  public:
    static std::array<int, kGenCount> default_rank() {
        std::array<int, kGenCount> r;
        std::iota(r.begin(), r.end(), 0);
        return r;
    }

    explicit RuleSet(CalculusConfig cfg, std::array<int, kGenCount> rank = default_rank())
        : cfg_(cfg), rank_(rank) {
        cfg_.validate();
        index_.fill(-1);
    }

    const CalculusConfig& config() const { return cfg_; }

    bool rank_word_less(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            int ra = rank_[static_cast<int>(a[i])], rb = rank_[static_cast<int>(b[i])];
            if (ra != rb) return ra < rb;
        }
        return false;
    }

    // Registers a group as present even when it contributes no rules (the
    // squares table is empty at one of the two parameter points).
    void mark_group(RuleGroup g) { groups_.insert(g); }
    bool has_group(RuleGroup g) const { return groups_.count(g) != 0; }
    const std::set<RuleGroup>& groups() const { return groups_; }

    // Adds the relation lhs = rhs, oriented: the rank-largest word becomes
    // the key and everything else moves to the right-hand side. A vacuous
    // relation (both sides equal, e.g. a degenerate scalar prefactor) is
    // skipped silently.
    void add_oriented(const Element& lhs, const Element& rhs, RuleGroup grp) {
        Element e = lhs - rhs;
        mark_group(grp);
        if (e.is_zero()) return;
        const Word* key = nullptr;
        for (const auto& [w, c] : e.terms())
            if (!key || rank_word_less(*key, w)) key = &w;
        if (key->size() != 2)
            throw std::invalid_argument("relation does not orient to a quadratic rule: " +
                                        render(e));
        CycNum lead = e.terms().at(*key);
        Element r;
        for (const auto& [w, c] : e.terms())
            if (w != *key) r.add(w, -(c * cyc_inv(lead)));
        add_raw((*key)[0], (*key)[1], std::move(r), grp);
    }

    // Adds a pre-oriented rule, checking the invariants that make the
    // system terminating and grade-preserving.
    void add_raw(Gen x, Gen y, Element rhs, RuleGroup grp) {
        Word key{x, y};
        int key_grade = word_grade(key);
        for (const auto& [w, c] : rhs.terms()) {
            if (word_grade(w) != key_grade)
                throw std::invalid_argument("rule " + word_str(key) + " -> " + render(rhs) +
                                            " does not preserve the grade");
            if (!rank_word_less(w, key))
                throw std::invalid_argument("rule " + word_str(key) + " -> " + render(rhs) +
                                            " is not decreasing");
        }
        int slot = static_cast<int>(x) * kGenCount + static_cast<int>(y);
        if (index_[slot] != -1)
            throw std::invalid_argument("duplicate rule key " + word_str(key));
        index_[slot] = static_cast<int>(rules_.size());
        rules_.push_back(RewriteRule{x, y, std::move(rhs), grp});
        groups_.insert(grp);
    }

    const Element* find(Gen x, Gen y) const {
        int idx = index_[static_cast<int>(x) * kGenCount + static_cast<int>(y)];
        return idx == -1 ? nullptr : &rules_[idx].rhs;
    }

    const std::vector<RewriteRule>& rules() const { return rules_; }

    std::vector<std::size_t> group_rule_indices(RuleGroup g) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rules_.size(); ++i)
            if (rules_[i].group == g) out.push_back(i);
        return out;
    }

    void clear_group(RuleGroup g) {
        std::vector<RewriteRule> kept;
        index_.fill(-1);
        for (auto& r : rules_)
            if (r.group != g) {
                index_[static_cast<int>(r.x) * kGenCount + static_cast<int>(r.y)] =
                    static_cast<int>(kept.size());
                kept.push_back(std::move(r));
            }
        rules_ = std::move(kept);
    }

    // Scales one coefficient of one rule; used by the self-test machinery
    // to confirm that a corrupted table is caught by the verification
    // suites. The word structure is untouched, so the rule invariants still
    // hold and the corruption is visible only to the mathematics.
    void scale_rule_term(std::size_t rule_idx, std::size_t term_idx, const CycNum& factor) {
        if (rule_idx >= rules_.size())
            throw std::out_of_range("rule index out of range");
        Element& rhs = rules_[rule_idx].rhs;
        if (term_idx >= rhs.terms().size())
            throw std::out_of_range("term index out of range");
        auto it = rhs.terms().begin();
        std::advance(it, static_cast<long>(term_idx));
        Element scaled;
        for (const auto& [w, c] : rhs.terms())
            scaled.add(w, w == it->first ? c * factor : c);
        rhs = std::move(scaled);
    }

    // Throws when a stuck word still contains a rank-descending adjacent
    // pair: the word is not sorted and no rule covers the inversion, so the
    // requested rule groups cannot define a normal form for it.
    void check_stuck(const Word& w) const {
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (rank_[static_cast<int>(w[i])] > rank_[static_cast<int>(w[i + 1])])
                throw MissingRuleError(w[i], w[i + 1]);
    }

  private:
    CalculusConfig cfg_;
    std::array<int, kGenCount> rank_;
    std::vector<RewriteRule> rules_;
    std::array<int, kGenCount * kGenCount> index_;
    std::set<RuleGroup> groups_;
};

namespace detail {

// Leftmost-innermost reduction. Every rule replaces a word by strictly
// rank-smaller words of the same length, so the multiset of words decreases
// and the loop terminates. With require_covered unset, words stuck on a
// descending pair are kept instead of raising; the rule derivations use
// that while the covering rules are still being built.
inline Element reduce(const Element& e, const RuleSet& rs, bool require_covered) {
    Element out;
    std::vector<std::pair<Word, CycNum>> work(e.terms().begin(), e.terms().end());
    while (!work.empty()) {
        auto [w, c] = std::move(work.back());
        work.pop_back();
        const Element* rhs = nullptr;
        std::size_t i = 0;
        for (; i + 1 < w.size(); ++i)
            if ((rhs = rs.find(w[i], w[i + 1])) != nullptr) break;
        if (rhs == nullptr) {
            if (require_covered) rs.check_stuck(w);
            out.add(std::move(w), c);
            continue;
        }
        for (const auto& [rw, rc] : rhs->terms()) {
            Word nw;
            nw.reserve(w.size() + rw.size() - 2);
            nw.assign(w.begin(), w.begin() + static_cast<long>(i));
            nw.insert(nw.end(), rw.begin(), rw.end());
            nw.insert(nw.end(), w.begin() + static_cast<long>(i) + 2, w.end());
            work.emplace_back(std::move(nw), c * rc);
        }
    }
    return out;
}

}  // namespace detail

inline Element normalize(const Element& e, const RuleSet& rs) {
    return detail::reduce(e, rs, true);
}

inline bool is_normal(const Element& e, const RuleSet& rs) {
    for (const auto& [w, c] : e.terms())
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (rs.find(w[i], w[i + 1])) return false;
    return true;
}

// The quantum determinant in normal form: a*d - q b*g. It is central and
// z is its inverse.
// All normal coordinate words of length 1..max_len: the coordinate normal
// forms are exactly the weakly increasing words in a < b < g < d.
inline std::vector<Word> ascending_coordinate_words(int max_len) {
    std::vector<Word> out;
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& w : frontier)
            for (Gen x : {Gen::a, Gen::b, Gen::g, Gen::d}) {
                if (!w.empty() && static_cast<int>(w.back()) > static_cast<int>(x)) continue;
                Word e = w;
                e.push_back(x);
                next.push_back(std::move(e));
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

inline Element det_element() {
    return Element::from_word({Gen::a, Gen::d}) -
           q_power(1) * Element::from_word({Gen::b, Gen::g});
}

// Difference of x and y in the quotient by z*det = 1. Normal words carry
// their z letters on the left; stripping them and left-multiplying by
// det^(k-j) lifts every term to the common z-degree k, where z^k cancels
// against det^k. The determinant must multiply from the left: z commutes
// with det but det does not commute with differentials or forms, so
// z^j u = z^k det^(k-j) u and the right-multiplied lift would be wrong off
// the coordinate algebra. The result is zero iff x = y in the quotient.
inline Element residual_mod_det(const Element& x, const Element& y, const RuleSet& rs) {
    Element v = normalize(x - y, rs);
    std::map<int, Element> by_deg;
    int k = 0;
    for (const auto& [w, c] : v.terms()) {
        int j = 0;
        Word u;
        for (Gen t : w)
            if (t == Gen::z) ++j;
            else u.push_back(t);
        by_deg[j].add(std::move(u), c);
        if (j > k) k = j;
    }
    Element det = det_element();
    Element acc;
    for (const auto& [j, u] : by_deg) {
        Element m = u;
        for (int t = 0; t < k - j; ++t) m = det * m;
        acc += normalize(m, rs);
    }
    return acc;
}

inline bool equal_mod_det(const Element& x, const Element& y, const RuleSet& rs) {
    return residual_mod_det(x, y, rs).is_zero();
}

struct ConfluenceIssue {
    Word overlap;
    Element left, right;
};

// All critical pairs of quadratic rules are overlaps x*y*z with keys (x,y)
// and (y,z); both one-step reducts must share a normal form. Together with
// termination this gives global confluence. Reduction here is lenient about
// uncovered descending pairs so an incomplete rule set shows up as a
// difference of stuck reducts rather than an exception.
inline std::vector<ConfluenceIssue> check_local_confluence(const RuleSet& rs) {
    std::vector<ConfluenceIssue> issues;
    for (const RewriteRule& r1 : rs.rules())
        for (const RewriteRule& r2 : rs.rules()) {
            if (r1.y != r2.x) continue;
            Element left = detail::reduce(r1.rhs * Element::from_gen(r2.y), rs, false);
            Element right = detail::reduce(Element::from_gen(r1.x) * r2.rhs, rs, false);
            if (left != right)
                issues.push_back({Word{r1.x, r1.y, r2.y}, std::move(left), std::move(right)});
        }
    return issues;
}

namespace detail {

// Replaces every right-hand side by its normal form so dumped tables and
// extracted coefficients are fully reduced. Safe before the confluence
// check: leftmost-innermost reduction is deterministic.
inline void interreduce(RuleSet& rs) {
    for (std::size_t i = 0; i < rs.rules().size(); ++i) {
        Element reduced = normalize(rs.rules()[i].rhs, rs);
        const_cast<RewriteRule&>(rs.rules()[i]).rhs = std::move(reduced);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shipped rule tables.

inline RuleSet build_rules(const CalculusConfig& cfg, const std::vector<RuleGroup>& groups);

namespace detail {

inline Element M(Gen x, Gen y) { return Element::from_word({x, y}); }

inline void add_coord(RuleSet& rs) {
    using enum Gen;
    const CycNum one(1), Q = q_power(1), Q2 = q_power(2);
    auto rel = [&](const Element& l, const Element& r) {
        rs.add_oriented(l, r, RuleGroup::Coord);
    };
    rel(M(a, b), M(b, a));
    rel(M(a, g), Q * M(g, a));
    rel(M(b, g), M(g, b));
    rel(M(d, g), Q2 * M(g, d));
    rel(M(b, d), M(d, b));
    rel(M(a, d), M(d, a) + (Q - one) * M(b, g));
}

// The determinant is central on the coordinate algebra only, so its inverse
// commutes with the coordinate letters and with nothing else: conjugating a
// differential by the determinant is not expressible by quadratic rules (it
// lands in higher coordinate degree), so those pairs deliberately stay
// uncovered. Forms do admit a quadratic exchange; it ships with the
// form-coordinate table.
inline void add_central(RuleSet& rs) {
    rs.mark_group(RuleGroup::Central);
    for (Gen x : {Gen::a, Gen::b, Gen::g, Gen::d})
        rs.add_oriented(M(x, Gen::z), M(Gen::z, x), RuleGroup::Central);
}

inline void add_coord_diff1(RuleSet& rs) {
    using enum Gen;
    const CalculusConfig& c = rs.config();
    const CycNum one(1), Q = q_power(1), Q2 = q_power(2);
    const CycNum P1 = c.p1(), P1i = c.p1_inv(), P2 = c.p2(), P2i = c.p2_inv();
    auto rel = [&](const Element& l, const Element& r) {
        rs.add_oriented(l, r, RuleGroup::CoordDiff1);
    };
    if (c.kase == CalcCase::I) {
        rel(M(a, da), P1 * M(da, a));
        rel(M(a, db), M(db, a) + (Q2 * P2 - one) * M(da, b));
        rel(M(a, dg), Q2 * P1i * M(dg, a) + Q * (one - Q * P1) * M(da, g));
        rel(M(a, dd), M(dd, a) + (Q2 * P2 - one) * M(da, d) + (Q - one) * M(db, g));
        rel(M(b, da), P2 * M(da, b));
        rel(M(b, db), P2 * M(db, b));
        rel(M(b, dg), P2 * M(dg, b));
        rel(M(b, dd), P2i * M(dd, b) + Q2 * (one - P2) * M(db, d));
        rel(M(g, da), P1i * M(da, g) + (Q - P1) * M(dg, a));
        rel(M(g, dg), Q2 * P1 * M(dg, g));
        rel(M(g, db), Q2 * M(db, g) + Q * (P2 - Q) * M(dg, b));
        rel(M(g, dd), M(dd, g) + Q * (P2 - Q) * M(dg, d));
        rel(M(d, da), Q2 * P2 * M(da, d) + (Q2 - one) * P2 * M(dg, b));
        rel(M(d, dg), Q * P2 * M(dg, d));
        rel(M(d, db), P2i * M(db, d) + (Q2 - P2) * M(dd, b));
        rel(M(d, dd), Q2 * P2 * M(dd, d));
    } else {
        rel(M(a, da), P1 * M(da, a));
        rel(M(a, dg), Q2 * P1i * M(dg, a) + Q * (one - Q * P1) * M(da, g));
        rel(M(a, db), P1 * M(db, a));
        rel(M(a, dd), P1 * M(dd, a) + (Q - one) * P1 * M(db, g));
        rel(M(b, da), Q * M(da, b) + Q * (P1 - one) * M(db, a));
        rel(M(b, db), P2 * M(db, b));
        rel(M(b, dg), Q * M(dg, b) + Q * (P1 - one) * M(db, g));
        rel(M(b, dd), P2i * M(dd, b) + Q2 * (one - P2) * M(db, d));
        rel(M(g, da), P1i * M(da, g) + (Q - P1) * M(dg, a));
        rel(M(g, db), Q2 * P1 * M(db, g));
        rel(M(g, dg), Q2 * P1 * M(dg, g));
        rel(M(g, dd), P1 * M(dd, g));
        rel(M(d, da), M(da, d) + (one - Q) * M(dg, b) + (P1 - one) * M(dd, a));
        rel(M(d, db), P2i * M(db, d) + (Q2 - P2) * M(dd, b));
        rel(M(d, dg), Q2 * M(dg, d) + (P1 - one) * M(dd, g));
        rel(M(d, dd), Q2 * P2 * M(dd, d));
    }
}

inline void add_diff1_diff1(RuleSet& rs) {
    using enum Gen;
    const CycNum Q = q_power(1), Q2 = q_power(2);
    auto rel = [&](const Element& l, const Element& r) {
        rs.add_oriented(l, r, RuleGroup::Diff1Diff1);
    };
    rel(M(da, db), Q2 * M(db, da));
    rel(M(da, dg), Q2 * M(dg, da));
    rel(M(dd, db), Q2 * M(db, dd));
    rel(M(dd, dg), M(dg, dd));
    rel(M(db, dg), Q2 * M(dg, db));
    rel(M(da, dd), M(dd, da) + (Q2 - Q) * M(dg, db));
}

// Graded Leibniz derivative of a two-letter word at letter level:
// d(xy) = (dx)y + q^{p(x)} x(dy), with terms whose letter differentiates to
// zero dropped.
inline Element diff_word2(Gen x, Gen y) {
    Element out;
    if (auto dx = diff_letter(x)) out.add(Word{*dx, y}, CycNum(1));
    if (auto dy = diff_letter(y)) out.add(Word{x, *dy}, q_power(grade(x)));
    return out;
}

inline Element diff_elem2(const Element& e) {
    Element out;
    for (const auto& [w, c] : e.terms()) out += c * diff_word2(w[0], w[1]);
    return out;
}

// The second-order tables are not independent input: they are forced by
// differentiating the first-order table, exactly once for the coordinate
// rules and twice for the rules between differentials. The source presents
// them instantiated at P2 = 1; deriving them here makes both admissible
// parameter points come out right, because at P1 = q, P2 = q^2 the products
// of first differentials collapse into the second-order basis and feed
// correction terms into every derived rule.

// coordinate x second differential, from d applied to each first-order rule
// x*dy -> R:  x d2y = q^{-p(x)} (d(R) - dx dy), reduced.
inline void derive_coord_diff2(RuleSet& rs) {
    for (std::size_t i : rs.group_rule_indices(RuleGroup::CoordDiff1)) {
        const RewriteRule r = rs.rules()[i];
        Element numer = diff_elem2(r.rhs);
        numer.add(Word{*diff_letter(r.x), r.y}, CycNum(-1));
        Element rhs = q_power(-grade(r.x)) * normalize(numer, rs);
        for (const auto& [w, c] : rhs.terms())
            if (letter_class(w[0]) != LetterClass::Diff2 ||
                letter_class(w[1]) != LetterClass::Coordinate)
                throw std::logic_error("second-order derivation left the word " +
                                       word_str(w) + " unreduced");
        rs.add_raw(r.x, *diff_letter(r.y), std::move(rhs), RuleGroup::CoordDiff2);
    }
}

// first x second differential. Differentiating a single first-order rule
// twice does not pin the exchange table down (the x*dy and y*dx rules give
// proportional unknown parts), so the system collects every differential
// consequence of the first-order calculus: second derivatives of the
// coordinate rules plus first derivatives of the exchange and squares rules.
// The combined system is overdetermined; at the parameter point carrying
// the second-order calculus it is consistent and of full rank.
inline void derive_diff1_diff2(RuleSet& rs) {
    constexpr Gen kCoords[4] = {Gen::a, Gen::b, Gen::g, Gen::d};
    auto unknown_index = [](Gen du, Gen d2v) {
        return 4 * (static_cast<int>(du) - 5) + (static_cast<int>(d2v) - 1);
    };
    if (rs.group_rule_indices(RuleGroup::CoordDiff1).size() != 16)
        throw std::logic_error("second-order derivation needs the full first-order table");
    std::vector<std::vector<CycNum>> a;
    std::vector<Element> b;
    auto push_equation = [&](const Element& eq) {
        a.emplace_back(16, CycNum(0));
        b.emplace_back();
        for (const auto& [w, c] : eq.terms()) {
            if (letter_class(w[0]) == LetterClass::Diff1 &&
                letter_class(w[1]) == LetterClass::Diff2)
                a.back()[unknown_index(w[0], w[1])] += c;
            else if (letter_class(w[0]) == LetterClass::Diff2 &&
                     letter_class(w[1]) == LetterClass::Diff1)
                b.back().add(w, -c);
            else
                throw std::logic_error("unexpected word " + word_str(w) +
                                       " in the second-order system");
        }
    };
    for (std::size_t i : rs.group_rule_indices(RuleGroup::CoordDiff1)) {
        const RewriteRule& r = rs.rules()[i];
        push_equation(diff_elem2(diff_word2(r.x, r.y)) - diff_elem2(diff_elem2(r.rhs)));
    }
    for (RuleGroup g : {RuleGroup::Diff1Diff1, RuleGroup::Diff1Sq})
        for (std::size_t i : rs.group_rule_indices(g)) {
            const RewriteRule& r = rs.rules()[i];
            push_equation(diff_word2(r.x, r.y) - diff_elem2(r.rhs));
        }
    std::vector<Element> u = solve_linear(std::move(a), std::move(b));
    for (Gen x : kCoords)
        for (Gen y : kCoords) {
            Gen du = *diff_letter(x), dv = *diff_letter(y);
            Gen d2v = *diff_letter(dv);
            rs.add_raw(du, d2v, normalize(u[unknown_index(du, d2v)], rs),
                       RuleGroup::Diff1Diff2);
        }
}

// second x second differential, from d applied to each derived du*d2v rule;
// the sixteen consequences orient into the exchange rules and the leftovers
// must already normalize to zero.
inline void derive_diff2_diff2(RuleSet& rs) {
    auto indices = rs.group_rule_indices(RuleGroup::Diff1Diff2);
    rs.mark_group(RuleGroup::Diff2Diff2);
    for (std::size_t i : indices) {
        const RewriteRule r = rs.rules()[i];
        Element rel = reduce(diff_word2(r.x, r.y) - diff_elem2(r.rhs), rs, false);
        if (!rel.is_zero()) rs.add_oriented(rel, Element::zero(), RuleGroup::Diff2Diff2);
    }
    for (std::size_t i : rs.group_rule_indices(RuleGroup::Diff1Diff2)) {
        const RewriteRule& r = rs.rules()[i];
        if (!normalize(diff_word2(r.x, r.y) - diff_elem2(r.rhs), rs).is_zero())
            throw std::logic_error("second-order exchange table is inconsistent");
    }
}

inline void add_diff1_squares(RuleSet& rs) {
    using enum Gen;
    const CalculusConfig& c = rs.config();
    const CycNum one(1), Q = q_power(1), Q2 = q_power(2);
    const CycNum P1 = c.p1(), P1i = c.p1_inv(), P2 = c.p2();
    // Constrained table: each line carries a scalar prefactor that vanishes
    // at one of the two parameter points, where the line asserts nothing.
    auto rel = [&](const Element& l, const Element& r) {
        rs.add_oriented(l, r, RuleGroup::Diff1Sq);
    };
    rel((Q * P1 - one) * M(da, da), (Q2 - P1) * M(d2a, a));
    rel((P2 - one) * M(db, db), (one - P2) * M(d2b, b));
    rel((P2 - one) * M(da, db), P2 * (P2 - one) * (Q * M(d2b, a) + P2 * M(d2a, b)));
    rel((Q - P1i) * M(da, dg), (Q * P1 - one) * (M(d2g, a) + M(d2a, g)));
    rel((P2 - one) * M(da, dd),
        (P2 - one) * (Q * M(d2d, a) + P2 * M(d2a, d) + (Q2 - Q) * M(d2b, g)));
    rel((P2 - one) * M(db, dg), P2 * (P2 - one) * (P2 * M(d2g, b) + Q2 * M(d2b, g)));
    rel((P2 - one) * M(db, dd), (P2 - one) * (Q * M(d2d, b) + Q2 * M(d2b, d)));
    rel((P2 - one) * M(dg, dd), P2 * (P2 - one) * (Q * M(d2d, g) + Q2 * P2 * M(d2g, d)));
    rel((P1 - Q2) * M(dg, dg), Q * (Q2 - P1) * M(d2g, g));
    rel((P2 - one) * M(dd, dd), Q2 * (one - P2) * M(d2d, d));
}

// The Maurer-Cartan multiplier table: w_i f = q^{p(f) p(w_i)} sum_j
// mu_ij(f) w_j, with mu given entrywise on the coordinate generators.
inline void add_form_coord(RuleSet& rs) {
    using enum Gen;
    const CalculusConfig& c = rs.config();
    const CycNum one(1), Q = q_power(1), Q2 = q_power(2);
    const CycNum P1 = c.p1(), P1i = c.p1_inv(), P2 = c.p2(), P2i = c.p2_inv();
    const Gen forms[4] = {w1, w2, w3, w4};
    const Gen coords[4] = {a, b, g, d};
    const CycNum zero(0);

    // mu[f][i][j]: scalar s and target letter t meaning the entry s * t.
    struct Entry {
        CycNum s;
        Gen t;
    };
    std::map<Gen, std::array<std::array<Entry, 4>, 4>> mu;
    auto E0 = Entry{zero, a};
    for (Gen f : coords) mu[f] = {{{E0, E0, E0, E0}, {E0, E0, E0, E0},
                                   {E0, E0, E0, E0}, {E0, E0, E0, E0}}};

    mu[a][0][0] = {P1i, a};
    mu[a][0][2] = {one - Q * P1i, b};
    mu[a][1][1] = {one, a};
    mu[a][2][2] = {Q * P1, a};
    mu[a][3][0] = {Q * P2i - one, a};
    mu[a][3][2] = {P2i - Q2, b};
    mu[a][3][3] = {one, a};

    mu[b][0][0] = {Q * P2i, b};
    mu[b][1][1] = {P2, b};
    mu[b][2][2] = {Q2 * P2i, b};
    mu[b][3][1] = {one - P2i, a};
    mu[b][3][3] = {Q * P2i, b};

    mu[g][0][0] = {P1i, g};
    mu[g][0][2] = {one - Q * P1i, d};
    mu[g][1][1] = {one, g};
    mu[g][2][2] = {Q * P1, g};
    mu[g][3][0] = {Q * P2i - one, g};
    mu[g][3][2] = {P2i - Q2, d};
    mu[g][3][3] = {one, g};

    mu[d][0][0] = {Q * P2i, d};
    mu[d][1][1] = {P2, d};
    mu[d][2][2] = {Q2 * P2i, d};
    mu[d][3][1] = {one - P2i, g};
    mu[d][3][3] = {Q * P2i, d};

    for (Gen f : coords)
        for (int i = 0; i < 4; ++i) {
            Element rhs;
            for (int j = 0; j < 4; ++j) {
                const Entry& en = mu[f][i][j];
                if (en.s.is_zero()) continue;
                rhs += en.s * M(en.t, forms[j]);
            }
            rs.add_oriented(M(forms[i], f),
                            q_power(grade(f) * grade(forms[i])) * rhs, RuleGroup::FormCoord);
        }

    // Exchange with the inverse determinant. The numeric multiplier table of
    // the determinant is Fdet = diag(q/(P1 P2), P2, P1/P2, q/P2) with the one
    // off-diagonal entry (4,1) = (q/P2)(q/P2 - 1); a form passes through the
    // inverse determinant with the inverse of that matrix.
    CycNum finv[4][4] = {};
    const CycNum fdiag[4] = {Q * P1i * P2i, P2, P1 * P2i, Q * P2i};
    for (int i = 0; i < 4; ++i) finv[i][i] = cyc_inv(fdiag[i]);
    finv[3][0] = -(finv[3][3] * (Q * P2i * (Q * P2i - one)) * finv[0][0]);
    for (int i = 0; i < 4; ++i) {
        Element rhs;
        for (int j = 0; j < 4; ++j)
            if (!finv[i][j].is_zero()) rhs += finv[i][j] * M(z, forms[j]);
        rs.add_oriented(M(forms[i], z), rhs, RuleGroup::FormCoord);
    }
}

// The form products, derived rather than tabulated. Clearing the inverse
// determinant from the invariant forms leaves X_1 = d da - q^2 b dg,
// X_2 = d db - q^2 b dd, X_3 = a dg - q^2 g da, X_4 = a dd - q^2 g db, so
// that w_i = z X_i; the determinant passes through a form by the Fdet
// multiplier table (see the form-coordinate group), giving
// w_j w_i = sum_k Fdet^{-1}_jk X_k X_i up to the central square z^2. The
// X products normalize in the first-order calculus plus the squares table,
// and each descending form product is solved exactly over the ascending
// ones. An ascending product that vanishes yields a zero rule when the two
// letters are equal; a vanishing strictly ascending product would leave a
// nonzero word normal while representing zero, so it is an error.
inline void derive_form_form(RuleSet& rs) {
    using enum Gen;
    const CalculusConfig& c = rs.config();
    const CycNum one(1), Q = q_power(1), Q2 = q_power(2);
    const CycNum P1 = c.p1(), P1i = c.p1_inv(), P2 = c.p2(), P2i = c.p2_inv();
    rs.mark_group(RuleGroup::FormForm);
    RuleSet diff =
        build_rules(c, {RuleGroup::Coord, RuleGroup::Central, RuleGroup::CoordDiff1,
                        RuleGroup::Diff1Diff1, RuleGroup::Diff1Sq});
    const Element x[4] = {M(d, da) - Q2 * M(b, dg), M(d, db) - Q2 * M(b, dd),
                          M(a, dg) - Q2 * M(g, da), M(a, dd) - Q2 * M(g, db)};
    CycNum finv[4][4] = {};
    const CycNum fdiag[4] = {Q * P1i * P2i, P2, P1 * P2i, Q * P2i};
    for (int i = 0; i < 4; ++i) finv[i][i] = cyc_inv(fdiag[i]);
    finv[3][0] = -(finv[3][3] * (Q * P2i * (Q * P2i - one)) * finv[0][0]);
    Element prod[4][4];
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            Element p;
            for (int k = 0; k < 4; ++k)
                if (!finv[j][k].is_zero()) p += finv[j][k] * (x[k] * x[i]);
            prod[j][i] = normalize(p, diff);
        }

    const Gen forms[4] = {w1, w2, w3, w4};
    std::vector<std::pair<int, int>> cols;
    std::map<Word, std::size_t> row_of;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (const auto& [w, cf] : prod[i][j].terms()) row_of.emplace(w, row_of.size());
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            if (!prod[i][j].is_zero())
                cols.emplace_back(i, j);
            else if (i == j)
                rs.add_raw(forms[i], forms[i], Element(), RuleGroup::FormForm);
            else
                throw std::logic_error(std::string("vanishing ascending form product ") +
                                       gen_name(forms[i]) + "*" + gen_name(forms[j]));
        }
    std::vector<std::vector<CycNum>> mat(row_of.size(),
                                         std::vector<CycNum>(cols.size(), CycNum(0)));
    for (std::size_t t = 0; t < cols.size(); ++t) {
        const Element& e = prod[cols[t].first][cols[t].second];
        for (const auto& [w, cf] : e.terms()) mat[row_of.at(w)][t] = cf;
    }
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < j; ++i) {
            std::vector<CycNum> b(row_of.size(), CycNum(0));
            for (const auto& [w, cf] : prod[j][i].terms()) b[row_of.at(w)] = cf;
            std::vector<CycNum> sol = solve_linear(mat, std::move(b));
            Element rhs;
            for (std::size_t t = 0; t < cols.size(); ++t)
                if (!sol[t].is_zero())
                    rhs += sol[t] * M(forms[cols[t].first], forms[cols[t].second]);
            rs.add_raw(forms[j], forms[i], std::move(rhs), RuleGroup::FormForm);
        }
}

}  // namespace detail

// Groups that are defined for a given configuration. Case II ships only the
// first-order calculus; the second-order and form tables additionally need
// one of the two admissible parameter points.
inline std::vector<RuleGroup> available_groups(const CalculusConfig& cfg) {
    std::vector<RuleGroup> out{RuleGroup::Coord, RuleGroup::Central, RuleGroup::CoordDiff1};
    if (cfg.admissible_point()) out.push_back(RuleGroup::Diff1Diff1);
    if (cfg.kase == CalcCase::I && cfg.admissible_point()) {
        out.insert(out.end(),
                   {RuleGroup::Diff1Sq, RuleGroup::FormCoord, RuleGroup::FormForm});
    }
    if (cfg.second_order_available()) {
        out.insert(out.end(), {RuleGroup::Diff1Diff2, RuleGroup::CoordDiff2,
                               RuleGroup::Diff2Diff2});
    }
    return out;
}

inline RuleSet build_rules(const CalculusConfig& cfg, const std::vector<RuleGroup>& groups) {
    cfg.validate();
    RuleSet rs(cfg);
    auto avail = available_groups(cfg);
    std::set<RuleGroup> want;
    for (RuleGroup g : groups) {
        bool ok = false;
        for (RuleGroup hg : avail) ok = ok || hg == g;
        if (!ok)
            throw std::invalid_argument(std::string("rule group ") + group_id(g) +
                                        " is not defined for " + cfg.describe());
        want.insert(g);
    }
    // The second-order groups are derived from the first-order tables, so
    // those must be built first; requesting a derived group alone is an
    // error rather than a silent dependency pull.
    const RuleGroup derived[] = {RuleGroup::CoordDiff2, RuleGroup::Diff1Diff2,
                                 RuleGroup::Diff2Diff2};
    bool any_derived = false;
    for (RuleGroup g : derived) any_derived = any_derived || want.count(g) != 0;
    if (any_derived) {
        for (RuleGroup need : {RuleGroup::CoordDiff1, RuleGroup::Diff1Diff1,
                               RuleGroup::Diff1Sq})
            if (want.count(need) == 0)
                throw std::invalid_argument(
                    std::string("second-order rule groups require group ") +
                    group_id(need));
        if (want.count(RuleGroup::Diff2Diff2) != 0 &&
            want.count(RuleGroup::Diff1Diff2) == 0)
            throw std::invalid_argument("rule group diff2-diff2 requires group diff1-diff2");
    }
    const RuleGroup build_order[] = {
        RuleGroup::Coord,      RuleGroup::Central,    RuleGroup::CoordDiff1,
        RuleGroup::Diff1Diff1, RuleGroup::Diff1Sq,    RuleGroup::FormCoord,
        RuleGroup::FormForm,   RuleGroup::CoordDiff2, RuleGroup::Diff1Diff2,
        RuleGroup::Diff2Diff2};
    for (RuleGroup g : build_order) {
        if (want.count(g) == 0) continue;
        switch (g) {
            case RuleGroup::Coord: detail::add_coord(rs); break;
            case RuleGroup::Central: detail::add_central(rs); break;
            case RuleGroup::CoordDiff1: detail::add_coord_diff1(rs); break;
            case RuleGroup::Diff1Diff1: detail::add_diff1_diff1(rs); break;
            case RuleGroup::Diff1Sq: detail::add_diff1_squares(rs); break;
            case RuleGroup::FormCoord: detail::add_form_coord(rs); break;
            case RuleGroup::FormForm: detail::derive_form_form(rs); break;
            case RuleGroup::CoordDiff2: detail::derive_coord_diff2(rs); break;
            case RuleGroup::Diff1Diff2: detail::derive_diff1_diff2(rs); break;
            case RuleGroup::Diff2Diff2: detail::derive_diff2_diff2(rs); break;
        }
    }
    detail::interreduce(rs);
    return rs;
}

// The three closed rewriting universes: plain coordinates, the differential
// complex, and the Maurer-Cartan form algebra. Forms and differentials have
// no cross rules, which is why the latter two stay separate.
inline RuleSet coordinate_rules(const CalculusConfig& cfg) {
    return build_rules(cfg, {RuleGroup::Coord, RuleGroup::Central});
}

inline RuleSet differential_rules(const CalculusConfig& cfg) {
    std::vector<RuleGroup> gs{RuleGroup::Coord, RuleGroup::Central, RuleGroup::CoordDiff1};
    if (cfg.admissible_point()) gs.push_back(RuleGroup::Diff1Diff1);
    // The squares group belongs to this universe only where the second-order
    // groups close it; elsewhere it stays a verification-only table (its
    // right-hand sides leave the first-order sector).
    if (cfg.second_order_available())
        gs.insert(gs.end(), {RuleGroup::Diff1Sq, RuleGroup::Diff1Diff2,
                             RuleGroup::CoordDiff2, RuleGroup::Diff2Diff2});
    return build_rules(cfg, gs);
}

inline RuleSet form_rules(const CalculusConfig& cfg) {
    return build_rules(cfg, {RuleGroup::Coord, RuleGroup::Central, RuleGroup::FormCoord,
                             RuleGroup::FormForm});
}

// Everything defined at the configuration, in one table. Normalization over
// this set throws MissingRuleError on words mixing forms with differentials,
// which the calculus does not relate.
inline RuleSet full_rules(const CalculusConfig& cfg) {
    return build_rules(cfg, available_groups(cfg));
}

namespace detail {

inline void require_groups(const RuleSet& rs, std::initializer_list<RuleGroup> gs,
                           const char* what) {
    for (RuleGroup g : gs)
        if (!rs.has_group(g))
            throw std::invalid_argument(std::string(what) + " needs rule group " +
                                        group_id(g));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rule-file serialization: "[group-id cite]" section headers, one oriented
// rule per line, '#' comments. Groups present in a file replace the shipped
// table of the same name wholesale.

inline std::string dump_rules(const RuleSet& rs) {
    std::ostringstream os;
    os << "# rewriting rules: " << rs.config().describe() << "\n";
    for (RuleGroup g : kAllRuleGroups) {
        if (!rs.has_group(g)) continue;
        os << "\n[" << group_id(g) << " " << group_cite(g, rs.config().kase) << "]\n";
        for (std::size_t i : rs.group_rule_indices(g)) {
            const RewriteRule& r = rs.rules()[i];
            os << word_str({r.x, r.y}) << " -> " << render(r.rhs) << "\n";
        }
    }
    return os.str();
}

namespace detail {

inline Word parse_rule_word(const std::string& text) {
    if (text == "1") return Word{};
    Word w;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t star = text.find('*', pos);
        std::string name =
            text.substr(pos, (star == std::string::npos ? text.size() : star) - pos);
        w.push_back(gen_from_name(name));
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return w;
}

// "(c) word + (c) word + ..." or "0".
inline Element parse_rule_rhs(const std::string& text) {
    if (text == "0") return Element::zero();
    Element e;
    std::size_t pos = 0;
    while (true) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size() || text[pos] != '(')
            throw std::invalid_argument("expected '(coefficient)' in \"" + text + "\"");
        std::size_t close = text.find(')', pos);
        if (close == std::string::npos)
            throw std::invalid_argument("unbalanced coefficient in \"" + text + "\"");
        CycNum c = parse_cyc(text.substr(pos + 1, close - pos - 1));
        pos = close + 1;
        while (pos < text.size() && text[pos] == ' ') ++pos;
        std::size_t end = text.find(" + ", pos);
        std::string wtxt =
            text.substr(pos, (end == std::string::npos ? text.size() : end) - pos);
        while (!wtxt.empty() && wtxt.back() == ' ') wtxt.pop_back();
        e.add(parse_rule_word(wtxt), c);
        if (end == std::string::npos) break;
        pos = end + 3;
    }
    return e;
}

}  // namespace detail

// Applies a rule file on top of rs: every "[group ...]" section replaces the
// shipped rules of that group. Malformed input throws invalid_argument.
inline void apply_rule_file(RuleSet& rs, const std::string& text) {
    std::istringstream is(text);
    std::string line;
    bool in_section = false;
    RuleGroup current = RuleGroup::Coord;
    int lineno = 0;
    try {
        while (std::getline(is, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                                     line.back() == '\t'))
                line.pop_back();
            std::size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            line = line.substr(start);
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::invalid_argument("unterminated section header");
                std::string inner = line.substr(1, line.size() - 2);
                std::string id = inner.substr(0, inner.find(' '));
                current = group_from_id(id);
                rs.clear_group(current);
                rs.mark_group(current);
                in_section = true;
                continue;
            }
            if (!in_section)
                throw std::invalid_argument("rule before any [group] header");
            std::size_t arrow = line.find("->");
            if (arrow == std::string::npos)
                throw std::invalid_argument("missing '->'");
            std::string lhs = line.substr(0, arrow);
            while (!lhs.empty() && lhs.back() == ' ') lhs.pop_back();
            Word key = detail::parse_rule_word(lhs);
            if (key.size() != 2)
                throw std::invalid_argument("rule key must be a two-letter word");
            Element rhs = detail::parse_rule_rhs(line.substr(arrow + 2).erase(
                0, line.substr(arrow + 2).find_first_not_of(' ')));
            rs.add_raw(key[0], key[1], std::move(rhs), current);
        }
    } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument("rule file line " + std::to_string(lineno) + ": " +
                                    ex.what());
    }
}

}  // namespace glq
