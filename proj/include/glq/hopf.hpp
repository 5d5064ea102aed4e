#pragma once

// Hopf structure on the coordinate algebra: matrix coproduct, counit and the
// graded antipode, with verification suites for the axioms. The coproduct is
// an algebra homomorphism into the graded tensor square, the antipode the
// graded antihomomorphism S(uv) = q^{p(u)p(v)} S(v)S(u). Neither map is
// defined on differential or form letters.

#include <stdexcept>
#include <string>

#include "glq/report.hpp"
#include "glq/rewrite.hpp"

namespace glq {

inline Tensor2 coproduct_letter(Gen x) {
    auto two = [](Gen u1, Gen u2, Gen v1, Gen v2) {
        Tensor2 t;
        t.add({Word{u1}, Word{u2}}, CycNum(1));
        t.add({Word{v1}, Word{v2}}, CycNum(1));
        return t;
    };
    using enum Gen;
    switch (x) {
        case a: return two(a, a, b, g);
        case b: return two(a, b, b, d);
        case g: return two(g, a, d, g);
        case d: return two(g, b, d, d);
        case z: {
            Tensor2 t;
            t.add({Word{z}, Word{z}}, CycNum(1));
            return t;
        }
        default:
            throw std::domain_error(std::string("no coproduct for ") + gen_name(x));
    }
}

inline Tensor2 coproduct(const Element& e) {
    Tensor2 out;
    for (const auto& [w, c] : e.terms()) {
        Tensor2 t;
        t.add({Word{}, Word{}}, c);
        for (Gen x : w) t = t * coproduct_letter(x);
        out += t;
    }
    return out;
}

inline CycNum counit_letter(Gen x) {
    using enum Gen;
    switch (x) {
        case a:
        case d:
        case z: return CycNum(1);
        case b:
        case g: return CycNum(0);
        default: throw std::domain_error(std::string("no counit for ") + gen_name(x));
    }
}

inline CycNum counit(const Element& e) {
    CycNum out(0);
    for (const auto& [w, c] : e.terms()) {
        CycNum f = c;
        for (Gen x : w) f *= counit_letter(x);
        out += f;
    }
    return out;
}

inline Element antipode_letter(Gen x) {
    using enum Gen;
    switch (x) {
        case a: return Element::from_word({d, z});
        case b: return Element::from_word({b, z}, CycNum(-1));
        case g: return Element::from_word({g, z}, -q_power(1));
        case d: return Element::from_word({a, z});
        case z: return det_element();
        default:
            throw std::domain_error(std::string("no antipode for ") + gen_name(x));
    }
}

// S on a word g1..gn is q^{sum_{i<j} p_i p_j} S(gn)...S(g1); the prefactor
// is the cost of reversing the graded factors.
inline Element antipode(const Element& e, const RuleSet& rs) {
    Element out;
    for (const auto& [w, c] : e.terms()) {
        long twist = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j)
                twist += grade(w[i]) * grade(w[j]);
        Element prod = Element::one();
        for (auto it = w.rbegin(); it != w.rend(); ++it) prod *= antipode_letter(*it);
        out += (c * q_power(twist)) * prod;
    }
    return normalize(out, rs);
}

// Slotwise normalization: rewriting inside one tensor slot never crosses
// slots and the rules preserve the grade, so this commutes with the graded
// tensor product.
inline Tensor2 normalize_slots(const Tensor2& t, const RuleSet& rs) {
    Tensor2 r;
    for (const auto& [k, c] : t.terms()) {
        Element x = normalize(Element::from_word(k[0]), rs);
        Element y = normalize(Element::from_word(k[1]), rs);
        for (const auto& [wx, cx] : x.terms())
            for (const auto& [wy, cy] : y.terms()) r.add({wx, wy}, c * cx * cy);
    }
    return r;
}

inline Tensor3 normalize_slots(const Tensor3& t, const RuleSet& rs) {
    Tensor3 r;
    for (const auto& [k, c] : t.terms()) {
        Element x = normalize(Element::from_word(k[0]), rs);
        Element y = normalize(Element::from_word(k[1]), rs);
        Element z = normalize(Element::from_word(k[2]), rs);
        for (const auto& [wx, cx] : x.terms())
            for (const auto& [wy, cy] : y.terms())
                for (const auto& [wz, cz] : z.terms()) r.add({wx, wy, wz}, c * cx * cy * cz);
    }
    return r;
}

namespace detail {

// Coproduct applied inside one slot of a tensor: plain linear extension, no
// crossing factors arise because nothing moves past anything.
inline Tensor3 coproduct_first_slot(const Tensor2& t) {
    Tensor3 r;
    for (const auto& [k, c] : t.terms()) {
        Tensor2 dx = coproduct(Element::from_word(k[0]));
        for (const auto& [k2, c2] : dx.terms()) r.add({k2[0], k2[1], k[1]}, c * c2);
    }
    return r;
}

inline Tensor3 coproduct_second_slot(const Tensor2& t) {
    Tensor3 r;
    for (const auto& [k, c] : t.terms()) {
        Tensor2 dy = coproduct(Element::from_word(k[1]));
        for (const auto& [k2, c2] : dy.terms()) r.add({k[0], k2[0], k2[1]}, c * c2);
    }
    return r;
}

}  // namespace detail

// The three Hopf axioms on every normal coordinate word up to max_len, plus
// group-likeness of the determinant and the antihomomorphism law. Entries
// aggregate per axiom; failing words get their own entries.
inline CheckReport verify_hopf_axioms(int max_len, const RuleSet& rs) {
    if (!rs.has_group(RuleGroup::Coord) || !rs.has_group(RuleGroup::Central))
        throw std::invalid_argument(
            "hopf verification needs the coordinate and central rule groups");
    CheckReport report("hopf", rs.config());
    const std::string cite = "hopf-structure";
    std::vector<Word> words = ascending_coordinate_words(max_len);

    auto run = [&](const std::string& id, auto&& check) {
        int failures = 0;
        std::string first;
        for (const Word& w : words) {
            std::string residual = check(w);
            if (residual.empty()) continue;
            ++failures;
            if (failures == 1) first = "at " + word_str(w) + ": " + residual;
            report.add(id + " at " + word_str(w), cite, false, residual);
        }
        report.add(id + " on words up to length " + std::to_string(max_len), cite,
                   failures == 0, first);
    };

    run("coassociativity", [&](const Word& w) -> std::string {
        Tensor2 dw = coproduct(Element::from_word(w));
        Tensor3 diff = detail::coproduct_first_slot(dw) - detail::coproduct_second_slot(dw);
        Tensor3 res = normalize_slots(diff, rs);
        return res.is_zero() ? std::string() : render(res);
    });
    run("counit law", [&](const Word& w) -> std::string {
        Tensor2 dw = coproduct(Element::from_word(w));
        Element left, right;
        for (const auto& [k, c] : dw.terms()) {
            left += (c * counit(Element::from_word(k[0]))) * Element::from_word(k[1]);
            right += (c * counit(Element::from_word(k[1]))) * Element::from_word(k[0]);
        }
        Element id = Element::from_word(w);
        Element res = (normalize(left, rs) - id) + (normalize(right, rs) - id);
        return res.is_zero() ? std::string() : render(res);
    });
    run("antipode law", [&](const Word& w) -> std::string {
        Tensor2 dw = coproduct(Element::from_word(w));
        Element left, right;
        for (const auto& [k, c] : dw.terms()) {
            left += c * (antipode(Element::from_word(k[0]), rs) * Element::from_word(k[1]));
            right += c * (Element::from_word(k[0]) * antipode(Element::from_word(k[1]), rs));
        }
        Element target = counit(Element::from_word(w)) * Element::one();
        Element res = residual_mod_det(left, target, rs) + residual_mod_det(right, target, rs);
        return res.is_zero() ? std::string() : render(res);
    });
    run("counit respects the antipode", [&](const Word& w) -> std::string {
        CycNum diff = counit(antipode(Element::from_word(w), rs)) -
                      counit(Element::from_word(w));
        return diff.is_zero() ? std::string() : pretty(diff);
    });

    Element det = det_element();
    Tensor2 dd = normalize_slots(coproduct(det), rs);
    Tensor2 expect = normalize_slots(tensor2(det, det), rs);
    report.add("determinant is group-like", cite, dd == expect, render(dd - expect));
    report.add("counit of the determinant", cite, (counit(det) - CycNum(1)).is_zero(),
               pretty(counit(det)));

    bool anti_ok = true;
    std::string anti_res;
    for (Gen x : {Gen::a, Gen::b, Gen::g, Gen::d, Gen::z})
        for (Gen y : {Gen::a, Gen::b, Gen::g, Gen::d, Gen::z}) {
            Element direct = antipode(Element::from_word({x, y}), rs);
            Element composed = normalize(
                q_power(grade(x) * grade(y)) * (antipode_letter(y) * antipode_letter(x)), rs);
            if (direct == composed) continue;
            anti_ok = false;
            if (anti_res.empty())
                anti_res = std::string("at ") + gen_name(x) + "*" + gen_name(y) + ": " +
                           render(direct - composed);
        }
    report.add("antipode reverses graded products", cite, anti_ok, anti_res);
    return report;
}

// The coproduct and counit respect the active coordinate and central rules:
// applying them to both sides of every rule leaves no residual. Runs against
// whatever tables rs carries, so corrupted tables are caught here.
inline CheckReport verify_delta_homomorphism(const RuleSet& rs) {
    CheckReport report("delta-hom", rs.config());
    for (RuleGroup grp : {RuleGroup::Coord, RuleGroup::Central}) {
        if (!rs.has_group(grp)) continue;
        for (std::size_t i : rs.group_rule_indices(grp)) {
            const RewriteRule& r = rs.rules()[i];
            Element lhs = Element::from_word({r.x, r.y});
            std::string label = word_str({r.x, r.y});
            Tensor2 diff =
                normalize_slots(coproduct(lhs) - coproduct(r.rhs), rs);
            report.add("coproduct respects " + label, group_cite(grp, rs.config().kase),
                       diff.is_zero(), render(diff));
            CycNum eps = counit(lhs) - counit(r.rhs);
            report.add("counit respects " + label, group_cite(grp, rs.config().kase),
                       eps.is_zero(), pretty(eps));
        }
    }
    return report;
}

}  // namespace glq
