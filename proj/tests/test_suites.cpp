// Relation-soundness and confluence suites. The identities are hardcoded in
// the suite, so a corrupted rule table must flip entries to FAIL; the
// mutation cases at the bottom pin that sensitivity.

#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>

#include "glq/suites.hpp"

using namespace glq;

namespace {

CalculusConfig case1_p21() { return CalculusConfig{CalcCase::I, 2, 0}; }
CalculusConfig case1_p1q() { return CalculusConfig{CalcCase::I, 1, 2}; }
CalculusConfig case2() { return CalculusConfig{CalcCase::II, 2, 0}; }

bool has_entry(const CheckReport& rep, const std::string& id) {
    for (const CheckEntry& e : rep.entries())
        if (e.id == id) return true;
    return false;
}

}  // namespace

TEST_CASE("relation suite passes over the coordinate algebra") {
    for (const CalculusConfig& cfg : {case1_p21(), case1_p1q(), case2()}) {
        CheckReport rep = verify_relations(coordinate_rules(cfg));
        INFO(to_text(rep));
        CHECK(rep.ok());
        CHECK(rep.entries().size() == 17);
    }
    CHECK(has_entry(verify_relations(coordinate_rules(case1_p21())),
                    "d*a = a*d - (q-1)*b*g"));
}

TEST_CASE("relation suite passes over every full rule universe") {
    for (const CalculusConfig& cfg : {case1_p21(), case1_p1q(), case2()}) {
        CheckReport rep = verify_relations(full_rules(cfg));
        INFO(to_text(rep));
        CHECK(rep.ok());
    }
}

TEST_CASE("relation suite requires the coordinate groups") {
    RuleSet rs = build_rules(case1_p21(), {RuleGroup::Coord});
    CHECK_THROWS_AS(verify_relations(rs), std::invalid_argument);
}

TEST_CASE("confluence suite passes on the shipped tables") {
    for (const CalculusConfig& cfg : {case1_p21(), case1_p1q(), case2()}) {
        CheckReport coord = verify_confluence(coordinate_rules(cfg));
        CHECK(coord.ok());
        CHECK(coord.entries().size() == 1);

        CheckReport full = verify_confluence(full_rules(cfg));
        INFO(to_text(full));
        CHECK(full.ok());

        CheckReport diff = verify_confluence(differential_rules(cfg));
        CHECK(diff.ok());
    }
}

TEST_CASE("confluence suite counts no overlaps for the z rules alone") {
    CheckReport rep = verify_confluence(build_rules(case1_p21(), {RuleGroup::Central}));
    REQUIRE(rep.entries().size() == 1);
    CHECK(rep.entries()[0].id == "all 0 cubic overlaps of 4 rules resolve");
    CHECK(rep.ok());
}

TEST_CASE("corrupting a coordinate coefficient fails both suites") {
    // g*a is chosen over d*a: scaling the whole d*a right-hand side is
    // invisible to overlap checking (both reduction paths pass through that
    // rule exactly once), while a scaled g*a breaks joinability of d*g*a.
    RuleSet rs = coordinate_rules(case1_p21());
    const RewriteRule* rule = rs.find(Gen::g, Gen::a);
    REQUIRE(rule != nullptr);
    std::size_t idx = static_cast<std::size_t>(rule - rs.rules().data());
    rs.scale_rule_term(idx, 0, q_power(1));

    CheckReport rel = verify_relations(rs);
    CHECK_FALSE(rel.ok());
    REQUIRE(rel.first_failure() != nullptr);
    CHECK(rel.first_failure()->id == "g*a = q2*a*g");
    CHECK_FALSE(rel.first_failure()->residual.empty());

    CheckReport conf = verify_confluence(rs);
    CHECK_FALSE(conf.ok());
    REQUIRE(conf.first_failure() != nullptr);
    CHECK(conf.first_failure()->id.rfind("overlap ", 0) == 0);
}

TEST_CASE("corrupting a z rule fails the relation suite") {
    RuleSet rs = coordinate_rules(case1_p21());
    const RewriteRule* rule = rs.find(Gen::b, Gen::z);
    REQUIRE(rule != nullptr);
    std::size_t idx = static_cast<std::size_t>(rule - rs.rules().data());
    rs.scale_rule_term(idx, 0, q_power(1));

    CheckReport rel = verify_relations(rs);
    CHECK_FALSE(rel.ok());
    REQUIRE(rel.first_failure() != nullptr);
    CHECK(rel.first_failure()->id == "z commutes with b");
}
