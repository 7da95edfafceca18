#include <set>

#include "doctest.h"
#include "helpers.hpp"

#include "deepread/kb.hpp"
#include "deepread/sexpr.hpp"

using namespace deepread;

namespace {

// transitive-closure oracle over explicit ako edges
std::set<std::pair<ConceptId, ConceptId>> closure_oracle(const KnowledgeBase& kb) {
    std::set<std::pair<ConceptId, ConceptId>> reach;
    for (const auto& [id, c] : kb.concepts()) reach.insert({id, id});
    for (const auto& a : kb.assertions())
        if (a.kind == Relation::Ako) reach.insert({a.source, a.target});
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::pair<ConceptId, ConceptId>> next = reach;
        for (const auto& [a, b] : reach)
            for (const auto& [c, d] : reach)
                if (b == c && next.insert({a, d}).second) changed = true;
        reach = next;
    }
    return reach;
}

}  // namespace

TEST_CASE("loading a one-assertion file yields two concepts") {
    KnowledgeBase kb = parse_kb("(ako car motor-vehicle)");
    CHECK(kb.concepts().size() == 2);
    CHECK(kb.assertions().size() == 1);
    CHECK(kb.specializes("car", "motor-vehicle"));
}

TEST_CASE("empty file yields an empty KB") {
    KnowledgeBase kb = parse_kb("");
    CHECK(kb.concepts().empty());
    CHECK(kb.assertions().empty());
}

TEST_CASE("a two-cycle in ako is rejected") {
    CHECK_THROWS_WITH(parse_kb("(ako a b)\n(ako b a)\n", "cyc.kb"), doctest::Contains("cycle"));
}

TEST_CASE("assert_fact is idempotent and value-semantic") {
    KnowledgeBase kb = parse_kb("(concept boston \"Boston\")\n(concept city \"city\")");
    Assertion isa{Relation::Isa, "boston", "city", std::nullopt};
    KnowledgeBase kb2 = assert_fact(kb, isa);
    CHECK(kb.assertions().empty());  // original untouched
    CHECK(kb2.assertions().size() == 1);
    KnowledgeBase kb3 = assert_fact(kb2, isa);
    CHECK(kb3.assertions().size() == 1);
    auto hits = kb3.query(Relation::Isa, "boston");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].target == "city");
}

TEST_CASE("causes query") {
    KnowledgeBase kb = parse_kb("(causes cheer-up happy)");
    auto hits = kb.query(Relation::Causes, "cheer-up");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].target == "happy");
}

TEST_CASE("query inherits upward through ako, except isa") {
    KnowledgeBase kb = parse_kb(
        "(ako car motor-vehicle)\n"
        "(part-of car ignition-switch)\n"
        "(used-for motor-vehicle drive)\n"
        "(isa motor-vehicle machine-class)\n"
        "(color-of grass green)\n");
    auto parts = kb.query(Relation::PartOf, "car");
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].target == "ignition-switch");

    auto uses = kb.query(Relation::UsedFor, "car");
    REQUIRE(uses.size() == 1);  // inherited from motor-vehicle
    CHECK(uses[0].target == "drive");

    CHECK(kb.query(Relation::Isa, "car").empty());  // instance link, not inherited

    auto colors = kb.query(Relation::ColorOf, "grass");
    REQUIRE(colors.size() == 1);
    CHECK(colors[0].target == "green");

    CHECK_THROWS(kb.query(Relation::PartOf, "zeppelin"));
}

TEST_CASE("nearest ancestor wins for conflicting magnitudes") {
    KnowledgeBase kb = parse_kb(
        "(ako armchair chair)\n(ako chair furniture)\n"
        "(size-of chair tall 3 foot)\n(size-of furniture tall 4 foot)\n");
    auto hits = kb.query(Relation::SizeOf, "armchair");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].magnitude->value == 3.0);
}

TEST_CASE("specializes is reflexive, directional, and matches the closure oracle") {
    KnowledgeBase kb = parse_kb(
        "(ako car motor-vehicle)\n(ako motor-vehicle vehicle)\n(ako bicycle vehicle)\n"
        "(ako taxi car)\n(concept dog \"dog\")\n");
    CHECK(kb.specializes("car", "car"));
    CHECK(kb.specializes("taxi", "vehicle"));
    CHECK_FALSE(kb.specializes("motor-vehicle", "car"));
    CHECK_FALSE(kb.specializes("bicycle", "car"));

    auto oracle = closure_oracle(kb);
    for (const auto& [a, ca] : kb.concepts())
        for (const auto& [b, cb] : kb.concepts())
            CHECK(kb.specializes(a, b) == (oracle.count({a, b}) > 0));
}

TEST_CASE("query with inheritance equals union of direct queries over ancestors") {
    KnowledgeBase kb = parse_kb(
        "(ako a b)\n(ako b c)\n(ako a b2)\n"
        "(used-for a x)\n(used-for b y)\n(used-for c z)\n(used-for b2 w)\n");
    std::set<ConceptId> expected;
    for (const auto& anc : kb.ancestors("a"))
        for (const auto& hit : kb.query(Relation::UsedFor, anc))
            if (hit.distance == 0) expected.insert(hit.target);
    // oracle: direct assertions of each ancestor
    std::set<ConceptId> direct_union;
    for (const auto& anc : kb.ancestors("a"))
        for (const auto& assertion : kb.assertions())
            if (assertion.kind == Relation::UsedFor && assertion.source == anc)
                direct_union.insert(assertion.target);
    std::set<ConceptId> got;
    for (const auto& hit : kb.query(Relation::UsedFor, "a")) got.insert(hit.target);
    CHECK(got == direct_union);
    CHECK(got == std::set<ConceptId>{"w", "x", "y", "z"});
}

TEST_CASE("magnitude arity is enforced") {
    CHECK_THROWS(parse_kb("(size-of chair tall)"));
    CHECK_THROWS(parse_kb("(ako a b extra)"));
    KnowledgeBase kb;
    CHECK_THROWS(assert_fact(kb, {Relation::Ako, "a", "b", Magnitude{1, "x"}}));
}

TEST_CASE("scripts parse, validate roles, and round-trip") {
    std::string text =
        "(script robbery (roles robber victim loot)"
        " (event 1 threaten robber victim)"
        " (event 2 hand-over victim robber loot)"
        " (pre has victim loot) (post has robber loot))\n";
    KnowledgeBase kb = parse_kb(text);
    REQUIRE(kb.scripts().count("robbery"));
    const Script& s = kb.scripts().at("robbery");
    CHECK(s.roles.size() == 3);
    CHECK(s.events.size() == 2);
    CHECK(s.events[0].predicate == "threaten");
    CHECK_THROWS(parse_kb("(script bad (roles a) (event 1 go b))"));
}

TEST_CASE("load-save-load round-trips") {
    std::string text =
        "(concept car \"car\" (gloss \"a road vehicle\"))\n"
        "(ako car motor-vehicle)\n"
        "(size-of chair tall 3 foot)\n"
        "(script visit (roles guest host) (event 1 greet host guest))\n";
    KnowledgeBase kb = parse_kb(text);
    std::string saved = save_kb(kb);
    KnowledgeBase kb2 = parse_kb(saved);
    CHECK(save_kb(kb2) == saved);
    CHECK(kb2.concepts().size() == kb.concepts().size());
    CHECK(kb2.assertions() == kb.assertions());
}

TEST_CASE("parse errors carry file and line") {
    CHECK_THROWS_WITH_AS(parse_kb("(ako a b)\n(wrong x y)\n", "bad.kb"), doctest::Contains("bad.kb:2"),
                         ParseError);
}
