#include <set>

#include "doctest.h"
#include "tagrank/tree_filter.hpp"
#include "toy_grammars.hpp"

using namespace tagrank;

namespace {

const char* const barking = R"(
tree Intransitive initial : (S NP^ (VP V@))
tree Transitive initial : (S NP^ (VP V@ NP^))
tree Gerund_A initial : (NP NP^ (VP V@))
tree Gerund_B initial : (VP NP^ (VP V@))
tree Gerund_C initial : (NP NP^ (NP (VP V@)))
tree Imperative initial : (S (VP V@))
tree Det initial : D@
tree Noun_with_Det initial : (NP D^ N@)
tree Bare_Noun initial : (NP N@)
lex dogs N -> Noun_with_Det, Bare_Noun
lex the D -> Det
lex bark V -> Intransitive, Transitive
lex howl V -> Intransitive, Gerund_A, Gerund_B, Gerund_C
lex sit V -> Imperative
)";

std::set<std::string> parses(const Grammar& g, const TreeAssignment& a, const std::vector<std::string>& w) {
    std::set<std::string> out;
    for (const auto& d : parse(g, a).enumerate()) out.insert(derive(g, d, w).str());
    return out;
}

TreeAssignment of(std::vector<std::vector<std::string>> c) { return TreeAssignment{std::move(c)}; }

void check_bookkeeping(const FilterReport& r) {
    for (const auto& p : r.positions) CHECK(p.before == p.removed_by_structure + p.removed_by_frequency + p.survivors);
}

} // namespace

TEST_SUITE("tree_filter") {

TEST_CASE("determiner slot with nothing to its left") {
    const Grammar g = toy::load(barking);
    const std::vector<std::string> w{"dogs", "bark"};
    const auto a = select_trees_untagged(g, w);
    const auto f = structural_filter(g, a);
    CHECK(f.candidates[0] == std::vector<std::string>{"Bare_Noun"});
    CHECK(f.candidates[1] == std::vector<std::string>{"Intransitive"}); // transitive needs a right NP
    CHECK(parses(g, a, w) == parses(g, f, w));
}

TEST_CASE("frontier compatibility") {
    const Grammar g = toy::load(barking);
    // "the" offers no NP-rooted tree, so a left NP slot after it cannot be filled
    const auto f = structural_filter(g, select_trees_untagged(g, {"the", "bark"}));
    CHECK(f.candidates[1].empty());
    CHECK(f.candidates[0] == std::vector<std::string>{"Det"}); // no slots, nothing to test
}

TEST_CASE("single-word sentence keeps an anchor-only frontier") {
    const Grammar g = toy::load(barking);
    const auto f = structural_filter(g, select_trees_untagged(g, {"sit"}));
    CHECK(f.candidates[0] == std::vector<std::string>{"Imperative"});
}

TEST_CASE("frequency filter with the computer-manual probabilities") {
    FrequencyTable t;
    t.set("Determiner", 0.175);
    t.set("Noun_with_Det", 0.174);
    t.set("Noun_Mods_Noun", 0.112);
    t.set("Adjective", 0.044);
    const auto a = of({{"Adjective", "Determiner", "Noun_Mods_Noun", "Noun_with_Det"}});
    const auto f = frequency_filter(a, t, 3);
    CHECK(f.candidates[0] == std::vector<std::string>{"Determiner", "Noun_Mods_Noun", "Noun_with_Det"});
    CHECK(frequency_filter(f, t, 3) == f);
    const auto two = of({{"Adjective", "Determiner"}});
    CHECK(frequency_filter(two, t, 3) == two);
    const auto zeros = of({{"d", "b", "c", "a"}});
    CHECK(frequency_filter(zeros, FrequencyTable{}, 3).candidates[0] == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("fallback when the needed tree ranks fourth") {
    const Grammar g = toy::load(barking);
    FrequencyTable t;
    t.set("Gerund_A", 0.3);
    t.set("Gerund_B", 0.2);
    t.set("Gerund_C", 0.15);
    t.set("Intransitive", 0.05);
    const std::vector<std::string> w{"dogs", "howl"};
    auto run = [&](const TreeAssignment& a) { return parse(g, a); };
    const auto r = filter_with_fallback(g, select_trees_untagged(g, w), t, 3, run);
    CHECK(r.report.fallback_triggered);
    CHECK(r.forest.derivation_count() == 1);
    check_bookkeeping(r.report);

    const std::vector<std::string> easy{"dogs", "bark"};
    const auto r2 = filter_with_fallback(g, select_trees_untagged(g, easy), t, 3, run);
    CHECK_FALSE(r2.report.fallback_triggered);
    CHECK(r2.forest.derivation_count() == 1);
    check_bookkeeping(r2.report);

    const std::vector<std::string> bad{"bark", "dogs"};
    const auto r3 = filter_with_fallback(g, select_trees_untagged(g, bad), t, 3, run);
    CHECK(r3.report.fallback_triggered);
    CHECK(r3.forest.empty());
    check_bookkeeping(r3.report);
}

TEST_CASE("report before frequency filtering") {
    const Grammar g = toy::load(barking);
    FrequencyTable t;
    auto run = [&](const TreeAssignment& a) { return parse(g, a); };
    const auto r = filter_with_fallback(g, select_trees_untagged(g, {"the", "dogs", "howl"}), t, 1, run);
    REQUIRE(r.report.positions.size() == 3);
    const auto& p = r.report.positions[2];
    CHECK(p.before == 4);
    check_bookkeeping(r.report);
}

} // TEST_SUITE
