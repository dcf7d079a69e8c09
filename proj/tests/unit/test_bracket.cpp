#include <sstream>

#include "doctest.h"
#include "tagrank/bracket.hpp"

using namespace tagrank;

TEST_SUITE("bracket") {

TEST_CASE("read and write Penn trees") {
    const auto t = parse_bracketed("(S (NP (N dogs)) (VP (V bark)))");
    CHECK(t.str() == "(S (NP (N dogs)) (VP (V bark)))");
    CHECK(t.yield() == std::vector<std::string>{"dogs", "bark"});
    CHECK(t.node(t.root()).begin == 0);
    CHECK(t.node(t.root()).end == 2);
    CHECK(parse_bracketed("[NP [G your] [N computer]]").str() == "(NP (G your) (N computer))");
    CHECK(parse_bracketed("( (S (N a) (V b)) )").str() == "(S (N a) (V b))");
    CHECK(parse_bracketed("(S a b c)").str() == "(S a b c)");
}

TEST_CASE("malformed trees report a position") {
    CHECK_THROWS_AS(parse_bracketed("(S (NP a)"), BracketError);
    CHECK_THROWS_AS(parse_bracketed("(S a))"), BracketError);
    CHECK_THROWS_AS(parse_bracketed(""), BracketError);
    try {
        parse_bracketed("(S (NP a) ]");
        FAIL("expected an error");
    } catch (const BracketError& e) {
        CHECK(e.position() > 0);
    }
}

TEST_CASE("treebank reader") {
    std::istringstream in("(S a b)\n\n(S (A c) d)\n");
    const auto tb = read_treebank(in);
    REQUIRE(tb.size() == 2);
    CHECK(tb[1].yield() == std::vector<std::string>{"c", "d"});
}

TEST_CASE("flatten the computer-manual NP") {
    const auto t = parse_bracketed("[NP [G your] [N [N personal] [N computer]]]");
    CHECK(flatten(t, {"NP", "N"}).str() == "(NP your personal computer)");
    CHECK(flatten(t, {"X"}).str() == t.str());
}

TEST_CASE("flatten keeps structure outside the categories") {
    const auto t = parse_bracketed("(S (NP (D the) (N (A old) (N dog))) (VP (V saw) (NP (D a) (N cat))))");
    const auto f = flatten(t, {"NP"});
    // the N inside the NP is not a category node and keeps its structure
    CHECK(f.str() == "(S (NP the (N (A old) (N dog))) (VP (V saw) (NP a cat)))");
    CHECK(flatten(f, {"NP"}).str() == f.str());
    CHECK(f.yield() == t.yield());
    const auto vp = flatten(t, {"VP"});
    CHECK(vp.str() == "(S (NP (D the) (N (A old) (N dog))) (VP saw (NP (D a) (N cat))))");
}

} // TEST_SUITE
