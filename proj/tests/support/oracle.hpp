#pragma once

// Test-only reference implementations. They share the grammar data model
// with the library but none of its parsing, deriving or scoring code.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tagrank/grammar.hpp"

namespace oracle {

struct Generated {
    std::vector<std::string> words;
    std::string tree; // Penn-style, "(S (NP (N dogs)) (VP (V bark)))"
};

/// Every derived tree rooted in one of `start` with at most `max_words`
/// anchors, generated top-down. An auxiliary tree's stack depth is 1 + the
/// deepest auxiliary adjoined on its spine and may not exceed `max_stack`.
std::vector<Generated> generate(const tagrank::Grammar& grammar, const std::vector<std::string>& start,
                                int max_words, int max_stack = 3);

/// Generated trees grouped by their yield.
std::map<std::vector<std::string>, std::multiset<std::string>> by_yield(const std::vector<Generated>& all);

/// Binary bracketing over leaves [0, n): a leaf or a pair of subtrees.
struct Binary {
    int leaf = -1;
    std::vector<Binary> kids;
};

Binary random_binary(std::mt19937_64& rng, int first, int last);
/// "(X (X w0 w1) w2)" with leaves named w0, w1, ...
std::string to_bracketed(const Binary& b);

/// Brute force: candidate constituents (length >= 2, not the whole
/// sentence) whose leaf set properly overlaps some gold constituent's.
int brute_force_crossing(const Binary& candidate, const Binary& gold, int n);

} // namespace oracle
