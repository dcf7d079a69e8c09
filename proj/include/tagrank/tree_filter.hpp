#pragma once

#include <functional>
#include <vector>

#include "tagrank/chart_parser.hpp"
#include "tagrank/grammar.hpp"
#include "tagrank/pos_select.hpp"

namespace tagrank {

struct PositionReport {
    std::size_t before = 0;
    std::size_t removed_by_structure = 0;
    std::size_t removed_by_frequency = 0;
    std::size_t survivors = 0;
};

struct FilterReport {
    std::vector<PositionReport> positions;
    bool fallback_triggered = false;
};

/// Removes candidates that cannot appear in any complete parse: trees whose
/// obligatory frontier (substitution and foot nodes) needs more words on one
/// side of the anchor than the sentence has, and trees with a substitution
/// slot of category C on one side where no word on that side offers an
/// initial tree rooted in C. Applied until nothing more is removed.
TreeAssignment structural_filter(const Grammar& grammar, const TreeAssignment& assignment);

/// Keeps the k most probable candidates per position; ties at the boundary
/// go to the lexicographically smaller tree name.
TreeAssignment frequency_filter(const TreeAssignment& assignment, const FrequencyTable& freq, std::size_t k);

using ParseFn = std::function<ParseForest(const TreeAssignment&)>;

struct FilteredParse {
    ParseForest forest;
    FilterReport report;
};

/// structural_filter, then frequency_filter, then parse; when that yields no
/// parse, parses again on the structurally filtered assignment alone.
FilteredParse filter_with_fallback(const Grammar& grammar, const TreeAssignment& assignment,
                                   const FrequencyTable& freq, std::size_t k, const ParseFn& parse_fn);

} // namespace tagrank
