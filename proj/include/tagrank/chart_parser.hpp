#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tagrank/derivation.hpp"
#include "tagrank/grammar.hpp"
#include "tagrank/pos_select.hpp"

namespace tagrank {

struct ParseOptions {
    /// Root categories accepted for a complete parse; empty accepts any.
    std::vector<std::string> start_categories{"S"};
    /// Cap on auxiliary trees stacked along one spine: an auxiliary tree's
    /// depth is 1 + the deepest auxiliary adjoined on its root-to-foot path.
    int max_adjunction_stack = 3;
    bool check_features = false;
};

inline constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

/// Packed chart for one sentence. Holds pointers into the grammar, which must
/// outlive the forest. Immutable once built; enumeration is const.
class ParseForest {
public:
    struct ItemKey {
        int instance, node, i, j, foot_i, foot_j, depth;
        bool top;
        bool operator==(const ItemKey&) const = default;
    };
    enum class EdgeKind { leaf, children, no_adjunction, adjunction, substitution };
    struct Edge {
        EdgeKind kind;
        std::vector<int> parts;
    };
    struct Item {
        ItemKey key;
        std::vector<Edge> edges;
    };
    struct Instance {
        const ElementaryTree* tree;
        int anchor;
    };

    std::size_t sentence_length() const { return length_; }
    bool empty() const { return roots_.empty(); }
    std::size_t item_count() const { return items_.size(); }
    /// Saturates at SIZE_MAX.
    std::size_t derivation_count() const;

    /// Derivations in canonical order; the first min(limit, total).
    std::vector<DerivationNode> enumerate(std::size_t limit = unlimited) const;

    const std::vector<Item>& items() const { return items_; }
    const std::vector<Instance>& instances() const { return instances_; }
    const std::vector<int>& roots() const { return roots_; }

private:
    friend class ChartBuilder;

    std::size_t length_ = 0;
    std::vector<Instance> instances_;
    std::vector<Item> items_;
    std::vector<int> roots_;
};

/// Bottom-up chart parse over the candidate trees. Throws GrammarError when
/// the assignment names a tree the grammar lacks.
ParseForest parse(const Grammar& grammar, const TreeAssignment& assignment, const ParseOptions& options = {});

} // namespace tagrank
