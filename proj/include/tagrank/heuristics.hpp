#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagrank/bracket.hpp"
#include "tagrank/derivation.hpp"
#include "tagrank/grammar.hpp"

namespace tagrank {

enum class HeuristicKind { local_tree_type, local_lexical, global_structural };
enum class GlobalRule { adjunction_count, pp_attachment_height, adj_attachment_height };

const char* to_string(HeuristicKind kind);
const char* to_string(GlobalRule rule);

/// Disjunction of tests over (anchor POS, tree name): "pos:P", "tree:NAME",
/// "prefix:STR", "contains:STR".
class TreePredicate {
public:
    static TreePredicate parse(const std::string& spec);
    bool matches(const std::string& pos, const std::string& tree) const;
    std::string str() const;
    bool empty() const { return tests_.empty(); }

private:
    struct Test {
        enum class Kind { pos, tree, prefix, contains } kind;
        std::string value;
    };
    std::vector<Test> tests_;
};

struct HeuristicSpec {
    std::string name;
    HeuristicKind kind = HeuristicKind::global_structural;
    TreePredicate match;                 // local_tree_type
    std::string word;                    // local_lexical
    TreePredicate prefer, disprefer;     // local_lexical
    GlobalRule rule = GlobalRule::adjunction_count;
    std::vector<std::string> modifier_anchors; // POS of modifier anchors (attachment heights)
    std::vector<std::string> sites;            // eligible site categories
};

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered heuristic declarations; the order fixes the weight layout.
class HeuristicRegistry {
public:
    explicit HeuristicRegistry(std::vector<HeuristicSpec> specs);

    /// Three global heuristics plus the sample clause-type and function-word rules.
    static HeuristicRegistry defaults();

    std::size_t size() const { return specs_.size(); }
    const HeuristicSpec& operator[](std::size_t i) const { return specs_[i]; }
    const std::vector<HeuristicSpec>& specs() const { return specs_; }
    std::size_t index_of(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::vector<HeuristicSpec> specs_;
};

HeuristicRegistry read_registry(std::istream& in);
HeuristicRegistry load_registry(const std::string& path);
void write_registry(std::ostream& out, const HeuristicRegistry& registry);

/// Per-derivation feature counts aligned with a registry.
struct HeuristicVector {
    std::vector<double> counts;
    bool operator==(const HeuristicVector&) const = default;
};

/// Penalty weights aligned with a registry; lower scores are preferred.
struct WeightVector {
    std::vector<double> weights;

    static WeightVector uniform(std::size_t n, double value = 1.0) { return {std::vector<double>(n, value)}; }
    bool operator==(const WeightVector&) const = default;
};

WeightVector read_weights(std::istream& in, const HeuristicRegistry& registry);
WeightVector load_weights(const std::string& path, const HeuristicRegistry& registry);
void write_weights(std::ostream& out, const WeightVector& w, const HeuristicRegistry& registry);

/// `derived` must be derive(grammar, d, ...) of the same derivation.
HeuristicVector extract(const HeuristicRegistry& registry, const Grammar& grammar, const DerivationNode& d,
                        const PhraseTree& derived);

/// Dot product. Throws std::invalid_argument on length mismatch.
double score(const HeuristicVector& v, const WeightVector& w);

struct RankedParse {
    std::size_t index; // position in canonical enumeration order
    double score;
};

/// Ascending by penalty, ties kept in canonical order.
std::vector<RankedParse> rank(const std::vector<HeuristicVector>& parses, const WeightVector& w);

struct ParseWithTree {
    DerivationNode derivation;
    PhraseTree derived;
};

std::vector<RankedParse> rank(const std::vector<ParseWithTree>& parses, const HeuristicRegistry& registry,
                              const Grammar& grammar, const WeightVector& w);

} // namespace tagrank
