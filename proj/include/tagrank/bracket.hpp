#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tagrank {

/// Labeled ordered tree with words at the leaves. Provenance fields are set
/// for trees produced by `derive` and left at -1 for trees read from text.
struct PhraseNode {
    std::string label;       // category, or the word for leaves
    bool is_word = false;
    std::vector<int> children;
    int parent = -1;
    int begin = 0, end = 0;  // word span [begin, end)
    int derivation_node = -1; // pre-order index of the contributing elementary tree
    int elementary_node = -1; // flat node index inside that tree
};

class PhraseTree {
public:
    int add_node(PhraseNode node);
    void add_child(int parent, int child);
    void set_root(int root) { root_ = root; }
    /// Recomputes parent links and word spans from the root.
    void finalize();

    int root() const { return root_; }
    const PhraseNode& node(int i) const { return nodes_[i]; }
    PhraseNode& node(int i) { return nodes_[i]; }
    std::size_t node_count() const { return nodes_.size(); }
    bool empty() const { return root_ < 0; }

    std::vector<std::string> yield() const;
    /// Penn-style "(S (NP (N dogs)) (VP (V bark)))".
    std::string str() const;
    bool is_preterminal(int i) const;

private:
    std::vector<PhraseNode> nodes_;
    int root_ = -1;
};

class BracketError : public std::runtime_error {
public:
    BracketError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Reads one Penn-style tree; '[' ']' are accepted as brackets too. An
/// unlabeled single-child wrapper "( (S ...) )" is removed.
PhraseTree parse_bracketed(std::string_view text);

/// One tree per non-blank line.
std::vector<PhraseTree> read_treebank(std::istream& in);

/// Splices out structure inside maximal nodes whose labels are in `categories`
/// (nested category nodes and preterminals), keeping other nodes as they are.
PhraseTree flatten(const PhraseTree& tree, const std::vector<std::string>& categories);

} // namespace tagrank
