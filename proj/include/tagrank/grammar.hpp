#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tagrank {

/// Gorn address of a node inside an elementary tree. The root is the empty
/// path; the k-th child (1-based) of a node appends k.
struct GornAddress {
    std::vector<int> path;

    bool is_root() const { return path.empty(); }
    GornAddress child(int k) const;
    /// "0" for the root, otherwise dotted 1-based indices ("2.1").
    std::string str() const;
    static GornAddress parse(std::string_view text);

    auto operator<=>(const GornAddress&) const = default;
};

enum class NodeKind { internal, anchor, substitution, foot };
enum class TreeKind { initial, auxiliary };

const char* to_string(NodeKind kind);
const char* to_string(TreeKind kind);

using FeatureMap = std::map<std::string, std::string>;

/// Equality unification over atomic values; a missing attribute is a wildcard.
bool features_unify(const FeatureMap& a, const FeatureMap& b);

struct TreeNode {
    std::string label;
    NodeKind kind = NodeKind::internal;
    FeatureMap features;
    std::vector<TreeNode> children;

    bool operator==(const TreeNode&) const = default;
};

/// Flat node record used by the parser; `nodes` in pre-order, index 0 = root.
struct FlatNode {
    std::string label;
    NodeKind kind;
    FeatureMap features;
    GornAddress address;
    int parent = -1;
    std::vector<int> children;
    bool on_spine = false;   // root-to-foot path of an auxiliary tree
    bool has_anchor = false; // dominates the anchor
};

class ElementaryTree {
public:
    ElementaryTree(std::string name, TreeKind kind, TreeNode root);

    const std::string& name() const { return name_; }
    TreeKind kind() const { return kind_; }
    bool is_auxiliary() const { return kind_ == TreeKind::auxiliary; }
    const TreeNode& root() const { return root_; }
    const std::string& root_label() const { return root_.label; }
    /// Category the anchor requires; the anchor node's label.
    const std::string& anchor_pos() const { return anchor_pos_; }
    const GornAddress& anchor_address() const { return anchor_address_; }
    /// Address of the foot node; only meaningful for auxiliary trees.
    const GornAddress& foot_address() const { return foot_address_; }

    const std::vector<FlatNode>& nodes() const { return flat_; }
    int anchor_node() const { return anchor_node_; }
    int foot_node() const { return foot_node_; }
    /// Node indices in post-order (children before parents).
    const std::vector<int>& post_order() const { return post_order_; }
    int find(const GornAddress& address) const;
    const TreeNode* node_at(const GornAddress& address) const;

    /// Foot lies left of the anchor in the frontier (right-attaching modifier).
    bool foot_left_of_anchor() const;
    /// Frontier leaves (substitution, anchor, foot) in left-to-right order.
    std::vector<int> frontier() const;

    bool operator==(const ElementaryTree& other) const {
        return name_ == other.name_ && kind_ == other.kind_ && root_ == other.root_;
    }

private:
    std::string name_;
    TreeKind kind_;
    TreeNode root_;
    std::string anchor_pos_;
    GornAddress anchor_address_;
    GornAddress foot_address_;
    std::vector<FlatNode> flat_;
    std::vector<int> post_order_;
    int anchor_node_ = -1;
    int foot_node_ = -1;
};

struct TreeFamily {
    std::string name;
    std::vector<std::string> members;
    bool operator==(const TreeFamily&) const = default;
};

struct LexEntry {
    std::string lemma;
    std::string pos;
    std::vector<std::string> selects;
    bool operator==(const LexEntry&) const = default;
};

/// Tree name -> unigram probability. Absent trees read as 0.
class FrequencyTable {
public:
    void set(const std::string& tree, double probability);
    double probability(const std::string& tree) const;
    const std::map<std::string, double>& entries() const { return entries_; }
    bool operator==(const FrequencyTable&) const = default;

private:
    std::map<std::string, double> entries_;
};

/// Error raised while reading a grammar-related file.
class GrammarError : public std::runtime_error {
public:
    GrammarError(const std::string& what, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Trees, families, lexicon and frequency table. Immutable after loading.
class Grammar {
public:
    Grammar() = default;

    void add_tree(ElementaryTree tree);
    void add_family(TreeFamily family);
    void add_entry(LexEntry entry);
    void set_frequencies(FrequencyTable table) { freq_ = std::move(table); }

    /// Checks cross references and builds the lexical index. Throws GrammarError.
    void validate();

    const ElementaryTree& tree(const std::string& name) const;
    const ElementaryTree* find_tree(const std::string& name) const;
    std::size_t tree_index(const std::string& name) const;
    const std::vector<ElementaryTree>& trees() const { return trees_; }
    const std::vector<TreeFamily>& families() const { return families_; }
    const std::vector<LexEntry>& lexicon() const { return lexicon_; }
    const FrequencyTable& frequencies() const { return freq_; }

    /// Names selected by (word, pos) directly or through families, sorted.
    std::vector<std::string> trees_for_word(std::string_view word, std::string_view pos) const;
    /// POS symbols the lexicon lists for `word`, sorted.
    std::vector<std::string> pos_for_word(std::string_view word) const;
    bool knows_word(std::string_view word) const;
    /// Every tree whose anchor requires `pos`, sorted.
    std::vector<std::string> trees_anchored_by(std::string_view pos) const;

    bool operator==(const Grammar& other) const;

private:
    std::vector<ElementaryTree> trees_;
    std::map<std::string, std::size_t> tree_by_name_;
    std::vector<TreeFamily> families_;
    std::map<std::string, std::size_t> family_by_name_;
    std::vector<LexEntry> lexicon_;
    FrequencyTable freq_;
    std::map<std::pair<std::string, std::string>, std::set<std::string>> index_;
};

/// Parses one bracketed elementary tree body, e.g. "(S NP^ (VP V@ NP^))".
TreeNode parse_tree_body(std::string_view text, int line = 0);
std::string format_tree_body(const TreeNode& node);

Grammar read_grammar(std::istream& in);
Grammar load_grammar(const std::string& path);
void write_grammar(std::ostream& out, const Grammar& grammar);

FrequencyTable read_frequency_table(std::istream& in);
FrequencyTable load_frequency_table(const std::string& path);
void write_frequency_table(std::ostream& out, const FrequencyTable& table);

} // namespace tagrank
