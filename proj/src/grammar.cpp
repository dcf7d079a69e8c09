#include "tagrank/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace tagrank {

GornAddress GornAddress::child(int k) const {
    GornAddress a = *this;
    a.path.push_back(k);
    return a;
}

std::string GornAddress::str() const {
    if (path.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(path[i]);
    }
    return s;
}

GornAddress GornAddress::parse(std::string_view text) {
    GornAddress a;
    if (text == "0" || text.empty()) return a;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto dot = text.find('.', pos);
        auto part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        int k = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), k);
        if (ec != std::errc{} || ptr != part.data() + part.size() || k < 1)
            throw std::invalid_argument("bad Gorn address: " + std::string(text));
        a.path.push_back(k);
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return a;
}

const char* to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::internal: return "internal";
    case NodeKind::anchor: return "anchor";
    case NodeKind::substitution: return "substitution";
    case NodeKind::foot: return "foot";
    }
    return "?";
}

const char* to_string(TreeKind kind) {
    return kind == TreeKind::initial ? "initial" : "auxiliary";
}

bool features_unify(const FeatureMap& a, const FeatureMap& b) {
    for (const auto& [attr, value] : a) {
        auto it = b.find(attr);
        if (it != b.end() && it->second != value) return false;
    }
    return true;
}

GrammarError::GrammarError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                        (column > 0 ? ":" + std::to_string(column) : std::string()) +
                                        ": " + what
                                  : what),
      line_(line), column_(column) {}

// ---------------------------------------------------------------------------
// ElementaryTree

ElementaryTree::ElementaryTree(std::string name, TreeKind kind, TreeNode root)
    : name_(std::move(name)), kind_(kind), root_(std::move(root)) {
    auto fail = [&](const std::string& why) {
        throw GrammarError("tree '" + name_ + "': " + why);
    };

    std::function<void(const TreeNode&, GornAddress, int)> flatten =
        [&](const TreeNode& node, GornAddress address, int parent) {
            int index = static_cast<int>(flat_.size());
            flat_.push_back(FlatNode{node.label, node.kind, node.features, address, parent, {}, false, false});
            if (parent >= 0) flat_[parent].children.push_back(index);
            if (node.label.empty()) fail("node at " + address.str() + " has an empty label");
            if (node.kind == NodeKind::internal) {
                if (node.children.empty())
                    fail("internal node " + node.label + " at " + address.str() + " has no children");
            } else if (!node.children.empty()) {
                fail(std::string(to_string(node.kind)) + " node at " + address.str() + " has children");
            }
            for (std::size_t k = 0; k < node.children.size(); ++k)
                flatten(node.children[k], address.child(static_cast<int>(k) + 1), index);
            post_order_.push_back(index);
        };
    flatten(root_, GornAddress{}, -1);

    int anchors = 0, feet = 0;
    for (std::size_t i = 0; i < flat_.size(); ++i) {
        if (flat_[i].kind == NodeKind::anchor) {
            ++anchors;
            anchor_node_ = static_cast<int>(i);
        } else if (flat_[i].kind == NodeKind::foot) {
            ++feet;
            foot_node_ = static_cast<int>(i);
        }
    }
    if (anchors != 1) fail("expected exactly one anchor node, found " + std::to_string(anchors));
    if (root_.kind == NodeKind::substitution || root_.kind == NodeKind::foot)
        fail("root cannot be a substitution or foot node");
    if (kind_ == TreeKind::auxiliary) {
        if (feet != 1) fail("auxiliary tree must have exactly one foot node, found " + std::to_string(feet));
        if (flat_[foot_node_].label != root_.label)
            fail("foot label '" + flat_[foot_node_].label + "' differs from root label '" + root_.label + "'");
        foot_address_ = flat_[foot_node_].address;
        for (int n = foot_node_; n >= 0; n = flat_[n].parent) flat_[n].on_spine = true;
    } else if (feet != 0) {
        fail("initial tree contains a foot node");
    }
    anchor_address_ = flat_[anchor_node_].address;
    anchor_pos_ = flat_[anchor_node_].label;
    for (int n = anchor_node_; n >= 0; n = flat_[n].parent) flat_[n].has_anchor = true;
}

int ElementaryTree::find(const GornAddress& address) const {
    for (std::size_t i = 0; i < flat_.size(); ++i)
        if (flat_[i].address == address) return static_cast<int>(i);
    return -1;
}

const TreeNode* ElementaryTree::node_at(const GornAddress& address) const {
    const TreeNode* node = &root_;
    for (int k : address.path) {
        if (k < 1 || static_cast<std::size_t>(k) > node->children.size()) return nullptr;
        node = &node->children[k - 1];
    }
    return node;
}

bool ElementaryTree::foot_left_of_anchor() const {
    return foot_node_ >= 0 && foot_node_ < anchor_node_;
}

std::vector<int> ElementaryTree::frontier() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < flat_.size(); ++i)
        if (flat_[i].kind != NodeKind::internal) out.push_back(static_cast<int>(i));
    return out; // pre-order visits leaves left to right
}

// ---------------------------------------------------------------------------
// FrequencyTable

void FrequencyTable::set(const std::string& tree, double probability) {
    if (!(probability >= 0.0 && probability <= 1.0))
        throw GrammarError("probability for '" + tree + "' outside [0,1]");
    entries_[tree] = probability;
}

double FrequencyTable::probability(const std::string& tree) const {
    auto it = entries_.find(tree);
    return it == entries_.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------
// Grammar

void Grammar::add_tree(ElementaryTree tree) {
    if (tree_by_name_.count(tree.name()))
        throw GrammarError("duplicate tree '" + tree.name() + "'");
    tree_by_name_[tree.name()] = trees_.size();
    trees_.push_back(std::move(tree));
}

void Grammar::add_family(TreeFamily family) {
    if (family_by_name_.count(family.name))
        throw GrammarError("duplicate family '" + family.name + "'");
    family_by_name_[family.name] = families_.size();
    families_.push_back(std::move(family));
}

void Grammar::add_entry(LexEntry entry) { lexicon_.push_back(std::move(entry)); }

void Grammar::validate() {
    for (const auto& family : families_) {
        if (tree_by_name_.count(family.name))
            throw GrammarError("family '" + family.name + "' has the same name as a tree");
        if (family.members.empty())
            throw GrammarError("family '" + family.name + "' has no members");
        for (const auto& m : family.members)
            if (!tree_by_name_.count(m))
                throw GrammarError("family '" + family.name + "' references unknown tree '" + m + "'");
    }
    index_.clear();
    for (const auto& entry : lexicon_) {
        const std::string who = "lexicon entry '" + entry.lemma + "/" + entry.pos + "'";
        if (entry.selects.empty()) throw GrammarError(who + " selects nothing");
        auto& bucket = index_[{entry.lemma, entry.pos}];
        for (const auto& name : entry.selects) {
            if (tree_by_name_.count(name)) {
                bucket.insert(name);
            } else if (auto it = family_by_name_.find(name); it != family_by_name_.end()) {
                const auto& members = families_[it->second].members;
                bucket.insert(members.begin(), members.end());
            } else {
                throw GrammarError(who + " references unknown tree or family '" + name + "'");
            }
        }
    }
}

const ElementaryTree* Grammar::find_tree(const std::string& name) const {
    auto it = tree_by_name_.find(name);
    return it == tree_by_name_.end() ? nullptr : &trees_[it->second];
}

const ElementaryTree& Grammar::tree(const std::string& name) const {
    if (auto* t = find_tree(name)) return *t;
    throw GrammarError("unknown tree '" + name + "'");
}

std::size_t Grammar::tree_index(const std::string& name) const {
    auto it = tree_by_name_.find(name);
    if (it == tree_by_name_.end()) throw GrammarError("unknown tree '" + name + "'");
    return it->second;
}

std::vector<std::string> Grammar::trees_for_word(std::string_view word, std::string_view pos) const {
    auto it = index_.find({std::string(word), std::string(pos)});
    if (it == index_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<std::string> Grammar::pos_for_word(std::string_view word) const {
    std::set<std::string> out;
    for (auto it = index_.lower_bound({std::string(word), std::string()});
         it != index_.end() && it->first.first == word; ++it)
        out.insert(it->first.second);
    return {out.begin(), out.end()};
}

bool Grammar::knows_word(std::string_view word) const {
    auto it = index_.lower_bound({std::string(word), std::string()});
    return it != index_.end() && it->first.first == word;
}

std::vector<std::string> Grammar::trees_anchored_by(std::string_view pos) const {
    std::vector<std::string> out;
    for (const auto& t : trees_)
        if (t.anchor_pos() == pos) out.push_back(t.name());
    std::sort(out.begin(), out.end());
    return out;
}

bool Grammar::operator==(const Grammar& other) const {
    return trees_ == other.trees_ && families_ == other.families_ && lexicon_ == other.lexicon_ &&
           freq_ == other.freq_;
}

// ---------------------------------------------------------------------------
// Tree body syntax

namespace {

bool is_label_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '[' &&
           c != ']' && c != '@' && c != '!' && c != '^' && c != '*' && c != ',' && c != '=';
}

class BodyReader {
public:
    BodyReader(std::string_view text, int line) : text_(text), line_(line) {}

    TreeNode read() {
        skip_ws();
        TreeNode node = read_node();
        skip_ws();
        if (pos_ != text_.size()) error("trailing input");
        return node;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        throw GrammarError(what, line_, static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    std::string read_label() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_label_char(text_[pos_])) {
            // UTF-8 marker glyphs terminate a label
            if (starts_with("↓") || starts_with("◇")) break;
            ++pos_;
        }
        if (pos_ == start) error("expected a label");
        return std::string(text_.substr(start, pos_ - start));
    }

    FeatureMap read_features() {
        FeatureMap out;
        if (pos_ >= text_.size() || text_[pos_] != '[') return out;
        ++pos_;
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ']') {
                ++pos_;
                return out;
            }
            std::string attr = read_label();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != '=') error("expected '=' in feature list");
            ++pos_;
            skip_ws();
            std::string value = read_label();
            out[attr] = value;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
            else if (pos_ >= text_.size() || text_[pos_] != ']') error("expected ',' or ']' in feature list");
        }
    }

    TreeNode read_node() {
        if (pos_ >= text_.size()) error("unexpected end of tree");
        TreeNode node;
        if (text_[pos_] == '(') {
            ++pos_;
            skip_ws();
            node.label = read_label();
            node.kind = NodeKind::internal;
            node.features = read_features();
            while (true) {
                skip_ws();
                if (pos_ >= text_.size()) error("unbalanced '('");
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                node.children.push_back(read_node());
            }
            if (node.children.empty()) error("internal node '" + node.label + "' has no children");
            return node;
        }
        if (text_[pos_] == ')') error("unexpected ')'");
        node.label = read_label();
        if (pos_ >= text_.size()) error("leaf '" + node.label + "' lacks a kind marker (@, ^ or *)");
        if (text_[pos_] == '@' || text_[pos_] == '!') {
            node.kind = NodeKind::anchor;
            ++pos_;
        } else if (text_[pos_] == '^') {
            node.kind = NodeKind::substitution;
            ++pos_;
        } else if (text_[pos_] == '*') {
            node.kind = NodeKind::foot;
            ++pos_;
        } else if (starts_with("↓")) {
            node.kind = NodeKind::substitution;
            pos_ += 3;
        } else if (starts_with("◇")) {
            node.kind = NodeKind::anchor;
            pos_ += 3;
        } else {
            error("leaf '" + node.label + "' lacks a kind marker (@, ^ or *)");
        }
        node.features = read_features();
        return node;
    }

    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

void format_features(std::ostream& out, const FeatureMap& features) {
    if (features.empty()) return;
    out << '[';
    bool first = true;
    for (const auto& [k, v] : features) {
        if (!first) out << ',';
        first = false;
        out << k << '=' << v;
    }
    out << ']';
}

void format_node(std::ostream& out, const TreeNode& node) {
    switch (node.kind) {
    case NodeKind::internal:
        out << '(' << node.label;
        format_features(out, node.features);
        for (const auto& c : node.children) {
            out << ' ';
            format_node(out, c);
        }
        out << ')';
        return;
    case NodeKind::anchor: out << node.label << '@'; break;
    case NodeKind::substitution: out << node.label << '^'; break;
    case NodeKind::foot: out << node.label << '*'; break;
    }
    format_features(out, node.features);
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_names(std::string_view list, int line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        auto item = trim(list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (item.empty()) throw GrammarError("empty name in list", line);
        out.push_back(item);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

int paren_balance(std::string_view s) {
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        else if (c == ')') --depth;
    }
    return depth;
}

} // namespace

TreeNode parse_tree_body(std::string_view text, int line) { return BodyReader(text, line).read(); }

std::string format_tree_body(const TreeNode& node) {
    std::ostringstream out;
    format_node(out, node);
    return out.str();
}

Grammar read_grammar(std::istream& in) {
    Grammar g;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;

        std::istringstream words(line);
        std::string keyword;
        words >> keyword;
        if (keyword == "tree") {
            // tree NAME initial|auxiliary : BODY   (BODY may continue on following lines)
            auto colon = line.find(':');
            if (colon == std::string::npos) throw GrammarError("expected ':' before tree body", line_no);
            std::istringstream head(line.substr(0, colon));
            std::string kw, name, kind, extra;
            head >> kw >> name >> kind;
            if (name.empty() || kind.empty() || (head >> extra))
                throw GrammarError("expected 'tree NAME initial|auxiliary : BODY'", line_no);
            TreeKind tk;
            if (kind == "initial") tk = TreeKind::initial;
            else if (kind == "auxiliary") tk = TreeKind::auxiliary;
            else throw GrammarError("unknown tree kind '" + kind + "'", line_no);
            std::string body = line.substr(colon + 1);
            int start_line = line_no;
            while (paren_balance(body) > 0 && std::getline(in, raw)) {
                ++line_no;
                if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
                body += ' ' + raw;
            }
            TreeNode root = parse_tree_body(body, start_line);
            try {
                g.add_tree(ElementaryTree(name, tk, std::move(root)));
            } catch (const GrammarError& e) {
                throw GrammarError(e.what(), start_line);
            }
        } else if (keyword == "family") {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw GrammarError("expected 'family NAME = tree, ...'", line_no);
            std::string name = trim(std::string_view(line).substr(6, eq - 6));
            if (name.empty() || name.find(' ') != std::string::npos)
                throw GrammarError("bad family name", line_no);
            try {
                g.add_family(TreeFamily{name, split_names(std::string_view(line).substr(eq + 1), line_no)});
            } catch (const GrammarError& e) {
                throw GrammarError(e.what(), line_no);
            }
        } else if (keyword == "lex") {
            auto arrow = line.find("->");
            if (arrow == std::string::npos) throw GrammarError("expected 'lex WORD POS -> name, ...'", line_no);
            std::istringstream head(line.substr(3, arrow - 3));
            std::string word, pos, extra;
            head >> word >> pos;
            if (word.empty() || pos.empty() || (head >> extra))
                throw GrammarError("expected 'lex WORD POS -> name, ...'", line_no);
            g.add_entry(LexEntry{word, pos, split_names(std::string_view(line).substr(arrow + 2), line_no)});
        } else {
            throw GrammarError("unknown declaration '" + keyword + "'", line_no);
        }
    }
    g.validate();
    return g;
}

Grammar load_grammar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GrammarError("cannot open grammar file: " + path);
    try {
        return read_grammar(in);
    } catch (const GrammarError& e) {
        throw GrammarError(path + ": " + e.what());
    }
}

void write_grammar(std::ostream& out, const Grammar& g) {
    for (const auto& t : g.trees())
        out << "tree " << t.name() << ' ' << to_string(t.kind()) << " : " << format_tree_body(t.root()) << '\n';
    for (const auto& f : g.families()) {
        out << "family " << f.name << " =";
        for (std::size_t i = 0; i < f.members.size(); ++i) out << (i ? ", " : " ") << f.members[i];
        out << '\n';
    }
    for (const auto& e : g.lexicon()) {
        out << "lex " << e.lemma << ' ' << e.pos << " ->";
        for (std::size_t i = 0; i < e.selects.size(); ++i) out << (i ? ", " : " ") << e.selects[i];
        out << '\n';
    }
}

FrequencyTable read_frequency_table(std::istream& in) {
    FrequencyTable table;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        std::string name, value;
        if (auto tab = line.find('\t'); tab != std::string::npos) {
            name = trim(std::string_view(line).substr(0, tab));
            value = trim(std::string_view(line).substr(tab + 1));
        } else {
            std::istringstream fields(line);
            fields >> name >> value;
        }
        if (name.empty() || value.empty()) throw GrammarError("expected 'tree<TAB>probability'", line_no);
        double p = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), p);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw GrammarError("bad probability '" + value + "'", line_no);
        try {
            table.set(name, p);
        } catch (const GrammarError& e) {
            throw GrammarError(e.what(), line_no);
        }
    }
    return table;
}

FrequencyTable load_frequency_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GrammarError("cannot open frequency table: " + path);
    try {
        return read_frequency_table(in);
    } catch (const GrammarError& e) {
        throw GrammarError(path + ": " + e.what());
    }
}

void write_frequency_table(std::ostream& out, const FrequencyTable& table) {
    char buf[64];
    for (const auto& [name, p] : table.entries()) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
        out << name << '\t' << std::string_view(buf, ptr - buf) << '\n';
    }
}

} // namespace tagrank
