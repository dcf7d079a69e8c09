#include "tagrank/bracket.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <istream>

namespace tagrank {

int PhraseTree::add_node(PhraseNode node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
}

void PhraseTree::add_child(int parent, int child) {
    nodes_[parent].children.push_back(child);
    nodes_[child].parent = parent;
}

void PhraseTree::finalize() {
    if (root_ < 0) return;
    int next_word = 0;
    std::function<void(int, int)> visit = [&](int n, int parent) {
        auto& node = nodes_[n];
        node.parent = parent;
        node.begin = next_word;
        if (node.is_word) ++next_word;
        for (int c : node.children) visit(c, n);
        nodes_[n].end = next_word;
    };
    visit(root_, -1);
}

std::vector<std::string> PhraseTree::yield() const {
    std::vector<std::string> out;
    if (root_ < 0) return out;
    std::function<void(int)> visit = [&](int n) {
        if (nodes_[n].is_word) out.push_back(nodes_[n].label);
        for (int c : nodes_[n].children) visit(c);
    };
    visit(root_);
    return out;
}

bool PhraseTree::is_preterminal(int i) const {
    const auto& n = nodes_[i];
    return !n.is_word && n.children.size() == 1 && nodes_[n.children[0]].is_word;
}

std::string PhraseTree::str() const {
    if (root_ < 0) return "()";
    std::string out;
    std::function<void(int)> visit = [&](int n) {
        const auto& node = nodes_[n];
        if (node.is_word) {
            out += node.label;
            return;
        }
        out += '(';
        out += node.label;
        for (int c : node.children) {
            out += ' ';
            visit(c);
        }
        out += ')';
    };
    visit(root_);
    return out;
}

namespace {

bool is_open(char c) { return c == '(' || c == '['; }
bool is_close(char c) { return c == ')' || c == ']'; }

class TreeReader {
public:
    explicit TreeReader(std::string_view text) : text_(text) {}

    PhraseTree read() {
        skip_ws();
        if (pos_ >= text_.size() || !is_open(text_[pos_])) throw BracketError("expected '('", pos_);
        int root = read_node();
        skip_ws();
        if (pos_ != text_.size()) throw BracketError("trailing input", pos_);
        // unwrap "( (S ...) )"
        while (tree_.node(root).label.empty() && tree_.node(root).children.size() == 1 &&
               !tree_.node(tree_.node(root).children[0]).is_word)
            root = tree_.node(root).children[0];
        tree_.set_root(root);
        tree_.finalize();
        return std::move(tree_);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string read_token() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               !is_open(text_[pos_]) && !is_close(text_[pos_]))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    int read_node() {
        char open = text_[pos_];
        std::size_t open_pos = pos_++;
        skip_ws();
        PhraseNode node;
        if (pos_ < text_.size() && !is_open(text_[pos_]) && !is_close(text_[pos_])) node.label = read_token();
        int id = tree_.add_node(node);
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) throw BracketError("unbalanced bracket opened", open_pos);
            char c = text_[pos_];
            if (is_close(c)) {
                if ((open == '(') != (c == ')')) throw BracketError("mismatched bracket", pos_);
                ++pos_;
                break;
            }
            int child;
            if (is_open(c)) {
                child = read_node();
            } else {
                PhraseNode word;
                word.label = read_token();
                word.is_word = true;
                child = tree_.add_node(std::move(word));
            }
            tree_.add_child(id, child);
        }
        if (tree_.node(id).children.empty()) throw BracketError("empty constituent", open_pos);
        return id;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    PhraseTree tree_;
};

} // namespace

PhraseTree parse_bracketed(std::string_view text) { return TreeReader(text).read(); }

std::vector<PhraseTree> read_treebank(std::istream& in) {
    std::vector<PhraseTree> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_bracketed(line));
        } catch (const BracketError& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

PhraseTree flatten(const PhraseTree& tree, const std::vector<std::string>& categories) {
    PhraseTree out;
    if (tree.empty()) return out;
    auto in_set = [&](const std::string& label) {
        return std::find(categories.begin(), categories.end(), label) != categories.end();
    };
    auto copy_word = [&](int n) {
        PhraseNode w = tree.node(n);
        w.children.clear();
        return out.add_node(std::move(w));
    };

    std::function<int(int)> rebuild;
    std::function<void(int, int)> splice = [&](int n, int into) {
        const auto& node = tree.node(n);
        if (node.is_word) {
            out.add_child(into, copy_word(n));
        } else if (tree.is_preterminal(n)) {
            out.add_child(into, copy_word(node.children[0]));
        } else if (in_set(node.label)) {
            for (int c : node.children) splice(c, into);
        } else {
            out.add_child(into, rebuild(n));
        }
    };
    rebuild = [&](int n) {
        const auto& node = tree.node(n);
        if (node.is_word) return copy_word(n);
        PhraseNode copy = node;
        copy.children.clear();
        int id = out.add_node(std::move(copy));
        for (int c : node.children) {
            if (in_set(node.label)) splice(c, id);
            else out.add_child(id, rebuild(c));
        }
        return id;
    };
    out.set_root(rebuild(tree.root()));
    out.finalize();
    return out;
}

} // namespace tagrank
