#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace oracle {

namespace {

using tagrank::NodeKind;
using tagrank::TreeNode;

const char kHole = '\x01';

bool contains_foot(const TreeNode& n) {
    if (n.kind == NodeKind::foot) return true;
    return std::any_of(n.children.begin(), n.children.end(), contains_foot);
}

std::string plug(const std::string& with_hole, const std::string& filler) {
    const auto at = with_hole.find(kHole);
    return with_hole.substr(0, at) + filler + with_hole.substr(at + 1);
}

class Generator {
public:
    Generator(const tagrank::Grammar& g, int max_stack) : g_(g), max_stack_(max_stack) {
        std::set<std::pair<std::string, std::string>> seen; // (tree, word)
        for (const auto& e : g.lexicon())
            for (const auto& name : g.trees_for_word(e.lemma, e.pos))
                if (seen.emplace(name, e.lemma).second) anchors_[name].push_back(e.lemma);
    }

    // initial trees rooted in x with exactly k anchors
    const std::vector<std::string>& initial(const std::string& x, int k) {
        auto key = std::make_tuple(x, k, 0);
        if (auto it = init_memo_.find(key); it != init_memo_.end()) return it->second;
        std::vector<std::string> out;
        if (k >= 1)
            for (const auto& t : g_.trees())
                if (!t.is_auxiliary() && t.root_label() == x)
                    for (const auto& w : anchors_[t.name()]) append(out, expand(t.root(), w, k - 1, max_stack_));
        return init_memo_[key] = std::move(out);
    }

    // auxiliary trees rooted in x, exactly k anchors, stack depth <= d
    const std::vector<std::string>& auxiliary(const std::string& x, int k, int d) {
        auto key = std::make_tuple(x, k, d);
        if (auto it = aux_memo_.find(key); it != aux_memo_.end()) return it->second;
        std::vector<std::string> out;
        if (k >= 1 && d >= 1)
            for (const auto& t : g_.trees())
                if (t.is_auxiliary() && t.root_label() == x)
                    for (const auto& w : anchors_[t.name()]) append(out, expand(t.root(), w, k - 1, d - 1));
        return aux_memo_[key] = std::move(out);
    }

private:
    static void append(std::vector<std::string>& out, const std::vector<std::string>& more) {
        out.insert(out.end(), more.begin(), more.end());
    }

    // Subtrees for `n` using exactly k anchors besides the tree's own.
    // Spine nodes may host auxiliaries of depth <= spine_budget.
    std::vector<std::string> expand(const TreeNode& n, const std::string& word, int k, int spine_budget) {
        std::vector<std::string> out;
        switch (n.kind) {
        case NodeKind::substitution: return initial(n.label, k);
        case NodeKind::foot:
            if (k == 0) out.push_back(std::string(1, kHole));
            return out;
        case NodeKind::anchor: break;
        case NodeKind::internal: break;
        }
        const int budget = contains_foot(n) ? spine_budget : max_stack_;
        for (int k_aux = 0; k_aux <= k; ++k_aux) {
            const std::vector<std::string> below = bare(n, word, k - k_aux, spine_budget);
            if (k_aux == 0) {
                append(out, below);
                continue;
            }
            for (const auto& a : auxiliary(n.label, k_aux, budget))
                for (const auto& b : below) out.push_back(plug(a, b));
        }
        return out;
    }

    // `n` without an adjunction at n itself
    std::vector<std::string> bare(const TreeNode& n, const std::string& word, int k, int spine_budget) {
        std::vector<std::string> out;
        if (n.kind == NodeKind::anchor) {
            if (k == 0) out.push_back("(" + n.label + " " + word + ")");
            return out;
        }
        std::function<void(std::size_t, int, std::string)> go = [&](std::size_t c, int left, std::string acc) {
            if (c == n.children.size()) {
                if (left == 0) out.push_back(acc + ")");
                return;
            }
            for (int used = 0; used <= left; ++used)
                for (const auto& s : expand(n.children[c], word, used, spine_budget)) go(c + 1, left - used, acc + " " + s);
        };
        go(0, k, "(" + n.label);
        return out;
    }

    const tagrank::Grammar& g_;
    int max_stack_;
    std::map<std::string, std::vector<std::string>> anchors_;
    std::map<std::tuple<std::string, int, int>, std::vector<std::string>> init_memo_, aux_memo_;
};

std::vector<std::string> yield_of(const std::string& tree) {
    std::string spaced;
    for (char c : tree) {
        if (c == '(' || c == ')') {
            spaced += ' ';
            spaced += c;
            spaced += ' ';
        } else {
            spaced += c;
        }
    }
    std::istringstream in(spaced);
    std::vector<std::string> words;
    std::string tok, prev;
    while (in >> tok) {
        if (tok != "(" && tok != ")" && prev != "(") words.push_back(tok);
        prev = tok;
    }
    return words;
}

} // namespace

std::vector<Generated> generate(const tagrank::Grammar& grammar, const std::vector<std::string>& start,
                                int max_words, int max_stack) {
    Generator gen(grammar, max_stack);
    std::vector<Generated> out;
    for (const auto& s : start)
        for (int k = 1; k <= max_words; ++k)
            for (const auto& t : gen.initial(s, k)) out.push_back({yield_of(t), t});
    return out;
}

std::map<std::vector<std::string>, std::multiset<std::string>> by_yield(const std::vector<Generated>& all) {
    std::map<std::vector<std::string>, std::multiset<std::string>> out;
    for (const auto& g : all) out[g.words].insert(g.tree);
    return out;
}

Binary random_binary(std::mt19937_64& rng, int first, int last) {
    Binary b;
    if (last - first == 1) {
        b.leaf = first;
        return b;
    }
    std::uniform_int_distribution<int> cut(first + 1, last - 1);
    const int m = cut(rng);
    b.kids.push_back(random_binary(rng, first, m));
    b.kids.push_back(random_binary(rng, m, last));
    return b;
}

std::string to_bracketed(const Binary& b) {
    if (b.leaf >= 0) return "w" + std::to_string(b.leaf);
    std::string s = "(X";
    for (const auto& k : b.kids) s += " " + to_bracketed(k);
    return s + ")";
}

namespace {

void leaf_sets(const Binary& b, std::vector<std::set<int>>& out, std::set<int>& mine) {
    if (b.leaf >= 0) {
        mine.insert(b.leaf);
        return;
    }
    std::set<int> here;
    for (const auto& k : b.kids) leaf_sets(k, out, here);
    out.push_back(here);
    mine.insert(here.begin(), here.end());
}

std::vector<std::set<int>> constituents(const Binary& b, int n) {
    std::vector<std::set<int>> all;
    std::set<int> root;
    leaf_sets(b, all, root);
    std::vector<std::set<int>> kept;
    for (auto& s : all)
        if (s.size() >= 2 && static_cast<int>(s.size()) < n) kept.push_back(std::move(s));
    return kept;
}

} // namespace

int brute_force_crossing(const Binary& candidate, const Binary& gold, int n) {
    const auto c = constituents(candidate, n), g = constituents(gold, n);
    int count = 0;
    for (const auto& cs : c) {
        bool crossed = false;
        for (const auto& gs : g) {
            int shared = 0;
            for (int x : cs) shared += static_cast<int>(gs.count(x));
            const bool overlap = shared > 0;
            const bool nested = shared == static_cast<int>(cs.size()) || shared == static_cast<int>(gs.size());
            if (overlap && !nested) crossed = true;
        }
        count += crossed;
    }
    return count;
}

} // namespace oracle
