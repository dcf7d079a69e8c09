#include "tagrank/chart_parser.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>

namespace tagrank {

namespace {

struct KeyHash {
    std::size_t operator()(const ParseForest::ItemKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int v : {k.instance, k.node, k.i, k.j, k.foot_i, k.foot_j, k.depth, int(k.top)}) {
            h ^= static_cast<std::uint64_t>(v + 1);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

std::uint64_t pack(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d = 0) {
    return (((a << 16 | b) << 12 | c) << 12) | d;
}

enum class Side { contains, left, right };

std::size_t sat_mul(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > unlimited / b) return unlimited;
    return a * b;
}

std::size_t sat_add(std::size_t a, std::size_t b) { return a > unlimited - b ? unlimited : a + b; }

} // namespace

class ChartBuilder {
public:
    ChartBuilder(const Grammar& grammar, const TreeAssignment& assignment, const ParseOptions& options)
        : options_(options) {
        forest_.length_ = assignment.size();
        for (std::size_t pos = 0; pos < assignment.size(); ++pos) {
            for (const auto& name : assignment.candidates[pos]) {
                const auto* tree = grammar.find_tree(name);
                if (!tree) throw GrammarError("assignment references unknown tree '" + name + "'");
                forest_.instances_.push_back({tree, static_cast<int>(pos)});
            }
        }
        for (const auto& inst : forest_.instances_) {
            std::vector<Side> sides;
            std::vector<int> labels;
            const int anchor = inst.tree->anchor_node();
            for (std::size_t n = 0; n < inst.tree->nodes().size(); ++n) {
                const auto& fn = inst.tree->nodes()[n];
                if (fn.has_anchor) sides.push_back(Side::contains);
                else sides.push_back(static_cast<int>(n) < anchor ? Side::left : Side::right);
                labels.push_back(label_id(fn.label));
            }
            sides_.push_back(std::move(sides));
            label_of_.push_back(std::move(labels));
        }
    }

    ParseForest run() {
        const int n = static_cast<int>(forest_.length_);
        for (int width = 1; width <= n; ++width) {
            for (int i = 0; i + width <= n; ++i) {
                const int j = i + width;
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (std::size_t inst = 0; inst < forest_.instances_.size(); ++inst)
                        for (int node : forest_.instances_[inst].tree->post_order())
                            changed |= process(static_cast<int>(inst), node, i, j);
                }
            }
        }
        collect_roots();
        return std::move(forest_);
    }

private:
    int label_id(const std::string& label) {
        auto [it, inserted] = labels_.emplace(label, static_cast<int>(labels_.size()));
        return it->second;
    }

    bool span_ok(int inst, int node, int i, int j) const {
        const int a = forest_.instances_[inst].anchor;
        switch (sides_[inst][node]) {
        case Side::contains: return i <= a && a < j;
        case Side::left: return j <= a;
        case Side::right: return i > a;
        }
        return false;
    }

    // Returns true when a new item or edge was recorded.
    bool add(const ParseForest::ItemKey& key, ParseForest::EdgeKind kind, std::span<const int> parts) {
        auto [it, created] = index_.emplace(key, static_cast<int>(forest_.items_.size()));
        const int id = it->second;
        if (created) {
            forest_.items_.push_back({key, {}});
            register_item(id);
        }
        auto& edges = forest_.items_[id].edges;
        for (const auto& e : edges)
            if (e.kind == kind && std::equal(e.parts.begin(), e.parts.end(), parts.begin(), parts.end()))
                return created;
        edges.push_back({kind, std::vector<int>(parts.begin(), parts.end())});
        return true;
    }

    bool add(const ParseForest::ItemKey& key, ParseForest::EdgeKind kind, std::initializer_list<int> parts) {
        return add(key, kind, std::span<const int>(parts.begin(), parts.size()));
    }

    void register_item(int id) {
        const auto& k = forest_.items_[id].key;
        if (k.top) {
            top_by_start_[pack(k.instance, k.node, k.i)].push_back(id);
            if (k.node == 0) {
                const auto* tree = forest_.instances_[k.instance].tree;
                const int label = label_of_[k.instance][0];
                if (tree->is_auxiliary()) aux_roots_[pack(label, k.i, k.j)].push_back(id);
                else init_roots_[pack(label, k.i, k.j)].push_back(id);
            }
        } else {
            bottom_by_span_[pack(k.instance, k.node, k.i, k.j)].push_back(id);
        }
    }

    const std::vector<int>& lookup(const std::unordered_map<std::uint64_t, std::vector<int>>& table,
                                   std::uint64_t key) const {
        static const std::vector<int> none;
        auto it = table.find(key);
        return it == table.end() ? none : it->second;
    }

    bool process(int inst, int node, int i, int j) {
        if (!span_ok(inst, node, i, j)) return false;
        const auto& instance = forest_.instances_[inst];
        const auto& tree = *instance.tree;
        const auto& fn = tree.nodes()[node];
        using EK = ParseForest::EdgeKind;
        bool changed = false;

        switch (fn.kind) {
        case NodeKind::anchor:
            // the anchor is a preterminal over its word, so it can host adjunction
            if (i == instance.anchor && j == instance.anchor + 1)
                changed |= add({inst, node, i, j, -1, -1, 0, false}, EK::leaf, {});
            break;
        case NodeKind::foot:
            changed |= add({inst, node, i, j, i, j, 0, true}, EK::leaf, {});
            return changed;
        case NodeKind::substitution: {
            const auto& roots = lookup(init_roots_, pack(label_of_[inst][node], i, j));
            for (std::size_t x = 0, n = roots.size(); x < n; ++x) {
                const int r = roots[x];
                const auto& rk = forest_.items_[r].key;
                if (rk.instance == inst) continue;
                if (options_.check_features &&
                    !features_unify(fn.features, forest_.instances_[rk.instance].tree->root().features))
                    continue;
                changed |= add({inst, node, i, j, -1, -1, 0, true}, EK::substitution, {r});
            }
            return changed;
        }
        case NodeKind::internal: break;
        }

        if (fn.kind == NodeKind::internal) changed |= add_bottoms(inst, node, i, j);
        return changed | add_tops(inst, node, i, j);
    }

    struct Combo {
        std::vector<int> parts;
        int foot_i, foot_j, depth;
    };

    // Extends `parts` with a top item for children[c] starting at `pos`.
    void extend(int inst, const std::vector<int>& children, int j, std::size_t c, int pos, int fi, int fj, int depth,
                std::vector<int>& parts, std::vector<Combo>& combos) const {
        if (c == children.size()) {
            if (pos == j) combos.push_back({parts, fi, fj, depth});
            return;
        }
        const int remaining = static_cast<int>(children.size() - c - 1);
        for (int id : lookup(top_by_start_, pack(inst, children[c], pos))) {
            const auto& k = forest_.items_[id].key;
            if (k.j > j - remaining) continue;
            if (remaining == 0 && k.j != j) continue;
            if (k.foot_i >= 0 && fi >= 0) continue;
            parts.push_back(id);
            extend(inst, children, j, c + 1, k.j, k.foot_i >= 0 ? k.foot_i : fi, k.foot_i >= 0 ? k.foot_j : fj,
                   std::max(depth, k.depth), parts, combos);
            parts.pop_back();
        }
    }

    // bottom items: contiguous sequences of child top items covering [i, j)
    bool add_bottoms(int inst, int node, int i, int j) {
        const auto& fn = forest_.instances_[inst].tree->nodes()[node];
        std::vector<Combo> combos;
        std::vector<int> parts;
        extend(inst, fn.children, j, 0, i, -1, -1, 0, parts, combos);
        bool changed = false;
        for (auto& combo : combos)
            changed |= add({inst, node, i, j, combo.foot_i, combo.foot_j, combo.depth, false},
                           ParseForest::EdgeKind::children, combo.parts);
        return changed;
    }

    bool add_tops(int inst, int node, int i, int j) {
        using EK = ParseForest::EdgeKind;
        const auto& fn = forest_.instances_[inst].tree->nodes()[node];
        bool changed = false;
        // top items: without adjunction
        const auto& bottoms = lookup(bottom_by_span_, pack(inst, node, i, j));
        for (std::size_t x = 0, n = bottoms.size(); x < n; ++x) {
            const int b = bottoms[x];
            auto key = forest_.items_[b].key;
            key.top = true;
            changed |= add(key, EK::no_adjunction, {b});
        }

        // top items: an auxiliary tree spanning [i, j) adjoined here
        // indexed loops: adjoining at an auxiliary root appends to `auxes`
        const auto& auxes = lookup(aux_roots_, pack(label_of_[inst][node], i, j));
        for (std::size_t x = 0, n = auxes.size(); x < n; ++x) {
            const int r = auxes[x];
            const auto rk = forest_.items_[r].key;
            if (rk.instance == inst) continue;
            const int aux_depth = rk.depth + 1;
            if (aux_depth > options_.max_adjunction_stack) continue;
            const auto& aux = *forest_.instances_[rk.instance].tree;
            if (options_.check_features && (!features_unify(fn.features, aux.root().features) ||
                                            !features_unify(fn.features, aux.nodes()[aux.foot_node()].features)))
                continue;
            const auto& sites = lookup(bottom_by_span_, pack(inst, node, rk.foot_i, rk.foot_j));
            for (std::size_t y = 0, m = sites.size(); y < m; ++y) {
                const int b = sites[y];
                const auto bk = forest_.items_[b].key;
                const int depth = fn.on_spine ? std::max(bk.depth, aux_depth) : 0;
                changed |= add({inst, node, i, j, bk.foot_i, bk.foot_j, depth, true}, EK::adjunction, {b, r});
            }
        }
        return changed;
    }

    void collect_roots() {
        const int n = static_cast<int>(forest_.length_);
        for (std::size_t id = 0; id < forest_.items_.size(); ++id) {
            const auto& k = forest_.items_[id].key;
            if (!k.top || k.node != 0 || k.i != 0 || k.j != n || k.foot_i >= 0) continue;
            const auto* tree = forest_.instances_[k.instance].tree;
            if (tree->is_auxiliary()) continue;
            const auto& starts = options_.start_categories;
            if (!starts.empty() && std::find(starts.begin(), starts.end(), tree->root_label()) == starts.end())
                continue;
            forest_.roots_.push_back(static_cast<int>(id));
        }
        std::sort(forest_.roots_.begin(), forest_.roots_.end(), [&](int a, int b) {
            const auto& ia = forest_.instances_[forest_.items_[a].key.instance];
            const auto& ib = forest_.instances_[forest_.items_[b].key.instance];
            return std::tie(ia.tree->name(), ia.anchor, a) < std::tie(ib.tree->name(), ib.anchor, b);
        });
    }

    ParseOptions options_;
    ParseForest forest_;
    std::vector<std::vector<Side>> sides_;
    std::map<std::string, int> labels_;
    std::vector<std::vector<int>> label_of_; // [instance][node]
    std::unordered_map<ParseForest::ItemKey, int, KeyHash> index_;
    std::unordered_map<std::uint64_t, std::vector<int>> top_by_start_;
    std::unordered_map<std::uint64_t, std::vector<int>> bottom_by_span_;
    std::unordered_map<std::uint64_t, std::vector<int>> init_roots_;
    std::unordered_map<std::uint64_t, std::vector<int>> aux_roots_;
};

ParseForest parse(const Grammar& grammar, const TreeAssignment& assignment, const ParseOptions& options) {
    return ChartBuilder(grammar, assignment, options).run();
}

// ---------------------------------------------------------------------------
// Counting and enumeration

std::size_t ParseForest::derivation_count() const {
    std::vector<std::size_t> memo(items_.size(), 0);
    std::vector<char> done(items_.size(), 0);
    std::function<std::size_t(int)> count = [&](int id) -> std::size_t {
        if (done[id]) return memo[id];
        std::size_t total = 0;
        for (const auto& e : items_[id].edges) {
            std::size_t ways = 1;
            for (int p : e.parts) ways = sat_mul(ways, count(p));
            total = sat_add(total, ways);
        }
        done[id] = 1;
        return memo[id] = total;
    };
    std::size_t total = 0;
    for (int r : roots_) total = sat_add(total, count(r));
    return total;
}

namespace {

using Partial = std::vector<Attachment>;

class Enumerator {
public:
    Enumerator(const ParseForest& forest, std::size_t limit) : forest_(forest), limit_(limit) {}

    const std::vector<DerivationNode>& wrap(int root) {
        if (auto it = wrapped_.find(root); it != wrapped_.end()) return it->second;
        const auto& inst = forest_.instances()[forest_.items()[root].key.instance];
        std::vector<DerivationNode> out;
        for (const auto& partial : item(root)) {
            DerivationNode d{inst.tree->name(), inst.anchor, partial};
            std::sort(d.attachments.begin(), d.attachments.end(),
                      [](const Attachment& a, const Attachment& b) { return a.address < b.address; });
            out.push_back(std::move(d));
        }
        return wrapped_.emplace(root, std::move(out)).first->second;
    }

private:
    const std::vector<Partial>& item(int id) {
        if (auto it = memo_.find(id); it != memo_.end()) return it->second;
        if (!active_.insert(id).second) throw std::logic_error("cyclic parse forest");
        const auto& it = forest_.items()[id];
        const auto& tree = *forest_.instances()[it.key.instance].tree;
        const GornAddress& address = tree.nodes()[it.key.node].address;
        std::vector<Partial> out;
        using EK = ParseForest::EdgeKind;
        for (const auto& e : it.edges) {
            if (out.size() >= limit_) break;
            switch (e.kind) {
            case EK::leaf: out.emplace_back(); break;
            case EK::no_adjunction:
                for (const auto& p : item(e.parts[0])) {
                    if (out.size() >= limit_) break;
                    out.push_back(p);
                }
                break;
            case EK::children: product(e.parts, 0, Partial{}, out); break;
            case EK::substitution:
                for (const auto& d : wrap(e.parts[0])) {
                    if (out.size() >= limit_) break;
                    out.push_back(Partial{Attachment{Operation::substitution, address, d}});
                }
                break;
            case EK::adjunction: {
                const auto& below = item(e.parts[0]);
                const auto& aux = wrap(e.parts[1]);
                for (const auto& p : below) {
                    for (const auto& d : aux) {
                        if (out.size() >= limit_) break;
                        Partial q = p;
                        q.push_back(Attachment{Operation::adjunction, address, d});
                        out.push_back(std::move(q));
                    }
                    if (out.size() >= limit_) break;
                }
                break;
            }
            }
        }
        active_.erase(id);
        return memo_.emplace(id, std::move(out)).first->second;
    }

    void product(const std::vector<int>& parts, std::size_t k, const Partial& prefix, std::vector<Partial>& out) {
        if (out.size() >= limit_) return;
        if (k == parts.size()) {
            out.push_back(prefix);
            return;
        }
        for (const auto& p : item(parts[k])) {
            if (out.size() >= limit_) return;
            Partial next = prefix;
            next.insert(next.end(), p.begin(), p.end());
            product(parts, k + 1, next, out);
        }
    }

    const ParseForest& forest_;
    std::size_t limit_;
    std::unordered_map<int, std::vector<Partial>> memo_;
    std::unordered_map<int, std::vector<DerivationNode>> wrapped_;
    std::set<int> active_;
};

} // namespace

std::vector<DerivationNode> ParseForest::enumerate(std::size_t limit) const {
    std::vector<DerivationNode> out;
    if (limit == 0) return out;
    Enumerator e(*this, limit);
    for (int r : roots_) {
        for (const auto& d : e.wrap(r)) {
            if (out.size() >= limit) return out;
            out.push_back(d);
        }
    }
    return out;
}

} // namespace tagrank
