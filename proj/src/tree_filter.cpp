#include "tagrank/tree_filter.hpp"

#include <algorithm>
#include <set>

namespace tagrank {

namespace {

struct FrontierNeeds {
    std::size_t left = 0, right = 0;
    std::vector<std::string> left_slots, right_slots;
};

FrontierNeeds frontier_needs(const ElementaryTree& tree) {
    FrontierNeeds needs;
    bool past_anchor = false;
    for (int n : tree.frontier()) {
        const auto& fn = tree.nodes()[n];
        if (fn.kind == NodeKind::anchor) {
            past_anchor = true;
            continue;
        }
        (past_anchor ? needs.right : needs.left) += 1;
        if (fn.kind == NodeKind::substitution) (past_anchor ? needs.right_slots : needs.left_slots).push_back(fn.label);
    }
    return needs;
}

} // namespace

TreeAssignment structural_filter(const Grammar& grammar, const TreeAssignment& assignment) {
    const std::size_t n = assignment.size();
    TreeAssignment current = assignment;

    for (std::size_t i = 0; i < n; ++i) {
        auto& c = current.candidates[i];
        c.erase(std::remove_if(c.begin(), c.end(),
                               [&](const std::string& name) {
                                   auto needs = frontier_needs(grammar.tree(name));
                                   return needs.left > i || needs.right > n - 1 - i;
                               }),
                c.end());
    }

    bool changed = true;
    while (changed) {
        changed = false;
        // roots[i] = root categories of initial candidates at position i
        std::vector<std::set<std::string>> roots(n);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& name : current.candidates[i]) {
                const auto& t = grammar.tree(name);
                if (!t.is_auxiliary()) roots[i].insert(t.root_label());
            }
        auto offered = [&](const std::string& cat, std::size_t from, std::size_t to) {
            for (std::size_t p = from; p < to; ++p)
                if (roots[p].count(cat)) return true;
            return false;
        };
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = current.candidates[i];
            auto keep_end = std::remove_if(c.begin(), c.end(), [&](const std::string& name) {
                auto needs = frontier_needs(grammar.tree(name));
                for (const auto& cat : needs.left_slots)
                    if (!offered(cat, 0, i)) return true;
                for (const auto& cat : needs.right_slots)
                    if (!offered(cat, i + 1, n)) return true;
                return false;
            });
            if (keep_end != c.end()) {
                c.erase(keep_end, c.end());
                changed = true;
            }
        }
    }
    return current;
}

TreeAssignment frequency_filter(const TreeAssignment& assignment, const FrequencyTable& freq, std::size_t k) {
    TreeAssignment out = assignment;
    for (auto& c : out.candidates) {
        if (c.size() <= k) continue;
        std::vector<std::string> ranked = c;
        std::sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
            double pa = freq.probability(a), pb = freq.probability(b);
            if (pa != pb) return pa > pb;
            return a < b;
        });
        ranked.resize(k);
        std::sort(ranked.begin(), ranked.end());
        c = std::move(ranked);
    }
    return out;
}

FilteredParse filter_with_fallback(const Grammar& grammar, const TreeAssignment& assignment,
                                   const FrequencyTable& freq, std::size_t k, const ParseFn& parse_fn) {
    const auto structural = structural_filter(grammar, assignment);
    const auto frequent = frequency_filter(structural, freq, k);

    FilterReport report;
    report.positions.resize(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        auto& p = report.positions[i];
        p.before = assignment.candidates[i].size();
        p.removed_by_structure = p.before - structural.candidates[i].size();
        p.removed_by_frequency = structural.candidates[i].size() - frequent.candidates[i].size();
        p.survivors = frequent.candidates[i].size();
    }

    ParseForest forest = parse_fn(frequent);
    if (forest.empty()) {
        report.fallback_triggered = true;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            auto& p = report.positions[i];
            p.removed_by_frequency = 0;
            p.survivors = structural.candidates[i].size();
        }
        forest = parse_fn(structural);
    }
    return {std::move(forest), std::move(report)};
}

} // namespace tagrank
