#include "tagrank/derivation.hpp"

#include <functional>
#include <map>

namespace tagrank {

const char* to_string(Operation op) { return op == Operation::substitution ? "substitution" : "adjunction"; }

bool DerivationNode::operator==(const DerivationNode& other) const {
    return tree == other.tree && anchor == other.anchor && attachments == other.attachments;
}

std::string to_string(const DerivationNode& d) {
    std::string out = d.tree + '@' + std::to_string(d.anchor) + '{';
    for (std::size_t i = 0; i < d.attachments.size(); ++i) {
        const auto& a = d.attachments[i];
        if (i) out += ' ';
        out += a.address.str();
        out += a.op == Operation::substitution ? ":subst " : ":adj ";
        out += to_string(a.child);
    }
    out += '}';
    return out;
}

std::vector<const DerivationNode*> preorder(const DerivationNode& d) {
    std::vector<const DerivationNode*> out;
    std::function<void(const DerivationNode&)> visit = [&](const DerivationNode& n) {
        out.push_back(&n);
        for (const auto& a : n.attachments) visit(a.child);
    };
    visit(d);
    return out;
}

std::size_t adjunction_count(const DerivationNode& d) {
    std::size_t n = 0;
    for (const auto& a : d.attachments) n += (a.op == Operation::adjunction) + adjunction_count(a.child);
    return n;
}

std::size_t elementary_count(const DerivationNode& d) {
    std::size_t n = 1;
    for (const auto& a : d.attachments) n += elementary_count(a.child);
    return n;
}

namespace {

class Deriver {
public:
    Deriver(const Grammar& g, const DerivationNode& d, const std::vector<std::string>& words, bool features)
        : grammar_(g), words_(words), features_(features) {
        auto order = preorder(d);
        for (std::size_t i = 0; i < order.size(); ++i) ids_[order[i]] = static_cast<int>(i);
    }

    PhraseTree run(const DerivationNode& d) {
        const auto& t = lookup(d);
        if (t.is_auxiliary()) fail(d, "root of a derivation must be an initial tree");
        out_.set_root(build(d, -1));
        out_.finalize();
        return std::move(out_);
    }

private:
    [[noreturn]] void fail(const DerivationNode& d, const std::string& why) const {
        throw DerivationError("derivation node " + d.tree + "@" + std::to_string(d.anchor) + ": " + why);
    }

    const ElementaryTree& lookup(const DerivationNode& d) const {
        const auto* t = grammar_.find_tree(d.tree);
        if (!t) fail(d, "unknown tree");
        return *t;
    }

    // Adjoins the attachment (if any) at a node already built as `p`.
    int adjoin(const DerivationNode& d, const FlatNode& fn, const Attachment* att, int p) {
        if (!att) return p;
        if (att->op != Operation::adjunction) fail(d, "substitution at internal node " + fn.address.str());
        const auto& aux = lookup(att->child);
        if (!aux.is_auxiliary()) fail(d, "initial tree adjoined at " + fn.address.str());
        if (aux.root_label() != fn.label)
            fail(d, "category mismatch at " + fn.address.str() + ": " + aux.root_label() + " vs " + fn.label);
        if (features_ && (!features_unify(fn.features, aux.root().features) ||
                          !features_unify(fn.features, aux.nodes()[aux.foot_node()].features)))
            fail(d, "feature clash adjoining at " + fn.address.str());
        return build(att->child, p);
    }

    int build(const DerivationNode& d, int foot_filler) {
        const auto& t = lookup(d);
        if (d.anchor < 0 || static_cast<std::size_t>(d.anchor) >= words_.size())
            fail(d, "anchor index out of range");
        std::map<GornAddress, const Attachment*> at;
        for (const auto& a : d.attachments) {
            if (!at.emplace(a.address, &a).second) fail(d, "two attachments at address " + a.address.str());
            if (t.find(a.address) < 0) fail(d, "no node at address " + a.address.str());
        }
        const int id = ids_.at(&d);
        std::size_t used = 0;

        std::function<int(int)> node = [&](int n) -> int {
            const auto& fn = t.nodes()[n];
            auto it = at.find(fn.address);
            const Attachment* att = it == at.end() ? nullptr : it->second;
            if (att) ++used;
            switch (fn.kind) {
            case NodeKind::anchor: {
                int p = out_.add_node(PhraseNode{fn.label, false, {}, -1, 0, 0, id, n});
                int w = out_.add_node(PhraseNode{words_[d.anchor], true, {}, -1, 0, 0, id, -1});
                out_.add_child(p, w);
                return adjoin(d, fn, att, p);
            }
            case NodeKind::foot:
                if (att) fail(d, "attachment at foot node " + fn.address.str());
                if (foot_filler < 0) fail(d, "auxiliary tree used without an adjunction site");
                return foot_filler;
            case NodeKind::substitution: {
                if (!att || att->op != Operation::substitution)
                    fail(d, "substitution node " + fn.address.str() + " left open");
                const auto& child = lookup(att->child);
                if (child.is_auxiliary()) fail(d, "auxiliary tree substituted at " + fn.address.str());
                if (child.root_label() != fn.label)
                    fail(d, "category mismatch at " + fn.address.str() + ": " + child.root_label() + " vs " + fn.label);
                if (features_ && !features_unify(fn.features, child.root().features))
                    fail(d, "feature clash substituting at " + fn.address.str());
                return build(att->child, -1);
            }
            case NodeKind::internal: {
                int p = out_.add_node(PhraseNode{fn.label, false, {}, -1, 0, 0, id, n});
                for (int c : fn.children) out_.add_child(p, node(c));
                return adjoin(d, fn, att, p);
            }
            }
            return -1;
        };
        int root = node(0);
        if (used != at.size()) fail(d, "unused attachment");
        return root;
    }

    const Grammar& grammar_;
    const std::vector<std::string>& words_;
    bool features_;
    std::map<const DerivationNode*, int> ids_;
    PhraseTree out_;
};

} // namespace

PhraseTree derive(const Grammar& grammar, const DerivationNode& d, const std::vector<std::string>& words,
                  bool check_features) {
    return Deriver(grammar, d, words, check_features).run(d);
}

} // namespace tagrank
