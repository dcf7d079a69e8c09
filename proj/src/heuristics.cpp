#include "tagrank/heuristics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace tagrank {

const char* to_string(HeuristicKind kind) {
    switch (kind) {
    case HeuristicKind::local_tree_type: return "tree_type";
    case HeuristicKind::local_lexical: return "lexical";
    case HeuristicKind::global_structural: return "global";
    }
    return "?";
}

const char* to_string(GlobalRule rule) {
    switch (rule) {
    case GlobalRule::adjunction_count: return "adjunction_count";
    case GlobalRule::pp_attachment_height: return "pp_attachment_height";
    case GlobalRule::adj_attachment_height: return "adj_attachment_height";
    }
    return "?";
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

bool contains(const std::vector<std::string>& set, const std::string& x) {
    return std::find(set.begin(), set.end(), x) != set.end();
}

} // namespace

// ---------------------------------------------------------------------------
// TreePredicate

TreePredicate TreePredicate::parse(const std::string& spec) {
    TreePredicate p;
    if (spec.empty()) return p;
    for (const auto& item : split(spec, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos || colon + 1 == item.size())
            throw RegistryError("bad predicate '" + item + "' (expected pos:, tree:, prefix: or contains:)");
        std::string kind = item.substr(0, colon), value = item.substr(colon + 1);
        Test t{Test::Kind::pos, value};
        if (kind == "pos") t.kind = Test::Kind::pos;
        else if (kind == "tree") t.kind = Test::Kind::tree;
        else if (kind == "prefix") t.kind = Test::Kind::prefix;
        else if (kind == "contains") t.kind = Test::Kind::contains;
        else throw RegistryError("unknown predicate kind '" + kind + "'");
        p.tests_.push_back(std::move(t));
    }
    return p;
}

bool TreePredicate::matches(const std::string& pos, const std::string& tree) const {
    for (const auto& t : tests_) {
        switch (t.kind) {
        case Test::Kind::pos:
            if (pos == t.value) return true;
            break;
        case Test::Kind::tree:
            if (tree == t.value) return true;
            break;
        case Test::Kind::prefix:
            if (tree.compare(0, t.value.size(), t.value) == 0) return true;
            break;
        case Test::Kind::contains:
            if (tree.find(t.value) != std::string::npos) return true;
            break;
        }
    }
    return false;
}

std::string TreePredicate::str() const {
    std::vector<std::string> parts;
    for (const auto& t : tests_) {
        const char* k = t.kind == Test::Kind::pos      ? "pos:"
                        : t.kind == Test::Kind::tree   ? "tree:"
                        : t.kind == Test::Kind::prefix ? "prefix:"
                                                       : "contains:";
        parts.push_back(k + t.value);
    }
    return join(parts, ',');
}

// ---------------------------------------------------------------------------
// Registry

HeuristicRegistry::HeuristicRegistry(std::vector<HeuristicSpec> specs) : specs_(std::move(specs)) {
    std::set<std::string> names;
    std::map<GlobalRule, int> globals;
    for (const auto& s : specs_) {
        if (s.name.empty()) throw RegistryError("heuristic with empty name");
        if (!names.insert(s.name).second) throw RegistryError("duplicate heuristic '" + s.name + "'");
        switch (s.kind) {
        case HeuristicKind::local_tree_type:
            if (s.match.empty()) throw RegistryError("heuristic '" + s.name + "' needs match=");
            break;
        case HeuristicKind::local_lexical:
            if (s.word.empty() || s.disprefer.empty())
                throw RegistryError("heuristic '" + s.name + "' needs word= and disprefer=");
            break;
        case HeuristicKind::global_structural:
            ++globals[s.rule];
            if (s.rule != GlobalRule::adjunction_count && (s.modifier_anchors.empty() || s.sites.empty()))
                throw RegistryError("heuristic '" + s.name + "' needs anchors= and sites=");
            break;
        }
    }
    for (auto rule : {GlobalRule::adjunction_count, GlobalRule::pp_attachment_height,
                      GlobalRule::adj_attachment_height}) {
        if (globals[rule] != 1)
            throw RegistryError(std::string("registry must declare global rule ") + to_string(rule) + " exactly once");
    }
}

HeuristicRegistry HeuristicRegistry::defaults() {
    std::vector<HeuristicSpec> specs;
    auto global = [&](GlobalRule rule, std::vector<std::string> anchors, std::vector<std::string> sites) {
        HeuristicSpec s;
        s.name = to_string(rule);
        s.kind = HeuristicKind::global_structural;
        s.rule = rule;
        s.modifier_anchors = std::move(anchors);
        s.sites = std::move(sites);
        specs.push_back(std::move(s));
    };
    auto clause = [&](std::string name, const std::string& match) {
        HeuristicSpec s;
        s.name = std::move(name);
        s.kind = HeuristicKind::local_tree_type;
        s.match = TreePredicate::parse(match);
        specs.push_back(std::move(s));
    };
    auto lexical = [&](std::string name, std::string word, const std::string& prefer, const std::string& disprefer) {
        HeuristicSpec s;
        s.name = std::move(name);
        s.kind = HeuristicKind::local_lexical;
        s.word = std::move(word);
        s.prefer = TreePredicate::parse(prefer);
        s.disprefer = TreePredicate::parse(disprefer);
        specs.push_back(std::move(s));
    };
    global(GlobalRule::adjunction_count, {}, {});
    global(GlobalRule::pp_attachment_height, {"P"}, {"NP", "VP"});
    global(GlobalRule::adj_attachment_height, {"A"}, {"N", "NP"});
    clause("disprefer_relative_clause", "contains:Rel_Cl");
    clause("disprefer_topicalization", "contains:Topic");
    clause("disprefer_predicative", "contains:Predicative");
    lexical("prefer_of_np_modifier", "of", "contains:Attaches_to_NP", "contains:Attaches_to_VP");
    lexical("prefer_this_determiner", "this", "pos:D", "pos:N");
    lexical("prefer_to_verb", "to", "pos:V", "pos:P");
    lexical("prefer_that_complementizer", "that", "pos:Comp", "pos:D");
    lexical("prefer_which_complementizer", "which", "pos:Comp", "pos:N");
    return HeuristicRegistry(std::move(specs));
}

std::size_t HeuristicRegistry::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < specs_.size(); ++i)
        if (specs_[i].name == name) return i;
    throw RegistryError("unknown heuristic '" + name + "'");
}

std::vector<std::string> HeuristicRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& s : specs_) out.push_back(s.name);
    return out;
}

HeuristicRegistry read_registry(std::istream& in) {
    std::vector<HeuristicSpec> specs;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::string name, kind;
        if (!(fields >> name)) continue;
        auto fail = [&](const std::string& why) {
            throw RegistryError("line " + std::to_string(line_no) + ": " + why);
        };
        if (!(fields >> kind)) fail("missing kind for '" + name + "'");
        HeuristicSpec s;
        s.name = name;
        if (kind == "tree_type") s.kind = HeuristicKind::local_tree_type;
        else if (kind == "lexical") s.kind = HeuristicKind::local_lexical;
        else if (kind == "global") s.kind = HeuristicKind::global_structural;
        else fail("unknown kind '" + kind + "'");
        std::string rule_name = name;
        std::string kv;
        try {
            while (fields >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) fail("expected key=value, got '" + kv + "'");
                std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
                if (key == "match") s.match = TreePredicate::parse(value);
                else if (key == "word") s.word = value;
                else if (key == "prefer") s.prefer = TreePredicate::parse(value);
                else if (key == "disprefer") s.disprefer = TreePredicate::parse(value);
                else if (key == "rule") rule_name = value;
                else if (key == "anchors") s.modifier_anchors = split(value, ',');
                else if (key == "sites") s.sites = split(value, ',');
                else fail("unknown key '" + key + "'");
            }
        } catch (const RegistryError& e) {
            if (std::string(e.what()).rfind("line ", 0) == 0) throw;
            fail(e.what());
        }
        if (s.kind == HeuristicKind::global_structural) {
            if (rule_name == "adjunction_count") s.rule = GlobalRule::adjunction_count;
            else if (rule_name == "pp_attachment_height") s.rule = GlobalRule::pp_attachment_height;
            else if (rule_name == "adj_attachment_height") s.rule = GlobalRule::adj_attachment_height;
            else fail("unknown global rule '" + rule_name + "'");
        }
        specs.push_back(std::move(s));
    }
    return HeuristicRegistry(std::move(specs));
}

HeuristicRegistry load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RegistryError("cannot open registry file: " + path);
    try {
        return read_registry(in);
    } catch (const RegistryError& e) {
        throw RegistryError(path + ": " + e.what());
    }
}

void write_registry(std::ostream& out, const HeuristicRegistry& registry) {
    for (const auto& s : registry.specs()) {
        out << s.name << ' ' << to_string(s.kind);
        switch (s.kind) {
        case HeuristicKind::local_tree_type: out << " match=" << s.match.str(); break;
        case HeuristicKind::local_lexical:
            out << " word=" << s.word;
            if (!s.prefer.empty()) out << " prefer=" << s.prefer.str();
            out << " disprefer=" << s.disprefer.str();
            break;
        case HeuristicKind::global_structural:
            out << " rule=" << to_string(s.rule);
            if (!s.modifier_anchors.empty()) out << " anchors=" << join(s.modifier_anchors, ',');
            if (!s.sites.empty()) out << " sites=" << join(s.sites, ',');
            break;
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Weights

WeightVector read_weights(std::istream& in, const HeuristicRegistry& registry) {
    WeightVector w;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::string name, value;
        if (!(fields >> name)) continue;
        auto fail = [&](const std::string& why) {
            throw RegistryError("weights line " + std::to_string(line_no) + ": " + why);
        };
        if (!(fields >> value)) fail("missing weight for '" + name + "'");
        double x = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
        if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(x))
            fail("bad weight '" + value + "'");
        const std::size_t k = w.weights.size();
        if (k >= registry.size()) fail("more weights than heuristics");
        if (registry[k].name != name)
            fail("expected weight for '" + registry[k].name + "', found '" + name + "'");
        w.weights.push_back(x);
    }
    if (w.weights.size() != registry.size())
        throw RegistryError("weights file has " + std::to_string(w.weights.size()) + " entries, registry has " +
                            std::to_string(registry.size()));
    return w;
}

WeightVector load_weights(const std::string& path, const HeuristicRegistry& registry) {
    std::ifstream in(path);
    if (!in) throw RegistryError("cannot open weights file: " + path);
    return read_weights(in, registry);
}

void write_weights(std::ostream& out, const WeightVector& w, const HeuristicRegistry& registry) {
    if (w.weights.size() != registry.size()) throw std::invalid_argument("weight vector does not match registry");
    char buf[64];
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w.weights[i]);
        out << registry[i].name << '\t' << std::string_view(buf, ptr - buf) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

struct Adjunction {
    int host;       // derivation id of the tree adjoined into
    int aux;        // derivation id of the auxiliary tree
    int site_node;  // flat node index in the host tree
    const ElementaryTree* aux_tree;
};

// Eligible sites bypassed by a modifier adjunction: below the chosen site when
// `count_lower`, above it otherwise. Sites abut the modifier on the side of
// the foot.
double bypassed_sites(const PhraseTree& t, const Adjunction& adj, const std::vector<std::string>& sites,
                      bool count_lower) {
    int site = -1, aux_root = -1;
    for (std::size_t n = 0; n < t.node_count(); ++n) {
        const auto& node = t.node(static_cast<int>(n));
        if (node.is_word) continue;
        if (node.derivation_node == adj.host && node.elementary_node == adj.site_node) site = static_cast<int>(n);
        if (node.derivation_node == adj.aux && node.elementary_node == 0) aux_root = static_cast<int>(n);
    }
    if (site < 0 || aux_root < 0) throw DerivationError("derived tree does not match derivation");

    const bool right_modifier = adj.aux_tree->foot_left_of_anchor();
    double count = 0;
    if (count_lower) {
        const auto& s = t.node(site);
        std::vector<int> stack(s.children.begin(), s.children.end());
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            const auto& node = t.node(n);
            if (node.is_word) continue;
            const bool abuts = right_modifier ? node.end == s.end : node.begin == s.begin;
            if (abuts && contains(sites, node.label)) ++count;
            stack.insert(stack.end(), node.children.begin(), node.children.end());
        }
    } else {
        const auto& r = t.node(aux_root);
        for (int n = r.parent; n >= 0; n = t.node(n).parent) {
            const auto& node = t.node(n);
            const bool abuts = right_modifier ? node.end == r.end : node.begin == r.begin;
            if (abuts && contains(sites, node.label)) ++count;
        }
    }
    return count;
}

} // namespace

HeuristicVector extract(const HeuristicRegistry& registry, const Grammar& grammar, const DerivationNode& d,
                        const PhraseTree& derived) {
    const auto nodes = preorder(d);
    std::map<const DerivationNode*, int> id;
    for (std::size_t i = 0; i < nodes.size(); ++i) id[nodes[i]] = static_cast<int>(i);
    const auto words = derived.yield();

    std::vector<Adjunction> adjunctions;
    for (std::size_t h = 0; h < nodes.size(); ++h) {
        const auto& host_tree = grammar.tree(nodes[h]->tree);
        for (const auto& a : nodes[h]->attachments) {
            if (a.op != Operation::adjunction) continue;
            adjunctions.push_back({static_cast<int>(h), id.at(&a.child), host_tree.find(a.address),
                                   &grammar.tree(a.child.tree)});
        }
    }

    HeuristicVector v{std::vector<double>(registry.size(), 0.0)};
    for (std::size_t k = 0; k < registry.size(); ++k) {
        const auto& spec = registry[k];
        double& c = v.counts[k];
        switch (spec.kind) {
        case HeuristicKind::local_tree_type:
            for (const auto* n : nodes) {
                const auto& t = grammar.tree(n->tree);
                if (spec.match.matches(t.anchor_pos(), t.name())) ++c;
            }
            break;
        case HeuristicKind::local_lexical:
            for (const auto* n : nodes) {
                if (n->anchor < 0 || static_cast<std::size_t>(n->anchor) >= words.size()) continue;
                if (words[n->anchor] != spec.word) continue;
                const auto& t = grammar.tree(n->tree);
                if (spec.disprefer.matches(t.anchor_pos(), t.name())) ++c;
            }
            break;
        case HeuristicKind::global_structural:
            if (spec.rule == GlobalRule::adjunction_count) {
                c = static_cast<double>(adjunctions.size());
                break;
            }
            for (const auto& adj : adjunctions) {
                if (!contains(spec.modifier_anchors, adj.aux_tree->anchor_pos())) continue;
                c += bypassed_sites(derived, adj, spec.sites, spec.rule == GlobalRule::pp_attachment_height);
            }
            break;
        }
    }
    return v;
}

double score(const HeuristicVector& v, const WeightVector& w) {
    if (v.counts.size() != w.weights.size())
        throw std::invalid_argument("heuristic vector has " + std::to_string(v.counts.size()) +
                                    " entries, weight vector " + std::to_string(w.weights.size()));
    double s = 0;
    for (std::size_t i = 0; i < v.counts.size(); ++i) s += v.counts[i] * w.weights[i];
    return s;
}

std::vector<RankedParse> rank(const std::vector<HeuristicVector>& parses, const WeightVector& w) {
    std::vector<RankedParse> out;
    out.reserve(parses.size());
    for (std::size_t i = 0; i < parses.size(); ++i) out.push_back({i, score(parses[i], w)});
    std::stable_sort(out.begin(), out.end(), [](const RankedParse& a, const RankedParse& b) { return a.score < b.score; });
    return out;
}

std::vector<RankedParse> rank(const std::vector<ParseWithTree>& parses, const HeuristicRegistry& registry,
                              const Grammar& grammar, const WeightVector& w) {
    std::vector<HeuristicVector> vectors;
    vectors.reserve(parses.size());
    for (const auto& p : parses) vectors.push_back(extract(registry, grammar, p.derivation, p.derived));
    return rank(vectors, w);
}

} // namespace tagrank
