#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tagrank/bracket.hpp"
#include "tagrank/grammar.hpp"

namespace tagrank {

enum class Operation { substitution, adjunction };

const char* to_string(Operation op);

struct Attachment;

/// Derivation tree: one elementary tree anchored at a word, plus what was
/// substituted or adjoined into it. Attachments are kept sorted by address.
struct DerivationNode {
    std::string tree;
    int anchor = -1;
    std::vector<Attachment> attachments;

    bool operator==(const DerivationNode& other) const;
};

struct Attachment {
    Operation op;
    GornAddress address;
    DerivationNode child;

    bool operator==(const Attachment& other) const = default;
};

/// Canonical one-line form, e.g. "a_nx0V@1{1:subst a_N@0{}}".
std::string to_string(const DerivationNode& d);

/// Nodes in pre-order (root first, attachments in address order). The
/// position of a node in this list is its derivation id.
std::vector<const DerivationNode*> preorder(const DerivationNode& d);

std::size_t adjunction_count(const DerivationNode& d);
std::size_t elementary_count(const DerivationNode& d);

class DerivationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the derived phrase-structure tree by performing the recorded
/// substitutions and adjunctions. Throws DerivationError on malformed
/// derivations (bad address, category mismatch, open substitution slot, or a
/// feature clash when `check_features` is set).
PhraseTree derive(const Grammar& grammar, const DerivationNode& d, const std::vector<std::string>& words,
                  bool check_features = false);

} // namespace tagrank
