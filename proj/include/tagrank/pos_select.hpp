#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tagrank/grammar.hpp"

namespace tagrank {

/// A token with its N-best POS tags, most likely first.
struct TaggedWord {
    std::string surface;
    std::vector<std::string> tags;
    bool operator==(const TaggedWord&) const = default;
};

using Sentence = std::vector<TaggedWord>;

std::vector<std::string> words_of(const Sentence& sentence);

/// Per-position candidate tree names (sorted, unique). The anchor of every
/// candidate at position i is word i.
struct TreeAssignment {
    std::vector<std::vector<std::string>> candidates;

    std::size_t size() const { return candidates.size(); }
    std::size_t total() const;
    bool operator==(const TreeAssignment&) const = default;
};

struct SelectOptions {
    /// Unknown words get every tree anchored by one of their tags.
    bool open_class_fallback = false;
};

TreeAssignment select_trees(const Grammar& grammar, const Sentence& sentence, const SelectOptions& options = {});

/// Candidates with every lexicon POS of each word, ignoring the tags.
TreeAssignment select_trees_untagged(const Grammar& grammar, const std::vector<std::string>& words);

/// Parses "word/TAG word/TAG1|TAG2 ..." (one sentence). Throws std::runtime_error.
Sentence parse_tagged_sentence(const std::string& line);
std::string format_tagged_sentence(const Sentence& sentence);
/// One sentence per non-blank line.
std::vector<Sentence> read_tagged_corpus(std::istream& in);

} // namespace tagrank
