#pragma once

#include <vector>

#include "tagrank/chart_parser.hpp"
#include "tagrank/pos_select.hpp"
#include "tagrank/tree_filter.hpp"

namespace tagrank {

struct PipelineOptions {
    ParseOptions parse;
    SelectOptions select;
    /// When set, the k most frequent trees per word are tried first.
    const FrequencyTable* frequencies = nullptr;
    std::size_t filter_k = 3;
    bool structural = true;
    /// Cap on enumerated derivations per sentence; ranking sees only these.
    std::size_t max_parses = 100000;
};

struct SentenceParse {
    TreeAssignment assignment; // as selected, before filtering
    FilterReport report;
    std::size_t derivation_count = 0; // full count, saturating
    std::vector<DerivationNode> derivations;

    bool parsed() const { return derivation_count > 0; }
};

SentenceParse parse_sentence(const Grammar& grammar, const Sentence& sentence, const PipelineOptions& options);

/// Output order follows input order in both versions.
std::vector<SentenceParse> parse_corpus(const Grammar& grammar, const std::vector<Sentence>& sentences,
                                        const PipelineOptions& options, bool parallel = true);

} // namespace tagrank
