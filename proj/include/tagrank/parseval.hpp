#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagrank/bracket.hpp"

namespace tagrank {

struct Span {
    int begin = 0, end = 0;
    std::string label;
    auto operator<=>(const Span&) const = default;
};

/// Constituent spans of one sentence, sorted and unique.
struct Bracketing {
    int length = 0;
    std::vector<Span> spans;
    bool operator==(const Bracketing&) const = default;
};

struct NormalizeOptions {
    bool labeled = false;
    bool drop_single_word = true;
    bool drop_whole_sentence = true;
};

/// One span per non-word node, preterminals and the root included.
Bracketing brackets_of(const PhraseTree& tree);
/// Throws BracketError on malformed input.
Bracketing brackets_of(std::string_view bracketed);

Bracketing normalize(const Bracketing& b, const NormalizeOptions& options = {});

/// Candidate spans crossing at least one gold span, after normalization.
/// Throws std::invalid_argument when the lengths differ.
int crossing(const Bracketing& candidate, const Bracketing& gold, const NormalizeOptions& options = {});

enum class RecallMode { standard, paper_literal };

struct RecallPrecision {
    double recall = 0, precision = 0;
};

/// Percentages. `paper_literal` recall is |candidate| / |gold|.
RecallPrecision recall_precision(const Bracketing& candidate, const Bracketing& gold,
                                 RecallMode mode = RecallMode::standard, const NormalizeOptions& options = {});

struct EvalScores {
    int crossing_count = 0;
    bool zero_crossing = true;
    double recall_pct = 0, precision_pct = 0;
    int candidate = 0, gold = 0, correct = 0;
};

EvalScores evaluate(const Bracketing& candidate, const Bracketing& gold, RecallMode mode = RecallMode::standard,
                    const NormalizeOptions& options = {});

enum class Aggregation { first, best_of_k, mean_of_k };

const char* to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view text);
const char* to_string(RecallMode m);
RecallMode parse_recall_mode(std::string_view text);

/// Aggregated scores for one sentence. Fields are real-valued so that
/// mean_of_k can average them; zero_crossing is a fraction in [0, 1].
struct SentenceScores {
    bool parsed = false;
    double crossing = 0, zero_crossing = 0, recall_pct = 0, precision_pct = 0;
    double candidate_constituents = 0, gold_constituents = 0;
};

/// `ranked` holds every parse's scores in rank order; the first
/// min(top_k, size) are used. An empty span is a coverage failure.
SentenceScores aggregate(std::span<const EvalScores> ranked, std::size_t top_k, Aggregation aggregation,
                         double gold_constituents = 0);

struct CorpusScores {
    std::size_t sentences = 0, parsed = 0;
    double zero_crossing_pct = 0, crossing_avg = 0, recall_pct = 0, precision_pct = 0;
    double avg_candidate_constituents = 0, avg_gold_constituents = 0;
};

/// Crossing average over parsed sentences; everything else over all.
CorpusScores reduce(std::span<const SentenceScores> sentences);

struct ScoredSentence {
    std::vector<Bracketing> ranked_candidates;
    Bracketing gold;
};

CorpusScores score_corpus(const std::vector<ScoredSentence>& corpus, std::size_t top_k, Aggregation aggregation,
                          RecallMode mode = RecallMode::standard, const NormalizeOptions& options = {});

} // namespace tagrank
