#pragma once

#include <span>
#include <vector>

#include "tagrank/chart_parser.hpp"
#include "tagrank/heuristics.hpp"
#include "tagrank/parseval.hpp"

namespace tagrank {

/// One parse of a sentence, reduced to what ranking and scoring need.
struct CandidateParse {
    HeuristicVector features;
    EvalScores scores;
};

/// Parses are kept in canonical enumeration order.
struct SentenceData {
    std::size_t id = 0;
    std::vector<CandidateParse> parses;
    double gold_constituents = 0;
};

SentenceScores score_sentence(const SentenceData& s, const WeightVector& w, std::size_t top_k,
                              Aggregation aggregation);

/// Reference implementation: one sentence after another.
CorpusScores corpus_scores_serial(std::span<const SentenceData> sentences, const WeightVector& w,
                                  std::size_t top_k, Aggregation aggregation);

/// Sentences scored concurrently, then reduced in input order, so the
/// result is bit-identical to the serial version.
CorpusScores corpus_scores_parallel(std::span<const SentenceData> sentences, const WeightVector& w,
                                    std::size_t top_k, Aggregation aggregation);

std::vector<ParseForest> parse_all_serial(const Grammar& grammar, std::span<const TreeAssignment> assignments,
                                          const ParseOptions& options = {});
std::vector<ParseForest> parse_all_parallel(const Grammar& grammar, std::span<const TreeAssignment> assignments,
                                            const ParseOptions& options = {});

} // namespace tagrank
