#include "tagrank/kernels.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace tagrank {

SentenceScores score_sentence(const SentenceData& s, const WeightVector& w, std::size_t top_k,
                              Aggregation aggregation) {
    std::vector<RankedParse> ranked;
    ranked.reserve(s.parses.size());
    for (std::size_t i = 0; i < s.parses.size(); ++i) ranked.push_back({i, score(s.parses[i].features, w)});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedParse& a, const RankedParse& b) { return a.score < b.score; });
    const std::size_t k = std::min(top_k, ranked.size());
    std::vector<EvalScores> scores;
    scores.reserve(k);
    for (std::size_t i = 0; i < k; ++i) scores.push_back(s.parses[ranked[i].index].scores);
    return aggregate(scores, top_k, aggregation, s.gold_constituents);
}

CorpusScores corpus_scores_serial(std::span<const SentenceData> sentences, const WeightVector& w,
                                  std::size_t top_k, Aggregation aggregation) {
    std::vector<SentenceScores> per;
    per.reserve(sentences.size());
    for (const auto& s : sentences) per.push_back(score_sentence(s, w, top_k, aggregation));
    return reduce(per);
}

using detail::parallel_for;

CorpusScores corpus_scores_parallel(std::span<const SentenceData> sentences, const WeightVector& w,
                                    std::size_t top_k, Aggregation aggregation) {
    std::vector<SentenceScores> per(sentences.size());
    parallel_for(sentences.size(), [&](std::size_t i) { per[i] = score_sentence(sentences[i], w, top_k, aggregation); });
    return reduce(per);
}

std::vector<ParseForest> parse_all_serial(const Grammar& grammar, std::span<const TreeAssignment> assignments,
                                          const ParseOptions& options) {
    std::vector<ParseForest> out;
    out.reserve(assignments.size());
    for (const auto& a : assignments) out.push_back(parse(grammar, a, options));
    return out;
}

std::vector<ParseForest> parse_all_parallel(const Grammar& grammar, std::span<const TreeAssignment> assignments,
                                            const ParseOptions& options) {
    std::vector<ParseForest> out(assignments.size());
    parallel_for(assignments.size(), [&](std::size_t i) { out[i] = parse(grammar, assignments[i], options); });
    return out;
}

} // namespace tagrank
