#include "tagrank/pipeline.hpp"

#include "parallel.hpp"

namespace tagrank {

SentenceParse parse_sentence(const Grammar& grammar, const Sentence& sentence, const PipelineOptions& options) {
    SentenceParse out;
    out.assignment = select_trees(grammar, sentence, options.select);
    auto run = [&](const TreeAssignment& a) { return parse(grammar, a, options.parse); };

    ParseForest forest;
    if (options.frequencies) {
        auto filtered = filter_with_fallback(grammar, out.assignment, *options.frequencies, options.filter_k, run);
        forest = std::move(filtered.forest);
        out.report = std::move(filtered.report);
    } else {
        const TreeAssignment kept = options.structural ? structural_filter(grammar, out.assignment) : out.assignment;
        out.report.positions.resize(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i) {
            auto& p = out.report.positions[i];
            p.before = out.assignment.candidates[i].size();
            p.removed_by_structure = p.before - kept.candidates[i].size();
            p.survivors = kept.candidates[i].size();
        }
        forest = run(kept);
    }
    out.derivation_count = forest.derivation_count();
    out.derivations = forest.enumerate(options.max_parses);
    return out;
}

std::vector<SentenceParse> parse_corpus(const Grammar& grammar, const std::vector<Sentence>& sentences,
                                        const PipelineOptions& options, bool parallel) {
    std::vector<SentenceParse> out(sentences.size());
    if (parallel) {
        detail::parallel_for(sentences.size(),
                             [&](std::size_t i) { out[i] = parse_sentence(grammar, sentences[i], options); });
    } else {
        for (std::size_t i = 0; i < sentences.size(); ++i) out[i] = parse_sentence(grammar, sentences[i], options);
    }
    return out;
}

} // namespace tagrank
