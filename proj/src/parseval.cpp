#include "tagrank/parseval.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace tagrank {

Bracketing brackets_of(const PhraseTree& tree) {
    Bracketing b;
    if (tree.empty()) return b;
    b.length = tree.node(tree.root()).end;
    for (std::size_t n = 0; n < tree.node_count(); ++n) {
        const auto& node = tree.node(static_cast<int>(n));
        if (node.is_word) continue;
        // nodes orphaned by flatten are not reachable; skip them
        bool reachable = static_cast<int>(n) == tree.root() || node.parent >= 0;
        if (reachable) b.spans.push_back({node.begin, node.end, node.label});
    }
    std::sort(b.spans.begin(), b.spans.end());
    b.spans.erase(std::unique(b.spans.begin(), b.spans.end()), b.spans.end());
    return b;
}

Bracketing brackets_of(std::string_view bracketed) { return brackets_of(parse_bracketed(bracketed)); }

Bracketing normalize(const Bracketing& b, const NormalizeOptions& options) {
    Bracketing out{b.length, {}};
    for (const auto& s : b.spans) {
        if (options.drop_single_word && s.end - s.begin == 1) continue;
        if (options.drop_whole_sentence && s.begin == 0 && s.end == b.length) continue;
        out.spans.push_back(options.labeled ? s : Span{s.begin, s.end, {}});
    }
    std::sort(out.spans.begin(), out.spans.end());
    out.spans.erase(std::unique(out.spans.begin(), out.spans.end()), out.spans.end());
    return out;
}

namespace {

void require_same_length(const Bracketing& a, const Bracketing& b) {
    if (a.length != b.length)
        throw std::invalid_argument("bracketings cover " + std::to_string(a.length) + " and " +
                                    std::to_string(b.length) + " words");
}

bool crosses(const Span& a, const Span& b) {
    return (a.begin < b.begin && b.begin < a.end && a.end < b.end) ||
           (b.begin < a.begin && a.begin < b.end && b.end < a.end);
}

std::size_t matched(const Bracketing& c, const Bracketing& g) {
    std::vector<Span> common;
    std::set_intersection(c.spans.begin(), c.spans.end(), g.spans.begin(), g.spans.end(), std::back_inserter(common));
    return common.size();
}

double ratio_pct(std::size_t num, std::size_t den, bool other_empty) {
    if (den == 0) return other_empty ? 100.0 : 0.0;
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

int crossing(const Bracketing& candidate, const Bracketing& gold, const NormalizeOptions& options) {
    require_same_length(candidate, gold);
    NormalizeOptions unlabeled = options;
    unlabeled.labeled = false;
    const auto c = normalize(candidate, unlabeled), g = normalize(gold, unlabeled);
    int count = 0;
    for (const auto& cs : c.spans)
        for (const auto& gs : g.spans)
            if (crosses(cs, gs)) {
                ++count;
                break;
            }
    return count;
}

RecallPrecision recall_precision(const Bracketing& candidate, const Bracketing& gold, RecallMode mode,
                                 const NormalizeOptions& options) {
    require_same_length(candidate, gold);
    const auto c = normalize(candidate, options), g = normalize(gold, options);
    const std::size_t nc = c.spans.size(), ng = g.spans.size(), m = matched(c, g);
    if (nc == 0 || ng == 0) {
        const double v = (nc == 0 && ng == 0) ? 100.0 : 0.0;
        return {v, v};
    }
    RecallPrecision rp;
    rp.precision = ratio_pct(m, nc, false);
    rp.recall = mode == RecallMode::standard ? ratio_pct(m, ng, false) : ratio_pct(nc, ng, false);
    return rp;
}

EvalScores evaluate(const Bracketing& candidate, const Bracketing& gold, RecallMode mode,
                    const NormalizeOptions& options) {
    EvalScores s;
    s.crossing_count = crossing(candidate, gold, options);
    s.zero_crossing = s.crossing_count == 0;
    auto rp = recall_precision(candidate, gold, mode, options);
    s.recall_pct = rp.recall;
    s.precision_pct = rp.precision;
    const auto c = normalize(candidate, options), g = normalize(gold, options);
    s.candidate = static_cast<int>(c.spans.size());
    s.gold = static_cast<int>(g.spans.size());
    s.correct = static_cast<int>(matched(c, g));
    return s;
}

const char* to_string(Aggregation a) {
    switch (a) {
    case Aggregation::first: return "first";
    case Aggregation::best_of_k: return "best_of_k";
    case Aggregation::mean_of_k: return "mean_of_k";
    }
    return "?";
}

Aggregation parse_aggregation(std::string_view text) {
    if (text == "first") return Aggregation::first;
    if (text == "best_of_k") return Aggregation::best_of_k;
    if (text == "mean_of_k") return Aggregation::mean_of_k;
    throw std::invalid_argument("unknown aggregation '" + std::string(text) + "'");
}

const char* to_string(RecallMode m) { return m == RecallMode::standard ? "standard" : "paper_literal"; }

RecallMode parse_recall_mode(std::string_view text) {
    if (text == "standard") return RecallMode::standard;
    if (text == "paper_literal") return RecallMode::paper_literal;
    throw std::invalid_argument("unknown recall mode '" + std::string(text) + "'");
}

SentenceScores aggregate(std::span<const EvalScores> ranked, std::size_t top_k, Aggregation aggregation,
                         double gold_constituents) {
    SentenceScores out;
    out.gold_constituents = gold_constituents;
    if (ranked.empty()) return out;
    if (top_k == 0) throw std::invalid_argument("top_k must be positive");
    const std::size_t k = std::min(top_k, ranked.size());
    auto single = [&](const EvalScores& e) {
        out.parsed = true;
        out.crossing = e.crossing_count;
        out.zero_crossing = e.zero_crossing ? 1.0 : 0.0;
        out.recall_pct = e.recall_pct;
        out.precision_pct = e.precision_pct;
        out.candidate_constituents = e.candidate;
        out.gold_constituents = e.gold;
    };
    switch (aggregation) {
    case Aggregation::first: single(ranked[0]); break;
    case Aggregation::best_of_k: {
        std::size_t best = 0;
        for (std::size_t i = 1; i < k; ++i) {
            const auto& a = ranked[i];
            const auto& b = ranked[best];
            if (std::make_tuple(a.crossing_count, -a.recall_pct, -a.precision_pct) <
                std::make_tuple(b.crossing_count, -b.recall_pct, -b.precision_pct))
                best = i;
        }
        single(ranked[best]);
        break;
    }
    case Aggregation::mean_of_k: {
        out.parsed = true;
        out.crossing = out.zero_crossing = out.recall_pct = out.precision_pct = out.candidate_constituents = 0;
        for (std::size_t i = 0; i < k; ++i) {
            out.crossing += ranked[i].crossing_count;
            out.zero_crossing += ranked[i].zero_crossing ? 1.0 : 0.0;
            out.recall_pct += ranked[i].recall_pct;
            out.precision_pct += ranked[i].precision_pct;
            out.candidate_constituents += ranked[i].candidate;
        }
        const double kd = static_cast<double>(k);
        out.crossing /= kd;
        out.zero_crossing /= kd;
        out.recall_pct /= kd;
        out.precision_pct /= kd;
        out.candidate_constituents /= kd;
        out.gold_constituents = ranked[0].gold;
        break;
    }
    }
    return out;
}

CorpusScores reduce(std::span<const SentenceScores> sentences) {
    CorpusScores c;
    c.sentences = sentences.size();
    if (sentences.empty()) return c;
    double zero = 0, cross = 0, rec = 0, prec = 0, cand = 0, gold = 0;
    for (const auto& s : sentences) {
        if (s.parsed) {
            ++c.parsed;
            cross += s.crossing;
        }
        zero += s.zero_crossing;
        rec += s.recall_pct;
        prec += s.precision_pct;
        cand += s.candidate_constituents;
        gold += s.gold_constituents;
    }
    const double n = static_cast<double>(c.sentences);
    c.zero_crossing_pct = 100.0 * zero / n;
    c.crossing_avg = c.parsed ? cross / static_cast<double>(c.parsed) : 0.0;
    c.recall_pct = rec / n;
    c.precision_pct = prec / n;
    c.avg_candidate_constituents = cand / n;
    c.avg_gold_constituents = gold / n;
    return c;
}

CorpusScores score_corpus(const std::vector<ScoredSentence>& corpus, std::size_t top_k, Aggregation aggregation,
                          RecallMode mode, const NormalizeOptions& options) {
    if (top_k == 0) throw std::invalid_argument("top_k must be positive");
    std::vector<SentenceScores> per;
    per.reserve(corpus.size());
    for (const auto& s : corpus) {
        std::vector<EvalScores> scores;
        const std::size_t k = std::min(top_k, s.ranked_candidates.size());
        for (std::size_t i = 0; i < k; ++i) scores.push_back(evaluate(s.ranked_candidates[i], s.gold, mode, options));
        per.push_back(aggregate(scores, top_k, aggregation, static_cast<double>(normalize(s.gold, options).spans.size())));
    }
    return reduce(per);
}

} // namespace tagrank
