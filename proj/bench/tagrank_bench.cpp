// Serial vs OpenMP timings for corpus scoring and corpus parsing.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "tagrank/kernels.hpp"
#include "tagrank/pipeline.hpp"

using namespace tagrank;

namespace {

std::vector<SentenceData> random_corpus(std::size_t n, std::size_t features, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> parses(1, 60), count(0, 4), crossings(0, 4);
    std::uniform_real_distribution<double> pct(0, 100);
    std::vector<SentenceData> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].id = i;
        out[i].gold_constituents = 8;
        out[i].parses.resize(parses(rng));
        for (auto& p : out[i].parses) {
            p.features.counts.resize(features);
            for (auto& c : p.features.counts) c = count(rng);
            p.scores.crossing_count = crossings(rng);
            p.scores.zero_crossing = p.scores.crossing_count == 0;
            p.scores.recall_pct = pct(rng);
            p.scores.precision_pct = pct(rng);
        }
    }
    return out;
}

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

const char* const grammar_text = R"(
tree Copula initial : (S NP^ (VP V@ NP^))
tree Intransitive initial : (S NP^ (VP V@))
tree NP_Det initial : (NP D^ N@)
tree NP_Bare initial : (NP N@)
tree Det initial : D@
tree Adj_Mod auxiliary : (N A@ N*)
tree PP_Attaches_to_NP auxiliary : (NP NP* (PP P@ NP^))
tree PP_Attaches_to_VP auxiliary : (VP VP* (PP P@ NP^))
tree PP_Attaches_to_S auxiliary : (S S* (PP P@ NP^))
lex the D -> Det
lex your D -> Det
lex second A -> Adj_Mod
lex personal A -> Adj_Mod
lex part N -> NP_Det, NP_Bare
lex name N -> NP_Det, NP_Bare
lex computer N -> NP_Det, NP_Bare
lex manual N -> NP_Det, NP_Bare
lex is V -> Copula
lex works V -> Intransitive
lex of P -> PP_Attaches_to_NP, PP_Attaches_to_VP, PP_Attaches_to_S
lex in P -> PP_Attaches_to_NP, PP_Attaches_to_VP, PP_Attaches_to_S
)";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernels"};
    std::size_t sentences = 4000, parse_sentences = 200;
    int reps = 5;
    app.add_option("--sentences", sentences, "sentences in the scoring corpus");
    app.add_option("--parse-sentences", parse_sentences, "sentences in the parsing corpus");
    app.add_option("--reps", reps, "repetitions (best time is reported)");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());

    const auto corpus = random_corpus(sentences, 11, 1);
    const WeightVector w = WeightVector::uniform(11);
    CorpusScores a, b;
    const double ts = best_of(reps, [&] { a = corpus_scores_serial(corpus, w, 6, Aggregation::mean_of_k); });
    const double tp = best_of(reps, [&] { b = corpus_scores_parallel(corpus, w, 6, Aggregation::mean_of_k); });
    const bool same = std::memcmp(&a.zero_crossing_pct, &b.zero_crossing_pct, sizeof(double)) == 0 &&
                      std::memcmp(&a.recall_pct, &b.recall_pct, sizeof(double)) == 0 &&
                      std::memcmp(&a.precision_pct, &b.precision_pct, sizeof(double)) == 0;
    std::printf("corpus scoring  %6zu sentences  serial %8.4fs  parallel %8.4fs  speedup %.2fx  identical %s\n",
                sentences, ts, tp, ts / tp, same ? "yes" : "no");

    std::istringstream in(grammar_text);
    const Grammar g = read_grammar(in);
    const std::vector<std::string> templates{
        "the/D second/A part/N is/V the/D name/N of/P your/D personal/A computer/N",
        "the/D manual/N of/P your/D computer/N works/V in/P the/D second/A part/N",
        "your/D personal/A computer/N is/V the/D part/N of/P the/D manual/N in/P the/D name/N",
    };
    std::vector<Sentence> text;
    for (std::size_t i = 0; i < parse_sentences; ++i) text.push_back(parse_tagged_sentence(templates[i % 3]));
    std::vector<TreeAssignment> assignments;
    for (const auto& s : text) assignments.push_back(structural_filter(g, select_trees(g, s)));
    std::size_t ns = 0, np = 0;
    const double ps = best_of(reps, [&] {
        ns = 0;
        for (const auto& f : parse_all_serial(g, assignments)) ns += f.derivation_count();
    });
    const double pp = best_of(reps, [&] {
        np = 0;
        for (const auto& f : parse_all_parallel(g, assignments)) np += f.derivation_count();
    });
    std::printf("corpus parsing  %6zu sentences  serial %8.4fs  parallel %8.4fs  speedup %.2fx  derivations %zu/%zu\n",
                parse_sentences, ps, pp, ps / pp, ns, np);
    return same && ns == np ? 0 : 1;
}
