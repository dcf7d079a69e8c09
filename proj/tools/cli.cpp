#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tagrank/heuristics.hpp"
#include "tagrank/parseval.hpp"
#include "tagrank/pipeline.hpp"
#include "tagrank/trainer.hpp"

namespace tagrank {

namespace {

using json = nlohmann::json;

struct Options {
    std::string grammar, freq, registry, weights, input, gold, parses, report;
    std::size_t top_k = 6, filter_k = 3, max_parses = 100000;
    std::string aggregation = "mean_of_k", recall_mode = "standard", flatten, start = "S";
    std::uint64_t seed = 0, split_seed = 0;
    bool open_class = false, no_filter = false, check_features = false, serial = false;
    int max_stack = 3;
    std::size_t size = 0;
    std::string proportions = "626,205,100";
    std::string log, out_weights, resume, acceptance = "mean";
    double delta_scale = 0.5;
    int strike_limit = 3;
    std::size_t max_iterations = 10000;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::ifstream open_in(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
    return in;
}

/// Line-delimited JSON sink; silent when no path was given.
class Report {
public:
    explicit Report(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw std::runtime_error("cannot write report: " + path);
    }
    void write(const json& record) {
        if (file_.is_open()) file_ << record.dump() << '\n';
    }

private:
    std::ofstream file_;
};

std::string fixed(double v, int digits = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

void print_table(std::ostream& out, const std::vector<std::string>& headers,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        width[c] = headers[c].size();
        for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << "  ";
            if (c + 1 == cells.size()) out << cells[c];
            else out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
        }
        out << '\n';
    };
    line(headers);
    std::vector<std::string> rule;
    for (auto w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (const auto& r : rows) line(r);
}

json config_json(const Options& o) {
    return {{"grammar", o.grammar},         {"freq", o.freq},
            {"registry", o.registry},       {"weights", o.weights},
            {"top_k", o.top_k},             {"filter_k", o.filter_k},
            {"aggregation", o.aggregation}, {"recall_mode", o.recall_mode},
            {"flatten", split_list(o.flatten)},
            {"seed", o.seed},               {"split_seed", o.split_seed},
            {"open_class_fallback", o.open_class},
            {"structural_filter", !o.no_filter},
            {"check_features", o.check_features},
            {"max_adjunction_stack", o.max_stack},
            {"max_parses", o.max_parses},   {"start", split_list(o.start)}};
}

struct Loaded {
    Grammar grammar;
    std::optional<FrequencyTable> freq;
    std::optional<HeuristicRegistry> registry;
    WeightVector weights;
};

Loaded load_all(const Options& o) {
    Loaded l;
    l.grammar = load_grammar(o.grammar);
    if (!o.freq.empty()) l.freq = load_frequency_table(o.freq);
    l.registry = o.registry.empty() ? HeuristicRegistry::defaults() : load_registry(o.registry);
    l.weights = o.weights.empty() ? WeightVector::uniform(l.registry->size()) : load_weights(o.weights, *l.registry);
    return l;
}

PipelineOptions pipeline_options(const Options& o, const Loaded& l) {
    PipelineOptions p;
    p.parse.start_categories = split_list(o.start);
    p.parse.max_adjunction_stack = o.max_stack;
    p.parse.check_features = o.check_features;
    p.select.open_class_fallback = o.open_class;
    p.frequencies = l.freq ? &*l.freq : nullptr;
    p.filter_k = o.filter_k;
    p.structural = !o.no_filter;
    p.max_parses = o.max_parses;
    return p;
}

std::vector<Sentence> read_sentences(const std::string& path) {
    auto in = open_in(path, "input");
    return read_tagged_corpus(in);
}

std::vector<PhraseTree> read_gold(const std::string& path) {
    auto in = open_in(path, "gold treebank");
    return read_treebank(in);
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    const Grammar g = load_grammar(o.grammar);
    std::size_t aux = 0;
    for (const auto& t : g.trees()) aux += t.is_auxiliary();
    out << "grammar " << o.grammar << ": ok\n";
    print_table(out, {"trees", "initial", "auxiliary", "families", "lexicon entries"},
                {{std::to_string(g.trees().size()), std::to_string(g.trees().size() - aux), std::to_string(aux),
                  std::to_string(g.families().size()), std::to_string(g.lexicon().size())}});
    int status = 0;
    if (!o.freq.empty()) {
        const auto freq = load_frequency_table(o.freq);
        for (const auto& [name, p] : freq.entries())
            if (!g.find_tree(name)) {
                err << "error: frequency table names unknown tree '" << name << "'\n";
                status = 1;
            }
        out << "frequency table " << o.freq << ": " << freq.entries().size() << " entries\n";
    }
    if (!o.registry.empty()) {
        const auto reg = load_registry(o.registry);
        out << "registry " << o.registry << ": " << reg.size() << " heuristics\n";
    }
    Report report(o.report);
    report.write({{"type", "check"},
                  {"grammar", o.grammar},
                  {"valid", status == 0},
                  {"trees", g.trees().size()},
                  {"auxiliary", aux},
                  {"families", g.families().size()},
                  {"lexicon_entries", g.lexicon().size()}});
    return status;
}

// parse and rank share everything but the human-readable rendering
int cmd_parse(const Options& o, bool detailed, std::ostream& out) {
    const Loaded l = load_all(o);
    const auto sentences = read_sentences(o.input);
    const auto results = parse_corpus(l.grammar, sentences, pipeline_options(o, l), !o.serial);
    const auto& registry = *l.registry;
    const auto names = registry.names();

    Report report(o.report);
    report.write({{"type", "config"}, {"command", detailed ? "rank" : "parse"}, {"config", config_json(o)}});

    std::vector<std::vector<std::string>> rows;
    std::size_t parsed = 0;
    double total_parses = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto& r = results[i];
        const auto words = words_of(sentences[i]);
        std::vector<ParseWithTree> trees;
        for (const auto& d : r.derivations) trees.push_back({d, derive(l.grammar, d, words, o.check_features)});
        std::vector<HeuristicVector> vectors;
        for (const auto& t : trees) vectors.push_back(extract(registry, l.grammar, t.derivation, t.derived));
        const auto ranked = rank(vectors, l.weights);

        json filter = json::array();
        for (std::size_t p = 0; p < r.report.positions.size(); ++p) {
            const auto& pr = r.report.positions[p];
            filter.push_back({{"word", words[p]},
                              {"before", pr.before},
                              {"removed_by_structure", pr.removed_by_structure},
                              {"removed_by_frequency", pr.removed_by_frequency},
                              {"survivors", pr.survivors}});
        }
        json top = json::array();
        const std::size_t k = std::min(o.top_k, ranked.size());
        for (std::size_t n = 0; n < k; ++n) {
            const auto& rp = ranked[n];
            json entry = {{"rank", n + 1},
                          {"index", rp.index},
                          {"score", rp.score},
                          {"bracketed", trees[rp.index].derived.str()},
                          {"derivation", to_string(trees[rp.index].derivation)}};
            json counts = json::object();
            for (std::size_t h = 0; h < names.size(); ++h) counts[names[h]] = vectors[rp.index].counts[h];
            entry["heuristics"] = counts;
            top.push_back(std::move(entry));
        }
        report.write({{"type", "sentence"},
                      {"index", i},
                      {"words", words},
                      {"parsed", r.parsed()},
                      {"parses", r.derivation_count},
                      {"enumerated", r.derivations.size()},
                      {"fallback_triggered", r.report.fallback_triggered},
                      {"filter", filter},
                      {"ranked", top}});

        if (r.parsed()) {
            ++parsed;
            total_parses += static_cast<double>(r.derivation_count);
        }
        if (detailed) {
            out << "sentence " << i + 1 << ": " << format_tagged_sentence(sentences[i]) << '\n';
            if (!r.parsed()) out << "  no parse\n";
            for (std::size_t n = 0; n < k; ++n) {
                const auto& rp = ranked[n];
                out << "  " << n + 1 << ". score " << rp.score << "  " << trees[rp.index].derived.str() << '\n';
            }
        } else {
            rows.push_back({std::to_string(i + 1), std::to_string(words.size()), std::to_string(r.derivation_count),
                            r.report.fallback_triggered ? "yes" : "no", r.parsed() && k ? trees[ranked[0].index].derived.str() : "-"});
        }
    }
    if (!detailed && !rows.empty()) {
        print_table(out, {"sentence", "words", "parses", "fallback", "top parse"}, rows);
        out << '\n';
    }

    const double n = static_cast<double>(sentences.size());
    const double pct = sentences.empty() ? 0.0 : 100.0 * static_cast<double>(parsed) / n;
    const double avg = parsed ? total_parses / static_cast<double>(parsed) : 0.0;
    report.write({{"type", "summary"},
                  {"# of Sentences", sentences.size()},
                  {"% Parsed", pct},
                  {"Av. # of Parses/Sent", avg}});
    print_table(out, {"# of Sentences", "% Parsed", "Av. # of Parses/Sent"},
                {{std::to_string(sentences.size()), fixed(pct), fixed(avg)}});
    return 0;
}

std::vector<std::vector<std::string>> read_candidates(const std::string& path) {
    auto in = open_in(path, "parses");
    std::vector<std::vector<std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] != '{') {
            out.push_back({line});
            continue;
        }
        try {
            const json j = json::parse(line);
            if (j.value("type", "") != "sentence") continue;
            std::vector<std::string> ranked;
            for (const auto& e : j.at("ranked")) ranked.push_back(e.at("bracketed"));
            out.push_back(std::move(ranked));
        } catch (const json::exception& e) {
            throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::string> results_headers() {
    return {"Zero Crossing Bracket %", "Crossing Bracket Average", "Recall %", "Precision %"};
}

std::vector<std::string> results_cells(const CorpusScores& c) {
    return {fixed(c.zero_crossing_pct), fixed(c.crossing_avg), fixed(c.recall_pct), fixed(c.precision_pct)};
}

json corpus_json(const CorpusScores& c) {
    return {{"# of sentences", c.sentences},
            {"parsed", c.parsed},
            {"Zero Crossing Bracket %", c.zero_crossing_pct},
            {"Crossing Bracket Average", c.crossing_avg},
            {"Recall %", c.recall_pct},
            {"Precision %", c.precision_pct},
            {"Av. # of Constituents/sent (candidate)", c.avg_candidate_constituents},
            {"Av. # of Constituents/sent (gold)", c.avg_gold_constituents}};
}

int cmd_eval(const Options& o, std::ostream& out) {
    const auto candidates = read_candidates(o.parses);
    const auto gold = read_gold(o.gold);
    if (candidates.size() != gold.size())
        throw std::runtime_error("parse file has " + std::to_string(candidates.size()) + " sentences but gold has " +
                                 std::to_string(gold.size()));
    const auto aggregation = parse_aggregation(o.aggregation);
    const auto mode = parse_recall_mode(o.recall_mode);
    const auto categories = split_list(o.flatten);

    Report report(o.report);
    report.write({{"type", "config"}, {"command", "eval"}, {"config", config_json(o)}});
    std::vector<SentenceScores> per;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const Bracketing g = brackets_of(gold[i]);
        std::vector<EvalScores> scores;
        try {
            const std::size_t k = std::min(o.top_k, candidates[i].size());
            for (std::size_t n = 0; n < k; ++n) {
                PhraseTree t = parse_bracketed(candidates[i][n]);
                if (!categories.empty()) t = flatten(t, categories);
                scores.push_back(evaluate(brackets_of(t), g, mode));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("sentence " + std::to_string(i + 1) + ": " + e.what());
        }
        per.push_back(aggregate(scores, o.top_k, aggregation, static_cast<double>(normalize(g).spans.size())));
        const auto& s = per.back();
        report.write({{"type", "sentence"},
                      {"index", i},
                      {"parsed", s.parsed},
                      {"crossing", s.crossing},
                      {"zero_crossing", s.zero_crossing},
                      {"recall", s.recall_pct},
                      {"precision", s.precision_pct},
                      {"candidate_constituents", s.candidate_constituents},
                      {"gold_constituents", s.gold_constituents}});
    }
    const CorpusScores c = reduce(per);
    json summary = corpus_json(c);
    summary["type"] = "summary";
    report.write(summary);
    auto headers = results_headers();
    headers.insert(headers.begin(), "# of sentences");
    auto cells = results_cells(c);
    cells.insert(cells.begin(), std::to_string(c.sentences));
    print_table(out, headers, {cells});
    out << '\n';
    print_table(out, {"", "Av. # of Constituents/sent"},
                {{"candidate", fixed(c.avg_candidate_constituents)}, {"gold", fixed(c.avg_gold_constituents)}});
    if (c.parsed < c.sentences) out << c.sentences - c.parsed << " sentence(s) without a parse\n";
    return 0;
}

std::array<double, 3> parse_proportions(const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 3) throw std::runtime_error("--proportions needs three comma-separated values");
    std::array<double, 3> p{};
    for (int k = 0; k < 3; ++k) {
        try {
            p[k] = std::stod(parts[k]);
        } catch (const std::exception&) {
            throw std::runtime_error("bad proportion '" + parts[k] + "'");
        }
    }
    return p;
}

json split_json(const SplitSpec& s) {
    return {{"type", "split"},
            {"seed", s.seed},
            {"train_ids", s.train_ids},
            {"heldout_ids", s.heldout_ids},
            {"test_ids", s.test_ids}};
}

int cmd_split(const Options& o, std::ostream& out) {
    std::size_t n = o.size;
    if (!o.input.empty()) {
        auto in = open_in(o.input, "input");
        std::string line;
        n = 0;
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos) ++n;
    }
    const auto spec = split(n, parse_proportions(o.proportions), o.seed);
    Report report(o.report);
    report.write(split_json(spec));
    print_table(out, {"set", "sentences"},
                {{"TRAIN", std::to_string(spec.train_ids.size())},
                 {"HELD-OUT", std::to_string(spec.heldout_ids.size())},
                 {"TEST", std::to_string(spec.test_ids.size())}});
    return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
    const Loaded l = load_all(o);
    const auto sentences = read_sentences(o.input);
    const auto gold = read_gold(o.gold);
    if (sentences.size() != gold.size())
        throw std::runtime_error("input has " + std::to_string(sentences.size()) + " sentences but gold has " +
                                 std::to_string(gold.size()));
    const auto& registry = *l.registry;
    const auto results = parse_corpus(l.grammar, sentences, pipeline_options(o, l), !o.serial);
    const auto mode = parse_recall_mode(o.recall_mode);
    const auto categories = split_list(o.flatten);
    std::vector<SentenceData> data;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        try {
            data.push_back(prepare_sentence(i, registry, l.grammar, words_of(sentences[i]), results[i].derivations,
                                            brackets_of(gold[i]), mode, {}, categories));
        } catch (const std::exception& e) {
            throw std::runtime_error("sentence " + std::to_string(i + 1) + ": " + e.what());
        }
    }

    const auto spec = split(data.size(), parse_proportions(o.proportions), o.split_seed);
    auto subset = [&](const std::vector<std::size_t>& ids) {
        std::vector<SentenceData> s;
        for (auto id : ids) s.push_back(data[id]);
        return s;
    };
    const auto train_set = subset(spec.train_ids), heldout_set = subset(spec.heldout_ids);

    TrainConfig config;
    config.top_k = o.top_k;
    config.aggregation = parse_aggregation(o.aggregation);
    config.delta_scale = o.delta_scale;
    config.strike_limit = o.strike_limit;
    config.max_iterations = o.max_iterations;
    config.seed = o.seed;
    config.acceptance = parse_acceptance(o.acceptance);
    config.parallel = !o.serial;

    TrainResult result = [&] {
        if (o.resume.empty()) return train(train_set, heldout_set, config, l.weights, registry.names());
        auto in = open_in(o.resume, "train log");
        return resume(read_train_log(in), train_set, heldout_set);
    }();

    if (!o.log.empty()) {
        std::ofstream f(o.log);
        if (!f) throw std::runtime_error("cannot write train log: " + o.log);
        write_train_log(f, result.log);
    }
    if (!o.out_weights.empty()) {
        std::ofstream f(o.out_weights);
        if (!f) throw std::runtime_error("cannot write weights: " + o.out_weights);
        write_weights(f, result.weights, registry);
    }

    // TEST is read only here, after training has finished
    const auto test_set = subset(spec.test_ids);
    const WeightVector none = WeightVector::uniform(registry.size(), 0.0);
    Report report(o.report);
    report.write({{"type", "config"}, {"command", "train"}, {"config", config_json(o)}});
    report.write(split_json(spec));
    std::vector<std::vector<std::string>> rows;
    for (const auto& [group, set] : {std::pair{"HELD-OUT", &heldout_set}, std::pair{"TEST", &test_set}}) {
        for (const auto& [label, w] : {std::pair{"No heuristics", &none}, std::pair{"No preference", &l.weights},
                                       std::pair{"Preferences Trained", static_cast<const WeightVector*>(&result.weights)}}) {
            const auto c = evaluate_set(*set, *w, config);
            auto row = results_cells(c);
            row.insert(row.begin(), {group, label});
            row.push_back(fixed(objective(c)));
            rows.push_back(row);
            json rec = corpus_json(c);
            rec["type"] = "result";
            rec["sentence_group"] = group;
            rec["experiment"] = label;
            rec["objective"] = objective(c);
            report.write(rec);
        }
    }
    auto headers = results_headers();
    headers.insert(headers.begin(), {"Sentence Group", "Experiment"});
    headers.push_back("objective");
    print_table(out, headers, rows);
    out << "\nstopped after " << result.log.records.size() << " attempts (" << result.log.stop_reason << ")\n";
    if (o.out_weights.empty()) {
        out << '\n';
        write_weights(out, result.weights, registry);
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tree-adjoining grammar parsing with heuristic parse ranking", "tagrank"};
    app.require_subcommand(1);
    Options o;

    auto add_grammar = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--grammar", o.grammar, "grammar file");
        if (required) opt->required();
    };
    auto add_parsing = [&](CLI::App* c) {
        c->add_option("--freq", o.freq, "tree frequency table; enables top-k filtering with fallback");
        c->add_option("--filter-k", o.filter_k, "trees kept per word by the frequency filter")
            ->check(CLI::PositiveNumber);
        c->add_flag("--open-class-fallback", o.open_class, "unknown words get every tree anchored by their tags");
        c->add_flag("--no-structural-filter", o.no_filter, "skip the structural span filter");
        c->add_flag("--check-features", o.check_features, "enforce feature agreement");
        c->add_option("--max-stack", o.max_stack, "adjunctions stacked along one spine")->check(CLI::NonNegativeNumber);
        c->add_option("--max-parses", o.max_parses, "derivations enumerated per sentence")
            ->check(CLI::PositiveNumber);
        c->add_option("--start", o.start, "accepted root categories (comma-separated)");
        c->add_option("--registry", o.registry, "heuristic registry file");
        c->add_option("--weights", o.weights, "weights file");
        c->add_flag("--serial", o.serial, "run without threads");
    };
    auto add_scoring = [&](CLI::App* c) {
        c->add_option("--top-k", o.top_k, "parses scored per sentence")->check(CLI::PositiveNumber);
        c->add_option("--aggregation", o.aggregation, "first, best_of_k or mean_of_k")
            ->check(CLI::IsMember({"first", "best_of_k", "mean_of_k"}));
        c->add_option("--recall-mode", o.recall_mode, "standard or paper_literal")
            ->check(CLI::IsMember({"standard", "paper_literal"}));
        c->add_option("--flatten", o.flatten, "categories whose internal structure is removed (comma-separated)");
    };

    auto* check = app.add_subcommand("check", "validate a grammar (and optional frequency table and registry)");
    add_grammar(check, true);
    check->add_option("--freq", o.freq, "tree frequency table");
    check->add_option("--registry", o.registry, "heuristic registry file");

    auto* parse_cmd = app.add_subcommand("parse", "parse tagged sentences and report coverage");
    auto* rank_cmd = app.add_subcommand("rank", "parse tagged sentences and list ranked parses");
    for (auto* c : {parse_cmd, rank_cmd}) {
        add_grammar(c, true);
        add_parsing(c);
        c->add_option("--input", o.input, "tagged sentences, one per line")->required();
        c->add_option("--top-k", o.top_k, "ranked parses reported per sentence")->check(CLI::PositiveNumber);
    }

    auto* eval = app.add_subcommand("eval", "score ranked parses against a gold treebank");
    eval->add_option("--parses", o.parses, "parse report or one bracketed parse per line")->required();
    eval->add_option("--gold", o.gold, "gold treebank, one tree per line")->required();
    add_scoring(eval);

    auto* split_cmd = app.add_subcommand("split", "split a corpus into TRAIN / HELD-OUT / TEST");
    split_cmd->add_option("--size", o.size, "number of sentences");
    split_cmd->add_option("--input", o.input, "corpus file (counts non-blank lines)");
    split_cmd->add_option("--proportions", o.proportions, "sizes or ratios, e.g. 626,205,100");

    auto* train_cmd = app.add_subcommand("train", "train heuristic weights");
    add_grammar(train_cmd, true);
    add_parsing(train_cmd);
    add_scoring(train_cmd);
    train_cmd->add_option("--input", o.input, "tagged sentences")->required();
    train_cmd->add_option("--gold", o.gold, "gold treebank aligned with --input")->required();
    train_cmd->add_option("--proportions", o.proportions, "TRAIN/HELD-OUT/TEST sizes or ratios");
    train_cmd->add_option("--split-seed", o.split_seed, "seed for the corpus split");
    train_cmd->add_option("--delta-scale", o.delta_scale, "perturbations are uniform on [-s, s]")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--strike-limit", o.strike_limit, "held-out non-improvements before stopping")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--max-iterations", o.max_iterations, "cap on attempted steps")->check(CLI::PositiveNumber);
    train_cmd->add_option("--acceptance", o.acceptance, "mean or all_three")
        ->check(CLI::IsMember({"mean", "all_three"}));
    train_cmd->add_option("--log", o.log, "write the training log here");
    train_cmd->add_option("--out-weights", o.out_weights, "write the trained weights here");
    train_cmd->add_option("--resume", o.resume, "continue from a training log");

    for (auto* c : {check, parse_cmd, rank_cmd, eval, split_cmd, train_cmd})
        c->add_option("--report", o.report, "write line-delimited JSON records here");
    for (auto* c : {split_cmd, train_cmd}) c->add_option("--seed", o.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check) return cmd_check(o, out, err);
        if (*parse_cmd) return cmd_parse(o, false, out);
        if (*rank_cmd) return cmd_parse(o, true, out);
        if (*eval) return cmd_eval(o, out);
        if (*split_cmd) {
            if (o.input.empty() && o.size == 0) throw std::runtime_error("split needs --size or --input");
            return cmd_split(o, out);
        }
        if (*train_cmd) return cmd_train(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace tagrank
