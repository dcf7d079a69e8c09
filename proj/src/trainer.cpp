#include "tagrank/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tagrank {

using json = nlohmann::json;

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& proportions) {
    double total = 0;
    bool integral = true;
    for (double p : proportions) {
        if (!(p >= 0) || !std::isfinite(p)) throw std::invalid_argument("split proportions must be non-negative");
        total += p;
        integral = integral && p == std::floor(p);
    }
    if (total <= 0) throw std::invalid_argument("split proportions sum to zero");
    std::array<std::size_t, 3> sizes{};
    if (integral && total == static_cast<double>(n)) {
        for (int k = 0; k < 3; ++k) sizes[k] = static_cast<std::size_t>(proportions[k]);
        return sizes;
    }
    // largest remainder; ties go to the earlier set
    std::array<double, 3> rest{};
    std::size_t assigned = 0;
    for (int k = 0; k < 3; ++k) {
        const double quota = proportions[k] / total * static_cast<double>(n);
        sizes[k] = static_cast<std::size_t>(std::floor(quota));
        rest[k] = quota - std::floor(quota);
        assigned += sizes[k];
    }
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rest[a] > rest[b]; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[order[r % 3]];
    return sizes;
}

SplitSpec split(std::size_t n, const std::array<double, 3>& proportions, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("cannot split fewer than 3 sentences");
    const auto sizes = split_sizes(n, proportions);
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    SplitSpec spec;
    spec.seed = seed;
    auto first = ids.begin();
    spec.train_ids.assign(first, first + sizes[0]);
    first += sizes[0];
    spec.heldout_ids.assign(first, first + sizes[1]);
    first += sizes[1];
    spec.test_ids.assign(first, ids.end());
    for (auto* v : {&spec.train_ids, &spec.heldout_ids, &spec.test_ids}) std::sort(v->begin(), v->end());
    return spec;
}

SentenceData prepare_sentence(std::size_t id, const HeuristicRegistry& registry, const Grammar& grammar,
                              const std::vector<std::string>& words, const std::vector<DerivationNode>& parses,
                              const Bracketing& gold, RecallMode mode, const NormalizeOptions& normalize_options,
                              const std::vector<std::string>& flatten_categories) {
    SentenceData s;
    s.id = id;
    s.gold_constituents = static_cast<double>(normalize(gold, normalize_options).spans.size());
    for (const auto& d : parses) {
        const PhraseTree derived = derive(grammar, d, words);
        CandidateParse c;
        c.features = extract(registry, grammar, d, derived);
        const auto bracketing =
            flatten_categories.empty() ? brackets_of(derived) : brackets_of(flatten(derived, flatten_categories));
        c.scores = evaluate(bracketing, gold, mode, normalize_options);
        s.parses.push_back(std::move(c));
    }
    return s;
}

const char* to_string(Acceptance a) { return a == Acceptance::mean ? "mean" : "all_three"; }

Acceptance parse_acceptance(const std::string& text) {
    if (text == "mean") return Acceptance::mean;
    if (text == "all_three") return Acceptance::all_three;
    throw std::invalid_argument("unknown acceptance rule '" + text + "'");
}

void TrainConfig::validate() const {
    if (top_k == 0) throw std::invalid_argument("top_k must be positive");
    if (!(delta_scale > 0) || !std::isfinite(delta_scale)) throw std::invalid_argument("delta_scale must be positive");
    if (strike_limit < 1) throw std::invalid_argument("strike_limit must be at least 1");
    if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
}

double objective(const CorpusScores& s) { return (s.zero_crossing_pct + s.recall_pct + s.precision_pct) / 3.0; }

CorpusScores evaluate_set(std::span<const SentenceData> set, const WeightVector& w, const TrainConfig& config) {
    return config.parallel ? corpus_scores_parallel(set, w, config.top_k, config.aggregation)
                           : corpus_scores_serial(set, w, config.top_k, config.aggregation);
}

double objective(std::span<const SentenceData> set, const WeightVector& w, const TrainConfig& config) {
    return objective(evaluate_set(set, w, config));
}

bool improves(const CorpusScores& candidate, const CorpusScores& current, Acceptance acceptance) {
    if (acceptance == Acceptance::mean) return objective(candidate) > objective(current);
    return candidate.zero_crossing_pct > current.zero_crossing_pct && candidate.recall_pct > current.recall_pct &&
           candidate.precision_pct > current.precision_pct;
}

namespace {

struct Draw {
    std::size_t heuristic;
    double delta;
};

Draw draw(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> amount(-scale, scale);
    const std::size_t h = pick(rng);
    const double delta = amount(rng);
    return {h, delta};
}

std::string rng_string(const std::mt19937_64& rng) {
    std::ostringstream os;
    os << rng;
    return os.str();
}

void check_inputs(std::span<const SentenceData> train_set, std::span<const SentenceData> heldout_set,
                  const WeightVector& w) {
    if (train_set.empty()) throw std::invalid_argument("TRAIN set is empty");
    if (heldout_set.empty()) throw std::invalid_argument("HELD-OUT set is empty");
    if (w.weights.empty()) throw std::invalid_argument("no heuristics to train");
    for (auto set : {train_set, heldout_set})
        for (const auto& s : set)
            for (const auto& p : s.parses)
                if (p.features.counts.size() != w.weights.size())
                    throw std::invalid_argument("sentence " + std::to_string(s.id) + " has " +
                                                std::to_string(p.features.counts.size()) + " features, expected " +
                                                std::to_string(w.weights.size()));
}

std::vector<std::size_t> ids_of(std::span<const SentenceData> set) {
    std::vector<std::size_t> ids;
    for (const auto& s : set) ids.push_back(s.id);
    return ids;
}

struct Checkpoint {
    double heldout;
    WeightVector weights;
};

void run_loop(TrainState& state, Checkpoint& best, TrainLog& log, std::span<const SentenceData> train_set,
              std::span<const SentenceData> heldout_set) {
    const auto& config = log.config;
    while (state.attempted_steps < config.max_iterations && state.consecutive_strikes < config.strike_limit) {
        TrainRecord rec = step(state, config, train_set);
        if (rec.accepted) {
            const CorpusScores h = evaluate_set(heldout_set, state.weights, config);
            const double value = objective(h);
            rec.heldout_objective = value;
            if (improves(h, state.last_heldout, config.acceptance)) state.consecutive_strikes = 0;
            else ++state.consecutive_strikes;
            state.last_heldout = h;
            state.heldout_history.push_back(value);
            if (value > best.heldout) best = {value, state.weights};
        }
        rec.strikes = state.consecutive_strikes;
        log.records.push_back(rec);
    }
    log.finished = true;
    log.stop_reason = state.consecutive_strikes >= config.strike_limit ? "strikes" : "max_iterations";
    log.final_weights = best.weights;
    log.final_heldout_objective = best.heldout;
    log.rng_state = rng_string(state.rng);
}

} // namespace

TrainRecord step(TrainState& state, const TrainConfig& config, std::span<const SentenceData> train_set) {
    const auto [h, delta] = draw(state.rng, state.weights.weights.size(), config.delta_scale);
    ++state.attempted_steps;
    WeightVector candidate = state.weights;
    candidate.weights[h] += delta;
    const CorpusScores scores = evaluate_set(train_set, candidate, config);
    TrainRecord rec;
    rec.attempt = state.attempted_steps;
    rec.heuristic = h;
    rec.delta = delta;
    rec.train_objective = objective(scores);
    rec.accepted = improves(scores, state.train_scores, config.acceptance);
    if (rec.accepted) {
        state.weights = std::move(candidate);
        state.train_scores = scores;
        state.train_objective = rec.train_objective;
        ++state.accepted_steps;
    }
    rec.strikes = state.consecutive_strikes;
    return rec;
}

TrainResult train(std::span<const SentenceData> train_set, std::span<const SentenceData> heldout_set,
                  const TrainConfig& config, const WeightVector& initial, const std::vector<std::string>& names) {
    config.validate();
    check_inputs(train_set, heldout_set, initial);

    TrainState state;
    state.weights = initial;
    state.rng.seed(config.seed);
    state.train_scores = evaluate_set(train_set, initial, config);
    state.train_objective = objective(state.train_scores);
    state.last_heldout = evaluate_set(heldout_set, initial, config);
    state.heldout_history.push_back(objective(state.last_heldout));

    TrainLog log;
    log.config = config;
    log.heuristics = names;
    log.train_ids = ids_of(train_set);
    log.heldout_ids = ids_of(heldout_set);
    log.initial_weights = initial;
    log.initial_train_objective = state.train_objective;
    log.initial_heldout_objective = state.heldout_history.front();

    Checkpoint best{state.heldout_history.front(), initial};
    run_loop(state, best, log, train_set, heldout_set);
    return {log.final_weights, std::move(log)};
}

TrainResult resume(const TrainLog& prefix, std::span<const SentenceData> train_set,
                   std::span<const SentenceData> heldout_set) {
    const auto& config = prefix.config;
    config.validate();
    check_inputs(train_set, heldout_set, prefix.initial_weights);
    if (ids_of(train_set) != prefix.train_ids || ids_of(heldout_set) != prefix.heldout_ids)
        throw std::invalid_argument("resume: sentence sets differ from the logged run");

    TrainLog log = prefix;
    log.records.clear();
    log.finished = false;

    TrainState state;
    state.weights = prefix.initial_weights;
    state.rng.seed(config.seed);
    state.train_objective = prefix.initial_train_objective;
    state.heldout_history.push_back(prefix.initial_heldout_objective);
    Checkpoint best{prefix.initial_heldout_objective, prefix.initial_weights};

    // replay: the RNG draws and accepted deltas reproduce the logged state exactly
    for (const auto& rec : prefix.records) {
        const auto [h, delta] = draw(state.rng, state.weights.weights.size(), config.delta_scale);
        ++state.attempted_steps;
        if (rec.attempt != state.attempted_steps || rec.heuristic != h || rec.delta != delta)
            throw std::invalid_argument("resume: log record " + std::to_string(rec.attempt) +
                                        " does not match the seeded draw sequence");
        if (rec.accepted) {
            state.weights.weights[h] += delta;
            state.train_objective = rec.train_objective;
            ++state.accepted_steps;
            if (!rec.heldout_objective) throw std::invalid_argument("resume: accepted record lacks held-out objective");
            state.heldout_history.push_back(*rec.heldout_objective);
            if (*rec.heldout_objective > best.heldout) best = {*rec.heldout_objective, state.weights};
        }
        state.consecutive_strikes = rec.strikes;
        log.records.push_back(rec);
    }
    if (prefix.finished && !prefix.rng_state.empty() && rng_string(state.rng) != prefix.rng_state)
        throw std::invalid_argument("resume: rng_state does not match the replayed records");

    state.train_scores = evaluate_set(train_set, state.weights, config);
    if (objective(state.train_scores) != state.train_objective)
        throw std::invalid_argument("resume: TRAIN objective differs from the logged run");
    state.last_heldout = evaluate_set(heldout_set, state.weights, config);

    run_loop(state, best, log, train_set, heldout_set);
    return {log.final_weights, std::move(log)};
}

// ---------------------------------------------------------------------------
// Log I/O

void write_train_log(std::ostream& out, const TrainLog& log) {
    const auto& c = log.config;
    json header = {
        {"type", "header"},
        {"config",
         {{"top_k", c.top_k},
          {"aggregation", to_string(c.aggregation)},
          {"delta_scale", c.delta_scale},
          {"strike_limit", c.strike_limit},
          {"max_iterations", c.max_iterations},
          {"seed", c.seed},
          {"acceptance", to_string(c.acceptance)}}},
        {"heuristics", log.heuristics},
        {"train_ids", log.train_ids},
        {"heldout_ids", log.heldout_ids},
        {"initial_weights", log.initial_weights.weights},
        {"initial_train_objective", log.initial_train_objective},
        {"initial_heldout_objective", log.initial_heldout_objective},
    };
    out << header.dump() << '\n';
    for (const auto& r : log.records) {
        json j = {{"type", "attempt"},       {"attempt", r.attempt},   {"heuristic", r.heuristic},
                  {"delta", r.delta},        {"train_objective", r.train_objective},
                  {"accepted", r.accepted},  {"strikes", r.strikes}};
        if (r.heldout_objective) j["heldout_objective"] = *r.heldout_objective;
        if (r.heuristic < log.heuristics.size()) j["name"] = log.heuristics[r.heuristic];
        out << j.dump() << '\n';
    }
    if (log.finished) {
        json f = {{"type", "final"},
                  {"stop", log.stop_reason},
                  {"weights", log.final_weights.weights},
                  {"heldout_objective", log.final_heldout_objective},
                  {"rng_state", log.rng_state}};
        out << f.dump() << '\n';
    }
}

TrainLog read_train_log(std::istream& in) {
    TrainLog log;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
            const std::string type = j.at("type");
            if (type == "header") {
                if (have_header) throw std::runtime_error("second header");
                const auto& c = j.at("config");
                log.config.top_k = c.at("top_k");
                log.config.aggregation = parse_aggregation(c.at("aggregation").get<std::string>());
                log.config.delta_scale = c.at("delta_scale");
                log.config.strike_limit = c.at("strike_limit");
                log.config.max_iterations = c.at("max_iterations");
                log.config.seed = c.at("seed");
                log.config.acceptance = parse_acceptance(c.at("acceptance").get<std::string>());
                log.heuristics = j.at("heuristics").get<std::vector<std::string>>();
                log.train_ids = j.at("train_ids").get<std::vector<std::size_t>>();
                log.heldout_ids = j.at("heldout_ids").get<std::vector<std::size_t>>();
                log.initial_weights.weights = j.at("initial_weights").get<std::vector<double>>();
                log.initial_train_objective = j.at("initial_train_objective");
                log.initial_heldout_objective = j.at("initial_heldout_objective");
                have_header = true;
            } else if (type == "attempt") {
                if (!have_header || log.finished) throw std::runtime_error("attempt record out of place");
                TrainRecord r;
                r.attempt = j.at("attempt");
                r.heuristic = j.at("heuristic");
                r.delta = j.at("delta");
                r.train_objective = j.at("train_objective");
                r.accepted = j.at("accepted");
                r.strikes = j.at("strikes");
                if (j.contains("heldout_objective")) r.heldout_objective = j["heldout_objective"].get<double>();
                log.records.push_back(r);
            } else if (type == "final") {
                if (!have_header || log.finished) throw std::runtime_error("final record out of place");
                log.finished = true;
                log.stop_reason = j.at("stop");
                log.final_weights.weights = j.at("weights").get<std::vector<double>>();
                log.final_heldout_objective = j.at("heldout_objective");
                log.rng_state = j.at("rng_state");
            } else {
                throw std::runtime_error("unknown record type '" + type + "'");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("train log line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw std::runtime_error("train log has no header");
    return log;
}

} // namespace tagrank
