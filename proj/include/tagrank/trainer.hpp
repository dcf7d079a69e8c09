#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tagrank/derivation.hpp"
#include "tagrank/heuristics.hpp"
#include "tagrank/kernels.hpp"
#include "tagrank/parseval.hpp"

namespace tagrank {

struct SplitSpec {
    std::vector<std::size_t> train_ids, heldout_ids, test_ids; // each sorted
    std::uint64_t seed = 0;
};

/// Set sizes for `n` items. Proportions that sum exactly to n are taken as
/// counts; anything else is treated as ratios and rounded by largest remainder.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& proportions);

/// Uniform random partition of 0..n-1. Throws std::invalid_argument when
/// n < 3 or a proportion is negative.
SplitSpec split(std::size_t n, const std::array<double, 3>& proportions, std::uint64_t seed);

/// Scores every enumerated parse of one sentence against its gold bracketing.
/// `flatten_categories` is applied to candidate trees only.
SentenceData prepare_sentence(std::size_t id, const HeuristicRegistry& registry, const Grammar& grammar,
                              const std::vector<std::string>& words, const std::vector<DerivationNode>& parses,
                              const Bracketing& gold, RecallMode mode = RecallMode::standard,
                              const NormalizeOptions& normalize = {},
                              const std::vector<std::string>& flatten_categories = {});

enum class Acceptance { mean, all_three };

const char* to_string(Acceptance a);
Acceptance parse_acceptance(const std::string& text);

struct TrainConfig {
    std::size_t top_k = 6;
    Aggregation aggregation = Aggregation::mean_of_k;
    double delta_scale = 0.5;
    int strike_limit = 3;
    std::size_t max_iterations = 10000;
    std::uint64_t seed = 0;
    Acceptance acceptance = Acceptance::mean;
    bool parallel = true;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Unweighted mean of zero-crossing %, recall % and precision %.
double objective(const CorpusScores& scores);
CorpusScores evaluate_set(std::span<const SentenceData> set, const WeightVector& w, const TrainConfig& config);
double objective(std::span<const SentenceData> set, const WeightVector& w, const TrainConfig& config);

/// True when `candidate` beats `current` under the acceptance rule.
bool improves(const CorpusScores& candidate, const CorpusScores& current, Acceptance acceptance);

struct TrainState {
    WeightVector weights;
    CorpusScores train_scores;
    double train_objective = 0;
    std::vector<double> heldout_history; // initial evaluation first
    CorpusScores last_heldout;
    int consecutive_strikes = 0;
    std::size_t accepted_steps = 0, attempted_steps = 0;
    std::mt19937_64 rng;
};

struct TrainRecord {
    std::size_t attempt = 0; // 1-based
    std::size_t heuristic = 0;
    double delta = 0;
    double train_objective = 0;
    bool accepted = false;
    std::optional<double> heldout_objective;
    int strikes = 0;
    bool operator==(const TrainRecord&) const = default;
};

struct TrainLog {
    TrainConfig config;
    std::vector<std::string> heuristics;
    std::vector<std::size_t> train_ids, heldout_ids;
    WeightVector initial_weights;
    double initial_train_objective = 0, initial_heldout_objective = 0;
    std::vector<TrainRecord> records;
    // set when the run finished
    bool finished = false;
    std::string stop_reason; // "strikes" or "max_iterations"
    WeightVector final_weights;
    double final_heldout_objective = 0;
    std::string rng_state;
};

/// Line-delimited JSON: a header, one record per attempt, then a final record.
void write_train_log(std::ostream& out, const TrainLog& log);
/// Accepts a complete log or any prefix of one (header required).
TrainLog read_train_log(std::istream& in);

/// One perturbation attempt on TRAIN; mutates `state` and returns its record.
TrainRecord step(TrainState& state, const TrainConfig& config, std::span<const SentenceData> train_set);

struct TrainResult {
    WeightVector weights; // best held-out checkpoint
    TrainLog log;
};

/// Hill-climbs from `initial`. Throws std::invalid_argument when either set is
/// empty or the weight length differs from the sentences' feature length.
TrainResult train(std::span<const SentenceData> train_set, std::span<const SentenceData> heldout_set,
                  const TrainConfig& config, const WeightVector& initial, const std::vector<std::string>& names = {});

/// Continues from a log prefix written by `train` on the same data. The
/// returned log is identical to the one an uninterrupted run produces.
TrainResult resume(const TrainLog& prefix, std::span<const SentenceData> train_set,
                   std::span<const SentenceData> heldout_set);

} // namespace tagrank
