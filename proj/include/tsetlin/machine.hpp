#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsetlin/automaton.hpp"
#include "tsetlin/datasets.hpp"
#include "tsetlin/feedback.hpp"
#include "tsetlin/rng.hpp"
#include "tsetlin/trace.hpp"

namespace tsetlin {

/// All machine hyperparameters.
struct TMConfig {
  std::uint32_t input_digits = 0;      // L: booleanized digits per datapoint
  std::uint32_t class_count = 0;       // M
  std::uint32_t clauses_per_class = 0; // U, even: half positive, half negative polarity
  std::uint32_t half_depth = 0;        // n: states per action, 2n states total
  std::uint32_t threshold = 0;         // T
  double s = 0;                        // learning sensitivity, > 1
  RngSpec rng;                         // per-automaton stream kind
  std::uint32_t epochs = 100;
  std::uint64_t init_seed = 0;

  void validate() const; // throws ConfigError
};

/// A stuck-at fault bound to one automaton of one clause. `clause` is the
/// machine-global clause index (class * U + position), `ta` the literal
/// index within the clause.
struct MachineFault {
  std::uint32_t clause = 0;
  std::uint32_t ta = 0;
  FaultSpec fault;

  bool operator==(const MachineFault&) const = default;
};

/// Reinforcement event tallies. Type II has no reward cells, so
/// reward_type2 stays 0 in any correct run.
struct EventCounters {
  std::uint64_t reward_type1 = 0;
  std::uint64_t penalty_type1 = 0;
  std::uint64_t reward_type2 = 0;
  std::uint64_t penalty_type2 = 0;
  std::uint64_t inaction = 0;

  void add(FeedbackType type, ReinforceEvent event);
  /// Rewards plus penalties, inaction excluded.
  std::uint64_t feedback_total() const {
    return reward_type1 + penalty_type1 + reward_type2 + penalty_type2;
  }
  EventCounters& operator+=(const EventCounters& o);
};

/// A 2L-element literal vector: entry k < L is input digit k, entry L + k
/// its complement. Construction validates the complement pairing, so the
/// evaluation hot path does not have to.
class LiteralVector {
public:
  static LiteralVector from_input_bits(std::span<const std::uint8_t> bits);
  /// Validates x[L+k] == !x[k]; throws std::invalid_argument otherwise.
  static LiteralVector from_literals(std::vector<std::uint8_t> values,
                                     std::uint32_t input_digits);

  std::uint8_t operator[](std::size_t k) const { return values_[k]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(values_.size()); }
  std::uint32_t input_digits() const { return input_digits_; }

private:
  LiteralVector() = default;
  std::vector<std::uint8_t> values_;
  std::uint32_t input_digits_ = 0;
};

enum class EvalMode : std::uint8_t {
  Train, // a clause with no included literal outputs 1
  Infer  // ... and 0 at inference, so empty clauses cannot vote
};

/// Conjunction over the literals whose automata currently select include.
class Clause {
public:
  Clause(bool positive, std::vector<TsetlinAutomaton> tas);

  bool positive() const { return positive_; }
  std::uint32_t literal_count() const { return static_cast<std::uint32_t>(tas_.size()); }
  const TsetlinAutomaton& ta(std::uint32_t k) const { return tas_[k]; }
  std::span<const std::uint32_t> included() const { return included_; }

  bool evaluate(const LiteralVector& x, EvalMode mode) const;

  /// Reinforces one automaton and keeps the include cache in sync.
  StepResult reinforce_ta(std::uint32_t k, ReinforceEvent event);
  /// Deserialization/test hook.
  void set_ta_state(std::uint32_t k, std::uint32_t state);

private:
  void rebuild_included();

  bool positive_;
  std::vector<TsetlinAutomaton> tas_;
  std::vector<std::uint32_t> included_; // sorted literal indices
};

bool evaluate_clause(const Clause& clause, const LiteralVector& x, EvalMode mode);

/// The full machine: M banks of U clauses over 2L literals, one stream per
/// automaton plus one selection stream per clause.
///
/// Stream seeds derive from init_seed through derive_seed(init_seed, index)
/// with the index layout (N = M*U*2L automata, C = M*U clauses):
///   [0, N)      per-automaton streams (configured RNG kind)
///   [N, N+C)    per-clause selection streams (configured RNG kind)
///   N+C         negative-class draw (always pcg64)
///   N+C+1       epoch shuffling (always pcg64)
/// Dataset arrival and negative-class sampling model the environment, not
/// the per-automaton hardware, so they stay on pcg64 regardless of the
/// configured kind.
class Machine {
public:
  explicit Machine(const TMConfig& config, std::vector<MachineFault> faults = {});

  const TMConfig& config() const { return config_; }
  const std::vector<MachineFault>& faults() const { return faults_; }
  std::uint32_t clause_count() const { return config_.class_count * config_.clauses_per_class; }
  std::uint32_t automata_count() const { return clause_count() * 2 * config_.input_digits; }

  const Clause& clause_at(std::uint32_t cls, std::uint32_t position) const;
  Clause& clause_at(std::uint32_t cls, std::uint32_t position);

  /// Global automaton index of (class, clause position, literal).
  std::uint32_t ta_index(std::uint32_t cls, std::uint32_t position, std::uint32_t literal) const {
    return (cls * config_.clauses_per_class + position) * 2 * config_.input_digits + literal;
  }

  int vote_sum(std::uint32_t cls, const LiteralVector& x, EvalMode mode) const;
  /// Argmax of vote sums in Infer mode; ties break toward the lowest index.
  std::uint32_t classify(const LiteralVector& x) const;
  std::uint32_t classify_bits(std::span<const std::uint8_t> input_bits) const;

  struct TracePosition {
    TraceLog* log = nullptr;
    std::uint32_t epoch = 0;
    std::uint32_t step = 0;
  };

  /// One reinforcement round: target-class routing (Type I to positive,
  /// Type II to negative clauses, selection probability (T-v)/2T) plus,
  /// for M > 1, one uniformly drawn other class with probabilities
  /// (T+v)/2T and the feedback types swapped.
  void train_sample(const LiteralVector& x, std::uint32_t label, EventCounters& counters,
                    const TracePosition& trace = {});

  double accuracy(const BooleanizedDataset& ds) const;

  /// Current include/exclude decisions packed into 64-bit words in global
  /// automaton order.
  std::vector<std::uint64_t> action_words() const;
  std::vector<std::uint16_t> states() const;
  void set_ta_state(std::uint32_t cls, std::uint32_t position, std::uint32_t literal,
                    std::uint32_t state);

  std::vector<std::size_t> shuffle_order(std::size_t n);

  /// Versioned text record of config, faults and all automaton states.
  /// Stream positions are not captured: a loaded machine restarts its
  /// streams from the seed layout above.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static Machine load(std::istream& in);
  static Machine load(const std::string& path);

private:
  void feed_bank(std::uint32_t cls, const LiteralVector& x, bool is_target,
                 EventCounters& counters, const TracePosition& trace);
  std::uint32_t draw_negative_class(std::uint32_t label);

  TMConfig config_;
  std::vector<MachineFault> faults_;
  FeedbackTables tables_;
  std::vector<std::vector<Clause>> classes_;
  std::vector<RngStream> ta_streams_;
  std::vector<RngStream> select_streams_;
  RngStream negclass_stream_;
  RngStream shuffle_stream_;
  std::vector<std::uint8_t> clause_value_scratch_;
};

struct EpochStats {
  EventCounters counters;
  double train_accuracy = 0;
  double test_accuracy = std::nan(""); // NaN when no test set was given
  std::vector<std::uint64_t> action_words;
};

struct FitResult {
  TMConfig config;
  std::vector<MachineFault> faults;
  std::vector<std::uint16_t> initial_states;
  std::vector<EpochStats> epochs;
  double best_train_accuracy = 0;
  std::uint32_t best_train_epoch = 0; // 1-based; 0 when epochs == 0

  double final_test_accuracy() const {
    return epochs.empty() ? std::nan("") : epochs.back().test_accuracy;
  }
};

/// Shuffled-epoch training loop; records counters, accuracies and the
/// action vector after every epoch. Bit-reproducible for a given
/// (config, faults, dataset) triple.
FitResult fit(Machine& machine, const BooleanizedDataset& train, const BooleanizedDataset* test,
              std::uint32_t epochs, TraceLog* trace = nullptr);

/// Convergence = the contracted action vector unchanged over `window`
/// consecutive epochs while training accuracy sits at its run maximum;
/// reports the first epoch where both hold. Visited-state sets come from
/// the trace when one was recorded.
ReachabilityReport detect_convergence(const FitResult& result, const TraceLog* trace,
                                      std::uint32_t window = 5);

/// Replays a recorded trace against the transition rules (including fault
/// masks and wrap) from the recorded initial states; a full trace is a
/// checkable certificate of the run. Returns false and fills `diagnostic`
/// on the first mismatch.
bool replay_trace(const FitResult& result, const TraceLog& trace, std::string* diagnostic);

} // namespace tsetlin
