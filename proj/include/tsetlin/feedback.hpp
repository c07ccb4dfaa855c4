#pragma once

#include <cstdint>

#include "tsetlin/automaton.hpp"
#include "tsetlin/rational.hpp"
#include "tsetlin/rng.hpp"

namespace tsetlin {

enum class FeedbackType : std::uint8_t { TypeI = 0, TypeII = 1 };

const char* to_string(FeedbackType t);

struct EventProbabilities {
  double reward = 0;
  double inaction = 0;
  double penalty = 0;
};

struct ExactEventProbabilities {
  Rational reward;
  Rational inaction;
  Rational penalty;
};

/// Reward/inaction/penalty probabilities for one feedback cell, keyed by
/// (type, automaton action, clause truth value, literal truth value) and
/// parameterized by the learning sensitivity s > 1.
///
/// Type I: include/1/1 -> ((s-1)/s, 1/s, 0); include/0/. -> (0, (s-1)/s, 1/s);
/// exclude/1/1 -> (0, 1/s, (s-1)/s); every other exclude cell ->
/// (1/s, (s-1)/s, 0). Type II: (0, 0, 1) for exclude/1/0, (0, 1, 0)
/// elsewhere. The (include, clause=1, literal=0) cell is unreachable by
/// construction (an included 0-literal forces the clause to 0); querying it
/// throws ContractViolation.
EventProbabilities feedback_cell(FeedbackType type, Action action, bool clause_value,
                                 bool literal_value, double s);

/// Same table in exact rational arithmetic (s given as a rational > 1).
ExactEventProbabilities feedback_cell_exact(FeedbackType type, Action action, bool clause_value,
                                            bool literal_value, const Rational& s);

/// Draws one reinforcement event with the cell's probabilities using two
/// Bernoulli draws from the caller's stream: first against P(reward), then
/// against P(penalty)/(1 - P(reward)). Consumes exactly two output words,
/// so the result is a deterministic function of (cell, stream state).
ReinforceEvent sample_feedback_event(FeedbackType type, Action action, bool clause_value,
                                     bool literal_value, double s, RngStream& rng);

/// Precomputed probability table for one s, for the training hot path.
class FeedbackTables {
public:
  explicit FeedbackTables(double s);

  double s() const { return s_; }
  const EventProbabilities& cell(FeedbackType type, Action action, bool clause_value,
                                 bool literal_value) const;
  ReinforceEvent sample(FeedbackType type, Action action, bool clause_value, bool literal_value,
                        RngStream& rng) const;

private:
  double s_;
  EventProbabilities cells_[2][2][2][2]; // [type][action][clause][literal]
  bool reachable_[2][2][2][2];
};

} // namespace tsetlin
