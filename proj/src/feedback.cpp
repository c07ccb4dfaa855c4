#include "tsetlin/feedback.hpp"

#include <algorithm>

#include "tsetlin/errors.hpp"

namespace tsetlin {

const char* to_string(FeedbackType t) { return t == FeedbackType::TypeI ? "I" : "II"; }

namespace {

[[noreturn]] void na_cell() {
  throw ContractViolation(
      "feedback cell (include, clause=1, literal=0) is unreachable: an included "
      "0-literal forces the clause to 0; reaching it indicates a clause evaluation bug");
}

ReinforceEvent draw(const EventProbabilities& cell, RngStream& rng) {
  const bool reward = rng.bernoulli(cell.reward);
  const double rest = 1.0 - cell.reward;
  const double p_penalty = rest > 0 ? std::min(cell.penalty / rest, 1.0) : 0.0;
  const bool penalty = rng.bernoulli(p_penalty);
  if (reward) return ReinforceEvent::Reward;
  if (penalty) return ReinforceEvent::Penalty;
  return ReinforceEvent::Inaction;
}

} // namespace

EventProbabilities feedback_cell(FeedbackType type, Action action, bool clause_value,
                                 bool literal_value, double s) {
  if (!(s > 1.0)) throw ConfigError("learning sensitivity s must be > 1");
  const bool include = action == Action::Include;
  if (include && clause_value && !literal_value) na_cell();
  const double inv = 1.0 / s;
  const double rem = (s - 1.0) / s;
  if (type == FeedbackType::TypeII) {
    if (!include && clause_value && !literal_value) return {0.0, 0.0, 1.0};
    return {0.0, 1.0, 0.0};
  }
  if (include) {
    if (clause_value) return {rem, inv, 0.0}; // literal is necessarily 1 here
    return {0.0, rem, inv};
  }
  if (clause_value && literal_value) return {0.0, inv, rem};
  return {inv, rem, 0.0};
}

ExactEventProbabilities feedback_cell_exact(FeedbackType type, Action action, bool clause_value,
                                            bool literal_value, const Rational& s) {
  if (!(s > Rational(1))) throw ConfigError("learning sensitivity s must be > 1");
  const bool include = action == Action::Include;
  if (include && clause_value && !literal_value) na_cell();
  const Rational inv = Rational(1) / s;
  const Rational rem = (s - Rational(1)) / s;
  const Rational zero(0);
  const Rational one(1);
  if (type == FeedbackType::TypeII) {
    if (!include && clause_value && !literal_value) return {zero, zero, one};
    return {zero, one, zero};
  }
  if (include) {
    if (clause_value) return {rem, inv, zero};
    return {zero, rem, inv};
  }
  if (clause_value && literal_value) return {zero, inv, rem};
  return {inv, rem, zero};
}

ReinforceEvent sample_feedback_event(FeedbackType type, Action action, bool clause_value,
                                     bool literal_value, double s, RngStream& rng) {
  return draw(feedback_cell(type, action, clause_value, literal_value, s), rng);
}

FeedbackTables::FeedbackTables(double s) : s_(s) {
  if (!(s > 1.0)) throw ConfigError("learning sensitivity s must be > 1");
  for (int t = 0; t < 2; ++t)
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        for (int l = 0; l < 2; ++l) {
          const bool na = a == 1 && c == 1 && l == 0;
          reachable_[t][a][c][l] = !na;
          if (na) continue;
          cells_[t][a][c][l] = feedback_cell(static_cast<FeedbackType>(t), static_cast<Action>(a),
                                             c != 0, l != 0, s);
        }
}

const EventProbabilities& FeedbackTables::cell(FeedbackType type, Action action, bool clause_value,
                                               bool literal_value) const {
  const int t = static_cast<int>(type);
  const int a = static_cast<int>(action);
  if (!reachable_[t][a][clause_value][literal_value]) na_cell();
  return cells_[t][a][clause_value][literal_value];
}

ReinforceEvent FeedbackTables::sample(FeedbackType type, Action action, bool clause_value,
                                      bool literal_value, RngStream& rng) const {
  return draw(cell(type, action, clause_value, literal_value), rng);
}

} // namespace tsetlin
