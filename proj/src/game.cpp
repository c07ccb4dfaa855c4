#include "tsetlin/game.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

#include "tsetlin/errors.hpp"
#include "tsetlin/feedback.hpp"

namespace tsetlin::game {

namespace {

constexpr std::uint32_t kMaxInputs = 8;

std::vector<Action> row_actions(std::size_t row, std::uint32_t ta_count) {
  std::vector<Action> actions(ta_count);
  for (std::uint32_t i = 0; i < ta_count; ++i)
    actions[i] = (row >> (ta_count - 1 - i)) & 1 ? Action::Include : Action::Exclude;
  return actions;
}

std::size_t flip_row(std::size_t row, std::uint32_t ta, std::uint32_t ta_count) {
  return row ^ (std::size_t{1} << (ta_count - 1 - ta));
}

bool clause_value(const std::vector<Action>& config, std::uint32_t assignment,
                  std::uint32_t input_count) {
  for (std::uint32_t i = 0; i < config.size(); ++i)
    if (config[i] == Action::Include && !literal_value(i, assignment, input_count)) return false;
  return true; // empty conjunction is 1
}

std::string clause_expression(const std::vector<Action>& config) {
  std::string expr;
  for (std::uint32_t i = 0; i < config.size(); ++i) {
    if (config[i] != Action::Include) continue;
    if (!expr.empty()) expr += " ∧ ";
    expr += literal_name(i);
  }
  return expr.empty() ? "1" : expr;
}

} // namespace

BooleanTarget BooleanTarget::from_truth_table(std::uint32_t input_count,
                                              std::vector<std::uint8_t> truth) {
  if (input_count < 1 || input_count > kMaxInputs)
    throw ConfigError("target input count must be in [1, 8]");
  if (truth.size() != (std::size_t{1} << input_count))
    throw ConfigError("truth table must have 2^k entries");
  for (std::uint8_t v : truth)
    if (v > 1) throw ConfigError("truth table entries must be 0 or 1");
  return BooleanTarget{input_count, std::move(truth)};
}

BooleanTarget BooleanTarget::xor2() { return from_truth_table(2, {0, 1, 1, 0}); }
BooleanTarget BooleanTarget::and2() { return from_truth_table(2, {0, 0, 0, 1}); }
BooleanTarget BooleanTarget::or2() { return from_truth_table(2, {0, 1, 1, 1}); }
BooleanTarget BooleanTarget::identity1() { return from_truth_table(1, {0, 1}); }

BooleanTarget BooleanTarget::constant(std::uint32_t input_count, bool value) {
  return from_truth_table(input_count, std::vector<std::uint8_t>(std::size_t{1} << input_count,
                                                                 value ? 1 : 0));
}

std::string literal_name(std::uint32_t ta) {
  const std::string var = "x" + std::to_string(ta / 2 + 1);
  return ta % 2 == 0 ? var : "¬" + var;
}

bool literal_value(std::uint32_t ta, std::uint32_t assignment, std::uint32_t input_count) {
  const std::uint32_t var = ta / 2; // 0-based input index
  const bool positive = (assignment >> (input_count - 1 - var)) & 1;
  return ta % 2 == 0 ? positive : !positive;
}

Rational expected_payoff(const std::vector<Action>& config, std::uint32_t ta,
                         const BooleanTarget& f, const Rational& s) {
  if (!(s > Rational(1))) throw ConfigError("s must be > 1");
  if (config.size() != 2 * static_cast<std::size_t>(f.input_count))
    throw ConfigError("action configuration must have 2k entries");
  if (ta >= config.size()) throw ConfigError("ta index out of range");
  const auto assignments = std::uint32_t{1} << f.input_count;
  Rational total(0);
  for (std::uint32_t a = 0; a < assignments; ++a) {
    const FeedbackType type = f.value(a) ? FeedbackType::TypeI : FeedbackType::TypeII;
    const bool clause = clause_value(config, a, f.input_count);
    const bool literal = literal_value(ta, a, f.input_count);
    // An included 0-literal zeroes the clause, so the NA cell cannot fire.
    const ExactEventProbabilities cell =
        feedback_cell_exact(type, config[ta], clause, literal, s);
    total += cell.reward - cell.penalty;
  }
  return total / Rational(assignments);
}

PayoffMatrix payoff_matrix(const BooleanTarget& f, const Rational& s) {
  const std::uint32_t ta_count = 2 * f.input_count;
  PayoffMatrix m;
  m.input_count = f.input_count;
  m.s = s;
  const std::size_t row_count = std::size_t{1} << ta_count;
  m.rows.reserve(row_count);
  for (std::size_t row = 0; row < row_count; ++row) {
    PayoffRow r;
    r.actions = row_actions(row, ta_count);
    r.payoffs.reserve(ta_count);
    for (std::uint32_t ta = 0; ta < ta_count; ++ta)
      r.payoffs.push_back(expected_payoff(r.actions, ta, f, s));
    r.clause_expr = clause_expression(r.actions);
    m.rows.push_back(std::move(r));
  }
  return m;
}

std::vector<std::size_t> nash_equilibria(const PayoffMatrix& m) {
  std::vector<std::size_t> result;
  const std::uint32_t ta_count = m.rows.empty() ? 0 : static_cast<std::uint32_t>(m.rows[0].actions.size());
  for (std::size_t row = 0; row < m.rows.size(); ++row) {
    bool nash = true;
    for (std::uint32_t ta = 0; ta < ta_count && nash; ++ta) {
      const std::size_t other = flip_row(row, ta, ta_count);
      if (m.rows[other].payoffs[ta] > m.rows[row].payoffs[ta]) nash = false;
    }
    if (nash) result.push_back(row);
  }
  return result;
}

std::vector<std::size_t> accepted_equilibria(const PayoffMatrix& m) {
  std::vector<std::size_t> result;
  for (std::size_t row : nash_equilibria(m)) {
    const bool all_positive = std::all_of(m.rows[row].payoffs.begin(), m.rows[row].payoffs.end(),
                                          [](const Rational& p) { return p > Rational(0); });
    if (all_positive) result.push_back(row);
  }
  return result;
}

const std::vector<std::vector<double>>& xor_reference_payoffs() {
  static const std::vector<std::vector<double>> table = {
      {-0.625, -0.625, -0.625, -0.625},   // 1   E E E E       1
      {-0.375, 0.125, -0.1875, 0.125},    // 2   E E E I       ¬x2
      {0.0625, -0.375, 0.125, -0.1875},   // 3   E E I E       x2
      {0.125, 0.125, -0.125, -0.125},     // 4   E E I I       x2 ∧ ¬x2
      {-0.1875, 0.125, -0.375, 0.0625},   // 5   E I E E       ¬x1
      {-0.125, -0.125, -0.125, -0.125},   // 6   E I E I       ¬x1 ∧ ¬x2
      {0.0625, 0.125, 0.125, 0.0625},     // 7   E I I E       ¬x1 ∧ x2
      {0.125, -0.125, -0.125, -0.125},    // 8   E I I I       ¬x1 ∧ x2 ∧ ¬x2
      {0.125, -0.1875, 0.125, -0.375},    // 9   I E E E       x1
      {0.125, 0.0625, 0.0625, 0.125},     // 10  I E E I       x1 ∧ ¬x2
      {-0.125, -0.125, -0.125, -0.125},   // 11  I E I E       x1 ∧ x2
      {-0.125, 0.125, -0.125, -0.125},    // 12  I E I I       x1 ∧ x2 ∧ ¬x2
      {-0.125, -0.125, 0.125, 0.125},     // 13  I I E E       x1 ∧ ¬x1
      {-0.125, -0.125, 0.125, -0.125},    // 14  I I E I       x1 ∧ ¬x1 ∧ ¬x2
      {-0.125, -0.125, -0.125, 0.125},    // 15  I I I E       x1 ∧ ¬x1 ∧ x2
      {-0.125, -0.125, -0.125, -0.125},   // 16  I I I I       all four literals
  };
  return table;
}

std::vector<ReferenceCell> compare_with_xor_reference(const PayoffMatrix& m) {
  if (m.input_count != 2 || m.rows.size() != 16)
    throw ConfigError("reference comparison is defined for the 2-input XOR matrix");
  const auto& reference = xor_reference_payoffs();
  std::vector<ReferenceCell> cells;
  cells.reserve(16 * 4);
  for (std::size_t row = 0; row < 16; ++row)
    for (std::uint32_t ta = 0; ta < 4; ++ta) {
      ReferenceCell cell;
      cell.row = row;
      cell.ta = ta;
      cell.published = reference[row][ta];
      cell.computed = m.rows[row].payoffs[ta];
      cell.matches = std::abs(cell.computed.to_double() - cell.published) < 1e-12;
      cells.push_back(cell);
    }
  return cells;
}

void render_text(const PayoffMatrix& m, std::ostream& out) {
  const auto accepted = accepted_equilibria(m);
  const auto nash = nash_equilibria(m);
  const std::set<std::size_t> accepted_set(accepted.begin(), accepted.end());
  const std::set<std::size_t> nash_set(nash.begin(), nash.end());
  const std::uint32_t ta_count = 2 * m.input_count;

  out << "Expected payoff per automaton (s = " << m.s.to_string()
      << ", uniformly distributed inputs)\n";
  out << std::left << std::setw(5) << "#";
  for (std::uint32_t ta = 0; ta < ta_count; ++ta)
    out << std::setw(22) << ("TA" + std::to_string(ta + 1) + " -- " + literal_name(ta));
  out << std::setw(28) << "clause" << "status\n";
  for (std::size_t row = 0; row < m.rows.size(); ++row) {
    out << std::setw(5) << row + 1;
    for (std::uint32_t ta = 0; ta < ta_count; ++ta) {
      const auto& r = m.rows[row];
      std::string cell = r.actions[ta] == Action::Include ? "Include (" : "Exclude (";
      cell += std::to_string(r.payoffs[ta].to_double());
      cell += ")";
      out << std::setw(22) << cell;
    }
    out << std::setw(28) << m.rows[row].clause_expr;
    if (accepted_set.count(row))
      out << "accepted Nash";
    else if (nash_set.count(row))
      out << "Nash (not accepted)";
    out << "\n";
  }
  out << "\nAccepted equilibria:";
  for (std::size_t row : accepted) out << " row " << row + 1 << " (" << m.rows[row].clause_expr << ")";
  out << "\n";
}

void write_csv(const PayoffMatrix& m, std::ostream& out) {
  const auto accepted = accepted_equilibria(m);
  const auto nash = nash_equilibria(m);
  const std::set<std::size_t> accepted_set(accepted.begin(), accepted.end());
  const std::set<std::size_t> nash_set(nash.begin(), nash.end());
  const std::uint32_t ta_count = 2 * m.input_count;

  out << "row";
  for (std::uint32_t ta = 0; ta < ta_count; ++ta)
    out << ",ta" << ta + 1 << "_action,ta" << ta + 1 << "_payoff";
  out << ",clause,nash,accepted\n";
  for (std::size_t row = 0; row < m.rows.size(); ++row) {
    out << row + 1;
    for (std::uint32_t ta = 0; ta < ta_count; ++ta) {
      const auto& r = m.rows[row];
      out << ',' << to_string(r.actions[ta]) << ',' << r.payoffs[ta].to_string();
    }
    out << ",\"" << m.rows[row].clause_expr << "\"," << (nash_set.count(row) ? 1 : 0) << ','
        << (accepted_set.count(row) ? 1 : 0) << "\n";
  }
}

} // namespace tsetlin::game
