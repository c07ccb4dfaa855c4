#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tsetlin/automaton.hpp"
#include "tsetlin/rational.hpp"

namespace tsetlin::game {

/// A Boolean target function on k <= 8 inputs, given as a truth table of
/// 2^k entries. Assignment a indexes the table with x1 as the most
/// significant input bit.
struct BooleanTarget {
  std::uint32_t input_count = 0;
  std::vector<std::uint8_t> truth;

  static BooleanTarget from_truth_table(std::uint32_t input_count,
                                        std::vector<std::uint8_t> truth);
  static BooleanTarget xor2();
  static BooleanTarget and2();
  static BooleanTarget or2();
  static BooleanTarget identity1();
  static BooleanTarget constant(std::uint32_t input_count, bool value);

  bool value(std::uint32_t assignment) const { return truth[assignment] != 0; }
};

/// Automaton layout for the single-clause game, matching the usual
/// presentation: TA with index i (0-based) owns literal x_{i/2+1} when i is
/// even and its complement when i is odd.
std::string literal_name(std::uint32_t ta);
bool literal_value(std::uint32_t ta, std::uint32_t assignment, std::uint32_t input_count);

struct PayoffRow {
  std::vector<Action> actions;   // one per TA, 2k entries
  std::vector<Rational> payoffs; // expected payoff per TA
  std::string clause_expr;       // "¬x1 ∧ x2"; "1" for the empty clause
};

struct PayoffMatrix {
  std::uint32_t input_count = 0;
  Rational s;
  std::vector<PayoffRow> rows; // 2^(2k) rows; TA1's action is the most significant
};

/// Expected payoff of one automaton under an action configuration:
/// rewards count +1 and penalties -1, inputs are uniformly distributed,
/// the clause value is the conjunction of included literals (empty = 1)
/// and the feedback type is Type I when f(x) = 1 and Type II otherwise.
/// Exact rational arithmetic throughout.
Rational expected_payoff(const std::vector<Action>& config, std::uint32_t ta,
                         const BooleanTarget& f, const Rational& s);

PayoffMatrix payoff_matrix(const BooleanTarget& f, const Rational& s);

/// Row indices where no automaton can strictly improve its expected payoff
/// by unilaterally flipping its action.
std::vector<std::size_t> nash_equilibria(const PayoffMatrix& m);

/// Nash rows whose payoffs are all strictly positive; the configurations
/// the automata actually accept.
std::vector<std::size_t> accepted_equilibria(const PayoffMatrix& m);

/// Previously reported payoff table for the 2-input XOR at s = 4, used to
/// cross-check the exact computation. A minority of its cells disagree
/// with the brute-force expectation under every single-clause convention;
/// reports flag those instead of matching them.
struct ReferenceCell {
  std::size_t row;  // 0-based
  std::uint32_t ta; // 0-based
  double published;
  Rational computed;
  bool matches; // |computed - published| < 1e-12
};
const std::vector<std::vector<double>>& xor_reference_payoffs();
std::vector<ReferenceCell> compare_with_xor_reference(const PayoffMatrix& m);

void render_text(const PayoffMatrix& m, std::ostream& out);
void write_csv(const PayoffMatrix& m, std::ostream& out);

} // namespace tsetlin::game
