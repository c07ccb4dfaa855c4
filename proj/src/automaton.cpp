#include "tsetlin/automaton.hpp"

#include <stdexcept>

#include "tsetlin/errors.hpp"

namespace tsetlin {

const char* to_string(Action a) { return a == Action::Include ? "include" : "exclude"; }

const char* to_string(ReinforceEvent e) {
  switch (e) {
    case ReinforceEvent::Reward: return "reward";
    case ReinforceEvent::Penalty: return "penalty";
    case ReinforceEvent::Inaction: return "inaction";
  }
  return "?";
}

std::uint32_t state_register_bits(std::uint32_t state_count) {
  std::uint32_t bits = 0;
  while ((1u << bits) < state_count + 1) ++bits;
  return bits;
}

namespace {

void check_fault(std::uint32_t state_count, const std::optional<FaultSpec>& fault) {
  if (!fault) return;
  if (fault->stuck_value > 1)
    throw ConfigError("fault stuck value must be 0 or 1");
  const std::uint32_t bits = state_register_bits(state_count);
  if (fault->bit >= bits)
    throw ConfigError("fault bit " + std::to_string(fault->bit) + " outside the " +
                      std::to_string(bits) + "-bit register of a " +
                      std::to_string(state_count) + "-state automaton");
}

} // namespace

TsetlinAutomaton::TsetlinAutomaton(std::uint32_t half_depth, RngStream& rng,
                                   std::optional<FaultSpec> fault) {
  if (half_depth < 1) throw ConfigError("automaton half depth must be >= 1");
  check_fault(2 * half_depth, fault);
  half_depth_ = half_depth;
  fault_ = fault;
  StepResult step;
  state_ = write(rng.bernoulli(0.5) ? half_depth_ : half_depth_ + 1, step);
}

TsetlinAutomaton TsetlinAutomaton::with_state(std::uint32_t half_depth, std::uint32_t state,
                                              std::optional<FaultSpec> fault) {
  if (half_depth < 1) throw ConfigError("automaton half depth must be >= 1");
  if (state < 1 || state > 2 * half_depth)
    throw std::invalid_argument("state " + std::to_string(state) + " outside 1.." +
                                std::to_string(2 * half_depth));
  check_fault(2 * half_depth, fault);
  TsetlinAutomaton a;
  a.half_depth_ = half_depth;
  a.state_ = state;
  a.fault_ = fault;
  return a;
}

std::uint32_t TsetlinAutomaton::write(std::uint32_t raw, StepResult& step) const {
  std::uint32_t value = raw;
  if (fault_) {
    const std::uint32_t mask = 1u << fault_->bit;
    value = fault_->stuck_value ? (value | mask) : (value & ~mask);
    step.fault_applied = value != raw;
  }
  const std::uint32_t count = state_count();
  if (value < 1 || value > count) {
    // Same bound protection as the hardware register: (v - 1) mod 2n + 1.
    value = static_cast<std::uint32_t>(
        ((static_cast<std::int64_t>(value) - 1) % count + count) % count + 1);
    step.wrapped = true;
  }
  return value;
}

StepResult TsetlinAutomaton::reinforce(ReinforceEvent event) {
  StepResult step;
  step.before = static_cast<std::uint16_t>(state_);
  if (event == ReinforceEvent::Inaction) {
    step.after = step.before;
    return step;
  }
  const bool exclude_half = state_ <= half_depth_;
  std::uint32_t raw = state_;
  if (event == ReinforceEvent::Reward) {
    raw = exclude_half ? (state_ > 1 ? state_ - 1 : 1)
                       : (state_ < state_count() ? state_ + 1 : state_count());
  } else {
    raw = exclude_half ? state_ + 1 : state_ - 1;
  }
  state_ = write(raw, step);
  step.after = static_cast<std::uint16_t>(state_);
  return step;
}

std::uint32_t min_steps_to_saturation(std::uint32_t half_depth) { return half_depth; }

} // namespace tsetlin
