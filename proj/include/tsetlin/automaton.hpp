#pragma once

#include <cstdint>
#include <optional>

#include "tsetlin/rng.hpp"

namespace tsetlin {

enum class Action : std::uint8_t { Exclude = 0, Include = 1 };
enum class ReinforceEvent : std::uint8_t { Reward = 0, Penalty = 1, Inaction = 2 };

const char* to_string(Action a);
const char* to_string(ReinforceEvent e);

/// A stuck-at fault on one bit line of the state register.
struct FaultSpec {
  std::uint32_t bit = 0;        // position into the binary state encoding
  std::uint8_t stuck_value = 1; // 0 or 1

  bool operator==(const FaultSpec&) const = default;
};

/// Bits needed to encode states 1..state_count: ceil(log2(state_count + 1)).
std::uint32_t state_register_bits(std::uint32_t state_count);

struct StepResult {
  std::uint16_t before = 0;
  std::uint16_t after = 0;
  bool fault_applied = false; // the mask changed the written value
  bool wrapped = false;       // the masked value left 1..2n and was wrapped
};

/// One two-action automaton with states 1..2n. States 1..n decode to
/// Exclude, n+1..2n to Include. The state is held as its integer value in
/// a binary register (s3 = 011b), so fault bit positions act on that
/// encoding. Every write goes through the same pipeline: single-step
/// transition, stuck-at mask, then ((v - 1) mod 2n) + 1 if the masked
/// value left the range.
class TsetlinAutomaton {
public:
  /// Boundary initialization: state n or n+1 with probability 1/2 each
  /// (a low draw picks n), then the write pipeline. Throws ConfigError if
  /// the fault bit does not fit the state register.
  TsetlinAutomaton(std::uint32_t half_depth, RngStream& rng,
                   std::optional<FaultSpec> fault = std::nullopt);

  /// Test and deserialization hook: adopts `state` as-is (must be in
  /// 1..2n); no mask is applied until the next reinforce.
  static TsetlinAutomaton with_state(std::uint32_t half_depth, std::uint32_t state,
                                     std::optional<FaultSpec> fault = std::nullopt);

  std::uint32_t half_depth() const { return half_depth_; }
  std::uint32_t state_count() const { return 2 * half_depth_; }
  std::uint32_t state() const { return state_; }
  const std::optional<FaultSpec>& fault() const { return fault_; }

  Action action() const { return state_ <= half_depth_ ? Action::Exclude : Action::Include; }

  /// Applies one reinforcement event. Reward deepens confidence and
  /// saturates at 1 and 2n; Penalty moves toward and across the decision
  /// boundary; Inaction leaves the state untouched.
  StepResult reinforce(ReinforceEvent event);

private:
  TsetlinAutomaton() = default;

  std::uint32_t write(std::uint32_t raw, StepResult& step) const;

  std::uint32_t half_depth_ = 1;
  std::uint32_t state_ = 1;
  std::optional<FaultSpec> fault_;
};

/// Reinforcement events needed to pin an extreme state from a boundary
/// initialization state, counting the saturating event itself: n from
/// s_n toward s_1 and likewise n from s_{n+1} toward s_2n (one extra step
/// toward the opposite extreme).
std::uint32_t min_steps_to_saturation(std::uint32_t half_depth);

} // namespace tsetlin
