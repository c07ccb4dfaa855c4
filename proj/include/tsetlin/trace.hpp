#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "tsetlin/automaton.hpp"
#include "tsetlin/feedback.hpp"

namespace tsetlin {

/// One recorded reinforcement transition.
struct TraceEvent {
  std::uint32_t epoch = 0; // 1-based
  std::uint32_t step = 0;  // datapoint index within the epoch, 0-based
  std::uint16_t cls = 0;
  std::uint16_t clause = 0; // clause index within the class
  std::uint16_t ta = 0;     // literal index within the clause
  FeedbackType feedback = FeedbackType::TypeI;
  ReinforceEvent event = ReinforceEvent::Inaction;
  std::uint16_t before = 0;
  std::uint16_t after = 0;
  std::uint8_t flags = 0; // kFlagFault | kFlagWrap

  static constexpr std::uint8_t kFlagFault = 1; // the stuck-at mask changed the written value
  static constexpr std::uint8_t kFlagWrap = 2;  // the value left 1..2n and was wrapped

  bool operator==(const TraceEvent&) const = default;
};

struct TraceOptions {
  bool capture_inaction = false; // inaction events dominate volume; off by default
};

/// Append-only event sink; ordering is preserved per automaton.
class TraceLog {
public:
  explicit TraceLog(TraceOptions options = {}) : options_(options) {}

  void record(const TraceEvent& event) {
    if (event.event == ReinforceEvent::Inaction && !options_.capture_inaction) return;
    events_.push_back(event);
  }

  const std::vector<TraceEvent>& events() const { return events_; }
  const TraceOptions& options() const { return options_; }

private:
  TraceOptions options_;
  std::vector<TraceEvent> events_;
};

/// CSV schema: epoch,step,class,clause,ta,feedback,event,before,after,flags
/// with feedback in {I, II}, event in {reward, penalty, inaction} and flags
/// one of -, F, W, FW.
void export_trace_csv(const TraceLog& log, std::ostream& out);
void export_trace_csv(const TraceLog& log, const std::string& path);
std::vector<TraceEvent> parse_trace_csv(std::istream& in);
std::vector<TraceEvent> parse_trace_csv_file(const std::string& path);

/// Per-automaton reachability summary over one training run.
struct ReachabilityReport {
  bool converged = false;
  std::uint32_t convergence_epoch = 0;             // 1-based; 0 when not converged
  std::vector<std::set<std::uint16_t>> visited;    // per global automaton index
  std::vector<std::uint8_t> final_actions;         // per global automaton, 0=exclude 1=include
};

} // namespace tsetlin
