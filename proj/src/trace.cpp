#include "tsetlin/trace.hpp"

#include <fstream>
#include <sstream>

#include "tsetlin/errors.hpp"

namespace tsetlin {

namespace {

const char* flag_text(std::uint8_t flags) {
  switch (flags & 3) {
    case 0: return "-";
    case TraceEvent::kFlagFault: return "F";
    case TraceEvent::kFlagWrap: return "W";
    default: return "FW";
  }
}

std::uint8_t parse_flags(const std::string& text, std::size_t line_no) {
  if (text == "-") return 0;
  std::uint8_t flags = 0;
  for (char c : text) {
    if (c == 'F') flags |= TraceEvent::kFlagFault;
    else if (c == 'W') flags |= TraceEvent::kFlagWrap;
    else throw DataError("trace line " + std::to_string(line_no) + ": bad flags '" + text + "'");
  }
  return flags;
}

FeedbackType parse_feedback(const std::string& text, std::size_t line_no) {
  if (text == "I") return FeedbackType::TypeI;
  if (text == "II") return FeedbackType::TypeII;
  throw DataError("trace line " + std::to_string(line_no) + ": bad feedback '" + text + "'");
}

ReinforceEvent parse_event(const std::string& text, std::size_t line_no) {
  if (text == "reward") return ReinforceEvent::Reward;
  if (text == "penalty") return ReinforceEvent::Penalty;
  if (text == "inaction") return ReinforceEvent::Inaction;
  throw DataError("trace line " + std::to_string(line_no) + ": bad event '" + text + "'");
}

} // namespace

void export_trace_csv(const TraceLog& log, std::ostream& out) {
  out << "epoch,step,class,clause,ta,feedback,event,before,after,flags\n";
  for (const TraceEvent& e : log.events()) {
    out << e.epoch << ',' << e.step << ',' << e.cls << ',' << e.clause << ',' << e.ta << ','
        << to_string(e.feedback) << ',' << to_string(e.event) << ',' << e.before << ',' << e.after
        << ',' << flag_text(e.flags) << '\n';
  }
}

void export_trace_csv(const TraceLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  export_trace_csv(log, out);
  if (!out) throw DataError("write failed: '" + path + "'");
}

std::vector<TraceEvent> parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("trace: empty input");
  std::vector<TraceEvent> events;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(fields, part, ',')) parts.push_back(part);
    if (parts.size() != 10)
      throw DataError("trace line " + std::to_string(line_no) + ": expected 10 fields");
    TraceEvent e;
    try {
      e.epoch = static_cast<std::uint32_t>(std::stoul(parts[0]));
      e.step = static_cast<std::uint32_t>(std::stoul(parts[1]));
      e.cls = static_cast<std::uint16_t>(std::stoul(parts[2]));
      e.clause = static_cast<std::uint16_t>(std::stoul(parts[3]));
      e.ta = static_cast<std::uint16_t>(std::stoul(parts[4]));
      e.before = static_cast<std::uint16_t>(std::stoul(parts[7]));
      e.after = static_cast<std::uint16_t>(std::stoul(parts[8]));
    } catch (const std::exception&) {
      throw DataError("trace line " + std::to_string(line_no) + ": bad numeric field");
    }
    e.feedback = parse_feedback(parts[5], line_no);
    e.event = parse_event(parts[6], line_no);
    e.flags = parse_flags(parts[9], line_no);
    events.push_back(e);
  }
  return events;
}

std::vector<TraceEvent> parse_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_trace_csv(in);
}

} // namespace tsetlin
