#include "tsetlin/machine.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tsetlin/errors.hpp"

namespace tsetlin {

void TMConfig::validate() const {
  if (input_digits < 1) throw ConfigError("input_digits (L) must be >= 1");
  if (class_count < 1) throw ConfigError("class_count (M) must be >= 1");
  if (clauses_per_class < 2 || clauses_per_class % 2 != 0)
    throw ConfigError("clauses_per_class (U) must be even and >= 2");
  if (half_depth < 1) throw ConfigError("half_depth (n) must be >= 1");
  if (threshold < 1) throw ConfigError("threshold (T) must be >= 1");
  if (!(s > 1.0)) throw ConfigError("s must be > 1");
  if (rng.kind == RngKind::Lfsr && (rng.width < 4 || rng.width > 32))
    throw ConfigError("lfsr width must be in [4, 32]");
}

void EventCounters::add(FeedbackType type, ReinforceEvent event) {
  switch (event) {
    case ReinforceEvent::Reward:
      ++(type == FeedbackType::TypeI ? reward_type1 : reward_type2);
      break;
    case ReinforceEvent::Penalty:
      ++(type == FeedbackType::TypeI ? penalty_type1 : penalty_type2);
      break;
    case ReinforceEvent::Inaction:
      ++inaction;
      break;
  }
}

EventCounters& EventCounters::operator+=(const EventCounters& o) {
  reward_type1 += o.reward_type1;
  penalty_type1 += o.penalty_type1;
  reward_type2 += o.reward_type2;
  penalty_type2 += o.penalty_type2;
  inaction += o.inaction;
  return *this;
}

LiteralVector LiteralVector::from_input_bits(std::span<const std::uint8_t> bits) {
  LiteralVector x;
  x.input_digits_ = static_cast<std::uint32_t>(bits.size());
  x.values_.resize(2 * bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] > 1) throw std::invalid_argument("input digits must be 0 or 1");
    x.values_[k] = bits[k];
    x.values_[bits.size() + k] = bits[k] ? 0 : 1;
  }
  return x;
}

LiteralVector LiteralVector::from_literals(std::vector<std::uint8_t> values,
                                           std::uint32_t input_digits) {
  if (values.size() != 2 * static_cast<std::size_t>(input_digits))
    throw std::invalid_argument("literal vector must have 2L entries");
  for (std::uint32_t k = 0; k < input_digits; ++k) {
    if (values[k] > 1 || values[input_digits + k] > 1)
      throw std::invalid_argument("literals must be 0 or 1");
    if (values[input_digits + k] == values[k])
      throw std::invalid_argument("literal " + std::to_string(input_digits + k) +
                                  " must be the complement of literal " + std::to_string(k));
  }
  LiteralVector x;
  x.input_digits_ = input_digits;
  x.values_ = std::move(values);
  return x;
}

Clause::Clause(bool positive, std::vector<TsetlinAutomaton> tas)
    : positive_(positive), tas_(std::move(tas)) {
  rebuild_included();
}

bool Clause::evaluate(const LiteralVector& x, EvalMode mode) const {
  if (included_.empty()) return mode == EvalMode::Train;
  for (std::uint32_t k : included_)
    if (!x[k]) return false;
  return true;
}

StepResult Clause::reinforce_ta(std::uint32_t k, ReinforceEvent event) {
  const Action before = tas_[k].action();
  const StepResult step = tas_[k].reinforce(event);
  if (tas_[k].action() != before) {
    auto it = std::lower_bound(included_.begin(), included_.end(), k);
    if (tas_[k].action() == Action::Include)
      included_.insert(it, k);
    else
      included_.erase(it);
  }
  return step;
}

void Clause::set_ta_state(std::uint32_t k, std::uint32_t state) {
  tas_[k] = TsetlinAutomaton::with_state(tas_[k].half_depth(), state, tas_[k].fault());
  rebuild_included();
}

void Clause::rebuild_included() {
  included_.clear();
  for (std::uint32_t k = 0; k < tas_.size(); ++k)
    if (tas_[k].action() == Action::Include) included_.push_back(k);
}

bool evaluate_clause(const Clause& clause, const LiteralVector& x, EvalMode mode) {
  if (x.size() != clause.literal_count())
    throw std::invalid_argument("literal vector size does not match the clause");
  return clause.evaluate(x, mode);
}

Machine::Machine(const TMConfig& config, std::vector<MachineFault> faults)
    : config_(config),
      faults_(std::move(faults)),
      tables_((config.validate(), config.s)),
      negclass_stream_(RngSpec::pcg64(),
                       derive_seed(config.init_seed, std::uint64_t(config.class_count) *
                                                             config.clauses_per_class *
                                                             (2 * config.input_digits + 1))),
      shuffle_stream_(RngSpec::pcg64(),
                      derive_seed(config.init_seed, std::uint64_t(config.class_count) *
                                                            config.clauses_per_class *
                                                            (2 * config.input_digits + 1) +
                                                        1)) {
  const std::uint32_t literals = 2 * config_.input_digits;
  const std::uint32_t clauses = clause_count();
  for (const MachineFault& f : faults_) {
    if (f.clause >= clauses)
      throw ConfigError("fault clause index " + std::to_string(f.clause) + " outside 0.." +
                        std::to_string(clauses - 1));
    if (f.ta >= literals)
      throw ConfigError("fault ta index " + std::to_string(f.ta) + " outside 0.." +
                        std::to_string(literals - 1));
  }

  ta_streams_.reserve(std::size_t(clauses) * literals);
  select_streams_.reserve(clauses);
  classes_.resize(config_.class_count);
  for (std::uint32_t cls = 0; cls < config_.class_count; ++cls) {
    auto& bank = classes_[cls];
    bank.reserve(config_.clauses_per_class);
    for (std::uint32_t j = 0; j < config_.clauses_per_class; ++j) {
      const std::uint32_t global_clause = cls * config_.clauses_per_class + j;
      std::vector<TsetlinAutomaton> tas;
      tas.reserve(literals);
      for (std::uint32_t k = 0; k < literals; ++k) {
        ta_streams_.emplace_back(config_.rng, derive_seed(config_.init_seed,
                                                          ta_index(cls, j, k)));
        std::optional<FaultSpec> fault;
        for (const MachineFault& f : faults_)
          if (f.clause == global_clause && f.ta == k) fault = f.fault;
        tas.emplace_back(config_.half_depth, ta_streams_.back(), fault);
      }
      bank.emplace_back(j % 2 == 0, std::move(tas)); // even positions vote positive
      select_streams_.emplace_back(
          config_.rng, derive_seed(config_.init_seed,
                                   std::uint64_t(clauses) * literals + global_clause));
    }
  }
}

const Clause& Machine::clause_at(std::uint32_t cls, std::uint32_t position) const {
  return classes_.at(cls).at(position);
}

Clause& Machine::clause_at(std::uint32_t cls, std::uint32_t position) {
  return classes_.at(cls).at(position);
}

int Machine::vote_sum(std::uint32_t cls, const LiteralVector& x, EvalMode mode) const {
  if (x.input_digits() != config_.input_digits)
    throw std::invalid_argument("literal vector does not match the machine's input width");
  int sum = 0;
  for (const Clause& clause : classes_.at(cls)) {
    const int value = clause.evaluate(x, mode) ? 1 : 0;
    sum += clause.positive() ? value : -value;
  }
  return sum;
}

std::uint32_t Machine::classify(const LiteralVector& x) const {
  std::uint32_t best_cls = 0;
  int best_votes = vote_sum(0, x, EvalMode::Infer);
  for (std::uint32_t cls = 1; cls < config_.class_count; ++cls) {
    const int votes = vote_sum(cls, x, EvalMode::Infer);
    if (votes > best_votes) {
      best_votes = votes;
      best_cls = cls;
    }
  }
  return best_cls;
}

std::uint32_t Machine::classify_bits(std::span<const std::uint8_t> input_bits) const {
  return classify(LiteralVector::from_input_bits(input_bits));
}

std::uint32_t Machine::draw_negative_class(std::uint32_t label) {
  const std::uint32_t other = static_cast<std::uint32_t>(negclass_stream_.next_raw() %
                                                         (config_.class_count - 1));
  return other >= label ? other + 1 : other;
}

void Machine::feed_bank(std::uint32_t cls, const LiteralVector& x, bool is_target,
                        EventCounters& counters, const TracePosition& trace) {
  auto& bank = classes_[cls];
  const std::uint32_t literals = 2 * config_.input_digits;
  clause_value_scratch_.resize(config_.clauses_per_class);
  int votes = 0;
  for (std::uint32_t j = 0; j < config_.clauses_per_class; ++j) {
    const bool value = bank[j].evaluate(x, EvalMode::Train);
    clause_value_scratch_[j] = value ? 1 : 0;
    if (value) votes += bank[j].positive() ? 1 : -1;
  }
  const int t = static_cast<int>(config_.threshold);
  const int clamped = std::clamp(votes, -t, t);
  const double p_select = is_target ? static_cast<double>(t - clamped) / (2.0 * t)
                                    : static_cast<double>(t + clamped) / (2.0 * t);

  for (std::uint32_t j = 0; j < config_.clauses_per_class; ++j) {
    const std::uint32_t global_clause = cls * config_.clauses_per_class + j;
    if (!select_streams_[global_clause].bernoulli(p_select)) continue;
    Clause& clause = bank[j];
    const FeedbackType type =
        clause.positive() == is_target ? FeedbackType::TypeI : FeedbackType::TypeII;
    const bool clause_value = clause_value_scratch_[j] != 0;
    for (std::uint32_t k = 0; k < literals; ++k) {
      RngStream& stream = ta_streams_[ta_index(cls, j, k)];
      const ReinforceEvent event =
          tables_.sample(type, clause.ta(k).action(), clause_value, x[k] != 0, stream);
      const StepResult step = clause.reinforce_ta(k, event);
      counters.add(type, event);
      if (trace.log) {
        TraceEvent record;
        record.epoch = trace.epoch;
        record.step = trace.step;
        record.cls = static_cast<std::uint16_t>(cls);
        record.clause = static_cast<std::uint16_t>(j);
        record.ta = static_cast<std::uint16_t>(k);
        record.feedback = type;
        record.event = event;
        record.before = step.before;
        record.after = step.after;
        record.flags = static_cast<std::uint8_t>((step.fault_applied ? TraceEvent::kFlagFault : 0) |
                                                 (step.wrapped ? TraceEvent::kFlagWrap : 0));
        trace.log->record(record);
      }
    }
  }
}

void Machine::train_sample(const LiteralVector& x, std::uint32_t label, EventCounters& counters,
                           const TracePosition& trace) {
  if (label >= config_.class_count)
    throw DataError("label " + std::to_string(label) + " outside 0.." +
                    std::to_string(config_.class_count - 1));
  feed_bank(label, x, true, counters, trace);
  if (config_.class_count > 1) feed_bank(draw_negative_class(label), x, false, counters, trace);
}

double Machine::accuracy(const BooleanizedDataset& ds) const {
  if (ds.points.empty()) throw DataError("accuracy over an empty dataset");
  std::size_t correct = 0;
  for (const BoolPoint& point : ds.points)
    if (classify_bits(point.bits) == point.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(ds.points.size());
}

std::vector<std::uint64_t> Machine::action_words() const {
  std::vector<std::uint64_t> words((automata_count() + 63) / 64, 0);
  for (std::uint32_t cls = 0; cls < config_.class_count; ++cls)
    for (std::uint32_t j = 0; j < config_.clauses_per_class; ++j)
      for (std::uint32_t k = 0; k < 2 * config_.input_digits; ++k) {
        if (classes_[cls][j].ta(k).action() == Action::Include) {
          const std::uint32_t g = ta_index(cls, j, k);
          words[g / 64] |= 1ULL << (g % 64);
        }
      }
  return words;
}

std::vector<std::uint16_t> Machine::states() const {
  std::vector<std::uint16_t> out(automata_count());
  for (std::uint32_t cls = 0; cls < config_.class_count; ++cls)
    for (std::uint32_t j = 0; j < config_.clauses_per_class; ++j)
      for (std::uint32_t k = 0; k < 2 * config_.input_digits; ++k)
        out[ta_index(cls, j, k)] = static_cast<std::uint16_t>(classes_[cls][j].ta(k).state());
  return out;
}

void Machine::set_ta_state(std::uint32_t cls, std::uint32_t position, std::uint32_t literal,
                           std::uint32_t state) {
  classes_.at(cls).at(position).set_ta_state(literal, state);
}

std::vector<std::size_t> Machine::shuffle_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = shuffle_stream_.next_raw() % i;
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

void Machine::save(std::ostream& out) const {
  char s_repr[32];
  std::snprintf(s_repr, sizeof s_repr, "%.17g", config_.s);
  out << "tmmodel v1\n";
  out << "config L " << config_.input_digits << " M " << config_.class_count << " U "
      << config_.clauses_per_class << " n " << config_.half_depth << " T " << config_.threshold
      << " s " << s_repr << " rng " << config_.rng.to_string() << " seed " << config_.init_seed
      << " epochs " << config_.epochs << "\n";
  for (const MachineFault& f : faults_)
    out << "fault clause " << f.clause << " ta " << f.ta << " bit " << f.fault.bit << " stuck "
        << static_cast<int>(f.fault.stuck_value) << "\n";
  for (std::uint32_t cls = 0; cls < config_.class_count; ++cls)
    for (std::uint32_t j = 0; j < config_.clauses_per_class; ++j) {
      out << "clause " << cls << ' ' << j;
      for (std::uint32_t k = 0; k < 2 * config_.input_digits; ++k)
        out << ' ' << classes_[cls][j].ta(k).state();
      out << "\n";
    }
  out << "end\n";
}

void Machine::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  save(out);
  if (!out) throw DataError("write failed: '" + path + "'");
}

Machine Machine::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "tmmodel v1")
    throw DataError("not a tmmodel v1 file");
  if (!std::getline(in, line)) throw DataError("tmmodel: missing config line");
  std::istringstream cfg_line(line);
  std::string tag;
  cfg_line >> tag;
  if (tag != "config") throw DataError("tmmodel: expected config line");
  TMConfig config;
  std::string key;
  while (cfg_line >> key) {
    std::string value;
    if (!(cfg_line >> value)) throw DataError("tmmodel: dangling config key '" + key + "'");
    try {
      if (key == "L") config.input_digits = std::stoul(value);
      else if (key == "M") config.class_count = std::stoul(value);
      else if (key == "U") config.clauses_per_class = std::stoul(value);
      else if (key == "n") config.half_depth = std::stoul(value);
      else if (key == "T") config.threshold = std::stoul(value);
      else if (key == "s") config.s = std::stod(value);
      else if (key == "rng") config.rng = RngSpec::parse(value);
      else if (key == "seed") config.init_seed = std::stoull(value);
      else if (key == "epochs") config.epochs = std::stoul(value);
      else throw DataError("tmmodel: unknown config key '" + key + "'");
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      throw DataError("tmmodel: bad value for '" + key + "'");
    }
  }

  std::vector<MachineFault> faults;
  std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>>
      clause_states;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    fields >> tag;
    if (tag == "end") break;
    if (tag == "fault") {
      MachineFault f;
      std::string k1, k2, k3, k4;
      unsigned stuck = 0;
      if (!(fields >> k1 >> f.clause >> k2 >> f.ta >> k3 >> f.fault.bit >> k4 >> stuck) ||
          k1 != "clause" || k2 != "ta" || k3 != "bit" || k4 != "stuck")
        throw DataError("tmmodel: malformed fault line");
      f.fault.stuck_value = static_cast<std::uint8_t>(stuck);
      faults.push_back(f);
    } else if (tag == "clause") {
      std::uint32_t cls = 0, j = 0;
      if (!(fields >> cls >> j)) throw DataError("tmmodel: malformed clause line");
      std::vector<std::uint32_t> states;
      std::uint32_t s = 0;
      while (fields >> s) states.push_back(s);
      clause_states.push_back({{cls, j}, std::move(states)});
    } else {
      throw DataError("tmmodel: unknown record '" + tag + "'");
    }
  }

  Machine machine(config, std::move(faults));
  if (clause_states.size() != machine.clause_count())
    throw DataError("tmmodel: expected " + std::to_string(machine.clause_count()) +
                    " clause records, got " + std::to_string(clause_states.size()));
  for (const auto& [where, states] : clause_states) {
    const auto [cls, j] = where;
    if (cls >= config.class_count || j >= config.clauses_per_class)
      throw DataError("tmmodel: clause index out of range");
    if (states.size() != 2 * config.input_digits)
      throw DataError("tmmodel: clause state count does not match 2L");
    for (std::uint32_t k = 0; k < states.size(); ++k) {
      if (states[k] < 1 || states[k] > 2 * config.half_depth)
        throw DataError("tmmodel: state outside 1..2n");
      machine.set_ta_state(cls, j, k, states[k]);
    }
  }
  return machine;
}

Machine Machine::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load(in);
}

FitResult fit(Machine& machine, const BooleanizedDataset& train, const BooleanizedDataset* test,
              std::uint32_t epochs, TraceLog* trace) {
  if (train.points.empty()) throw DataError("training dataset is empty");
  if (train.digit_count != machine.config().input_digits)
    throw DataError("dataset digit count does not match the machine's input width");
  for (const BoolPoint& p : train.points)
    if (p.label >= machine.config().class_count) throw DataError("training label out of range");

  FitResult result;
  result.config = machine.config();
  result.faults = machine.faults();
  result.initial_states = machine.states();

  std::vector<LiteralVector> train_lits;
  train_lits.reserve(train.points.size());
  for (const BoolPoint& p : train.points) train_lits.push_back(LiteralVector::from_input_bits(p.bits));
  std::vector<LiteralVector> test_lits;
  if (test)
    for (const BoolPoint& p : test->points)
      test_lits.push_back(LiteralVector::from_input_bits(p.bits));

  auto accuracy_over = [&](const std::vector<LiteralVector>& lits,
                           const std::vector<BoolPoint>& points) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < lits.size(); ++i)
      if (machine.classify(lits[i]) == points[i].label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(lits.size());
  };

  for (std::uint32_t epoch = 1; epoch <= epochs; ++epoch) {
    const auto order = machine.shuffle_order(train.points.size());
    EpochStats stats;
    for (std::uint32_t step = 0; step < order.size(); ++step) {
      const std::size_t i = order[step];
      machine.train_sample(train_lits[i], train.points[i].label, stats.counters,
                           {trace, epoch, step});
    }
    stats.train_accuracy = accuracy_over(train_lits, train.points);
    if (test && !test_lits.empty()) stats.test_accuracy = accuracy_over(test_lits, test->points);
    stats.action_words = machine.action_words();
    result.epochs.push_back(std::move(stats));
  }

  for (std::uint32_t e = 0; e < result.epochs.size(); ++e) {
    if (result.epochs[e].train_accuracy > result.best_train_accuracy) {
      result.best_train_accuracy = result.epochs[e].train_accuracy;
      result.best_train_epoch = e + 1;
    }
  }
  return result;
}

ReachabilityReport detect_convergence(const FitResult& result, const TraceLog* trace,
                                      std::uint32_t window) {
  if (window < 1) throw ConfigError("convergence window must be >= 1");
  ReachabilityReport report;

  double max_acc = 0;
  for (const EpochStats& e : result.epochs) max_acc = std::max(max_acc, e.train_accuracy);
  for (std::size_t e = window; e <= result.epochs.size(); ++e) {
    bool stable = true;
    for (std::size_t back = e - window; back + 1 < e && stable; ++back)
      stable = result.epochs[back].action_words == result.epochs[e - 1].action_words;
    if (stable && result.epochs[e - 1].train_accuracy >= max_acc) {
      report.converged = true;
      report.convergence_epoch = static_cast<std::uint32_t>(e);
      break;
    }
  }

  const std::uint32_t literals = 2 * result.config.input_digits;
  const std::uint32_t total = result.config.class_count * result.config.clauses_per_class * literals;
  if (trace) {
    report.visited.resize(total);
    for (std::uint32_t g = 0; g < total; ++g)
      report.visited[g].insert(result.initial_states[g]);
    for (const TraceEvent& ev : trace->events()) {
      const std::uint32_t g =
          (std::uint32_t(ev.cls) * result.config.clauses_per_class + ev.clause) * literals + ev.ta;
      report.visited[g].insert(ev.before);
      report.visited[g].insert(ev.after);
    }
  }

  if (!result.epochs.empty()) {
    report.final_actions.resize(total);
    const auto& words = result.epochs.back().action_words;
    for (std::uint32_t g = 0; g < total; ++g)
      report.final_actions[g] = (words[g / 64] >> (g % 64)) & 1;
  }
  return report;
}

bool replay_trace(const FitResult& result, const TraceLog& trace, std::string* diagnostic) {
  const std::uint32_t literals = 2 * result.config.input_digits;
  const std::uint32_t total = result.config.class_count * result.config.clauses_per_class * literals;
  std::vector<TsetlinAutomaton> automata;
  automata.reserve(total);
  for (std::uint32_t g = 0; g < total; ++g) {
    std::optional<FaultSpec> fault;
    for (const MachineFault& f : result.faults)
      if (f.clause == g / literals && f.ta == g % literals) fault = f.fault;
    automata.push_back(
        TsetlinAutomaton::with_state(result.config.half_depth, result.initial_states[g], fault));
  }
  auto fail = [&](const TraceEvent& ev, const std::string& what) {
    if (diagnostic) {
      std::ostringstream os;
      os << "replay mismatch at epoch " << ev.epoch << " step " << ev.step << " class " << ev.cls
         << " clause " << ev.clause << " ta " << ev.ta << ": " << what;
      *diagnostic = os.str();
    }
    return false;
  };
  for (const TraceEvent& ev : trace.events()) {
    const std::uint32_t g =
        (std::uint32_t(ev.cls) * result.config.clauses_per_class + ev.clause) * literals + ev.ta;
    if (g >= total) return fail(ev, "automaton index out of range");
    TsetlinAutomaton& a = automata[g];
    if (a.state() != ev.before)
      return fail(ev, "expected state " + std::to_string(ev.before) + ", replay has " +
                          std::to_string(a.state()));
    const StepResult step = a.reinforce(ev.event);
    if (step.after != ev.after)
      return fail(ev, "transition produced " + std::to_string(step.after) + ", trace says " +
                          std::to_string(ev.after));
    const std::uint8_t flags =
        static_cast<std::uint8_t>((step.fault_applied ? TraceEvent::kFlagFault : 0) |
                                  (step.wrapped ? TraceEvent::kFlagWrap : 0));
    if (flags != ev.flags) return fail(ev, "flag mismatch");
  }
  return true;
}

} // namespace tsetlin
