#include "kv/lifecycle.hpp"

#include <algorithm>

#include "kv/checklist.hpp"
#include "kv/errors.hpp"

namespace kv::lifecycle {
namespace {

constexpr std::array<std::string_view, kStageCount> kStageRoman = {"I", "II", "III", "IV"};

constexpr std::array<std::string_view, kStageCount> kStageNames = {
    "Research and Document Calculations",
    "Back Test",
    "Implement",
    "Manage Portfolio and Risk",
};

constexpr std::array<std::array<std::string_view, kStepsPerStage>, kStageCount> kStepNames = {{
    {"Describe Trading Idea", "Research Quantitative Methods", "Prototype in Excel", "Check Performance"},
    {"Gather Historical Data", "Develop Cleaning Algorithms", "Perform In Sample / Out of Sample Tests",
     "Shadow Trade and Check Performance"},
    {"Build Software Requirements Specification Document", "Design and Document System Architecture",
     "Program and Document the System", "Probationary Trade and Check Performance"},
    {"Monitor Portfolio Statistics", "Perform Risk Calculations", "Document Profit and Loss Attribution",
     "Determine Causes of Variation in Performance"},
}};

constexpr std::array<std::string_view, kAllCriteria.size()> kCriterionKeys = {
    "deliverables_check",    "minimum_standards", "profitability_potential", "competitive_advantage",
    "technical_feasibility", "scalability",       "risk",
};

std::size_t stage_index(StageId s) { return static_cast<std::size_t>(stage_number(s) - 1); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_gate_number(int gate) {
  if (gate < 1 || gate > kGateCount) throw ValidationError("gate", "gate must be 1..3");
}

void check_step_number(int step, const char* field) {
  if (step < 1 || step > kStepsPerStage) throw ValidationError(field, "step must be 1..4");
}

[[noreturn]] void reject(const Position& position, std::string_view what) {
  throw InvalidTransition(std::string(what) + " not allowed at " + describe(position));
}

// Transition rules. `next` is a copy of the prior state; each handler
// rewrites it or throws.
struct Transition {
  ProjectState& next;

  void operator()(const ProjectCreated&) {
    throw InvalidTransition("ProjectCreated may only open a journal");
  }

  void operator()(const StepCompleted& e) {
    const auto* at = std::get_if<AtStep>(&next.position);
    if (at == nullptr) reject(next.position, "step completion");
    if (e.address != at->address)
      throw InvalidTransition("step completion for " + e.address.to_string() + " but project is at " +
                              at->address.to_string());
    if (at->address.step < kStepsPerStage) {
      next.position = AtStep{{at->address.stage, at->address.step + 1}, at->iteration};
      return;
    }
    switch (at->address.stage) {
      case StageId::I: next.position = AtIntraStageGate{}; break;
      case StageId::II: next.position = AtGate{2}; break;
      case StageId::III: next.position = AtGate{3}; break;
      case StageId::IV: next.position = AtCycleEnd{}; break;
    }
  }

  void operator()(const LoopBack& e) {
    const auto* at = std::get_if<AtStep>(&next.position);
    if (at == nullptr) reject(next.position, "loop-back");
    if (e.from != at->address)
      throw InvalidTransition("loop-back from " + e.from.to_string() + " but project is at " +
                              at->address.to_string());
    check_step_number(e.to.step, "target_step");
    if (e.to.stage != e.from.stage)
      throw InvalidTransition("loop-back to " + e.to.to_string() +
                              " crosses stages; stages change only through gates");
    if (e.to.step >= e.from.step)
      throw InvalidTransition("loop-back to " + e.to.to_string() + " is not an earlier step than " +
                              e.from.to_string());
    const int iteration = at->iteration + 1;
    next.stage_iterations[stage_index(e.to.stage)] = iteration;
    next.position = AtStep{e.to, iteration};
  }

  void operator()(const GateOpened& e) {
    check_gate_number(e.gate);
    const auto* at = std::get_if<AtGate>(&next.position);
    if (at == nullptr || at->gate != e.gate) reject(next.position, "opening Gate " + std::to_string(e.gate));
  }

  void operator()(const GateDecided& e) {
    check_gate_number(e.gate);
    const auto* at = std::get_if<AtGate>(&next.position);
    if (std::holds_alternative<Held>(next.position))
      throw InvalidTransition("gate decision not allowed at " + describe(next.position) + "; resume first");
    if (at == nullptr || at->gate != e.gate)
      reject(next.position, "decision at Gate " + std::to_string(e.gate));
    e.criteria.validate();

    std::visit(Overloaded{
                   [&](const Go&) {
                     const StageId stage = stage_from_number(e.gate + 1);
                     next.stage_iterations[stage_index(stage)] = 1;
                     next.position = AtStep{{stage, 1}, 1};
                   },
                   [&](const Kill&) { next.position = Killed{}; },
                   [&](const Hold&) { next.position = Held{e.gate}; },
                   [&](const Return& r) {
                     if (stage_number(r.target) >= e.gate)
                       throw ValidationError("target", "Return from Gate " + std::to_string(e.gate) +
                                                           " must target an earlier stage than " +
                                                           std::string(stage_roman(stage_from_number(e.gate))));
                     int& visits = next.stage_iterations[stage_index(r.target)];
                     visits += 1;
                     next.position = AtStep{{r.target, 1}, visits};
                   },
               },
               e.decision);
  }

  void operator()(const IntraStageGateDecided& e) {
    if (!std::holds_alternative<AtIntraStageGate>(next.position))
      reject(next.position, "intra-stage gate decision");
    if (!e.loop_back_to) {
      next.position = AtGate{1};
      return;
    }
    check_step_number(*e.loop_back_to, "target_step");
    int& visits = next.stage_iterations[stage_index(StageId::I)];
    visits += 1;
    next.position = AtStep{{StageId::I, *e.loop_back_to}, visits};
  }

  void operator()(const ChecklistItemDone& e) {
    const ChecklistItem& item = checklist_item(e.template_id, e.item_id);
    if (!binding_matches(item.binding, next.position))
      throw InvalidTransition(std::string(template_name(e.template_id)) + " item " +
                              std::to_string(e.item_id) + " is bound to " + describe(item.binding) +
                              " but project is at " + describe(next.position));
    if (!next.checklist_done.insert({e.template_id, e.item_id}).second)
      throw DuplicateError(std::string(template_name(e.template_id)) + " item " +
                           std::to_string(e.item_id) + " already done in cycle " +
                           std::to_string(next.cycle));
  }

  void operator()(const Resumed& e) {
    check_gate_number(e.gate);
    const auto* held = std::get_if<Held>(&next.position);
    if (held == nullptr || held->gate != e.gate) reject(next.position, "resume of Gate " + std::to_string(e.gate));
    next.position = AtGate{e.gate};
  }

  void operator()(const CycleRestarted&) {
    if (!std::holds_alternative<AtCycleEnd>(next.position)) reject(next.position, "cycle restart");
    next.cycle += 1;
    next.position = AtStep{{StageId::I, 1}, 1};
    next.stage_iterations = {1, 0, 0, 0};
    next.checklist_done.clear();
  }
};

}  // namespace

StageId stage_from_number(int number) {
  if (number < 1 || number > kStageCount) throw ValidationError("stage", "stage must be I..IV");
  return static_cast<StageId>(number);
}

std::string_view stage_roman(StageId s) { return kStageRoman[stage_index(s)]; }
std::string_view stage_name(StageId s) { return kStageNames[stage_index(s)]; }

std::string_view step_name(StageId s, int step) {
  check_step_number(step, "step");
  return kStepNames[stage_index(s)][static_cast<std::size_t>(step - 1)];
}

StageId parse_stage(std::string_view text) {
  for (int i = 0; i < kStageCount; ++i) {
    if (text == kStageRoman[static_cast<std::size_t>(i)] || text == std::to_string(i + 1))
      return static_cast<StageId>(i + 1);
  }
  throw ValidationError("stage", "unknown stage '" + std::string(text) + "'");
}

std::string StepAddress::to_string() const {
  return "K|V " + std::to_string(stage_number(stage)) + "." + std::to_string(step);
}

std::string to_string(const GateDecision& decision) {
  return std::visit(Overloaded{
                        [](const Go&) -> std::string { return "Go"; },
                        [](const Kill&) -> std::string { return "Kill"; },
                        [](const Hold&) -> std::string { return "Hold"; },
                        [](const Return& r) { return "Return(" + std::string(stage_roman(r.target)) + ")"; },
                    },
                    decision);
}

std::string_view criterion_key(Criterion c) { return kCriterionKeys[static_cast<std::size_t>(c)]; }

std::optional<Criterion> parse_criterion(std::string_view key) {
  for (const Criterion c : kAllCriteria)
    if (criterion_key(c) == key) return c;
  return std::nullopt;
}

void GateCriteria::set(Criterion c, int score, std::string note) {
  entries_[static_cast<std::size_t>(c)] = CriterionScore{score, std::move(note)};
}

const std::optional<CriterionScore>& GateCriteria::get(Criterion c) const {
  return entries_[static_cast<std::size_t>(c)];
}

std::vector<Criterion> GateCriteria::missing() const {
  std::vector<Criterion> out;
  for (const Criterion c : kAllCriteria)
    if (!get(c)) out.push_back(c);
  return out;
}

void GateCriteria::validate() const {
  const auto absent = missing();
  if (!absent.empty()) {
    std::string names;
    for (const Criterion c : absent) {
      if (!names.empty()) names += ", ";
      names += criterion_key(c);
    }
    throw ValidationError("criteria", "missing gate criteria: " + names);
  }
  for (const Criterion c : kAllCriteria) {
    const int score = get(c)->score;
    if (score < kMinScore || score > kMaxScore)
      throw ValidationError(std::string(criterion_key(c)), "score must be 1..5, got " + std::to_string(score));
  }
}

std::string describe(const Position& position) {
  return std::visit(Overloaded{
                        [](const AtStep& s) { return s.address.to_string(); },
                        [](const AtGate& g) { return "Gate " + std::to_string(g.gate); },
                        [](const AtIntraStageGate&) -> std::string { return "intra-stage gate (Stage I)"; },
                        [](const AtCycleEnd&) -> std::string { return "cycle end"; },
                        [](const Held& h) { return "Held at Gate " + std::to_string(h.gate); },
                        [](const Killed&) -> std::string { return "Killed"; },
                    },
                    position);
}

std::string_view kind_name(const EventKind& kind) {
  constexpr std::array<std::string_view, std::variant_size_v<EventKind>> kNames = {
      "ProjectCreated", "StepCompleted",         "LoopBack",         "GateOpened",     "GateDecided",
      "IntraStageGateDecided", "ChecklistItemDone", "Resumed", "CycleRestarted",
  };
  return kNames[kind.index()];
}

void validate_project_id(std::string_view id) {
  if (id.empty()) throw ValidationError("project_id", "must not be empty");
  const bool ok = std::all_of(id.begin(), id.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '.' ||
           ch == '_' || ch == '-';
  });
  if (!ok || id == "." || id == "..")
    throw ValidationError("project_id", "may contain only letters, digits, '.', '_' and '-'");
}

ProjectState initial_state(const JournalEvent& created) {
  const auto* payload = std::get_if<ProjectCreated>(&created.kind);
  if (payload == nullptr) throw ReplayError(created.seq, "journal must start with ProjectCreated");
  if (created.seq != 1) throw ReplayError(created.seq, "journal must start at seq 1");
  if (payload->name.empty()) throw ValidationError("name", "must not be empty");
  validate_project_id(payload->project_id);
  ProjectState state;
  state.project_id = payload->project_id;
  state.name = payload->name;
  state.cycle = 1;
  state.position = AtStep{{StageId::I, 1}, 1};
  state.last_seq = 1;
  state.stage_iterations = {1, 0, 0, 0};
  return state;
}

ProjectState apply_event(const ProjectState& state, const JournalEvent& event) {
  if (event.seq != state.last_seq + 1)
    throw ReplayError(event.seq, "expected seq " + std::to_string(state.last_seq + 1));
  if (std::holds_alternative<Killed>(state.position))
    throw InvalidTransition(std::string(kind_name(event.kind)) + " rejected: project is Killed");
  ProjectState next = state;
  std::visit(Transition{next}, event.kind);
  next.last_seq = event.seq;
  return next;
}

ProjectState replay_journal(std::span<const JournalEvent> events) {
  if (events.empty()) throw ReplayError(0, "empty journal");
  ProjectState state;
  try {
    state = initial_state(events.front());
  } catch (const ReplayError&) {
    throw;
  } catch (const Error& e) {
    throw ReplayError(events.front().seq, e.what());
  }
  for (const auto& event : events.subspan(1)) {
    try {
      state = apply_event(state, event);
    } catch (const ReplayError&) {
      throw;
    } catch (const Error& e) {
      throw ReplayError(event.seq, e.what());
    }
  }
  return state;
}

Project::Project(ProjectState state, std::vector<JournalEvent> journal, Clock clock)
    : state_(std::move(state)), journal_(std::move(journal)), clock_(std::move(clock)) {}

Project Project::create(std::string name, std::string project_id, Clock clock) {
  JournalEvent created{1, clock(), ProjectCreated{std::move(project_id), std::move(name)}};
  ProjectState state = initial_state(created);
  return Project(std::move(state), {std::move(created)}, std::move(clock));
}

Project Project::from_journal(std::vector<JournalEvent> events, Clock clock) {
  ProjectState state = replay_journal(events);
  return Project(std::move(state), std::move(events), std::move(clock));
}

const JournalEvent& Project::commit(EventKind kind) {
  JournalEvent event{state_.last_seq + 1, clock_(), std::move(kind)};
  state_ = apply_event(state_, event);
  journal_.push_back(std::move(event));
  return journal_.back();
}

const JournalEvent& Project::complete_step(std::string note, std::optional<std::string> artifact_digest) {
  const auto* at = std::get_if<AtStep>(&state_.position);
  if (at == nullptr) reject(state_.position, "step completion");
  return commit(StepCompleted{at->address, std::move(note), std::move(artifact_digest)});
}

const JournalEvent& Project::loop_back(int target_step) {
  const auto* at = std::get_if<AtStep>(&state_.position);
  if (at == nullptr) reject(state_.position, "loop-back");
  return commit(LoopBack{at->address, {at->address.stage, target_step}});
}

const JournalEvent& Project::decide_intra_stage_gate(std::optional<int> loop_back_to) {
  return commit(IntraStageGateDecided{loop_back_to});
}

const JournalEvent& Project::open_gate(int gate) { return commit(GateOpened{gate}); }

const JournalEvent& Project::decide_gate(int gate, GateDecision decision, GateCriteria criteria) {
  return commit(GateDecided{gate, std::move(decision), std::move(criteria)});
}

const JournalEvent& Project::resume() {
  const auto* held = std::get_if<Held>(&state_.position);
  if (held == nullptr) reject(state_.position, "resume");
  return commit(Resumed{held->gate});
}

const JournalEvent& Project::restart_cycle() { return commit(CycleRestarted{}); }

const JournalEvent& Project::mark_checklist_item(TemplateId template_id, int item_id, std::string note) {
  return commit(ChecklistItemDone{template_id, item_id, std::move(note)});
}

int current_iteration(const ProjectState& state) {
  if (const auto* at = std::get_if<AtStep>(&state.position)) return at->iteration;
  return 0;
}

std::vector<std::string> spiral_warnings(const ProjectState& state, int soft_cap) {
  std::vector<std::string> out;
  for (int i = 0; i < kStageCount; ++i) {
    const int visits = state.stage_iterations[static_cast<std::size_t>(i)];
    if (visits > soft_cap)
      out.push_back("Stage " + std::string(kStageRoman[static_cast<std::size_t>(i)]) + " has spiralled " +
                    std::to_string(visits) + " times (soft cap " + std::to_string(soft_cap) + ")");
  }
  return out;
}

}  // namespace kv::lifecycle
