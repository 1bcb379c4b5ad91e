#pragma once

// Event-sourced K|V lifecycle: four stages of four steps each. Steps spiral
// within a stage; stages change only through Gates 1-3. Stage I ends in an
// intra-stage gate before Gate 1, Stage IV ends at the cycle boundary.
//
// Every mutation is expressed as a JournalEvent and applied through
// apply_event(), so the live path and replay share one set of rules.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kv/timestamp.hpp"

namespace kv::lifecycle {

enum class StageId { I = 1, II = 2, III = 3, IV = 4 };

inline constexpr int kStageCount = 4;
inline constexpr int kStepsPerStage = 4;
inline constexpr int kGateCount = 3;

constexpr int stage_number(StageId s) { return static_cast<int>(s); }
StageId stage_from_number(int number);  // throws ValidationError outside 1..4
std::string_view stage_roman(StageId s);
std::string_view stage_name(StageId s);
std::string_view step_name(StageId s, int step);
/// Accepts "I".."IV" or "1".."4".
StageId parse_stage(std::string_view text);

struct StepAddress {
  StageId stage = StageId::I;
  int step = 1;

  bool operator==(const StepAddress&) const = default;
  /// "K|V 1.3"
  std::string to_string() const;
};

// Gate outcomes.
struct Go {
  bool operator==(const Go&) const = default;
};
struct Kill {
  bool operator==(const Kill&) const = default;
};
struct Hold {
  bool operator==(const Hold&) const = default;
};
struct Return {
  StageId target = StageId::I;
  bool operator==(const Return&) const = default;
};
using GateDecision = std::variant<Go, Kill, Hold, Return>;

std::string to_string(const GateDecision& decision);

enum class Criterion {
  DeliverablesCheck,
  MinimumStandards,
  ProfitabilityPotential,
  CompetitiveAdvantage,
  TechnicalFeasibility,
  Scalability,
  Risk,
};

inline constexpr std::array<Criterion, 7> kAllCriteria = {
    Criterion::DeliverablesCheck,    Criterion::MinimumStandards,     Criterion::ProfitabilityPotential,
    Criterion::CompetitiveAdvantage, Criterion::TechnicalFeasibility, Criterion::Scalability,
    Criterion::Risk,
};

/// snake_case key, e.g. "profitability_potential".
std::string_view criterion_key(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view key);

struct CriterionScore {
  int score = 0;  // ordinal 1..5
  std::string note;

  bool operator==(const CriterionScore&) const = default;
};

class GateCriteria {
 public:
  static constexpr int kMinScore = 1;
  static constexpr int kMaxScore = 5;

  void set(Criterion c, int score, std::string note = {});
  const std::optional<CriterionScore>& get(Criterion c) const;
  std::vector<Criterion> missing() const;
  bool complete() const { return missing().empty(); }
  /// Throws ValidationError if any entry is missing or out of range.
  void validate() const;

  bool operator==(const GateCriteria&) const = default;

 private:
  std::array<std::optional<CriterionScore>, kAllCriteria.size()> entries_{};
};

// Project positions.
struct AtStep {
  StepAddress address;
  int iteration = 1;  // spiral pass through the current stage
  bool operator==(const AtStep&) const = default;
};
struct AtGate {
  int gate = 1;
  bool operator==(const AtGate&) const = default;
};
struct AtIntraStageGate {
  bool operator==(const AtIntraStageGate&) const = default;
};
struct AtCycleEnd {
  bool operator==(const AtCycleEnd&) const = default;
};
struct Held {
  int gate = 1;
  bool operator==(const Held&) const = default;
};
struct Killed {
  bool operator==(const Killed&) const = default;
};
using Position = std::variant<AtStep, AtGate, AtIntraStageGate, AtCycleEnd, Held, Killed>;

std::string describe(const Position& position);

enum class TemplateId { ExcelPrototypeLoop, CrossoverLoop };

// Event payloads.
struct ProjectCreated {
  std::string project_id;
  std::string name;
  bool operator==(const ProjectCreated&) const = default;
};
struct StepCompleted {
  StepAddress address;
  std::string note;
  std::optional<std::string> artifact_digest;
  bool operator==(const StepCompleted&) const = default;
};
struct LoopBack {
  StepAddress from;
  StepAddress to;
  bool operator==(const LoopBack&) const = default;
};
struct GateOpened {
  int gate = 1;
  bool operator==(const GateOpened&) const = default;
};
struct GateDecided {
  int gate = 1;
  GateDecision decision;
  GateCriteria criteria;
  bool operator==(const GateDecided&) const = default;
};
struct IntraStageGateDecided {
  std::optional<int> loop_back_to;  // nullopt: proceed to Gate 1
  bool operator==(const IntraStageGateDecided&) const = default;
};
struct ChecklistItemDone {
  TemplateId template_id = TemplateId::ExcelPrototypeLoop;
  int item_id = 0;
  std::string note;
  bool operator==(const ChecklistItemDone&) const = default;
};
struct Resumed {
  int gate = 1;
  bool operator==(const Resumed&) const = default;
};
struct CycleRestarted {
  bool operator==(const CycleRestarted&) const = default;
};

using EventKind = std::variant<ProjectCreated, StepCompleted, LoopBack, GateOpened, GateDecided,
                               IntraStageGateDecided, ChecklistItemDone, Resumed, CycleRestarted>;

std::string_view kind_name(const EventKind& kind);

struct JournalEvent {
  std::uint64_t seq = 0;
  Timestamp timestamp{};
  EventKind kind;

  bool operator==(const JournalEvent&) const = default;
};

struct ProjectState {
  std::string project_id;
  std::string name;
  int cycle = 1;
  Position position = AtStep{};
  std::uint64_t last_seq = 0;
  /// Highest spiral iteration reached per stage in the current cycle (0 = not visited).
  std::array<int, kStageCount> stage_iterations{};
  std::set<std::pair<TemplateId, int>> checklist_done;

  bool operator==(const ProjectState&) const = default;
};

/// The state a ProjectCreated event establishes. Throws ValidationError on
/// an empty name or malformed id.
ProjectState initial_state(const JournalEvent& created);

/// One transition. Throws InvalidTransition, DuplicateError, ValidationError
/// or ReplayError (sequence gap) and leaves `state` untouched.
ProjectState apply_event(const ProjectState& state, const JournalEvent& event);

/// Left fold of a whole journal; any failure becomes a ReplayError citing
/// the offending seq.
ProjectState replay_journal(std::span<const JournalEvent> events);

/// Throws ValidationError unless the id is non-empty [A-Za-z0-9._-].
void validate_project_id(std::string_view id);

/// Live handle: the current state plus the journal that produced it.
class Project {
 public:
  using Clock = std::function<Timestamp()>;

  static Project create(std::string name, std::string project_id, Clock clock = now_utc);
  static Project from_journal(std::vector<JournalEvent> events, Clock clock = now_utc);

  const ProjectState& state() const noexcept { return state_; }
  const std::vector<JournalEvent>& journal() const noexcept { return journal_; }

  // Each mutator appends exactly one event and returns it.
  const JournalEvent& complete_step(std::string note, std::optional<std::string> artifact_digest = {});
  const JournalEvent& loop_back(int target_step);
  const JournalEvent& decide_intra_stage_gate(std::optional<int> loop_back_to);
  const JournalEvent& open_gate(int gate);
  const JournalEvent& decide_gate(int gate, GateDecision decision, GateCriteria criteria);
  const JournalEvent& resume();
  const JournalEvent& restart_cycle();
  const JournalEvent& mark_checklist_item(TemplateId template_id, int item_id, std::string note = {});

 private:
  Project(ProjectState state, std::vector<JournalEvent> journal, Clock clock);
  const JournalEvent& commit(EventKind kind);

  ProjectState state_;
  std::vector<JournalEvent> journal_;
  Clock clock_;
};

inline constexpr int kDefaultSpiralSoftCap = 10;

int current_iteration(const ProjectState& state);
/// Soft-cap warnings for status output; never blocks a transition.
std::vector<std::string> spiral_warnings(const ProjectState& state, int soft_cap = kDefaultSpiralSoftCap);

}  // namespace kv::lifecycle
