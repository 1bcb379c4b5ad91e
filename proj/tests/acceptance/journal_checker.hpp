#pragma once

// Whole-journal property checks that read only the event stream and never
// call the engine's transition rules.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>

#include "kv/lifecycle.hpp"

namespace kv::acceptance {

struct Violation {
  std::string property;
  std::uint64_t seq = 0;
  std::string detail;
};

inline std::optional<Violation> check_journal(std::span<const lifecycle::JournalEvent> events) {
  using namespace lifecycle;
  std::set<int> go_gates;  // gates passed with Go in the current cycle
  std::optional<int> held_gate;
  bool killed = false;
  std::uint64_t expected_seq = 1;

  for (const auto& e : events) {
    if (e.seq != expected_seq) return Violation{"gapless seq", e.seq, "expected " + std::to_string(expected_seq)};
    ++expected_seq;
    if (killed) return Violation{"kill absorbency", e.seq, "event after Kill"};

    if (const auto* step = std::get_if<StepCompleted>(&e.kind)) {
      const int stage = stage_number(step->address.stage);
      if (stage >= 2 && !go_gates.contains(stage - 1))
        return Violation{"gate precedence", e.seq, "step in stage " + std::to_string(stage) + " without Go"};
    }
    if (const auto* loop = std::get_if<LoopBack>(&e.kind)) {
      if (loop->from.stage != loop->to.stage) return Violation{"spiral containment", e.seq, "loop-back changed stage"};
    }
    const bool step_like = std::holds_alternative<StepCompleted>(e.kind) || std::holds_alternative<LoopBack>(e.kind) ||
                           std::holds_alternative<ChecklistItemDone>(e.kind);
    if (held_gate && step_like) return Violation{"hold exclusivity", e.seq, "work recorded while held"};
    if (const auto* resumed = std::get_if<Resumed>(&e.kind)) {
      if (held_gate != resumed->gate) return Violation{"hold exclusivity", e.seq, "resume without matching hold"};
      held_gate.reset();
    }
    if (const auto* decided = std::get_if<GateDecided>(&e.kind)) {
      if (!decided->criteria.complete()) return Violation{"criteria completeness", e.seq, "missing criteria"};
      if (const auto* ret = std::get_if<Return>(&decided->decision)) {
        if (stage_number(ret->target) >= decided->gate)
          return Violation{"return monotonicity", e.seq, "target not earlier than gate"};
      }
      if (std::holds_alternative<Go>(decided->decision)) go_gates.insert(decided->gate);
      if (std::holds_alternative<Hold>(decided->decision)) held_gate = decided->gate;
      if (std::holds_alternative<Kill>(decided->decision)) killed = true;
    }
    if (std::holds_alternative<CycleRestarted>(e.kind)) go_gates.clear();
  }
  return std::nullopt;
}

}  // namespace kv::acceptance
