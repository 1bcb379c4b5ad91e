#pragma once

// The two prototype-loop checklists and the K|V address each item belongs to.

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "kv/lifecycle.hpp"

namespace kv::lifecycle {

struct IntraStageGateBinding {
  bool operator==(const IntraStageGateBinding&) const = default;
};
struct GateBinding {
  int gate = 1;
  bool operator==(const GateBinding&) const = default;
};
/// Handoff of the finished package to a programming team; not tied to a step.
struct HandoffBinding {
  bool operator==(const HandoffBinding&) const = default;
};

using ChecklistBinding = std::variant<StepAddress, IntraStageGateBinding, GateBinding, HandoffBinding>;

std::string describe(const ChecklistBinding& binding);

struct ChecklistItem {
  int id;
  std::string_view title;
  ChecklistBinding binding;
};

struct ChecklistTemplate {
  TemplateId id;
  std::string_view name;
  std::span<const ChecklistItem> items;
};

const ChecklistTemplate& checklist_template(TemplateId id);
std::string_view template_name(TemplateId id);
/// Accepts the template name or the short forms "excel" / "crossover".
TemplateId parse_template(std::string_view text);
/// Throws ValidationError for an unknown item id.
const ChecklistItem& checklist_item(TemplateId id, int item_id);

/// Whether an item bound to `binding` may be marked at `position`.
bool binding_matches(const ChecklistBinding& binding, const Position& position);

struct PendingItem {
  TemplateId template_id;
  const ChecklistItem* item;
};

/// Items not yet marked in the current cycle, in template order.
std::vector<PendingItem> pending_items(const ProjectState& state);

}  // namespace kv::lifecycle
