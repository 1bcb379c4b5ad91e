#include "kv/checklist.hpp"

#include <array>
#include <string>

#include "kv/errors.hpp"

namespace kv::lifecycle {
namespace {

constexpr StepAddress kv11{StageId::I, 1};
constexpr StepAddress kv12{StageId::I, 2};
constexpr StepAddress kv13{StageId::I, 3};
constexpr StepAddress kv14{StageId::I, 4};

const std::array<ChecklistItem, 11> kExcelItems = {{
    {1, "Write a statement of objective", kv11},
    {2, "Determine requirements and data inputs", kv12},
    {3, "Derive calculations", kv12},
    {4, "Determine the user interface", kv13},
    {5, "Prototype calculations", kv13},
    {6, "Test for user requirements", kv14},
    {7, "Complete a vision and scope document", kv11},
    {8, "Compare alternative quantitative methods", kv12},
    {9, "Build a consolidated prototype", kv13},
    {10, "Test results against calculations and scope", kv14},
    {11, "Deliver the prototype to the end users", IntraStageGateBinding{}},
}};

const std::array<ChecklistItem, 6> kCrossoverItems = {{
    {1, "Expand the vision and scope document", kv11},
    {2, "Convert cell logic to user-defined functions", kv13},
    {3, "Lock controls and spreadsheet editing", kv13},
    {4, "Deliver the revised product", kv14},
    {5, "Reevaluate the usefulness of the product", GateBinding{1}},
    {6, "Hand the package to the programming team", HandoffBinding{}},
}};

const ChecklistTemplate kExcel{TemplateId::ExcelPrototypeLoop, "ExcelPrototypeLoop", kExcelItems};
const ChecklistTemplate kCrossover{TemplateId::CrossoverLoop, "CrossoverLoop", kCrossoverItems};

}  // namespace

std::string describe(const ChecklistBinding& binding) {
  struct Visitor {
    std::string operator()(const StepAddress& a) const { return a.to_string(); }
    std::string operator()(const IntraStageGateBinding&) const { return "intra-stage gate"; }
    std::string operator()(const GateBinding& g) const { return "Gate " + std::to_string(g.gate); }
    std::string operator()(const HandoffBinding&) const { return "handoff"; }
  };
  return std::visit(Visitor{}, binding);
}

const ChecklistTemplate& checklist_template(TemplateId id) {
  return id == TemplateId::ExcelPrototypeLoop ? kExcel : kCrossover;
}

std::string_view template_name(TemplateId id) { return checklist_template(id).name; }

TemplateId parse_template(std::string_view text) {
  if (text == "ExcelPrototypeLoop" || text == "excel") return TemplateId::ExcelPrototypeLoop;
  if (text == "CrossoverLoop" || text == "crossover") return TemplateId::CrossoverLoop;
  throw ValidationError("template", "unknown checklist template '" + std::string(text) + "'");
}

const ChecklistItem& checklist_item(TemplateId id, int item_id) {
  for (const auto& item : checklist_template(id).items)
    if (item.id == item_id) return item;
  throw ValidationError("item", "no item " + std::to_string(item_id) + " in " +
                                    std::string(template_name(id)));
}

bool binding_matches(const ChecklistBinding& binding, const Position& position) {
  if (const auto* address = std::get_if<StepAddress>(&binding)) {
    const auto* at = std::get_if<AtStep>(&position);
    return at != nullptr && at->address == *address;
  }
  if (std::holds_alternative<IntraStageGateBinding>(binding))
    return std::holds_alternative<AtIntraStageGate>(position);
  if (const auto* gate = std::get_if<GateBinding>(&binding)) {
    const auto* at = std::get_if<AtGate>(&position);
    return at != nullptr && at->gate == gate->gate;
  }
  return !std::holds_alternative<Held>(position) && !std::holds_alternative<Killed>(position);
}

std::vector<PendingItem> pending_items(const ProjectState& state) {
  std::vector<PendingItem> pending;
  for (const TemplateId id : {TemplateId::ExcelPrototypeLoop, TemplateId::CrossoverLoop})
    for (const auto& item : checklist_template(id).items)
      if (!state.checklist_done.contains({id, item.id})) pending.push_back({id, &item});
  return pending;
}

}  // namespace kv::lifecycle
