#pragma once

#include <ostream>

#include "kv/harness.hpp"

namespace kv::harness {

std::string_view mode_name(ReportMode mode);  // "golden-expected" | "dual-path"

/// Human-readable report ending in an "N/M passed" line.
void write_table(std::ostream& out, const RegressionReport& report);
/// One JSON record per case followed by a summary record.
void write_records(std::ostream& out, const RegressionReport& report);

void write_table(std::ostream& out, const ReplayStats& stats);
/// One JSON record per tape record followed by a summary record.
void write_records(std::ostream& out, const ReplayStats& stats);

}  // namespace kv::harness
