#ifndef OLSATTN_SERIALIZE_HPP
#define OLSATTN_SERIALIZE_HPP

#include <string>
#include <vector>

#include "olsattn/experiments.hpp"
#include "olsattn/matrix.hpp"
#include "olsattn/memory_shift.hpp"
#include "olsattn/trainer.hpp"

namespace olsattn {

/// Shortest decimal string that round-trips through double. Never uses
/// locale; infinities and NaN render as inf/-inf/nan (they only appear in
/// diagnostic fields).
std::string format_double(double value);

/// CSV files share the layout: one versioned comment line
/// `# ols-attention v1, command=<cmd>, seed=<seed>`, one column-name line,
/// then data rows. LF line endings throughout.
std::string trace_to_csv(const TrainingTrace& trace);
std::string trace_to_json(const TrainingTrace& trace);

std::string equiv_to_csv(const std::vector<EquivTrial>& rows, const EquivSweepConfig& config);
std::string equiv_to_json(const std::vector<EquivTrial>& rows, const EquivSweepConfig& config);

std::string shift_to_csv(const std::vector<ShiftSweepRow>& rows, const ShiftSweepConfig& config);
std::string shift_to_json(const std::vector<ShiftSweepRow>& rows, const ShiftSweepConfig& config);

/// Single-report form with full matrices (nested row arrays).
std::string shift_report_to_json(const ShiftReport& report);

/// Writes content to path, creating parent directories is NOT attempted;
/// throws std::runtime_error on failure to open.
void write_file(const std::string& path, const std::string& content);

}  // namespace olsattn

#endif
