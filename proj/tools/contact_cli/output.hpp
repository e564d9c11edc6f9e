#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "contact/contact.hpp"

namespace contact::cli {

// 17 significant digits (exact round trip), never locale dependent.
std::string format_double(double v);

// Extra per-sample column, appended after H.
struct ExtraColumn {
  std::string name;
  std::function<double(const ContactState&)> value;
};

// Column names t, q1..qn, p1..pn, s, H followed by the extras.
std::vector<std::string> sample_columns(Eigen::Index dim,
                                        const std::vector<ExtraColumn>& extras = {});

struct RunMetadata {
  RunStatus status = RunStatus::completed;
  std::string message;
  std::uint64_t steps = 0;
  EvalCounters counters;
  double wall_time_s = 0.0;
};

// Writes the samples then the metadata. CSV puts metadata in trailing
// '#' lines; JSONL puts it in one final record under the key "meta".
void write_trajectory(std::ostream& out, const std::string& format,
                      const SeparableContactModel& model,
                      const std::vector<ContactState>& samples,
                      const RunMetadata& meta,
                      const std::vector<ExtraColumn>& extras = {});

// Plain rows of named numeric/text fields, as CSV or JSONL.
using Record = std::vector<std::pair<std::string, std::string>>;
void write_records(std::ostream& out, const std::string& format,
                   const std::vector<Record>& records);

}  // namespace contact::cli
