#ifndef AUTOHSIC_REPORT_IO_HPP
#define AUTOHSIC_REPORT_IO_HPP

#include <string>

#include "autohsic/residual_bootstrap.hpp"
#include "autohsic/simulation.hpp"

namespace autohsic {

// Machine-readable report serialization. Parsing an emitted document and
// re-serializing it reproduces the bytes exactly.

std::string serialize_report(const TestReport& report);
TestReport parse_report(const std::string& json_text);

std::string serialize_diagnostic(const DiagnosticReport& report);
DiagnosticReport parse_diagnostic(const std::string& json_text);

std::string serialize_table(const RejectionTable& table);
RejectionTable parse_table(const std::string& json_text);

/// One JSON object per table cell, newline-terminated (the record stream).
std::string table_records(const RejectionTable& table);

/// Aligned text rendering of a rejection table.
std::string format_table_text(const RejectionTable& table);

/// Human-readable test/diagnostic summaries for the CLI.
std::string format_report_text(const TestReport& report);
std::string format_diagnostic_text(const DiagnosticReport& report);

} // namespace autohsic

#endif
