#pragma once

#include "lpq/harness.hpp"

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace lpq {

/// inequality_id,density_label,n,q,r,alpha,lhs,rhs,slack,lhs_error,rhs_error,satisfied,status
inline constexpr const char* kReportHeader =
    "inequality_id,density_label,n,q,r,alpha,lhs,rhs,slack,lhs_error,rhs_error,satisfied,status";

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

/// One CSV line (no newline). Unused parameters are empty; failed rows leave
/// the numeric fields and `satisfied` empty and carry "error:<message>" as status.
std::string format_row(const SweepRow& row);
std::string format_row(const BoundCertificate& cert);

void write_csv(const SweepReport& report, std::ostream& out);
void write_csv_file(const SweepReport& report, const std::string& path);

nlohmann::json summary_json(const SweepReport& report);
void write_summary_file(const SweepReport& report, const std::string& path);

/// Per-inequality slack matrices: rows are (density_label, alpha), columns are
/// (q, r) pairs in first-seen order. One file slack_<id>.csv per inequality.
void write_plot_data(const SweepReport& report, const std::string& dir);

} // namespace lpq
