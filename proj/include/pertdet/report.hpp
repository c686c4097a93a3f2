#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pertdet/types.hpp"

namespace pertdet {

/// Relative slack applied to every bound comparison.
inline constexpr double kBoundSlack = 1e-9;

/// One verification record: `observed` must not exceed `bound_value`.
struct BoundReport {
    std::string bound_id;
    std::vector<std::pair<std::string, std::string>> inputs;
    double bound_value = 0;
    double observed = 0;
    double margin = 0;
    bool pass = false;
    std::vector<std::string> warnings;

    BoundReport& with(std::string key, double value);
    BoundReport& with(std::string key, cplx value);
    BoundReport& with(std::string key, std::string value);
};

/// Builds a report with margin = bound - observed and
/// pass = observed <= bound * (1 + slack).
BoundReport make_report(std::string bound_id, double bound_value, double observed,
                        double slack = kBoundSlack);

/// Round-trip decimal form used for every number in reports.
std::string format_double(double x);

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);

void write_csv(std::ostream& out, const std::vector<BoundReport>& reports);
void write_json(std::ostream& out, const std::vector<BoundReport>& reports);
void emit_report(const std::vector<BoundReport>& reports, ReportFormat format,
                 const std::filesystem::path& path);

std::size_t count_failures(const std::vector<BoundReport>& reports);

}  // namespace pertdet
