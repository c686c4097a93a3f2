#include "pertdet/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "pertdet/errors.hpp"

namespace pertdet {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

BoundReport& BoundReport::with(std::string key, double value) {
    inputs.emplace_back(std::move(key), format_double(value));
    return *this;
}

BoundReport& BoundReport::with(std::string key, cplx value) {
    inputs.emplace_back(std::move(key),
                        "[" + format_double(value.real()) + "," + format_double(value.imag()) + "]");
    return *this;
}

BoundReport& BoundReport::with(std::string key, std::string value) {
    inputs.emplace_back(std::move(key), std::move(value));
    return *this;
}

BoundReport make_report(std::string bound_id, double bound_value, double observed, double slack) {
    BoundReport r;
    r.bound_id = std::move(bound_id);
    r.bound_value = bound_value;
    r.observed = observed;
    r.pass = !std::isnan(observed) && !std::isnan(bound_value) &&
             observed <= bound_value * (1.0 + slack);
    double margin = bound_value - observed;
    if (!std::isfinite(margin)) {
        r.warnings.emplace_back("margin not finite; clamped");
        const double big = std::numeric_limits<double>::max();
        margin = std::isnan(margin) ? 0.0 : (margin > 0 ? big : -big);
    }
    r.margin = margin;
    return r;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw DomainError("unknown report format '" + name + "' (expected csv or json)");
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BoundReport>& reports) {
    out << "bound_id,inputs,bound_value,observed,margin,pass\n";
    for (const auto& r : reports) {
        std::string flat;
        for (const auto& [k, v] : r.inputs) {
            if (!flat.empty()) flat += ';';
            flat += k + '=' + v;
        }
        out << csv_field(r.bound_id) << ',' << csv_field(flat) << ',' << format_double(r.bound_value)
            << ',' << format_double(r.observed) << ',' << format_double(r.margin) << ','
            << (r.pass ? "true" : "false") << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<BoundReport>& reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.inputs) inputs[k] = v;
        nlohmann::ordered_json rec;
        rec["bound_id"] = r.bound_id;
        rec["inputs"] = std::move(inputs);
        rec["bound_value"] = r.bound_value;
        rec["observed"] = r.observed;
        rec["margin"] = r.margin;
        rec["pass"] = r.pass;
        rec["warnings"] = r.warnings;
        arr.push_back(std::move(rec));
    }
    out << arr.dump(2) << '\n';
}

void emit_report(const std::vector<BoundReport>& reports, ReportFormat format,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write report to " + path.string());
    if (format == ReportFormat::csv)
        write_csv(out, reports);
    else
        write_json(out, reports);
    if (!out) throw Error("error while writing " + path.string());
}

std::size_t count_failures(const std::vector<BoundReport>& reports) {
    std::size_t n = 0;
    for (const auto& r : reports) n += r.pass ? 0 : 1;
    return n;
}

}  // namespace pertdet
