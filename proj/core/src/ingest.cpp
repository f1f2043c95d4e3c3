#include "longevity/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "longevity/errors.hpp"

namespace longevity {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double quotes group fields; "" inside quotes is a
// literal quote.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quote", line_no);
    fields.push_back(trim(current));
    return fields;
}

std::optional<double> to_number(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

double require_number(const std::string& text, const std::string& column, std::size_t line_no) {
    const auto value = to_number(text);
    if (!value || !std::isfinite(*value)) {
        throw ParseError("line " + std::to_string(line_no) + ": column '" + column +
                             "' is not a number: '" + text + "'",
                         line_no);
    }
    return *value;
}

std::string format6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double round6(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format6(v));
}

std::string strip_comment(const std::string& line) {
    std::string s = trim(line);
    s.erase(0, 1);  // the '#'
    return trim(s);
}

AgeWindow parse_window_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw ValidationError("config: fit_window must be [lo, hi]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

RateScale parse_rate_scale(const std::string& text) {
    if (text == "per-unit" || text == "per_unit") return RateScale::per_unit;
    if (text == "per-1000" || text == "per_1000") return RateScale::per_1000;
    throw ValidationError("unknown rate scale '" + text + "' (expected per-unit or per-1000)");
}

OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw ValidationError("unknown format '" + text + "' (expected csv or json)");
}

void validate(const RunConfig& config) {
    if (!std::isfinite(config.r) || config.r < 0.0) {
        throw ValidationError("config: r must be >= 0");
    }
    if (config.gammas.empty()) throw ValidationError("config: at least one gamma required");
    for (double gamma : config.gammas) {
        if (!std::isfinite(gamma) || !(gamma > 0.0)) {
            throw ValidationError("config: gamma values must be > 0");
        }
    }
    if (config.group_percentile < 1 || config.group_percentile > 100) {
        throw ValidationError("config: group_percentile must lie in [1, 100]");
    }
    if (!std::isfinite(config.lambda) || config.lambda < 0.0) {
        throw ValidationError("config: lambda must be >= 0");
    }
    if (config.fit_window && !(config.fit_window->hi > config.fit_window->lo)) {
        throw ValidationError("config: fit_window must satisfy lo < hi");
    }
}

RunConfig parse_run_config(const std::string& json_text) {
    RunConfig config;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), 0);
    }
    if (!j.is_object()) throw ValidationError("config: top level must be an object");
    try {
        if (j.contains("r")) config.r = j.at("r").get<double>();
        if (j.contains("gamma")) {
            const auto& g = j.at("gamma");
            config.gammas = g.is_array() ? g.get<std::vector<double>>()
                                         : std::vector<double>{g.get<double>()};
        }
        if (j.contains("lambda")) config.lambda = j.at("lambda").get<double>();
        if (j.contains("group_percentile")) {
            config.group_percentile = j.at("group_percentile").get<int>();
        }
        if (j.contains("format")) {
            config.format = parse_output_format(j.at("format").get<std::string>());
        }
        if (j.contains("x")) config.x = j.at("x").get<double>();
        if (j.contains("rate_scale")) {
            config.rate_scale = parse_rate_scale(j.at("rate_scale").get<std::string>());
        }
        if (j.contains("fit_window")) config.fit_window = parse_window_json(j.at("fit_window"));
    } catch (const json::type_error& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    validate(config);
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path, path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

LoadedDataset parse_mortality_csv(std::istream& in, const DatasetConfig& config) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        header = split_csv(t, line_no);
        break;
    }
    if (header.empty()) throw ParseError("mortality CSV: missing header row", line_no);
    if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) {
        header.front().erase(0, 3);
    }

    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ValidationError("mortality CSV: required column '" + name + "' missing");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t gender_col = column(config.gender_column);
    const std::size_t pct_col = column(config.percentile_column);
    const std::size_t age_col = column(config.age_column);
    const std::size_t q_col = column(config.q_column);
    const double scale = config.rate_scale == RateScale::per_1000 ? 1e-3 : 1.0;

    LoadedDataset out;
    std::map<std::pair<Gender, int>, std::map<double, double>> grouped;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = split_csv(t, line_no);
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        Gender gender;
        try {
            gender = parse_gender(fields[gender_col]);
        } catch (const ValidationError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        const double pct = require_number(fields[pct_col], config.percentile_column, line_no);
        if (pct != std::floor(pct) || pct < 1.0 || pct > 100.0) {
            throw ParseError("line " + std::to_string(line_no) +
                                 ": percentile must be an integer in [1, 100]",
                             line_no);
        }
        const double age = require_number(fields[age_col], config.age_column, line_no);
        const double q = require_number(fields[q_col], config.q_column, line_no) * scale;
        if (!(q >= 0.0 && q < 1.0)) {
            out.rejected.push_back({line_no, "q=" + format6(q) + " outside [0, 1) after scaling"});
            continue;
        }
        const int percentile = static_cast<int>(pct);
        auto& rows = grouped[{gender, percentile}];
        if (!rows.emplace(age, q).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate row (" +
                                  to_string(gender) + ", " + std::to_string(percentile) +
                                  ", age " + format6(age) + ")");
        }
    }

    for (const auto& [key, rows] : grouped) {
        MortalityObservations obs;
        obs.gender = key.first;
        obs.percentile = key.second;
        for (const auto& [age, q] : rows) obs.rows.push_back({age, q});
        out.cohorts.push_back(std::move(obs));
    }
    return out;
}

LoadedDataset load_mortality_csv(const DatasetConfig& config) {
    std::ifstream in(config.path);
    if (!in) throw IoError("cannot open mortality file " + config.path, config.path);
    return parse_mortality_csv(in, config);
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> columns{
        "percentile", "gender",         "h65",           "g",
        "m",          "b",              "e_t65",         "sd_t65",
        "covol",      "annuity_factor", "delta_individual", "delta_group",
        "wtp_individual", "wtp_group"};
    return columns;
}

namespace {

std::vector<double ReportRow::*> numeric_fields() {
    return {&ReportRow::h65,          &ReportRow::g,
            &ReportRow::m,            &ReportRow::b,
            &ReportRow::e_t65,        &ReportRow::sd_t65,
            &ReportRow::covol,        &ReportRow::annuity_factor,
            &ReportRow::delta_individual, &ReportRow::delta_group,
            &ReportRow::wtp_individual,   &ReportRow::wtp_group};
}

}  // namespace

std::string write_report(const Report& report, OutputFormat format) {
    if (report.rows.empty()) throw ValidationError("write_report: no rows to write");
    const auto& columns = report_columns();
    const auto fields = numeric_fields();

    if (format == OutputFormat::csv) {
        std::ostringstream os;
        for (const auto& note : report.notes) os << "# " << note << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& row : report.rows) {
            os << row.percentile << ',' << to_string(row.gender);
            for (auto field : fields) os << ',' << format6(row.*field);
            os << '\n';
        }
        return os.str();
    }

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json j;
        j["percentile"] = row.percentile;
        j["gender"] = to_string(row.gender);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const double v = row.*fields[i];
            if (std::isfinite(v)) {
                j[columns[i + 2]] = round6(v);
            } else {
                j[columns[i + 2]] = nullptr;
            }
        }
        rows.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["notes"] = report.notes;
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_report_file(const Report& report, OutputFormat format, const std::string& path) {
    const std::string text = write_report(report, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + path, path);
    out << text;
    if (!out) throw IoError("write failed for " + path, path);
}

Report parse_report(const std::string& text, OutputFormat format) {
    const auto& columns = report_columns();
    const auto fields = numeric_fields();
    Report report;

    if (format == OutputFormat::json) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("report: ") + e.what(), 0);
        }
        try {
            if (doc.contains("notes")) report.notes = doc.at("notes").get<std::vector<std::string>>();
            for (const auto& j : doc.at("rows")) {
                ReportRow row;
                row.percentile = j.at("percentile").get<int>();
                row.gender = parse_gender(j.at("gender").get<std::string>());
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    const auto& v = j.at(columns[i + 2]);
                    row.*fields[i] =
                        v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
                }
                report.rows.push_back(row);
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("report: ") + e.what(), 0);
        }
        return report;
    }

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (!have_header) report.notes.push_back(strip_comment(t));
            continue;
        }
        const auto cells = split_csv(t, line_no);
        if (!have_header) {
            if (cells != columns) throw ParseError("report: unexpected header", line_no);
            have_header = true;
            continue;
        }
        if (cells.size() != columns.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": wrong field count", line_no);
        }
        ReportRow row;
        row.percentile = static_cast<int>(require_number(cells[0], columns[0], line_no));
        row.gender = parse_gender(cells[1]);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto v = to_number(cells[i + 2]);
            if (!v) {
                if (cells[i + 2] == "nan") {
                    row.*fields[i] = std::numeric_limits<double>::quiet_NaN();
                    continue;
                }
                throw ParseError("line " + std::to_string(line_no) + ": bad number in column " +
                                     columns[i + 2],
                                 line_no);
            }
            row.*fields[i] = *v;
        }
        report.rows.push_back(row);
    }
    if (!have_header) throw ParseError("report: missing header", line_no);
    return report;
}

}  // namespace longevity
