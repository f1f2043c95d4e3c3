#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "longevity/calibrate.hpp"

namespace longevity {

enum class RateScale { per_unit, per_1000 };
enum class OutputFormat { csv, json };

RateScale parse_rate_scale(const std::string& text);  // "per-unit" | "per-1000"
OutputFormat parse_output_format(const std::string& text);  // "csv" | "json"

struct DatasetConfig {
    std::string path;
    RateScale rate_scale = RateScale::per_unit;
    std::string gender_column = "gender";
    std::string percentile_column = "percentile";
    std::string age_column = "age";
    std::string q_column = "q";
    std::optional<AgeWindow> fit_window;
};

struct RunConfig {
    double r = 0.03;
    std::vector<double> gammas{3.0};
    double lambda = 0.0;
    int group_percentile = 50;
    OutputFormat format = OutputFormat::csv;
    double x = 65.0;
    RateScale rate_scale = RateScale::per_unit;
    std::optional<AgeWindow> fit_window;
};

// Throws ValidationError on gamma <= 0, group percentile outside [1, 100],
// or r < 0.
void validate(const RunConfig& config);

// Keys: r, gamma (number or array), lambda, group_percentile, format, x,
// rate_scale, fit_window ([lo, hi]). Missing keys keep their defaults.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct LoadedDataset {
    std::vector<MortalityObservations> cohorts;  // ordered by (gender, percentile)
    std::vector<RejectedRow> rejected;
};

// CSV with a header row. Malformed rows raise ParseError with the line
// number; rates outside [0, 1) after scaling are dropped and listed in
// `rejected`; duplicate (gender, percentile, age) raises ValidationError.
LoadedDataset load_mortality_csv(const DatasetConfig& config);
LoadedDataset parse_mortality_csv(std::istream& in, const DatasetConfig& config);

struct ReportRow {
    int percentile = 0;
    Gender gender = Gender::unisex;
    double h65 = 0.0;
    double g = 0.0;
    double m = 0.0;
    double b = 0.0;
    double e_t65 = 0.0;
    double sd_t65 = 0.0;
    double covol = 0.0;
    double annuity_factor = 0.0;
    double delta_individual = 0.0;
    double delta_group = 0.0;
    double wtp_individual = 0.0;
    double wtp_group = 0.0;
};

struct Report {
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;  // '#' lines in CSV, "notes" array in JSON
};

const std::vector<std::string>& report_columns();

// Numbers carry 6 significant digits. Throws ValidationError on empty rows.
std::string write_report(const Report& report, OutputFormat format);
void write_report_file(const Report& report, OutputFormat format, const std::string& path);
Report parse_report(const std::string& text, OutputFormat format);

}  // namespace longevity
