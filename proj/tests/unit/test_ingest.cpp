#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "longevity/errors.hpp"
#include "longevity/ingest.hpp"
#include "longevity/report.hpp"

using namespace longevity;

namespace {

const std::string kDataDir = LONGEVITY_TEST_DATA_DIR;

LoadedDataset parse(const std::string& text, const DatasetConfig& config = {}) {
    std::istringstream in(text);
    return parse_mortality_csv(in, config);
}

Report sample_report() {
    Report report;
    report.notes = {"r=0.03 gamma=3 age=65", "sample"};
    ReportRow a;
    a.percentile = 1;
    a.gender = Gender::female;
    a.h65 = 0.0164;
    a.g = 0.0529;
    a.m = 78.123456789;
    a.b = 18.9035916824;
    a.e_t65 = 22.7512;
    a.sd_t65 = 12.9;
    a.covol = 0.567301;
    a.annuity_factor = 15.2301;
    a.delta_individual = 0.621843;
    a.delta_group = 0.465211;
    a.wtp_individual = 0.383422;
    a.wtp_group = 0.317504;
    ReportRow b = a;
    b.percentile = 50;
    b.gender = Gender::male;
    b.delta_group = -0.0123456789;
    report.rows = {a, b};
    return report;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("longevity_test_" + name);
}

}  // namespace

TEST_CASE("three-row file in arbitrary order") {
    const LoadedDataset data = parse(
        "gender,percentile,age,q\n"
        "male,50,50,0.0029\n"
        "male,50,40,0.0012\n"
        "male,50,60,0.0073\n");
    REQUIRE(data.cohorts.size() == 1);
    const auto& rows = data.cohorts[0].rows;
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].age == 40.0);
    CHECK(rows[1].age == 50.0);
    CHECK(rows[2].age == 60.0);
    CHECK(rows[0].q == 0.0012);
    CHECK(data.cohorts[0].gender == Gender::male);
    CHECK(data.cohorts[0].percentile == 50);
    CHECK(data.rejected.empty());
}

TEST_CASE("cohorts are grouped and ordered") {
    const LoadedDataset data = parse(
        "gender,percentile,age,q\n"
        "female,10,40,0.002\n"
        "male,90,40,0.001\n"
        "male,5,40,0.004\n"
        "female,10,41,0.0021\n");
    REQUIRE(data.cohorts.size() == 3);
    CHECK(data.cohorts[0].gender == Gender::male);
    CHECK(data.cohorts[0].percentile == 5);
    CHECK(data.cohorts[1].percentile == 90);
    CHECK(data.cohorts[2].gender == Gender::female);
    CHECK(data.cohorts[2].rows.size() == 2);
}

TEST_CASE("rates per 1000 are rescaled") {
    DatasetConfig config;
    config.rate_scale = RateScale::per_1000;
    const LoadedDataset data = parse("gender,percentile,age,q\nmale,1,50,12.5\n", config);
    CHECK(data.cohorts.at(0).rows.at(0).q == doctest::Approx(0.0125).epsilon(1e-15));
}

TEST_CASE("duplicate rows are rejected") {
    try {
        parse("gender,percentile,age,q\nmale,50,40,0.001\nmale,50,40,0.002\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("duplicate row (male, 50, age 40)") != std::string::npos);
    }
}

TEST_CASE("malformed rows carry their line number") {
    try {
        parse("gender,percentile,age,q\nmale,50,40,0.001\nmale,50,41\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse("gender,percentile,age,q\nmale,50,forty,0.001\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("gender,percentile,age,q\nmartian,50,40,0.001\n"), ParseError);
    CHECK_THROWS_AS(parse("gender,percentile,age,q\nmale,50.5,40,0.001\n"), ParseError);
    CHECK_THROWS_AS(parse("gender,percentile,age,q\nmale,\"50,40,0.001\n"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("out-of-range rates are listed, not loaded") {
    const LoadedDataset data = parse(
        "gender,percentile,age,q\n"
        "male,50,40,0.001\n"
        "male,50,41,1.2\n"
        "male,50,42,-0.1\n"
        "male,50,43,0.0012\n");
    REQUIRE(data.rejected.size() == 2);
    CHECK(data.rejected[0].line == 3);
    CHECK(data.rejected[1].line == 4);
    CHECK(data.cohorts.at(0).rows.size() == 2);
}

TEST_CASE("comments, quoting and byte-order mark") {
    const LoadedDataset data = parse(
        "\xEF\xBB\xBFgender,percentile,age,q\n"
        "# a comment\n"
        "\"male\",50,40,0.001\r\n"
        "male,\"50\",41,0.0011\n");
    REQUIRE(data.cohorts.size() == 1);
    CHECK(data.cohorts[0].rows.size() == 2);
}

TEST_CASE("column mapping") {
    CHECK_THROWS_AS(parse("sex,percentile,age,q\nmale,50,40,0.001\n"), ValidationError);
    DatasetConfig config;
    config.gender_column = "sex";
    config.q_column = "death_rate";
    const LoadedDataset data =
        parse("age,sex,death_rate,percentile,extra\n40,female,0.001,20,x\n", config);
    REQUIRE(data.cohorts.size() == 1);
    CHECK(data.cohorts[0].gender == Gender::female);
    CHECK(data.cohorts[0].percentile == 20);
    CHECK(data.cohorts[0].rows[0].q == 0.001);
}

TEST_CASE("missing files") {
    DatasetConfig config;
    config.path = kDataDir + "/does_not_exist.csv";
    CHECK_THROWS_AS(load_mortality_csv(config), IoError);
    CHECK_THROWS_AS(load_run_config(kDataDir + "/does_not_exist.json"), IoError);
}

TEST_CASE("per-unit and per-1000 fixtures agree") {
    DatasetConfig unit;
    unit.path = kDataDir + "/synthetic_mortality.csv";
    DatasetConfig thousand;
    thousand.path = kDataDir + "/synthetic_mortality_per1000.csv";
    thousand.rate_scale = RateScale::per_1000;
    const LoadedDataset a = load_mortality_csv(unit);
    const LoadedDataset b = load_mortality_csv(thousand);
    REQUIRE(a.cohorts.size() == 26);
    REQUIRE(a.cohorts.size() == b.cohorts.size());
    for (std::size_t i = 0; i < a.cohorts.size(); ++i) {
        REQUIRE(a.cohorts[i].rows.size() == 24);
        REQUIRE(a.cohorts[i].rows.size() == b.cohorts[i].rows.size());
        for (std::size_t j = 0; j < a.cohorts[i].rows.size(); ++j) {
            const double qa = a.cohorts[i].rows[j].q;
            const double qb = b.cohorts[i].rows[j].q;
            CHECK(std::abs(qa - qb) <= 1e-15 * qa);
        }
    }
}

TEST_CASE("report columns") {
    const auto& columns = report_columns();
    REQUIRE(columns.size() == 14);
    CHECK(columns.front() == "percentile");
    CHECK(columns[1] == "gender");
    CHECK(columns[2] == "h65");
    CHECK(columns.back() == "wtp_group");
}

TEST_CASE("report round trip") {
    const Report report = sample_report();
    for (auto format : {OutputFormat::csv, OutputFormat::json}) {
        const std::string text = write_report(report, format);
        const Report back = parse_report(text, format);
        REQUIRE(back.rows.size() == report.rows.size());
        CHECK(back.notes == report.notes);
        for (std::size_t i = 0; i < back.rows.size(); ++i) {
            CHECK(back.rows[i].percentile == report.rows[i].percentile);
            CHECK(back.rows[i].gender == report.rows[i].gender);
            CHECK(back.rows[i].m == doctest::Approx(report.rows[i].m).epsilon(1e-6));
            CHECK(back.rows[i].delta_group ==
                  doctest::Approx(report.rows[i].delta_group).epsilon(1e-6));
        }
        // Values already at 6 digits survive unchanged.
        CHECK(write_report(back, format) == text);
    }
}

TEST_CASE("csv and json carry the same numbers") {
    const Report report = sample_report();
    const Report from_csv = parse_report(write_report(report, OutputFormat::csv), OutputFormat::csv);
    const Report from_json =
        parse_report(write_report(report, OutputFormat::json), OutputFormat::json);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(from_csv.rows[i].b == from_json.rows[i].b);
        CHECK(from_csv.rows[i].covol == from_json.rows[i].covol);
        CHECK(from_csv.rows[i].delta_group == from_json.rows[i].delta_group);
    }
}

TEST_CASE("report writing errors") {
    CHECK_THROWS_AS(write_report(Report{}, OutputFormat::csv), ValidationError);
    CHECK_THROWS_AS(write_report(Report{}, OutputFormat::json), ValidationError);
    CHECK_THROWS_AS(write_report_file(sample_report(), OutputFormat::csv,
                                      kDataDir + "/no_such_dir/out.csv"),
                    IoError);
    CHECK_THROWS_AS(parse_report("not,a,report\n", OutputFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_report("{", OutputFormat::json), ParseError);
}

TEST_CASE("report file output") {
    const auto path = temp_path("report.json");
    write_report_file(sample_report(), OutputFormat::json, path.string());
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == write_report(sample_report(), OutputFormat::json));
    std::filesystem::remove(path);
}

TEST_CASE("run configuration") {
    const RunConfig defaults = parse_run_config("{}");
    CHECK(defaults.r == 0.03);
    CHECK(defaults.gammas == std::vector<double>{3.0});
    CHECK(defaults.group_percentile == 50);

    const RunConfig config = parse_run_config(R"({
        "r": 0.02, "gamma": [2, 5], "lambda": 0.0001, "group_percentile": 40,
        "format": "json", "x": 70, "rate_scale": "per-1000", "fit_window": [45, 60]
    })");
    CHECK(config.r == 0.02);
    CHECK(config.gammas == std::vector<double>{2.0, 5.0});
    CHECK(config.lambda == 0.0001);
    CHECK(config.group_percentile == 40);
    CHECK(config.format == OutputFormat::json);
    CHECK(config.x == 70.0);
    CHECK(config.rate_scale == RateScale::per_1000);
    REQUIRE(config.fit_window.has_value());
    CHECK(config.fit_window->lo == 45.0);
    CHECK(parse_run_config(R"({"gamma": 4})").gammas == std::vector<double>{4.0});

    CHECK_THROWS_AS(parse_run_config(R"({"gamma": 0})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config(R"({"group_percentile": 101})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config(R"({"r": -0.01})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config(R"({"r": "high"})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config(R"({"format": "xml"})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config(R"({"fit_window": [60, 45]})"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("[1, 2]"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("{oops"), ParseError);

    const auto path = temp_path("config.json");
    {
        std::ofstream out(path);
        out << R"({"r": 0.04})";
    }
    CHECK(load_run_config(path.string()).r == 0.04);
    std::filesystem::remove(path);
}

TEST_CASE("enum parsing") {
    CHECK(parse_rate_scale("per-unit") == RateScale::per_unit);
    CHECK(parse_rate_scale("per-1000") == RateScale::per_1000);
    CHECK(parse_output_format("csv") == OutputFormat::csv);
    CHECK_THROWS_AS(parse_rate_scale("percent"), ValidationError);
}

TEST_CASE("pipeline on the synthetic dataset") {
    DatasetConfig dataset;
    dataset.path = kDataDir + "/synthetic_mortality.csv";
    const PipelineResult result = run_pipeline(load_mortality_csv(dataset), RunConfig{});
    CHECK(result.fits.size() == 26);
    CHECK(result.report.rows.size() == 26);
    REQUIRE(result.clam.size() == 2);
    for (const auto& row : result.report.rows) {
        CHECK(row.delta_individual > 0.0);
        CHECK(row.covol < 1.0);
        if (row.percentile == 50) CHECK(row.delta_individual == doctest::Approx(row.delta_group));
    }
    RunConfig bad;
    bad.group_percentile = 42;
    CHECK_THROWS_AS(run_pipeline(load_mortality_csv(dataset), bad), ValidationError);
}
