#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "longevity/calibrate.hpp"
#include "longevity/cohorts.hpp"
#include "longevity/errors.hpp"
#include "longevity/ingest.hpp"
#include "longevity/mortality.hpp"
#include "longevity/pooling.hpp"
#include "longevity/pricing.hpp"
#include "longevity/report.hpp"

namespace longevity::cli {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Semantic usage problems found after parsing (missing parameter pairs, ...).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool given(double v) { return !std::isnan(v); }

// ---------------------------------------------------------------------------
// Tabular output

struct Cell {
    enum Kind { text, real, percent, integer };
    Kind kind = text;
    std::string s;
    double v = 0.0;

    static Cell str(std::string t) { return {text, std::move(t), 0.0}; }
    static Cell num(double x) { return {real, {}, x}; }
    static Cell pct(double x) { return {percent, {}, x}; }
    static Cell whole(long long n) { return {integer, {}, static_cast<double>(n)}; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;
};

std::string format_real(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Reals: 7 significant digits; percentages: two decimals. A positive
// precision prints every number as a raw value with that many significant
// digits.
void emit(const Table& table, OutputFormat format, int precision, std::ostream& out) {
    const int digits = precision > 0 ? precision : 7;
    if (format == OutputFormat::csv) {
        for (const auto& note : table.notes) out << "# " << note << '\n';
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? "," : "") << table.columns[i];
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                const Cell& c = row[i];
                switch (c.kind) {
                    case Cell::text:
                        out << csv_escape(c.s);
                        break;
                    case Cell::integer:
                        out << static_cast<long long>(c.v);
                        break;
                    case Cell::real:
                        out << format_real(c.v, digits);
                        break;
                    case Cell::percent:
                        if (precision > 0) {
                            out << format_real(c.v, digits);
                        } else {
                            char buf[64];
                            std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * c.v);
                            out << buf;
                        }
                        break;
                }
            }
            out << '\n';
        }
        return;
    }

    nlohmann::ordered_json doc;
    doc["notes"] = table.notes;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            const std::string& key = table.columns[i];
            if (c.kind == Cell::text) {
                j[key] = c.s;
            } else if (c.kind == Cell::integer) {
                j[key] = static_cast<long long>(c.v);
            } else if (!std::isfinite(c.v)) {
                j[key] = nullptr;
            } else {
                j[key] = std::stod(format_real(c.v, digits));
            }
        }
        doc["rows"].push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Argument helpers

std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<double> parts;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
            if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
                throw UsageError(flag + ": expected LO:HI:STEP with STEP > 0 and LO <= HI");
            }
            const double lo = parts[0];
            const double step = parts[2];
            const auto n = static_cast<long long>(std::floor((parts[1] - lo) / step + 1e-9));
            for (long long i = 0; i <= n; ++i) values.push_back(lo + static_cast<double>(i) * step);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
        }
    } catch (const std::invalid_argument&) {
        throw UsageError(flag + ": cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
        throw UsageError(flag + ": value out of range in '" + text + "'");
    }
    if (values.empty()) throw UsageError(flag + ": empty list");
    return values;
}

AgeWindow parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--fit-window: expected A:B");
    try {
        AgeWindow w{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
        if (!(w.hi > w.lo)) throw UsageError("--fit-window: requires A < B");
        return w;
    } catch (const std::logic_error&) {
        throw UsageError("--fit-window: cannot parse '" + text + "'");
    }
}

PaymentMode parse_mode(const std::string& text) {
    if (text == "annual") return PaymentMode::annual_immediate;
    if (text == "monthly") return PaymentMode::monthly_immediate;
    if (text == "continuous") return PaymentMode::continuous;
    throw UsageError("--mode: expected annual, monthly or continuous");
}

struct Options {
    std::string input;
    std::string config;
    std::string format = "csv";
    std::string fit_window;
    std::string rate_scale = "per-unit";
    double r = 0.03;
    std::vector<double> gammas{3.0};
    double lambda = 0.0;
    double x = 65.0;
    double m = kUnset;
    double b = kUnset;
    std::vector<double> h;
    std::vector<double> g;
    double group_m = kUnset;
    double group_b = kUnset;
    double group_h = kUnset;
    double group_g = kUnset;
    int group_percentile = 50;
    int precision = 0;

    bool quadrature = false;
    std::string ages;
    bool density = false;
    std::string kind = "g";
    std::string grid;
    std::vector<double> hazards;
    std::string clam;
    std::vector<std::string> participants;
    std::string mode = "annual";
};

// Flags shared across subcommands are registered on demand.
struct Registrar {
    CLI::App* app;
    Options& o;

    void format() {
        app->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        app->add_option("--precision", o.precision,
                        "Significant digits for every number (prints percentages as fractions)")
            ->check(CLI::Range(1, 17));
    }
    void config() {
        app->add_option("--config", o.config, "JSON run configuration; explicit flags win");
    }
    void rate() { app->add_option("--r", o.r, "Valuation rate")->capture_default_str(); }
    void age() { app->add_option("--x", o.x, "Age")->capture_default_str(); }
    void gamma(bool list) {
        auto* opt = app->add_option("--gamma", o.gammas, "Relative risk aversion")
                        ->capture_default_str();
        if (list) {
            opt->delimiter(',');
        } else {
            opt->expected(1);
        }
    }
    void law() {
        app->add_option("--m", o.m, "Modal age at death");
        app->add_option("--b", o.b, "Dispersion (years)");
        app->add_option("--h", o.h, "Hazard at age x (comma list allowed)")->delimiter(',');
        app->add_option("--g", o.g, "Mortality growth rate (comma list allowed)")->delimiter(',');
    }
    void dataset(bool required) {
        auto* in = app->add_option("--input", o.input, "Mortality CSV (gender,percentile,age,q)");
        if (required) in->required();
        app->add_option("--rate-scale", o.rate_scale, "Input rate scale")
            ->check(CLI::IsMember({"per-unit", "per-1000"}))
            ->capture_default_str();
        app->add_option("--fit-window", o.fit_window, "Fitting ages A:B");
        app->add_option("--lambda", o.lambda, "Makeham constant")->capture_default_str();
    }
};

bool unset(CLI::App* app, const std::string& name) {
    const auto* opt = app->get_option_no_throw(name);
    return opt == nullptr || opt->count() == 0;
}

void apply_config(CLI::App* app, Options& o) {
    if (o.config.empty()) return;
    const RunConfig c = load_run_config(o.config);
    if (unset(app, "--r")) o.r = c.r;
    if (unset(app, "--gamma")) o.gammas = c.gammas;
    if (unset(app, "--lambda")) o.lambda = c.lambda;
    if (unset(app, "--group-percentile")) o.group_percentile = c.group_percentile;
    if (unset(app, "--format")) o.format = c.format == OutputFormat::json ? "json" : "csv";
    if (unset(app, "--x")) o.x = c.x;
    if (unset(app, "--rate-scale")) {
        o.rate_scale = c.rate_scale == RateScale::per_1000 ? "per-1000" : "per-unit";
    }
    if (unset(app, "--fit-window") && c.fit_window) {
        o.fit_window = format_real(c.fit_window->lo, 17) + ":" + format_real(c.fit_window->hi, 17);
    }
}

DatasetConfig dataset_config(const Options& o) {
    DatasetConfig d;
    d.path = o.input;
    d.rate_scale = parse_rate_scale(o.rate_scale);
    if (!o.fit_window.empty()) d.fit_window = parse_window(o.fit_window);
    return d;
}

RunConfig run_config(const Options& o) {
    RunConfig c;
    c.r = o.r;
    c.gammas = o.gammas;
    c.lambda = o.lambda;
    c.group_percentile = o.group_percentile;
    c.format = parse_output_format(o.format);
    c.x = o.x;
    c.rate_scale = parse_rate_scale(o.rate_scale);
    if (!o.fit_window.empty()) c.fit_window = parse_window(o.fit_window);
    validate(c);
    return c;
}

void add_rejections(Table& table, const LoadedDataset& data) {
    for (const auto& r : data.rejected) {
        table.notes.push_back("rejected line " + std::to_string(r.line) + ": " + r.reason);
    }
}

// (m, b) or a single (h, g) pair at age x.
std::optional<GompertzLaw> individual_law(const Options& o) {
    const bool mb = given(o.m) || given(o.b);
    const bool hg = !o.h.empty() || !o.g.empty();
    if (mb && hg) throw UsageError("give either --m/--b or --h/--g, not both");
    if (mb) {
        if (!given(o.m) || !given(o.b)) throw UsageError("--m and --b must be given together");
        return GompertzLaw(o.m, o.b);
    }
    if (hg) {
        if (o.h.size() != 1 || o.g.size() != 1) {
            throw UsageError("exactly one --h and one --g value required");
        }
        return from_hg({o.x, o.h.front(), o.g.front()});
    }
    return std::nullopt;
}

std::optional<GompertzLaw> group_law(const Options& o) {
    const bool mb = given(o.group_m) || given(o.group_b);
    const bool hg = given(o.group_h) || given(o.group_g);
    if (mb && hg) throw UsageError("give either --group-m/--group-b or --group-h/--group-g");
    if (mb) {
        if (!given(o.group_m) || !given(o.group_b)) {
            throw UsageError("--group-m and --group-b must be given together");
        }
        return GompertzLaw(o.group_m, o.group_b);
    }
    if (hg) {
        if (!given(o.group_h) || !given(o.group_g)) {
            throw UsageError("--group-h and --group-g must be given together");
        }
        return from_hg({o.x, o.group_h, o.group_g});
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Subcommands

Table cmd_calibrate(const Options& o) {
    const DatasetConfig d = dataset_config(o);
    const LoadedDataset data = load_mortality_csv(d);
    Table t;
    t.columns = {"gender", "percentile", "rows", "h", "g", "K", "lambda", "r_squared",
                 "h_x", "m", "b"};
    add_rejections(t, data);
    for (const auto& obs : data.cohorts) {
        const GompertzFit fit = gompertz_fit(obs, o.lambda, d.fit_window);
        const double h_x = fit.h * std::exp(fit.g * o.x);
        const GompertzLaw law = from_hg({o.x, h_x, fit.g});
        t.rows.push_back({Cell::str(to_string(obs.gender)), Cell::whole(obs.percentile),
                          Cell::whole(static_cast<long long>(fit.regression.n)), Cell::num(fit.h),
                          Cell::num(fit.g), Cell::num(fit.K), Cell::num(fit.lambda),
                          Cell::num(fit.r_squared), Cell::num(h_x), Cell::num(law.modal()),
                          Cell::num(law.dispersion())});
    }
    t.notes.push_back("h is the age-0 hazard; h_x is the hazard at age " + format_real(o.x, 7));
    return t;
}

Table cmd_clam(const Options& o) {
    const DatasetConfig d = dataset_config(o);
    const LoadedDataset data = load_mortality_csv(d);
    std::map<Gender, std::vector<GompertzFit>> by_gender;
    for (const auto& obs : data.cohorts) {
        by_gender[obs.gender].push_back(gompertz_fit(obs, o.lambda, d.fit_window));
    }
    Table t;
    t.columns = {"gender",      "cohorts", "L",        "L_se",          "L_t",
                 "slope",       "slope_se", "slope_t", "x_star",        "r_squared",
                 "adj_r_squared", "lambda_star", "g_min", "g_max", "g_mean", "L_minus_ln_ln2"};
    add_rejections(t, data);
    for (const auto& [gender, fits] : by_gender) {
        if (fits.size() < 3) {
            t.notes.push_back(to_string(gender) + ": fewer than 3 cohorts, skipped");
            continue;
        }
        const ClamFit c = clam_fit(fits);
        const LinearFit& f = c.regression;
        t.rows.push_back({Cell::str(to_string(gender)), Cell::whole(static_cast<long long>(c.cohorts)),
                          Cell::num(c.L), Cell::num(f.intercept_se), Cell::num(f.intercept_t),
                          Cell::num(f.slope), Cell::num(f.slope_se), Cell::num(f.slope_t),
                          Cell::num(c.x_star), Cell::pct(c.r_squared), Cell::pct(f.adj_r_squared),
                          Cell::num(c.lambda_star), Cell::pct(c.g_min), Cell::pct(c.g_max),
                          Cell::pct(c.g_mean), Cell::num(c.log_log2_gap)});
    }
    if (t.rows.empty()) throw ValidationError("clam: no gender has at least 3 cohorts");
    return t;
}

Table cmd_price(const Options& o) {
    Table t;
    t.columns = {"r", "x", "m", "b", "h", "g", "annuity_factor"};
    if (o.quadrature) t.columns.push_back("annuity_factor_quadrature");

    auto add = [&](const GompertzLaw& law, double h, double g, double a) {
        std::vector<Cell> row{Cell::num(o.r),          Cell::num(o.x), Cell::num(law.modal()),
                              Cell::num(law.dispersion()), Cell::num(h), Cell::num(g),
                              Cell::num(a)};
        if (o.quadrature) row.push_back(Cell::num(annuity_factor_quadrature(o.r, law, o.x)));
        t.rows.push_back(std::move(row));
    };

    const bool mb = given(o.m) || given(o.b);
    const bool hg = !o.h.empty() || !o.g.empty();
    if (mb && hg) throw UsageError("price: give either --m/--b or --h/--g, not both");
    if (mb) {
        if (!given(o.m) || !given(o.b)) throw UsageError("price: --m and --b go together");
        const GompertzLaw law(o.m, o.b);
        const AgeAnchoredLaw a = to_hg(law, o.x);
        add(law, a.hazard, a.growth, annuity_factor_mb(o.r, o.x, o.m, o.b));
    } else if (hg) {
        if (o.h.empty() || o.g.empty()) throw UsageError("price: --h and --g go together");
        // A grid of h and g values gives the annuity-factor surface in (h, g).
        const AgeBounds free{0.0, 0.0, false};
        for (double g : o.g) {
            for (double h : o.h) {
                add(from_hg({o.x, h, g}, free), h, g, annuity_factor_hg(o.r, h, g));
            }
        }
    } else {
        throw UsageError("price: mortality parameters required (--h and --g, or --m and --b)");
    }
    return t;
}

Table cmd_covol(const Options& o) {
    std::vector<GompertzLaw> laws;
    if (given(o.m) || given(o.b) || !o.h.empty() || !o.g.empty()) {
        laws.push_back(*individual_law(o));
    }

    if (o.density) {
        if (laws.empty()) throw UsageError("covol --density: needs --m/--b or --h/--g");
        const GompertzLaw& law = laws.front();
        Table t;
        t.columns = {"t", "age", "survival", "density"};
        const double horizon = survival_horizon(law, o.x, 1e-6);
        const double step = o.ages.empty() ? 0.5 : parse_grid(o.ages, "--ages").front();
        if (!(step > 0.0)) throw UsageError("covol --density: step must be > 0");
        for (double s = 0.0; s <= horizon; s += step) {
            t.rows.push_back({Cell::num(s), Cell::num(o.x + s), Cell::num(survival(law, o.x, s)),
                              Cell::num(density(law, o.x, s))});
        }
        return t;
    }

    if (!o.ages.empty()) {
        if (laws.empty()) throw UsageError("covol --ages: needs --m/--b or --h/--g");
        const GompertzLaw& law = laws.front();
        Table t;
        t.columns = {"age", "e_t", "sd_t", "covol"};
        for (double age : parse_grid(o.ages, "--ages")) {
            const LifetimeMoments mom = moments(law, age);
            t.rows.push_back(
                {Cell::num(age), Cell::num(mom.mean), Cell::num(mom.sd), Cell::pct(mom.covol)});
        }
        return t;
    }

    if (laws.empty()) {
        for (double m : {98.0, 78.0}) {
            for (auto& law : cohorts::illustrative_laws(m)) laws.push_back(law);
        }
    }
    Table t;
    t.columns = {"m", "b", "g", "e_t0", "sd_t0", "covol_0", "hazard_x", "e_tx", "sd_tx",
                 "covol_x"};
    t.notes.push_back("x=" + format_real(o.x, 7));
    for (const auto& law : laws) {
        const LifetimeMoments birth = moments(law, 0.0);
        const LifetimeMoments at_x = moments(law, o.x);
        t.rows.push_back({Cell::num(law.modal()), Cell::num(law.dispersion()),
                          Cell::pct(law.growth()), Cell::num(birth.mean), Cell::num(birth.sd),
                          Cell::pct(birth.covol), Cell::num(hazard(law, o.x)),
                          Cell::num(at_x.mean), Cell::num(at_x.sd), Cell::pct(at_x.covol)});
    }
    return t;
}

Table cmd_aew(const Options& o) {
    const auto individual = individual_law(o);
    if (!individual) {
        // Built-in cohorts, one report per gamma.
        Table t;
        t.columns = {"gamma", "gender", "percentile", "h65", "g", "e_t65", "covol",
                     "annuity_factor", "delta_individual", "delta_group"};
        for (double gamma : o.gammas) {
            const Report rep =
                build_report(cohorts::us_income_percentiles(), o.r, gamma, o.x, o.group_percentile);
            if (t.notes.empty()) t.notes = rep.notes;
            for (const auto& row : rep.rows) {
                t.rows.push_back({Cell::num(gamma), Cell::str(to_string(row.gender)),
                                  Cell::whole(row.percentile), Cell::pct(row.h65), Cell::pct(row.g),
                                  Cell::num(row.e_t65), Cell::pct(row.covol),
                                  Cell::num(row.annuity_factor), Cell::pct(row.delta_individual),
                                  Cell::pct(row.delta_group)});
            }
        }
        t.notes.erase(t.notes.begin());  // the r/gamma line; gamma is a column here
        return t;
    }

    const GompertzLaw group = group_law(o).value_or(*individual);
    Table t;
    t.columns = {"gamma",        "m",           "b",
                 "factor_individual", "factor_group", "delta_individual",
                 "delta_group",  "wtp_individual", "wtp_group"};
    for (double gamma : o.gammas) {
        const PoolingResult fair = aew_homogeneous(o.r, *individual, o.x, gamma);
        const PoolingResult pooled = aew_group(o.r, *individual, group, o.x, gamma);
        t.rows.push_back({Cell::num(gamma), Cell::num(individual->modal()),
                          Cell::num(individual->dispersion()), Cell::num(fair.factor_individual),
                          Cell::num(pooled.factor_group), Cell::pct(fair.delta),
                          Cell::pct(pooled.delta), Cell::pct(fair.wtp), Cell::pct(pooled.wtp)});
    }
    return t;
}

Table cmd_sweep(const Options& o) {
    Table t;
    if (o.kind == "m") {
        const std::vector<double> grid =
            parse_grid(o.grid.empty() ? "70:100:1" : o.grid, "--grid");
        const double b = given(o.b) ? o.b : 12.0;
        const GompertzLaw group(given(o.group_m) ? o.group_m : 85.45,
                                given(o.group_b) ? o.group_b : b);
        t.columns = {"gamma", "m", "aew_individual", "aew_group"};
        t.notes.push_back("b=" + format_real(b, 7) + " group m=" + format_real(group.modal(), 7) +
                          " group b=" + format_real(group.dispersion(), 7));
        for (double gamma : o.gammas) {
            for (const auto& p : delta_vs_m_sweep(o.r, gamma, o.x, b, grid, group)) {
                t.rows.push_back({Cell::num(gamma), Cell::num(p.m),
                                  Cell::num(1.0 + p.delta_individual),
                                  Cell::num(1.0 + p.delta_group)});
            }
        }
        return t;
    }
    if (o.kind != "g") throw UsageError("sweep: --kind must be g or m");

    const std::vector<double> grid =
        parse_grid(o.grid.empty() ? "0.0596:0.1049:0.0025" : o.grid, "--grid");
    std::variant<FixedHazards, ClamLine> source;
    if (!o.hazards.empty()) {
        if (!o.clam.empty()) throw UsageError("sweep: give either --hazards or --clam");
        source = FixedHazards{o.hazards};
    } else {
        ClamLine line{-1.234, 99.98};
        if (!o.clam.empty()) {
            const auto colon = o.clam.find(':');
            if (colon == std::string::npos) throw UsageError("--clam: expected L:XSTAR");
            try {
                line = {std::stod(o.clam.substr(0, colon)), std::stod(o.clam.substr(colon + 1))};
            } catch (const std::logic_error&) {
                throw UsageError("--clam: cannot parse '" + o.clam + "'");
            }
        }
        t.notes.push_back("CLaM line L=" + format_real(line.L, 7) +
                          " x_star=" + format_real(line.x_star, 7));
        source = line;
    }
    t.columns = {"gamma", "g", "hazard_x", "delta"};
    for (double gamma : o.gammas) {
        for (const auto& p : delta_vs_g_sweep(o.r, gamma, o.x, grid, source)) {
            t.rows.push_back(
                {Cell::num(gamma), Cell::num(p.g), Cell::num(p.hazard), Cell::pct(p.delta)});
        }
    }
    return t;
}

std::string money(std::int64_t cents) {
    char buf[64];
    const std::int64_t whole = cents / 100;
    const std::int64_t frac = std::llabs(cents % 100);
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", cents < 0 && whole == 0 ? "-" : "",
                  static_cast<long long>(whole), static_cast<long long>(frac));
    return buf;
}

Table cmd_subsidy(const Options& o) {
    std::vector<Participant> people;
    if (o.participants.empty()) {
        people.push_back({"Simon", 0.0, 25000.0, 10.0, 65.0});
        people.push_back({"Heather", 0.0, 25000.0, 30.0, 65.0});
    }
    for (const auto& spec : o.participants) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() < 3 || parts.size() > 4) {
            throw UsageError("--participant: expected LABEL:YEARS:INCOME[:CONTRIBUTION]");
        }
        try {
            people.push_back({parts[0], parts.size() == 4 ? std::stod(parts[3]) : 0.0,
                              std::stod(parts[2]), std::stod(parts[1]), 65.0});
        } catch (const std::logic_error&) {
            throw UsageError("--participant: cannot parse '" + spec + "'");
        }
    }
    const SubsidyReport rep = subsidy_table(people, o.r, parse_mode(o.mode));
    Table t;
    t.columns = {"label", "years", "income", "pv", "funded", "transfer"};
    std::int64_t total_transfer = 0;
    for (const auto& row : rep.rows) {
        t.rows.push_back({Cell::str(row.label), Cell::num(row.years), Cell::num(row.income),
                          Cell::str(money(row.pv_cents)), Cell::str(money(row.funded_cents)),
                          Cell::str(money(row.transfer_cents))});
        total_transfer += row.transfer_cents;
    }
    t.notes.push_back("total liability " + money(rep.total_liability_cents) +
                      "; transfer = pv - funded; sum of transfers " + money(total_transfer));
    t.notes.push_back("amounts in cents, rounded half away from zero; remainder cents go to the "
                      "first participants");
    return t;
}

void cmd_report(const Options& o, std::ostream& out) {
    if (o.precision > 0) {
        throw UsageError("report: --precision is not supported; the schema fixes 6 digits");
    }
    RunConfig c = run_config(o);
    if (c.gammas.size() != 1) throw UsageError("report: exactly one --gamma value");
    Report rep;
    if (o.input.empty()) {
        rep = build_report(cohorts::us_income_percentiles(), c.r, c.gammas.front(), c.x,
                           c.group_percentile);
    } else {
        const DatasetConfig d = dataset_config(o);
        const LoadedDataset data = load_mortality_csv(d);
        rep = run_pipeline(data, c).report;
        for (const auto& r : data.rejected) {
            rep.notes.push_back("rejected line " + std::to_string(r.line) + ": " + r.reason);
        }
    }
    out << write_report(rep, c.format);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gompertz mortality, life-annuity pricing and longevity risk pooling"};
    // -h is taken by --h (hazard), so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1, 1);
    app.footer(
        "Exit codes: 0 success, 1 internal error, 2 usage error, 3 missing or unreadable "
        "file, 4 invalid input or domain error, 5 numerical non-convergence.");

    Options o;

    auto* calibrate = app.add_subcommand("calibrate", "Per-cohort Gompertz fits from q_x data");
    Registrar{calibrate, o}.dataset(true);
    Registrar{calibrate, o}.age();
    Registrar{calibrate, o}.format();
    Registrar{calibrate, o}.config();

    auto* clam = app.add_subcommand("clam", "Regression of ln h on g across cohorts");
    Registrar{clam, o}.dataset(true);
    Registrar{clam, o}.format();
    Registrar{clam, o}.config();

    auto* price = app.add_subcommand("price", "Annuity factor for (r, h, g) or (r, x, m, b)");
    Registrar{price, o}.rate();
    Registrar{price, o}.age();
    Registrar{price, o}.law();
    Registrar{price, o}.format();
    Registrar{price, o}.config();
    price->add_flag("--quadrature", o.quadrature, "Add the quadrature value as a check");

    auto* covol = app.add_subcommand("covol", "Lifetime moments and coefficient of variation");
    Registrar{covol, o}.age();
    Registrar{covol, o}.law();
    Registrar{covol, o}.format();
    Registrar{covol, o}.config();
    covol->add_option("--ages", o.ages, "Age series LO:HI:STEP (or step with --density)");
    covol->add_flag("--density", o.density, "Emit survival and density of the remaining lifetime");

    auto* aew = app.add_subcommand("aew", "Annuity equivalent wealth, fair and group pricing");
    Registrar{aew, o}.rate();
    Registrar{aew, o}.age();
    Registrar{aew, o}.gamma(true);
    Registrar{aew, o}.law();
    Registrar{aew, o}.format();
    Registrar{aew, o}.config();
    aew->add_option("--group-m", o.group_m, "Group modal age");
    aew->add_option("--group-b", o.group_b, "Group dispersion");
    aew->add_option("--group-h", o.group_h, "Group hazard at age x");
    aew->add_option("--group-g", o.group_g, "Group growth rate");
    aew->add_option("--group-percentile", o.group_percentile,
                    "Percentile pricing the group (built-in cohorts)")
        ->check(CLI::Range(1, 100))
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "delta versus g on a CLaM line, or AEW versus m");
    Registrar{sweep, o}.rate();
    Registrar{sweep, o}.age();
    Registrar{sweep, o}.gamma(true);
    Registrar{sweep, o}.format();
    Registrar{sweep, o}.config();
    sweep->add_option("--kind", o.kind, "g (CLaM line / fixed hazards) or m (modal age)")
        ->check(CLI::IsMember({"g", "m"}))
        ->capture_default_str();
    sweep->add_option("--grid", o.grid, "LO:HI:STEP or comma list of g (or m) values");
    sweep->add_option("--hazards", o.hazards, "Fixed hazards at age x")->delimiter(',');
    sweep->add_option("--clam", o.clam, "CLaM line L:XSTAR");
    sweep->add_option("--b", o.b, "Dispersion for --kind m (default 12)");
    sweep->add_option("--group-m", o.group_m, "Group modal age for --kind m (default 85.45)");
    sweep->add_option("--group-b", o.group_b, "Group dispersion for --kind m (default --b)");

    auto* subsidy = app.add_subcommand("subsidy", "Term-certain pension transfers");
    Registrar{subsidy, o}.rate();
    Registrar{subsidy, o}.format();
    Registrar{subsidy, o}.config();
    subsidy->add_option("--participant", o.participants,
                        "LABEL:YEARS:INCOME[:CONTRIBUTION], repeatable");
    subsidy->add_option("--mode", o.mode, "Payment mode")
        ->check(CLI::IsMember({"annual", "monthly", "continuous"}))
        ->capture_default_str();

    auto* report = app.add_subcommand("report", "Full pipeline to the per-cohort AEW report");
    Registrar{report, o}.dataset(false);
    Registrar{report, o}.rate();
    Registrar{report, o}.age();
    Registrar{report, o}.gamma(false);
    Registrar{report, o}.format();
    Registrar{report, o}.config();
    report->add_option("--group-percentile", o.group_percentile, "Percentile pricing the group")
        ->check(CLI::Range(1, 100))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        apply_config(sub, o);
        const OutputFormat format = parse_output_format(o.format);
        if (sub == report) {
            cmd_report(o, out);
            return exit_ok;
        }
        Table t;
        if (sub == calibrate) t = cmd_calibrate(o);
        if (sub == clam) t = cmd_clam(o);
        if (sub == price) t = cmd_price(o);
        if (sub == covol) t = cmd_covol(o);
        if (sub == aew) t = cmd_aew(o);
        if (sub == sweep) t = cmd_sweep(o);
        if (sub == subsidy) t = cmd_subsidy(o);
        emit(t, format, o.precision, out);
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return exit_io;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_validation;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_validation;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"longevity"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace longevity::cli
