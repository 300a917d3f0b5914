#pragma once

#include "gklab/model_space.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gklab {

// Direction-grid and finite-difference resolution shared by the scenarios.
struct GridConfig {
    int polar = 64;
    int azimuth = 128;
    double fd_step = 1e-4;
};

struct SpaceConfig {
    std::string kind = "hyperbolic";  // euclidean | hyperbolic | warped
    int dim = 3;
    double curvature = -1.0;  // hyperbolic only
    double r0 = 1.0;          // warped only
    double cubic = 0.05;      // warped only

    ModelSpace build() const;
};

// Parameter schema entry: every scenario declares the keys its `params`
// object accepts, with defaults; anything else in the config is rejected.
enum class ParamKind { Number, NumberList, Text };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::Number;
    double number = 0.0;
    std::vector<double> list;
    std::string text;
};

struct ScenarioInfo {
    std::string name;
    std::string summary;
    SpaceConfig space;
    GridConfig grid;
    std::vector<ParamSpec> params;
};

// The fixed scenario catalog, in canonical order.
const std::vector<ScenarioInfo>& scenario_catalog();
const ScenarioInfo* find_scenario(const std::string& name);

struct ScenarioConfig {
    int schema_version = 1;
    std::string scenario;
    std::uint64_t seed = 0;
    SpaceConfig space;
    GridConfig grid;
    std::map<std::string, double> numbers;
    std::map<std::string, std::vector<double>> lists;
    std::map<std::string, std::string> texts;

    double number(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
    const std::string& text(const std::string& key) const;
};

// Strict parsing: unknown fields anywhere are ConfigError, the seed is
// mandatory, tolerances must be positive.
ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);
ScenarioConfig default_scenario_config(const std::string& scenario, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string details;
};

// A rectangular table; cells are pre-formatted so the CSV on disk and any
// in-memory consumer see identical text.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    ScenarioConfig config;
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, double>> metrics;
    // deque: scenarios hold references to tables they are filling while
    // opening new ones, so growth must not relocate earlier entries
    std::deque<Table> tables;
    std::vector<StageTiming> timings;  // written to timings.csv, never to report.json

    bool passed() const;
};

// Runs one catalog scenario; workers <= 0 defers to GKLAB_WORKERS / hardware.
ScenarioReport run_scenario(const ScenarioConfig& config, int workers = 0);

// Shortest round-trip decimal text for a double (the one formatter used for
// every number that reaches disk).
std::string format_number(double v);

std::string report_json(const ScenarioReport& report);  // stable key order
std::string table_csv(const Table& table);              // RFC 4180, CRLF line ends

// report.json, one CSV per table, and timings.csv under out_dir.
void write_report_files(const ScenarioReport& report, const std::string& out_dir);

}  // namespace gklab
