#include "gklab/scenario.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>

namespace gklab {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json space_json(const SpaceConfig& s) {
    ordered_json j;
    j["kind"] = s.kind;
    j["dim"] = s.dim;
    if (s.kind == "hyperbolic") j["curvature"] = s.curvature;
    if (s.kind == "warped") {
        j["r0"] = s.r0;
        j["cubic"] = s.cubic;
    }
    return j;
}

ordered_json config_json(const ScenarioConfig& c) {
    ordered_json j;
    j["schema_version"] = c.schema_version;
    j["scenario"] = c.scenario;
    j["seed"] = c.seed;
    j["space"] = space_json(c.space);
    ordered_json grid;
    grid["polar"] = c.grid.polar;
    grid["azimuth"] = c.grid.azimuth;
    grid["fd_step"] = c.grid.fd_step;
    j["grid"] = grid;

    // parameters in catalog order so the echo is stable across runs
    ordered_json params = ordered_json::object();
    const ScenarioInfo* info = find_scenario(c.scenario);
    if (info != nullptr) {
        for (const ParamSpec& p : info->params) {
            switch (p.kind) {
                case ParamKind::Number: {
                    auto it = c.numbers.find(p.name);
                    if (it != c.numbers.end()) params[p.name] = it->second;
                    break;
                }
                case ParamKind::NumberList: {
                    auto it = c.lists.find(p.name);
                    if (it != c.lists.end()) params[p.name] = it->second;
                    break;
                }
                case ParamKind::Text: {
                    auto it = c.texts.find(p.name);
                    if (it != c.texts.end()) params[p.name] = it->second;
                    break;
                }
            }
        }
    }
    j["params"] = params;
    return j;
}

void csv_cell(std::string& out, const std::string& cell) {
    const bool quote = cell.find_first_of(",\"\r\n") != std::string::npos;
    if (!quote) {
        out += cell;
        return;
    }
    out += '"';
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string report_json(const ScenarioReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["scenario"] = report.scenario;
    j["passed"] = report.passed();
    j["config"] = config_json(report.config);

    ordered_json checks = ordered_json::array();
    for (const CheckResult& c : report.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["details"] = c.details;
        checks.push_back(std::move(cj));
    }
    j["checks"] = checks;

    ordered_json metrics = ordered_json::object();
    for (const auto& [name, value] : report.metrics) metrics[name] = value;
    j["metrics"] = metrics;

    ordered_json tables = ordered_json::array();
    for (const Table& t : report.tables) {
        ordered_json tj;
        tj["name"] = t.name;
        tj["csv"] = t.name + ".csv";
        tj["rows"] = t.rows.size();
        tables.push_back(std::move(tj));
    }
    j["tables"] = tables;
    return j.dump(2) + "\n";
}

std::string table_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) out += ',';
        csv_cell(out, table.columns[i]);
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw IoError("table \"" + table.name + "\" has a ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            csv_cell(out, row[i]);
        }
        out += "\r\n";
    }
    return out;
}

void write_report_files(const ScenarioReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    write_text_file(fs::path(out_dir) / "report.json", report_json(report));
    for (const Table& t : report.tables)
        write_text_file(fs::path(out_dir) / (t.name + ".csv"), table_csv(t));

    Table timings;
    timings.name = "timings";
    timings.columns = {"stage", "seconds"};
    for (const StageTiming& st : report.timings)
        timings.rows.push_back({st.stage, format_number(st.seconds)});
    write_text_file(fs::path(out_dir) / "timings.csv", table_csv(timings));
}

}  // namespace gklab
