#include "gklab/scenario.hpp"

#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace gklab;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCatalogNames = {
    "sphere_euclidean",   "sphere_hyperbolic", "nested_hulls",     "parallel_monotone",
    "hausdorff_continuity", "lipschitz_d2",    "nonexpansive_maps", "mixed_term_bound",
    "comparison_identity", "n3_estimates",     "gauss_bonnet_2d",
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// minimal valid config text, with room for injected extras
std::string config_text(const std::string& extra_root = "", const std::string& params = "") {
    std::string s = "{\n  \"schema_version\": 1,\n  \"scenario\": \"sphere_euclidean\",\n";
    s += "  \"seed\": 7";
    if (!extra_root.empty()) s += ",\n  " + extra_root;
    s += ",\n  \"params\": {" + params + "}\n}\n";
    return s;
}

#ifdef GKLAB_TOOL_PATH
struct CliResult {
    int status = -1;
    std::string output;
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
    const fs::path outfile = scratch / "cli_output.txt";
    const std::string cmd =
        std::string(GKLAB_TOOL_PATH) + " " + args + " > " + outfile.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.output = slurp(outfile);
    return r;
}
#endif

}  // namespace

TEST_CASE("the catalog lists every scenario once", "[scenarios]") {
    const auto& cat = scenario_catalog();
    REQUIRE(cat.size() == kCatalogNames.size());
    for (std::size_t i = 0; i < cat.size(); ++i) {
        REQUIRE(cat[i].name == kCatalogNames[i]);
        REQUIRE_FALSE(cat[i].summary.empty());
        const ScenarioInfo* found = find_scenario(cat[i].name);
        REQUIRE(found != nullptr);
        REQUIRE(found->name == cat[i].name);
    }
    REQUIRE(find_scenario("no_such_scenario") == nullptr);
}

TEST_CASE("default configs echo the catalog entries", "[scenarios]") {
    for (const std::string& name : kCatalogNames) {
        const ScenarioConfig cfg = default_scenario_config(name, 99);
        REQUIRE(cfg.scenario == name);
        REQUIRE(cfg.seed == 99);
        const ScenarioInfo* info = find_scenario(name);
        REQUIRE(cfg.space.kind == info->space.kind);
        REQUIRE(cfg.grid.polar == info->grid.polar);
        for (const ParamSpec& p : info->params) {
            switch (p.kind) {
                case ParamKind::Number:
                    REQUIRE(cfg.number(p.name) == p.number);
                    break;
                case ParamKind::NumberList:
                    REQUIRE(cfg.list(p.name) == p.list);
                    break;
                case ParamKind::Text:
                    REQUIRE(cfg.text(p.name) == p.text);
                    break;
            }
        }
    }
    REQUIRE_THROWS_AS(default_scenario_config("no_such_scenario", 1), ConfigError);
}

TEST_CASE("config parsing accepts the documented shape only", "[scenarios]") {
    // the minimal config is fine and picks up catalog defaults
    const ScenarioConfig ok = parse_scenario_config(config_text());
    REQUIRE(ok.scenario == "sphere_euclidean");
    REQUIRE(ok.seed == 7);
    REQUIRE(ok.space.kind == "euclidean");
    REQUIRE(ok.number("relative_tolerance") == 1e-6);

    // overrides land in the parsed config
    const ScenarioConfig tweaked =
        parse_scenario_config(config_text("", "\"relative_tolerance\": 1e-4"));
    REQUIRE(tweaked.number("relative_tolerance") == 1e-4);

    REQUIRE_THROWS_AS(parse_scenario_config("not json"), ConfigError);
    REQUIRE_THROWS_AS(parse_scenario_config("{}"), ConfigError);

    // unknown keys, wherever they appear, are rejected
    REQUIRE_THROWS_AS(parse_scenario_config(config_text("\"comment\": \"hi\"")), ConfigError);
    REQUIRE_THROWS_AS(parse_scenario_config(config_text("", "\"bogus\": 1")), ConfigError);

    // schema version and seed are mandatory and checked
    REQUIRE_THROWS_AS(
        parse_scenario_config("{\"scenario\": \"sphere_euclidean\", \"seed\": 1}"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_scenario_config("{\"schema_version\": 2, \"scenario\": \"sphere_euclidean\", "
                              "\"seed\": 1}"),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_scenario_config("{\"schema_version\": 1, \"scenario\": \"sphere_euclidean\"}"),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_scenario_config("{\"schema_version\": 1, \"scenario\": \"sphere_euclidean\", "
                              "\"seed\": -3}"),
        ConfigError);

    // unknown scenario
    REQUIRE_THROWS_AS(
        parse_scenario_config("{\"schema_version\": 1, \"scenario\": \"nope\", \"seed\": 1}"),
        ConfigError);

    // tolerances must be positive numbers
    REQUIRE_THROWS_AS(parse_scenario_config(config_text("", "\"relative_tolerance\": 0")),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_scenario_config(config_text("", "\"relative_tolerance\": -1e-6")),
                      ConfigError);

    // space keys are gated by the kind
    REQUIRE_THROWS_AS(
        parse_scenario_config(config_text("\"space\": {\"kind\": \"euclidean\", \"dim\": 3, "
                                          "\"curvature\": -1.0}")),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_scenario_config(config_text("\"space\": {\"kind\": \"euclidean\", \"dim\": 3, "
                                          "\"r0\": 1.0}")),
        ConfigError);

    // grid sanity
    REQUIRE_THROWS_AS(
        parse_scenario_config(config_text(
            "\"grid\": {\"polar\": 0, \"azimuth\": 16, \"fd_step\": 1e-4}")),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_scenario_config(config_text(
            "\"grid\": {\"polar\": 4, \"azimuth\": 3, \"fd_step\": 1e-4}")),
        ConfigError);
    REQUIRE_THROWS_AS(
        parse_scenario_config(config_text(
            "\"grid\": {\"polar\": 4, \"azimuth\": 16, \"fd_step\": 0.0}")),
        ConfigError);
}

TEST_CASE("numbers print as shortest round-trips", "[scenarios]") {
    for (double v : {0.1, 1.0 / 3.0, 12345.678, -2.5e-7, 1e300, 0.0, 4.0}) {
        const std::string s = format_number(v);
        REQUIRE(std::stod(s) == v);
    }
    REQUIRE(format_number(4.0) == "4");  // integral values drop the fraction
}

TEST_CASE("reports serialize with a stable key order", "[scenarios]") {
    ScenarioReport rep;
    rep.scenario = "sphere_euclidean";
    rep.config = default_scenario_config("sphere_euclidean", 7);
    rep.checks.push_back({"first_check", true, "fine"});
    rep.metrics.push_back({"some_metric", 1.25});
    Table t;
    t.name = "values";
    t.columns = {"x", "note"};
    t.rows = {{"1", "a,b"}, {"2", "say \"hey\""}};
    rep.tables.push_back(t);

    const std::string json = report_json(rep);
    std::size_t pos = 0;
    for (const char* key : {"\"schema_version\"", "\"scenario\"", "\"passed\"", "\"config\"",
                            "\"checks\"", "\"metrics\"", "\"tables\""}) {
        const std::size_t next = json.find(key, pos);
        REQUIRE(next != std::string::npos);
        pos = next;
    }
    REQUIRE(json.find("\"timings\"") == std::string::npos);
    REQUIRE(report_json(rep) == json);

    // CSV quoting: commas and quotes force quoted cells, quotes are doubled
    const std::string csv = table_csv(t);
    REQUIRE(csv == "x,note\r\n1,\"a,b\"\r\n2,\"say \"\"hey\"\"\"\r\n");

    Table ragged = t;
    ragged.rows.push_back({"only-one-cell"});
    REQUIRE_THROWS_AS(table_csv(ragged), IoError);
}

TEST_CASE("scenario runs are deterministic and written out completely", "[scenarios]") {
    const ScenarioConfig cfg = default_scenario_config("sphere_euclidean", 20260814);
    const ScenarioReport rep = run_scenario(cfg, 1);
    REQUIRE(rep.passed());
    REQUIRE_FALSE(rep.checks.empty());
    REQUIRE_FALSE(rep.tables.empty());

    const ScenarioReport again = run_scenario(cfg, 1);
    REQUIRE(report_json(again) == report_json(rep));

    const fs::path dir = fs::temp_directory_path() / "gklab_test_report";
    fs::remove_all(dir);
    const ScenarioReport written = run_scenario(cfg, 1);
    write_report_files(written, dir.string());
    REQUIRE(fs::exists(dir / "report.json"));
    REQUIRE(fs::exists(dir / "timings.csv"));
    for (const Table& t : written.tables) {
        const fs::path csv = dir / (t.name + ".csv");
        REQUIRE(fs::exists(csv));
        const std::string text = slurp(csv);
        std::size_t lines = 0;
        for (std::size_t at = text.find("\r\n"); at != std::string::npos;
             at = text.find("\r\n", at + 2))
            ++lines;
        REQUIRE(lines == t.rows.size() + 1);  // header + one line per row
    }
    REQUIRE(slurp(dir / "report.json") == report_json(written));
    fs::remove_all(dir);
}

#ifdef GKLAB_TOOL_PATH
TEST_CASE("the command line tool reports and fails through exit codes", "[scenarios]") {
    const fs::path scratch = fs::temp_directory_path() / "gklab_test_cli";
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    const CliResult version = run_cli("version", scratch);
    REQUIRE(version.status == 0);
    REQUIRE(version.output.find("gklab 0.1.0") != std::string::npos);
    REQUIRE(version.output.find("config schema 1") != std::string::npos);

    const CliResult listed = run_cli("list", scratch);
    REQUIRE(listed.status == 0);
    for (const std::string& name : kCatalogNames)
        REQUIRE(listed.output.find(name) != std::string::npos);

    const CliResult usage = run_cli("frobnicate", scratch);
    REQUIRE(usage.status == 2);

    // a quick passing run writes its artifacts
    const fs::path cfg_ok = scratch / "ok.json";
    std::ofstream(cfg_ok) << config_text();
    const fs::path out_ok = scratch / "out_ok";
    const CliResult ran = run_cli(
        "run sphere_euclidean --config " + cfg_ok.string() + " --out " + out_ok.string(),
        scratch);
    INFO(ran.output);
    REQUIRE(ran.status == 0);
    REQUIRE(fs::exists(out_ok / "report.json"));
    REQUIRE(fs::exists(out_ok / "timings.csv"));

    // failing checks exit 1: an absurdly tight tolerance cannot be met
    const fs::path cfg_tight = scratch / "tight.json";
    std::ofstream(cfg_tight) << config_text("", "\"relative_tolerance\": 1e-30");
    const CliResult failed = run_cli(
        "run sphere_euclidean --config " + cfg_tight.string() + " --out " +
            (scratch / "out_tight").string(),
        scratch);
    REQUIRE(failed.status == 1);

    // malformed configs exit 2
    const fs::path cfg_bad = scratch / "bad.json";
    std::ofstream(cfg_bad) << "{\"schema_version\": 1}";
    const CliResult bad = run_cli(
        "run sphere_euclidean --config " + cfg_bad.string() + " --out " +
            (scratch / "out_bad").string(),
        scratch);
    REQUIRE(bad.status == 2);

    // scenario name mismatched against the config exits 2
    const CliResult mismatch = run_cli(
        "run nested_hulls --config " + cfg_ok.string() + " --out " +
            (scratch / "out_mismatch").string(),
        scratch);
    REQUIRE(mismatch.status == 2);

    // unwritable output locations exit 4
    const fs::path blocker = scratch / "blocker";
    std::ofstream(blocker) << "x";
    const CliResult io = run_cli(
        "run sphere_euclidean --config " + cfg_ok.string() + " --out " +
            (blocker / "sub").string(),
        scratch);
    REQUIRE(io.status == 4);

    fs::remove_all(scratch);
}
#endif
