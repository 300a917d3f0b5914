#include "gklab/scenario.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

int usage(std::FILE* to) {
    std::fprintf(to,
                 "usage:\n"
                 "  gklab run <scenario> --config <file> --out <dir>\n"
                 "  gklab list\n"
                 "  gklab version\n"
                 "\n"
                 "exit codes: 0 all checks passed, 1 a check failed, 2 invalid\n"
                 "config or usage, 3 numerical failure, 4 I/O failure.\n"
                 "GKLAB_WORKERS limits worker threads (default: all cores).\n");
    return to == stdout ? 0 : 2;
}

int run_command(const std::vector<std::string>& args) {
    std::string scenario, config_path, out_dir;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i] == "--out" && i + 1 < args.size()) {
            out_dir = args[++i];
        } else if (args[i] == "--help") {
            return usage(stdout);
        } else if (!args[i].empty() && args[i][0] == '-') {
            std::fprintf(stderr, "unknown option: %s\n", args[i].c_str());
            return 2;
        } else if (scenario.empty()) {
            scenario = args[i];
        } else {
            std::fprintf(stderr, "unexpected argument: %s\n", args[i].c_str());
            return 2;
        }
    }
    if (scenario.empty() || config_path.empty() || out_dir.empty()) return usage(stderr);

    gklab::ScenarioConfig cfg = gklab::load_scenario_config(config_path);
    if (cfg.scenario != scenario) {
        std::fprintf(stderr, "config is for scenario \"%s\", not \"%s\"\n",
                     cfg.scenario.c_str(), scenario.c_str());
        return 2;
    }

    const gklab::ScenarioReport report = gklab::run_scenario(cfg);
    gklab::write_report_files(report, out_dir);

    for (const gklab::CheckResult& c : report.checks)
        std::printf("%s  %s: %s\n", c.passed ? "pass" : "FAIL", c.name.c_str(),
                    c.details.c_str());
    std::printf("%s: %s\n", scenario.c_str(), report.passed() ? "pass" : "FAIL");
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) return usage(stderr);

    try {
        if (args[0] == "run") return run_command({args.begin() + 1, args.end()});
        if (args[0] == "list") {
            for (const gklab::ScenarioInfo& s : gklab::scenario_catalog())
                std::printf("%-22s %s\n", s.name.c_str(), s.summary.c_str());
            return 0;
        }
        if (args[0] == "version") {
            std::printf("gklab %s (config schema %d)\n", kVersion, kSchemaVersion);
            return 0;
        }
        if (args[0] == "--help" || args[0] == "help") return usage(stdout);
        std::fprintf(stderr, "unknown command: %s\n", args[0].c_str());
        return usage(stderr);
    } catch (const gklab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const gklab::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    } catch (const gklab::Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
