#include "gklab/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gklab {
namespace {

using nlohmann::json;

ParamSpec num(std::string name, double v) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::Number;
    p.number = v;
    return p;
}

ParamSpec list(std::string name, std::vector<double> v) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::NumberList;
    p.list = std::move(v);
    return p;
}

ParamSpec text(std::string name, std::string v) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::Text;
    p.text = std::move(v);
    return p;
}

SpaceConfig hyperbolic3() {
    return SpaceConfig{};
}

std::vector<ScenarioInfo> build_catalog() {
    std::vector<ScenarioInfo> cat;

    {
        ScenarioInfo s;
        s.name = "sphere_euclidean";
        s.summary = "total curvature of Euclidean spheres against the exact value";
        s.space = {"euclidean", 3, 0.0, 1.0, 0.05};
        s.params = {list("radii", {0.5, 2.0}), num("relative_tolerance", 1e-6)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "sphere_hyperbolic";
        s.summary = "total curvature of hyperbolic spheres against the closed form";
        s.space = hyperbolic3();
        s.params = {list("radii", {0.5, 1.0}), num("relative_tolerance", 1e-4)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "nested_hulls";
        s.summary = "curvature monotonicity across random nested hull pairs";
        s.space = hyperbolic3();
        s.grid = {64, 128, 1e-4};
        // smoothing_t large enough that the vertex caps of the offset surface
        // span several grid cells; smaller offsets need finer grids
        s.params = {num("pairs", 20),
                    num("outer_vertices", 6),
                    num("outer_ball_radius", 1.2),
                    num("inner_vertices", 4),
                    num("inner_ball_radius", 0.4),
                    num("smoothing_t", 0.35),
                    num("difference_tolerance", 1e-3),
                    num("outer_lower_tolerance", 1e-3)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "parallel_monotone";
        s.summary = "total curvature nondecreasing along outward parallel surfaces";
        s.space = hyperbolic3();
        s.grid = {96, 192, 1e-4};
        s.params = {num("hull_vertices", 4),
                    num("hull_ball_radius", 0.4),
                    num("ball_radius", 0.5),
                    list("t_values", {0.05, 0.1, 0.2, 0.4}),
                    num("monotonicity_tolerance", 1e-6),
                    num("ball_closed_form_tolerance", 1e-6)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "hausdorff_continuity";
        s.summary = "level-set and vertex perturbations shrink in Hausdorff distance and total curvature";
        s.space = hyperbolic3();
        s.params = {num("outer_radius", 0.9),
                    num("inner_radius", 0.35),
                    num("inner_offset", 0.25),
                    num("epsilon", 0.09),
                    list("lambdas", {0.009, 0.0045, 0.00225}),
                    num("hull_vertices", 5),
                    num("hull_ball_radius", 0.8),
                    num("hull_smoothing_t", 0.05),
                    list("perturbations", {0.1, 0.05, 0.025}),
                    num("perturbation_grid_polar", 48),
                    num("perturbation_slack", 0.01)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "lipschitz_d2";
        s.summary = "difference-quotient sweep for the squared-distance gradient";
        s.space = hyperbolic3();
        s.params = {num("pairs", 10000),
                    num("shell_inner", 0.05),
                    num("shell_outer", 0.75),
                    num("ball_radius", 0.5),
                    num("hull_vertices", 5),
                    num("hull_ball_radius", 0.5),
                    num("straddle_band", 0.05),
                    num("straddle_fraction", 0.3),
                    num("stability_tolerance", 0.05),
                    num("control_growth_factor", 10.0)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "nonexpansive_maps";
        s.summary = "projection and logarithm maps are nonexpansive";
        s.space = hyperbolic3();
        s.params = {num("pairs", 1000),
                    num("factor_tolerance", 1e-8),
                    num("ball_radius", 0.6),
                    num("hull_vertices", 5),
                    num("hull_ball_radius", 0.5),
                    num("sample_radius", 1.5),
                    num("min_separation", 0.05),
                    num("max_separation", 1.0)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "mixed_term_bound";
        s.summary = "mixed curvature components vanish linearly off the core region";
        s.space = {"warped", 3, -1.0, 1.0, 0.05};
        s.params = {list("distances", {0.2, 0.1, 0.05}),
                    num("frames_per_distance", 64),
                    num("spread_tolerance", 0.25),
                    list("core_radii", {0.25, 0.5, 0.75, 1.0}),
                    num("core_frames", 16),
                    num("core_tolerance", 1e-8)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "comparison_identity";
        s.summary = "both sides of the total-curvature comparison formula agree";
        s.space = hyperbolic3();
        s.grid = {48, 96, 4e-4};
        s.params = {text("mode", "concentric_spheres"),
                    num("level_lo", 0.5),
                    num("level_hi", 1.0),
                    num("refinements", 2),
                    num("level_quadrature", 24),
                    num("residual_tolerance", 5e-3),
                    num("lambda", 1e-3),
                    num("outer_vertices", 6),
                    num("outer_ball_radius", 1.2),
                    num("inner_vertices", 4),
                    num("inner_ball_radius", 0.4)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "n3_estimates";
        s.summary = "pointwise gradient estimates for the interpolating function";
        s.space = hyperbolic3();
        s.params = {num("samples", 10000),
                    num("epsilon", 0.1),
                    list("lambda_factors", {0.1, 0.01, 0.001}),
                    num("outer_vertices", 6),
                    num("outer_ball_radius", 1.2),
                    num("inner_vertices", 4),
                    num("inner_ball_radius", 0.4),
                    num("dot_tolerance", 1e-9),
                    num("norm_tolerance", 1e-9),
                    num("identity_tolerance", 1e-9),
                    num("sup_stability_tolerance", 0.10),
                    num("zero_tolerance", 1e-9),
                    num("interior_samples", 200),
                    num("interior_margin", 0.05),
                    num("outside_zero_samples", 200)};
        cat.push_back(std::move(s));
    }
    {
        ScenarioInfo s;
        s.name = "gauss_bonnet_2d";
        s.summary = "turning integrals of closed convex curves against Gauss-Bonnet";
        s.space = {"hyperbolic", 2, -1.0, 1.0, 0.05};
        s.grid = {1, 512, 1e-4};
        s.params = {num("circle_radius", 1.0),
                    num("circle_tolerance", 5e-3),
                    num("hull_vertices", 5),
                    num("hull_ball_radius", 0.8),
                    num("smoothing_t", 0.02),
                    num("defect_tolerance", 5e-3),
                    list("warped_radii", {1.0, 1.5}),
                    num("warped_r0", 1.0),
                    num("warped_cubic", 0.05),
                    num("warped_azimuth", 192),
                    num("warped_tolerance", 5e-3)};
        cat.push_back(std::move(s));
    }
    return cat;
}

// --- strict JSON reading -------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + (path.empty() ? "<root>" : path) + ": " + what);
}

const json* find_key(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int read_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::vector<double> read_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) fail(path, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string read_text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (allowed.find(it.key()) == allowed.end())
            fail(path, "unknown field \"" + it.key() + "\"");
}

SpaceConfig parse_space(const json& j, SpaceConfig defaults) {
    require_object(j, "space");
    const json* kind = find_key(j, "kind");
    SpaceConfig out = defaults;
    if (kind != nullptr) out.kind = read_text(*kind, "space.kind");

    std::set<std::string> allowed = {"kind", "dim"};
    if (out.kind == "hyperbolic") {
        allowed.insert("curvature");
    } else if (out.kind == "warped") {
        allowed.insert("r0");
        allowed.insert("cubic");
    } else if (out.kind != "euclidean") {
        fail("space.kind", "must be one of euclidean, hyperbolic, warped");
    }
    reject_unknown(j, allowed, "space");

    if (const json* d = find_key(j, "dim")) out.dim = read_int(*d, "space.dim");
    if (const json* c = find_key(j, "curvature")) out.curvature = read_number(*c, "space.curvature");
    if (const json* r = find_key(j, "r0")) out.r0 = read_number(*r, "space.r0");
    if (const json* cu = find_key(j, "cubic")) out.cubic = read_number(*cu, "space.cubic");

    if (out.dim < 2 || out.dim > kMaxDim) fail("space.dim", "dimension out of range");
    if (out.kind == "hyperbolic" && !(out.curvature < 0.0))
        fail("space.curvature", "must be negative");
    if (out.kind == "warped" && !(out.r0 > 0.0)) fail("space.r0", "must be positive");
    if (out.kind == "warped" && out.cubic < 0.0) fail("space.cubic", "must be nonnegative");
    return out;
}

GridConfig parse_grid(const json& j, GridConfig defaults) {
    require_object(j, "grid");
    reject_unknown(j, {"polar", "azimuth", "fd_step"}, "grid");
    GridConfig out = defaults;
    if (const json* p = find_key(j, "polar")) out.polar = read_int(*p, "grid.polar");
    if (const json* a = find_key(j, "azimuth")) out.azimuth = read_int(*a, "grid.azimuth");
    if (const json* f = find_key(j, "fd_step")) out.fd_step = read_number(*f, "grid.fd_step");
    if (out.polar < 1) fail("grid.polar", "must be at least 1");
    if (out.azimuth < 4) fail("grid.azimuth", "must be at least 4");
    if (!(out.fd_step > 0.0)) fail("grid.fd_step", "must be positive");
    return out;
}

void parse_params(const json& j, const ScenarioInfo& info, ScenarioConfig& out) {
    require_object(j, "params");
    std::set<std::string> allowed;
    for (const ParamSpec& p : info.params) allowed.insert(p.name);
    reject_unknown(j, allowed, "params");

    for (const ParamSpec& p : info.params) {
        const json* v = find_key(j, p.name);
        const std::string path = "params." + p.name;
        switch (p.kind) {
            case ParamKind::Number:
                out.numbers[p.name] = v != nullptr ? read_number(*v, path) : p.number;
                break;
            case ParamKind::NumberList:
                out.lists[p.name] = v != nullptr ? read_list(*v, path) : p.list;
                break;
            case ParamKind::Text:
                out.texts[p.name] = v != nullptr ? read_text(*v, path) : p.text;
                break;
        }
    }

    // blanket invariant: anything called a tolerance must be positive
    for (const auto& [name, value] : out.numbers)
        if (name.find("tolerance") != std::string::npos && !(value > 0.0))
            fail("params." + name, "tolerances must be positive");
}

}  // namespace

ModelSpace SpaceConfig::build() const {
    if (kind == "euclidean") return ModelSpace::euclidean(dim);
    if (kind == "hyperbolic") return ModelSpace::hyperbolic(dim, curvature);
    if (kind == "warped") return ModelSpace::warped(dim, r0, cubic);
    throw ConfigError("unknown space kind \"" + kind + "\"");
}

const std::vector<ScenarioInfo>& scenario_catalog() {
    static const std::vector<ScenarioInfo> cat = build_catalog();
    return cat;
}

const ScenarioInfo* find_scenario(const std::string& name) {
    for (const ScenarioInfo& s : scenario_catalog())
        if (s.name == name) return &s;
    return nullptr;
}

double ScenarioConfig::number(const std::string& key) const {
    auto it = numbers.find(key);
    if (it == numbers.end()) throw ConfigError("missing numeric parameter \"" + key + "\"");
    return it->second;
}

const std::vector<double>& ScenarioConfig::list(const std::string& key) const {
    auto it = lists.find(key);
    if (it == lists.end()) throw ConfigError("missing list parameter \"" + key + "\"");
    return it->second;
}

const std::string& ScenarioConfig::text(const std::string& key) const {
    auto it = texts.find(key);
    if (it == texts.end()) throw ConfigError("missing text parameter \"" + key + "\"");
    return it->second;
}

ScenarioConfig parse_scenario_config(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");
    require_object(j, "");
    reject_unknown(j, {"schema_version", "scenario", "seed", "space", "grid", "params"}, "");

    const json* sv = find_key(j, "schema_version");
    if (sv == nullptr) fail("schema_version", "missing (this build reads schema version 1)");
    ScenarioConfig out;
    out.schema_version = read_int(*sv, "schema_version");
    if (out.schema_version != 1) fail("schema_version", "unsupported schema version");

    const json* name = find_key(j, "scenario");
    if (name == nullptr) fail("scenario", "missing scenario name");
    out.scenario = read_text(*name, "scenario");
    const ScenarioInfo* info = find_scenario(out.scenario);
    if (info == nullptr) fail("scenario", "\"" + out.scenario + "\" is not in the catalog");

    const json* seed = find_key(j, "seed");
    if (seed == nullptr) fail("seed", "missing (runs must be reproducible)");
    if (!seed->is_number_unsigned()) fail("seed", "expected an unsigned integer");
    out.seed = seed->get<std::uint64_t>();

    out.space = info->space;
    if (const json* sp = find_key(j, "space")) out.space = parse_space(*sp, info->space);
    out.grid = info->grid;
    if (const json* g = find_key(j, "grid")) out.grid = parse_grid(*g, info->grid);

    if (const json* p = find_key(j, "params")) {
        parse_params(*p, *info, out);
    } else {
        json empty = json::object();
        parse_params(empty, *info, out);
    }
    return out;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("cannot read config file: " + path);
    return parse_scenario_config(buf.str());
}

ScenarioConfig default_scenario_config(const std::string& scenario, std::uint64_t seed) {
    const ScenarioInfo* info = find_scenario(scenario);
    if (info == nullptr)
        throw ConfigError("\"" + scenario + "\" is not in the catalog");
    ScenarioConfig out;
    out.scenario = scenario;
    out.seed = seed;
    out.space = info->space;
    out.grid = info->grid;
    for (const ParamSpec& p : info->params) {
        switch (p.kind) {
            case ParamKind::Number: out.numbers[p.name] = p.number; break;
            case ParamKind::NumberList: out.lists[p.name] = p.list; break;
            case ParamKind::Text: out.texts[p.name] = p.text; break;
        }
    }
    return out;
}

bool ScenarioReport::passed() const {
    for (const CheckResult& c : checks)
        if (!c.passed) return false;
    return true;
}

}  // namespace gklab
