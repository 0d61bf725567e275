#include "ffinv/run_config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ffinv/expression.hpp"

namespace ffinv {

using nlohmann::json;

std::string to_string(RetentionRule rule) { return rule == RetentionRule::CutCell ? "cut-cell" : "midpoint"; }

DomainSpec DomainConfig::to_spec() const {
    try {
        if (shape == "disk") return DomainSpec::disk(radius, center);
        if (shape == "rectangle") return DomainSpec::rectangle(lower, upper);
        if (shape == "expression") {
            const auto f = std::make_shared<Expression>(inside);
            return DomainSpec::from_indicator([f](Vec2 x) { return (*f)(x) < 0.0; }, lower, upper);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    throw ConfigError("domain: unknown shape '" + shape + "' (expected disk, rectangle or expression)");
}

DesignConfig RunConfig::design_config() const {
    if (!design) throw ConfigError("config has no design section");
    DesignConfig c;
    c.mode = design->mode;
    c.incident_deg = design->incident_deg;
    c.directions_deg = design->directions_deg;
    c.k = design->k;
    c.epsilon = design->epsilon;
    c.seed = design->seed;
    c.stop_tolerance = design->stop_tolerance;
    c.max_iterations = design->max_iterations;
    c.fixed_iterations = design->fixed_iterations;
    c.h = h;
    c.domain = domain.to_spec();
    c.solver = solver;
    // the stop test on sum |dtau| needs solves tighter than the default
    c.solver.tolerance = std::min(solver.tolerance, DesignConfig::default_solver().tolerance);
    return c;
}

namespace {

/// Reads keys of one JSON object; finish() rejects any key that was not read.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    void read(const std::string& key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "." + key + ": wrong type");
        }
    }

    void read(const std::string& key, Vec2& out) {
        std::vector<double> v{out.x, out.y};
        read(key, v);
        if (v.size() != 2) throw ConfigError(path_ + "." + key + ": expected [x, y]");
        out = {v[0], v[1]};
    }

    [[nodiscard]] Section child(const std::string& key) {
        seen_.insert(key);
        return Section(j_.at(key), path_ + "." + key);
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key()))
                throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
    }

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

SolverBackend backend_from_string(const std::string& s) {
    if (s == "auto") return SolverBackend::Auto;
    if (s == "dense") return SolverBackend::DenseLU;
    if (s == "fft-gmres") return SolverBackend::FftGmres;
    throw ConfigError("solver.backend: unknown backend '" + s + "' (expected auto, dense or fft-gmres)");
}

std::string backend_name(SolverBackend b) {
    switch (b) {
        case SolverBackend::Auto: return "auto";
        case SolverBackend::DenseLU: return "dense";
        case SolverBackend::FftGmres: return "fft-gmres";
    }
    return "auto";
}

json vec(Vec2 v) { return json::array({v.x, v.y}); }

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (!j.contains("schema")) throw ConfigError("config: missing schema key (expected \"" +
                                                 std::string(kConfigSchema) + "\")");
    if (j["schema"] != kConfigSchema)
        throw ConfigError("config: unsupported schema " + j["schema"].dump() + " (expected \"" +
                          std::string(kConfigSchema) + "\")");

    RunConfig c;
    Section top(j, "config");
    std::string schema;
    top.read("schema", schema);

    if (top.has("domain")) {
        auto s = top.child("domain");
        s.read("shape", c.domain.shape);
        s.read("center", c.domain.center);
        s.read("radius", c.domain.radius);
        s.read("lower", c.domain.lower);
        s.read("upper", c.domain.upper);
        s.read("inside", c.domain.inside);
        s.finish();
        (void)c.domain.to_spec();
    }
    if (top.has("grid")) {
        auto s = top.child("grid");
        s.read("h", c.h);
        std::string rule = to_string(c.retention);
        s.read("retention", rule);
        if (rule == "cut-cell")
            c.retention = RetentionRule::CutCell;
        else if (rule == "midpoint")
            c.retention = RetentionRule::Midpoint;
        else
            throw ConfigError("grid.retention: expected cut-cell or midpoint");
        s.finish();
    }
    require(c.h > 0.0, "grid.h must be positive");
    if (top.has("solver")) {
        auto s = top.child("solver");
        std::string backend = backend_name(c.solver.backend);
        s.read("backend", backend);
        c.solver.backend = backend_from_string(backend);
        s.read("tolerance", c.solver.tolerance);
        s.read("max_iterations", c.solver.max_iterations);
        s.read("restart", c.solver.restart);
        s.read("dense_threshold", c.solver.dense_threshold);
        s.finish();
        require(c.solver.tolerance > 0.0, "solver.tolerance must be positive");
        require(c.solver.max_iterations > 0 && c.solver.restart > 0, "solver iteration counts must be positive");
    }
    if (top.has("contrast")) {
        auto s = top.child("contrast");
        s.read("type", c.contrast.type);
        s.read("rho", c.contrast.rho);
        s.read("expression", c.contrast.expression);
        s.read("path", c.contrast.path);
        s.finish();
        if (c.contrast.type == "constant")
            require(c.contrast.rho > 0.0, "contrast.rho must be positive");
        else if (c.contrast.type == "expression")
            (void)Expression(c.contrast.expression);
        else if (c.contrast.type == "designed-file")
            require(!c.contrast.path.empty(), "contrast.path is required for designed-file");
        else
            throw ConfigError("contrast.type: expected constant, expression or designed-file");
    }
    if (top.has("solve")) {
        auto s = top.child("solve");
        SolveSection v;
        s.read("k", v.k);
        s.read("incident_deg", v.incident_deg);
        s.read("far_field_angles", v.far_field_angles);
        s.read("compare_mie", v.compare_mie);
        s.finish();
        require(v.k > 0.0, "solve.k must be positive");
        require(v.far_field_angles >= 1, "solve.far_field_angles must be >= 1");
        c.solve = v;
    }
    if (top.has("scan")) {
        auto s = top.child("scan");
        ScanSection v;
        s.read("directions_deg", v.directions_deg);
        s.read("k_min", v.k_min);
        s.read("k_max", v.k_max);
        s.read("steps", v.steps);
        s.read("kappas", v.kappas);
        s.finish();
        require(v.k_min > 0.0 && v.k_max > v.k_min, "scan: need 0 < k_min < k_max");
        require(v.steps >= 2, "scan.steps must be >= 2");
        require(!v.directions_deg.empty(), "scan.directions_deg must be non-empty");
        for (double kappa : v.kappas) require(kappa > 0.0, "scan.kappas must be positive");
        c.scan = v;
    }
    if (top.has("design")) {
        auto s = top.child("design");
        DesignSection v;
        std::string mode = to_string(v.mode);
        s.read("mode", mode);
        v.mode = design_mode_from_string(mode);
        s.read("incident_deg", v.incident_deg);
        s.read("directions_deg", v.directions_deg);
        s.read("k", v.k);
        s.read("epsilon", v.epsilon);
        s.read("seed", v.seed);
        s.read("stop_tolerance", v.stop_tolerance);
        s.read("max_iterations", v.max_iterations);
        s.read("fixed_iterations", v.fixed_iterations);
        s.read("verify_h", v.verify_h);
        s.read("epsilon_sweep", v.epsilon_sweep);
        s.read("sweep_iterations", v.sweep_iterations);
        s.finish();
        (void)Expression(v.seed);
        require(v.k > 0.0 && v.epsilon > 0.0, "design: k and epsilon must be positive");
        require(v.max_iterations >= 1 && v.sweep_iterations >= 1, "design: iteration counts must be >= 1");
        require(v.verify_h >= 0.0, "design.verify_h must be >= 0");
        for (double e : v.epsilon_sweep) require(e > 0.0, "design.epsilon_sweep values must be positive");
        c.design = v;
    }
    if (top.has("output")) {
        auto s = top.child("output");
        s.read("directory", c.output_directory);
        s.finish();
    }
    top.finish();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    RunConfig c = parse_config(ss.str());
    c.base_directory = std::filesystem::path(path).parent_path().string();
    if (c.base_directory.empty()) c.base_directory = ".";
    return c;
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["schema"] = kConfigSchema;
    json d{{"shape", c.domain.shape}};
    if (c.domain.shape == "disk") {
        d["center"] = vec(c.domain.center);
        d["radius"] = c.domain.radius;
    } else {
        d["lower"] = vec(c.domain.lower);
        d["upper"] = vec(c.domain.upper);
        if (c.domain.shape == "expression") d["inside"] = c.domain.inside;
    }
    j["domain"] = d;
    j["grid"] = {{"h", c.h}, {"retention", to_string(c.retention)}};
    j["solver"] = {{"backend", backend_name(c.solver.backend)},
                   {"tolerance", c.solver.tolerance},
                   {"max_iterations", c.solver.max_iterations},
                   {"restart", c.solver.restart},
                   {"dense_threshold", c.solver.dense_threshold}};
    json con{{"type", c.contrast.type}};
    if (c.contrast.type == "constant") con["rho"] = c.contrast.rho;
    if (c.contrast.type == "expression") con["expression"] = c.contrast.expression;
    if (c.contrast.type == "designed-file") con["path"] = c.contrast.path;
    j["contrast"] = con;
    if (c.solve)
        j["solve"] = {{"k", c.solve->k},
                      {"incident_deg", c.solve->incident_deg},
                      {"far_field_angles", c.solve->far_field_angles},
                      {"compare_mie", c.solve->compare_mie}};
    if (c.scan)
        j["scan"] = {{"directions_deg", c.scan->directions_deg},
                     {"k_min", c.scan->k_min},
                     {"k_max", c.scan->k_max},
                     {"steps", c.scan->steps},
                     {"kappas", c.scan->kappas}};
    if (c.design)
        j["design"] = {{"mode", to_string(c.design->mode)},
                       {"incident_deg", c.design->incident_deg},
                       {"directions_deg", c.design->directions_deg},
                       {"k", c.design->k},
                       {"epsilon", c.design->epsilon},
                       {"seed", c.design->seed},
                       {"stop_tolerance", c.design->stop_tolerance},
                       {"max_iterations", c.design->max_iterations},
                       {"fixed_iterations", c.design->fixed_iterations},
                       {"verify_h", c.design->verify_h},
                       {"epsilon_sweep", c.design->epsilon_sweep},
                       {"sweep_iterations", c.design->sweep_iterations}};
    j["output"] = {{"directory", c.output_directory}};
    return j.dump(2) + "\n";
}

}  // namespace ffinv
