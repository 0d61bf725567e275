#include "ffinv/design_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "ffinv/expression.hpp"

namespace ffinv {

using nlohmann::json;

namespace {

json domain_json(const DomainSpec& d) {
    switch (d.kind) {
        case DomainSpec::Kind::Disk:
            return {{"shape", "disk"}, {"center", {d.center.x, d.center.y}}, {"radius", d.radius}};
        case DomainSpec::Kind::Rectangle:
            return {{"shape", "rectangle"},
                    {"lower", {d.box_lower().x, d.box_lower().y}},
                    {"upper", {d.box_upper().x, d.box_upper().y}}};
        case DomainSpec::Kind::Indicator: return {{"shape", "indicator"}, {"description", d.describe()}};
    }
    return {};
}

}  // namespace

void write_design(std::ostream& os, const DesignedContrast& d) {
    const auto& cfg = d.config;
    json j;
    j["schema"] = kDesignSchema;
    j["mode"] = to_string(cfg.mode);
    if (cfg.mode == DesignMode::SingleIncident) j["incident_deg"] = cfg.incident_deg;
    j["directions_deg"] = cfg.directions_deg;
    j["k"] = cfg.k;
    j["epsilon"] = cfg.epsilon;
    j["h"] = cfg.h;
    j["domain"] = domain_json(cfg.domain);
    j["seed"] = d.mu.seed_text;
    j["stop_tolerance"] = cfg.stop_tolerance;
    j["iterations"] = d.iterations;
    j["converged"] = d.converged;
    j["tau"] = std::vector<double>(d.tau.data(), d.tau.data() + d.tau.size());

    const int p = static_cast<int>(d.mu.frequencies.size());
    json table = json::array();
    for (int i = 0; i < p; ++i) {
        json row{{"xi", {d.mu.frequencies[i].x, d.mu.frequencies[i].y}},
                 {"cos", d.mu.coefficients(i)},
                 {"sin", d.mu.coefficients(p + i)}};
        const auto [m, n] = d.basis.labels[i];
        row["label"] = n < 0 ? json{m + 1} : json{m + 1, n + 1};
        table.push_back(row);
    }
    j["mu"] = {{"form", "seed + sum_j cos_j cos(xi_j.x) + sin_j sin(xi_j.x)"}, {"terms", table}};
    j["rho_min"] = d.rho_min;
    j["rho_max"] = d.rho_max;
    j["initial_residual"] = d.initial_residual;
    j["final_residual"] = d.final_residual;
    json finals = json::array();
    for (const auto& f : d.final_far_fields) finals.push_back({f.real(), f.imag()});
    j["final_far_fields"] = finals;
    json hist = json::array();
    for (const auto& r : d.history)
        hist.push_back({{"j", r.iteration}, {"target_abs", r.target_abs}, {"step", r.step}});
    j["history"] = hist;
    j["warnings"] = d.warnings;
    os << j.dump(2) << '\n';
}

void save_design(const std::string& path, const DesignedContrast& designed) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write design file " + path);
    write_design(f, designed);
}

LoadedDesign read_design(std::istream& is) {
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("design file: ") + e.what());
    }
    try {
        if (j.value("schema", "") != kDesignSchema)
            throw ConfigError("design file: expected schema " + std::string(kDesignSchema));
        LoadedDesign out;
        out.mode = design_mode_from_string(j.at("mode").get<std::string>());
        out.incident_deg = j.value("incident_deg", 0.0);
        out.directions_deg = j.at("directions_deg").get<std::vector<double>>();
        out.k = j.at("k").get<double>();
        out.epsilon = j.at("epsilon").get<double>();
        const auto seed = std::make_shared<Expression>(j.at("seed").get<std::string>());
        out.mu.seed_text = seed->text();
        out.mu.seed = [seed](Vec2 x) { return (*seed)(x); };
        const auto& terms = j.at("mu").at("terms");
        const auto p = static_cast<Eigen::Index>(terms.size());
        out.mu.coefficients.resize(2 * p);
        for (Eigen::Index i = 0; i < p; ++i) {
            const auto& t = terms[static_cast<std::size_t>(i)];
            const auto xi = t.at("xi").get<std::vector<double>>();
            if (xi.size() != 2) throw ConfigError("design file: xi must have two components");
            out.mu.frequencies.push_back({xi[0], xi[1]});
            out.mu.coefficients(i) = t.at("cos").get<double>();
            out.mu.coefficients(p + i) = t.at("sin").get<double>();
        }
        return out;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("design file: ") + e.what());
    }
}

LoadedDesign load_design(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open design file " + path);
    return read_design(f);
}

void write_history_csv(std::ostream& os, const DesignedContrast& d) {
    const auto old = os.precision(17);
    const std::size_t p = d.basis.labels.size();
    os << "j";
    for (std::size_t i = 0; i < p; ++i) os << ",abs_" << i + 1;
    os << ",residual_sum,step\n";
    for (const auto& r : d.history) {
        os << r.iteration;
        for (double a : r.target_abs) os << ',' << a;
        os << ',' << r.residual_sum << ',' << r.step << '\n';
    }
    os.precision(old);
}

}  // namespace ffinv
