#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffinv/field_grid.hpp"
#include "ffinv/invisibility_designer.hpp"
#include "ffinv/ls_solver.hpp"

namespace ffinv {

inline constexpr const char* kConfigSchema = "ffinv-config/1";

/// Domain as written in a config: disk, rectangle, or {x : inside(x) < 0} in a box.
struct DomainConfig {
    std::string shape = "disk";  ///< disk | rectangle | expression
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    Vec2 lower{-1.0, -1.0};
    Vec2 upper{1.0, 1.0};
    std::string inside;  ///< expression shape only

    [[nodiscard]] DomainSpec to_spec() const;
};

struct ContrastConfig {
    std::string type = "constant";  ///< constant | expression | designed-file
    double rho = 1.0;               ///< constant
    std::string expression;         ///< rho(x, y)
    std::string path;               ///< designed-file, relative to the config file
};

struct SolveSection {
    double k = 2.0;
    double incident_deg = 0.0;
    int far_field_angles = 360;
    bool compare_mie = false;  ///< also write the series far field (constant contrast on an origin disk)
};

struct ScanSection {
    std::vector<double> directions_deg{0.0, 180.0};
    double k_min = 0.5;
    double k_max = 6.0;
    int steps = 56;
    std::vector<double> kappas;
};

struct DesignSection {
    DesignMode mode = DesignMode::SingleIncident;
    double incident_deg = 0.0;
    std::vector<double> directions_deg{90.0, 180.0, 225.0};
    double k = 4.0;
    double epsilon = 0.15;
    std::string seed = "1 + x + y";
    double stop_tolerance = 1e-13;
    int max_iterations = 200;
    bool fixed_iterations = false;
    double verify_h = 0.0;  ///< 0 picks h / 2
    std::vector<double> epsilon_sweep;  ///< non-empty runs one design per value
    int sweep_iterations = 10;          ///< fixed iteration count of each sweep design
};

struct RunConfig {
    DomainConfig domain;
    double h = 0.02;
    RetentionRule retention = RetentionRule::CutCell;
    SolverOptions solver;
    ContrastConfig contrast;
    std::optional<SolveSection> solve;
    std::optional<ScanSection> scan;
    std::optional<DesignSection> design;
    std::string output_directory = "out";
    std::string base_directory = ".";  ///< directory of the config file; not serialised

    /// DesignConfig for the design section (grid, domain and solver from the top level).
    [[nodiscard]] DesignConfig design_config() const;
};

/// Parses a JSON config. Throws ConfigError on syntax errors, a missing or
/// unsupported schema, unknown keys and invalid values.
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);
/// JSON text; parse_config(serialize_config(c)) reproduces c.
[[nodiscard]] std::string serialize_config(const RunConfig& config);

[[nodiscard]] std::string to_string(RetentionRule rule);

}  // namespace ffinv
