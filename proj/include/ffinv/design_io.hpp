#pragma once

#include <iosfwd>
#include <string>

#include "ffinv/invisibility_designer.hpp"

namespace ffinv {

inline constexpr const char* kDesignSchema = "ffinv-design/1";

/// Design file (JSON): mode, directions, k, epsilon, tau, the coefficient
/// table of mu over the cos/sin dictionary, rho extremes and the residual
/// history.
void write_design(std::ostream& os, const DesignedContrast& designed);
void save_design(const std::string& path, const DesignedContrast& designed);

struct LoadedDesign {
    DesignMode mode = DesignMode::SingleIncident;
    double incident_deg = 0.0;
    std::vector<double> directions_deg;
    double k = 0.0;
    double epsilon = 0.0;
    AnalyticContrast mu;

    /// rho(x) = 1 + epsilon mu(x).
    [[nodiscard]] double rho(Vec2 x) const { return 1.0 + epsilon * mu(x); }
};

/// Throws ConfigError on malformed files.
[[nodiscard]] LoadedDesign read_design(std::istream& is);
[[nodiscard]] LoadedDesign load_design(const std::string& path);

/// CSV: j, abs_1..abs_P, residual_sum, step.
void write_history_csv(std::ostream& os, const DesignedContrast& designed);

}  // namespace ffinv
