// config.hpp — schema-validated run configuration for the command line tool.
// Flat JSON with sections; unknown keys are rejected (keys starting with '_'
// are treated as comments).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcqt/maser.hpp"
#include "rcqt/set_vibrations.hpp"
#include "rcqt/spectral.hpp"

namespace rcqt {

struct SweepSpec {
    std::string axis; // maser: Delta21|gamma|d0 (ω0-relative units); set: bias (Ω1 units)
    std::vector<double> values;
};

struct OutputSpec {
    std::string format{"csv"}; // csv | json
    std::string path;          // base path; subcommand may derive siblings
};

struct RunConfig {
    std::string model; // maser | set | map-sd | eqcheck
    MaserConfig maser{MaserConfig::defaults()};
    SetConfig set{SetConfig::staircase_defaults()};
    SpectralDensity map_input; // for map-sd
    std::optional<SweepSpec> sweep;
    std::vector<MaserMode> modes{MaserMode::Bare, MaserMode::RCSecular,
                                 MaserMode::RCNonSecular};
    OutputSpec output;
    int jobs{1};
    unsigned seed{0};
    int map_points{4000};
    double steady_residual_tol{1e-10};
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

// Expand a maser sweep axis given in ω0-relative units to absolute values
std::vector<double> maser_axis_absolute(const RunConfig& cfg, MaserAxis axis);
MaserAxis maser_axis_from_name(const std::string& name);

} // namespace rcqt
