#pragma once

#include <string>
#include <vector>

#include "casimir/fresnel.hpp"
#include "casimir/material_io.hpp"
#include "casimir/spectral.hpp"

namespace casimir {

inline constexpr const char* tool_version = "1.0.0";

enum class OutputFormat { csv, json };

// One parsed run configuration. Lengths are meters and temperatures kelvin
// here; the JSON file speaks nanometers (see README.md for the schema).
struct RunConfig {
    double h = 0.0;  // summed gap width c - b
    double b = 0.0;
    std::vector<double> delta_grid;    // sorted, |delta| < h/2
    std::vector<double> b_grid;        // optional thickness sweep, sorted
    std::vector<double> temperatures;  // sorted, >= 0; 0 selects the integral
    MaterialFile wall, slab, gap;
    QuadratureSpec quad;
    OutputFormat format = OutputFormat::csv;
    bool strict = false;  // a failed row aborts the run with exit code 3

    // freq-shift block
    double k_spring = 0.0;  // N / m^3
    double m_area = 0.0;    // kg / m^2
    bool has_oscillator = false;

    // compare-geometries: single gap of the open geometry, defaults to h/2
    double open_gap = 0.0;

    MaterialSet materials() const { return {wall.model, slab.model, gap.model}; }
};

// Load and validate a JSON run configuration. Material paths resolve
// relative to the config file's directory. Unknown keys are rejected.
// Throws ConfigError.
RunConfig load_run_config(const std::string& path);

}  // namespace casimir
