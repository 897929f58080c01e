#pragma once

#include "l2lab/complex.hpp"
#include "l2lab/section.hpp"
#include "l2lab/spectral.hpp"
#include "l2lab/vn_oracle.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace l2lab {

/// Parameters for one experiment run.
///
/// Files use a TOML subset: one `key = value` per line, `#` comments,
/// values are integers, floats, double-quoted strings, booleans or flat
/// arrays of those (`[4, 8, 16]`). Unknown keys are rejected.
struct ExperimentConfig {
    std::string name = "experiment";
    std::string complex = "torus2_Z2";    // built-in name
    std::string complex_file;             // overrides `complex` when set
    std::vector<int> ladder = {4, 8, 16};  // box side L, or ball radius for free groups
    std::vector<BoundaryCondition> conditions = {BoundaryCondition::Relative, BoundaryCondition::Absolute};
    std::vector<int> degrees;              // empty means every degree
    std::vector<double> t_grid = {0.5, 1.0, 2.0};
    std::vector<double> lambda_grid = {0.5, 1.0, 2.0};
    std::vector<double> s_samples = {1.5, 2.0, 3.0};
    double zeta_lambda = 1.0;
    std::vector<double> ns_window = {0.01, 0.1};
    int ns_points = 25;
    double nfb_min_r2 = 0.9;
    double nfb_center_tolerance = 1e-6;
    std::uint64_t seed = 1;
    std::size_t dense_cap = 4000;
    int trace_probes = 64;
    QuadratureGrid quadrature = {};
    std::string output_dir = "out";
    /// Set by the driver, not read from files.
    int threads = 1;
    /// Directory of the config file; relative `complex_file` paths resolve here.
    std::filesystem::path base_dir;

    SpectralOptions spectral_options() const { return {dense_cap, trace_probes, seed}; }
};

/// Parses config text; throws ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical `key = value` rendering; round-trips through parse_config.
std::string format_config(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of the canonical rendering, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Loads the configured complex (file or built-in).
EquivariantChainComplex resolve_complex(const ExperimentConfig& config);

/// Degrees to run: the configured list, or 0..dim.
std::vector<int> resolve_degrees(const ExperimentConfig& config, const EquivariantChainComplex& complex);

}  // namespace l2lab
