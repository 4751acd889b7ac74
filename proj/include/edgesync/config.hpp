#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "edgesync/sim.hpp"

namespace edgesync {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario plus output settings, stored as a flat INI-style file:
///
///   [graph]      agents
///   [plant]      dynamics, dynamics_gain, weight_base, weight_amplitude,
///                weight_omega, weight_phase, weight_wave, weight_bound,
///                weight_rate_bound
///   [controller] mode, c, c1, c2, sigma1, kappa, excitation_gain,
///                reference_node, reference_amplitude, reference_omega,
///                reference_phase
///   [sim]        x0, w_hat0, z_hat0, x_hat0, dt, t_end, sample_every
///   [output]     dir, emit_svg, csv_decimation, pe_window, pe_stride,
///                udpe_floor, recovery_threshold
///
/// Arrays are comma lists; a single value is broadcast to the full length.
/// Lines starting with ';' are comments. Only [graph] agents is required.
struct RunConfig {
    Scenario scenario;
    std::filesystem::path output_dir = "edgesync_out";
    bool emit_svg = true;
    std::size_t csv_decimation = 1;
    double pe_window = 4.0;
    double pe_stride = 4.0;
    double udpe_floor = 1e-3;
    double recovery_threshold = 0.1;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Defaults for an N-agent run: linear f(x) = x, zero weights, default PE
/// reference, x0 = (1..N)/N, zero estimator state, dt = 1e-3, t_end = 10.
RunConfig default_run_config(std::size_t agents);

/// Throws ConfigError with a one-line message on any malformed or invalid
/// entry, including scenario constraint violations.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: every key written, doubles with 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

std::string_view mode_name(Mode mode);

}  // namespace edgesync
