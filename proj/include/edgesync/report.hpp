#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "edgesync/analysis.hpp"
#include "edgesync/config.hpp"
#include "edgesync/sim.hpp"

namespace edgesync {

/// `t,x_1..x_N,xhat_1..xhat_N,what_1..what_M,wtrue_1..wtrue_M,norm_ztilde,norm_wtilde,norm_z,V1`
std::string timeseries_header(std::size_t agents);

/// Header plus every `decimation`-th sample, the last sample always included.
/// Numbers carry 17 significant digits.
std::string timeseries_csv(const SimulationRecord& run, std::size_t decimation = 1);

/// One row per window: window_start,window_end,qualified,lambda_min,null_directions.
std::string pe_report_csv(const PEReport& report);

struct RunSummary {
    Mode mode = Mode::EstimateOnly;
    std::size_t agents = 0;
    double t_end = 0.0;

    double early_end = 0.0;  // early interval is [0, early_end]
    double late_begin = 0.0; // late interval is [late_begin, t_end]
    double sup_w_tilde_early = 0.0;
    double sup_z_early = 0.0;
    double sup_w_tilde_late = 0.0;
    double sup_z_late = 0.0;
    double final_w_tilde = 0.0;
    double final_z = 0.0;

    std::string pe_signal;
    PEReport pe;
    RecoveryReport recovery;
    double unobservable_norm = 0.0;  // ||projection of w(t_end) - w_hat(0)||
};

/// Early interval [0, 0.05 t_end], late interval [0.5 t_end, t_end]. The PE
/// report is for diag(z_hat) in EstimateOnly mode and B diag(z_hat) otherwise;
/// it has no windows when the run is shorter than one.
RunSummary summarize(const RunConfig& cfg, const SimulationRecord& run, double pe_t_begin = 0.0);

/// PE report used by summarize and check-pe for the scenario's mode.
PEReport mode_pe_report(const RunConfig& cfg, const SimulationRecord& run, double window, double stride,
                        double t_begin);

/// `key = value` lines.
std::string summary_text(const RunSummary& s);

/// Writes timeseries.csv, pe_report.csv, summary.txt and, if cfg.emit_svg,
/// weights.svg, weight_errors.svg, sync_errors.svg and ztilde.svg into dir.
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg, const SimulationRecord& run,
                     const RunSummary& summary);

}  // namespace edgesync
