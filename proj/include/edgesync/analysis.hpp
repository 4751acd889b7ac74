#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "edgesync/graph.hpp"
#include "edgesync/numerics.hpp"
#include "edgesync/sim.hpp"

namespace edgesync {

class CoverageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct WindowMargin {
    double start = 0.0;
    double end = 0.0;
    /// False when the window was skipped by a state floor; lambda_min is then 0
    /// and does not enter mu_hat.
    bool qualified = true;
    double lambda_min = 0.0;
    /// Eigenvalues of the window Gram matrix that are numerically zero.
    std::size_t null_directions = 0;
};

/// Windowed excitation margins of a matrix signal.
///
/// Each margin is the smallest eigenvalue of the Gram integral over the
/// window. Eigenvalues at or below 1e-12 of the largest one are reported as
/// exactly 0, so margins are never negative.
struct PEReport {
    double window = 0.0;
    double stride = 0.0;
    double horizon_begin = 0.0;
    double horizon_end = 0.0;
    std::vector<WindowMargin> margins;  // every window, qualified or not
    double mu_hat = 0.0;                // min lambda_min over qualified windows
    std::size_t qualified_windows = 0;

    /// No window qualified; mu_hat carries no information.
    bool empty() const noexcept { return qualified_windows == 0; }
    bool certified() const noexcept { return !empty() && mu_hat > 0.0; }
    std::size_t max_null_directions() const noexcept;
};

/// Gram integral of phi(t)^T phi(t) by the trapezoid rule over uniformly
/// spaced samples [first, last].
Matrix gram_integral(std::span<const Matrix> values, double spacing, std::size_t first, std::size_t last);

/// pe_margin over windows [t0 + j*stride, t0 + j*stride + window], j = 0, 1, ...
/// Throws CoverageError if the samples span less than one window and
/// std::invalid_argument if the samples are not uniformly spaced.
PEReport pe_margin(std::span<const double> times, std::span<const Matrix> values, double window, double stride);

struct UdpeOptions {
    double window = 4.0;
    double stride = 4.0;
    double floor = 1e-3;  // windows where ||z_tilde_T|| dips below this are skipped
    double t_begin = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
};

/// Uniform delta-PE margin of B diag(z_hat(t)), B = E_T^T E_odot, along a run.
PEReport udpe_margin(const SimulationRecord& run, const CompleteGraphModel& model, const UdpeOptions& opts);

/// PE margin of diag(z_hat(t)) itself over [t_begin, t_end].
PEReport regressor_pe_margin(const SimulationRecord& run, double window, double stride, double t_begin = 0.0,
                             double t_end = std::numeric_limits<double>::infinity());

struct FiltrationReport {
    PEReport regressor;     // B diag(z_hat)
    PEReport filter_state;  // diag(z_hat)
};

/// Runs an EstimateAndSync scenario (the auxiliary filter driven by psi) up
/// to `horizon` and reports the excitation margins of its output over
/// [t_begin, horizon]. No state floor is applied.
FiltrationReport filtration_check(const Scenario& scenario, double horizon, double t_begin, double window,
                                  double stride);

/// sup |series| over samples with t >= t0. Throws CoverageError if t0 is
/// past the last sample.
double ultimate_bound(std::span<const double> times, std::span<const double> series, double t0);

/// sup |series| over samples with t_begin <= t <= t_end.
double interval_bound(std::span<const double> times, std::span<const double> series, double t_begin, double t_end);

struct RecoveryReport {
    double threshold = 0.0;
    std::vector<std::size_t> predicted;  // 0-based edge indices
    double precision = 1.0;  // defined as 1 when nothing is predicted
    double recall = 1.0;     // defined as 1 when the truth has no edges
    double max_error = 0.0;  // max |w_hat_k - w_k| over true edges
};

/// Edges are predicted where |w_hat_k| >= threshold and scored against the
/// support {k : |truth_k| > 0}.
RecoveryReport recover_topology(std::span<const double> w_hat, std::span<const double> truth, double threshold);

/// V1 = 0.5 ||z_tilde_T||^2 + 0.5 ||w_tilde||^2.
double lyapunov_v1(std::span<const double> z_tilde_tree, std::span<const double> w_tilde);

/// Component of a weight vector in the subspace that the reduced edge
/// coordinates cannot see.
///
/// For edge-consistent regressors (z_hat = E^T x_hat) the matrix
/// B diag(z_hat) annihilates every weight pattern v with v_(i,h) = c_i for
/// all heads h and sum_i c_i = 0, because E_T^T 1 = 0. Neither update law
/// moves an estimate along these N-1 directions, so this projection of
/// (w - w_hat(0)) is the part of the weight error that never decays through
/// learning. Returned as the orthogonal projection onto that subspace.
Vector unobservable_weight_component(const CompleteGraphModel& model, std::span<const double> w);

}  // namespace edgesync
