#pragma once

#include <cstddef>
#include <vector>

#include "edgesync/controller.hpp"
#include "edgesync/graph.hpp"
#include "edgesync/plant.hpp"

namespace edgesync {

/// Everything needed to run one closed-loop experiment.
///
/// In EstimateOnly mode x_hat(t) = x_hat0 + the PE reference multisine and
/// z_hat = E^T x_hat. In EstimateAndSync mode z_hat is integrated from z_hat0
/// and x_hat is recovered from it; the reference and x_hat0 are unused.
struct Scenario {
    std::size_t agents = 0;
    WeightTrajectory weights;
    InternalDynamics dynamics;
    ControllerConfig controller;
    PEReference reference;
    Vector x0;
    Vector w_hat0;
    Vector z_hat0;
    Vector x_hat0;
    double dt = 1e-3;
    double t_end = 1.0;
    std::size_t sample_every = 1;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    std::size_t steps() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Sampled closed-loop trajectory. Primary series are x, x_hat, w_hat,
/// z_hat and the true weights; the rest are derived from them per sample.
struct SimulationRecord {
    std::size_t agents = 0;
    std::size_t edges = 0;
    Mode mode = Mode::EstimateOnly;

    std::vector<double> times;
    std::vector<Vector> x, x_hat, w_hat, z_hat, w_true;

    std::vector<Vector> z, z_tilde_tree, w_tilde;
    std::vector<double> norm_z_tilde, norm_w_tilde, norm_z, v1;

    std::size_t size() const noexcept { return times.size(); }
};

/// Integrates plant, controller, estimator and (in EstimateAndSync mode)
/// the auxiliary filter with fixed-step RK4. Throws DivergenceError if a
/// state becomes non-finite or exceeds kDivergenceLimit in magnitude.
SimulationRecord simulate(const Scenario& scenario);

inline constexpr double kDivergenceLimit = 1e9;

struct ErrorTrajectory {
    std::vector<double> times;
    std::vector<Vector> z_tilde_tree;
    std::vector<Vector> w_tilde;
};

/// Integrates the reduced error dynamics in (z_tilde_T, w_tilde) directly,
/// reading the true weights inside the edge Laplacian. Only valid when all
/// agents share one linear slope, since otherwise E_T^T (F(x) - F(x_hat)) is
/// not a function of z_tilde_T; throws std::invalid_argument in that case.
/// In EstimateAndSync mode z_hat is carried along as an extra state.
ErrorTrajectory simulate_error_system(const Scenario& scenario);

/// The six-agent time-varying experiment with the published gains.
Scenario reproduce_paper_scenario();

/// Value of kappa used by reproduce_paper_scenario.
inline constexpr double kPaperKappa = 100.0;

}  // namespace edgesync
