#pragma once

#include <span>
#include <vector>

#include "edgesync/graph.hpp"
#include "edgesync/numerics.hpp"
#include "edgesync/plant.hpp"

namespace edgesync {

enum class Mode {
    EstimateOnly,     // x_hat is an exogenous exciting reference, pure gradient law
    EstimateAndSync,  // z_hat is the auxiliary filter state, leakage law
};

struct ControllerConfig {
    double c = 1.0;       // coupling strength of the network
    double c1 = 2.0;      // tracking gain
    double c2 = 1.3;      // auxiliary filter decay
    double sigma1 = 0.0;  // leakage
    double kappa = 1.0;   // tanh sharpness inside psi
    double excitation_gain = 1.0;  // scales p(t)
    Mode mode = Mode::EstimateOnly;

    /// Throws std::invalid_argument on a violated gain constraint. In
    /// EstimateAndSync mode c2 must exceed the Lipschitz constant.
    void validate(double lipschitz) const;

    friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

struct EstimatorState {
    Vector w_hat;
    Vector z_hat;
    Vector x_hat;
};

struct ReferenceTerm {
    std::size_t node = 1;  // 1-based
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    friend bool operator==(const ReferenceTerm&, const ReferenceTerm&) = default;
};

/// Multisine reference x_hat_i(t) = sum of a sin(omega t + phase) over the
/// node's terms.
struct PEReference {
    std::vector<ReferenceTerm> terms;

    /// One unit-amplitude term per node with omega_i = 0.7 + 0.3 i, zero phase.
    static PEReference default_for(std::size_t agents);
    /// Throws if a frequency is zero or two frequencies coincide.
    void validate(std::size_t agents) const;
    double max_frequency_hz() const;

    friend bool operator==(const PEReference&, const PEReference&) = default;
};

struct ReferenceSample {
    Vector x_hat;
    Vector dx_hat;
};

ReferenceSample pe_reference(const PEReference& ref, std::size_t agents, double t);

/// u = -c1 (x - x_hat) + dx_hat + c E_odot diag(w_hat) z_hat - F(x_hat).
Vector control_input(const ControllerConfig& cfg, const InternalDynamics& dyn, const CompleteGraphModel& model,
                     std::span<const double> x, std::span<const double> x_hat, std::span<const double> dx_hat,
                     std::span<const double> w_hat, std::span<const double> z_hat);

/// dw_hat = -c diag(z_hat) E_odot^T E_T z_tilde_T.
Vector update_pure(const ControllerConfig& cfg, const CompleteGraphModel& model, std::span<const double> z_hat,
                   std::span<const double> z_tilde_tree);

/// update_pure(...) - sigma1 w_hat.
Vector update_sigma(const ControllerConfig& cfg, const CompleteGraphModel& model, std::span<const double> z_hat,
                    std::span<const double> z_tilde_tree, std::span<const double> w_hat);

/// 5 sin(pi t/2) + 4 cos(2 pi t) - 6 sin(8 pi t) + sin(pi t) - 4 cos(10 pi t)
///   + 2 cos(6 pi t) + 3 sin(3 pi t); period 4.
double excitation_p(double t);

/// Highest frequency of excitation_p, in Hz.
inline constexpr double kExcitationMaxHz = 5.0;

/// psi = pinv(E) tanh(kappa E_T z_tilde_T) * gain * p(t), tanh elementwise.
Vector psi(const ControllerConfig& cfg, const CompleteGraphModel& model, std::span<const double> z_tilde_tree,
           double t);

/// x_hat = pinv(E^T) z_hat, the minimum-norm node vector behind z_hat.
Vector node_estimate(const CompleteGraphModel& model, std::span<const double> z_hat);

/// dz_hat = E^T F(x_hat) - c2 z_hat + psi(t, z_tilde_T), x_hat = node_estimate(z_hat).
Vector aux_rhs(const ControllerConfig& cfg, const CompleteGraphModel& model, const InternalDynamics& dyn,
               std::span<const double> z_hat, std::span<const double> z_tilde_tree, double t);

}  // namespace edgesync
