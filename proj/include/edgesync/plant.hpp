#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "edgesync/graph.hpp"
#include "edgesync/numerics.hpp"

namespace edgesync {

struct ConstantWeight {
    double value = 0.0;
    friend bool operator==(const ConstantWeight&, const ConstantWeight&) = default;
};

enum class Wave { Sine, Cosine };

/// base + amplitude * sin(omega t + phase), or the cosine variant.
struct SinusoidWeight {
    double base = 0.0;
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    Wave wave = Wave::Sine;
    friend bool operator==(const SinusoidWeight&, const SinusoidWeight&) = default;
};

using WeightDescriptor = std::variant<ConstantWeight, SinusoidWeight>;

struct WeightSample {
    Vector value;
    Vector rate;
};

/// True, time-varying edge weights of the complete graph with their
/// amplitude bound w_d and rate bound w_d'.
class WeightTrajectory {
public:
    WeightTrajectory() = default;
    /// Bounds are set to the tightest values the descriptors admit.
    explicit WeightTrajectory(std::vector<WeightDescriptor> edges);
    /// Throws std::invalid_argument if a descriptor violates either bound.
    WeightTrajectory(std::vector<WeightDescriptor> edges, double bound, double rate_bound);

    std::size_t size() const noexcept { return edges_.size(); }
    const std::vector<WeightDescriptor>& descriptors() const noexcept { return edges_; }
    double bound() const noexcept { return bound_; }
    double rate_bound() const noexcept { return rate_bound_; }

    WeightSample eval(double t) const;
    Vector values(double t) const { return eval(t).value; }

    friend bool operator==(const WeightTrajectory&, const WeightTrajectory&) = default;

private:
    std::vector<WeightDescriptor> edges_;
    double bound_ = 0.0;
    double rate_bound_ = 0.0;
};

inline WeightSample weight_eval(const WeightTrajectory& traj, double t) { return traj.eval(t); }

/// The 30-entry six-agent trajectory, assigned to edges in canonical order.
WeightTrajectory paper_weight_trajectory();

/// Constant weights, one per edge.
WeightTrajectory constant_weights(std::span<const double> w);

enum class DynamicsKind { Linear, Tanh };

/// f(x) = gain * x (Linear) or gain * tanh(x) (Tanh); Lipschitz constant |gain|.
struct AgentDynamics {
    DynamicsKind kind = DynamicsKind::Linear;
    double gain = 1.0;
    friend bool operator==(const AgentDynamics&, const AgentDynamics&) = default;
};

class InternalDynamics {
public:
    InternalDynamics() = default;
    explicit InternalDynamics(std::vector<AgentDynamics> agents);
    static InternalDynamics uniform(std::size_t n, AgentDynamics agent);

    std::size_t size() const noexcept { return agents_.size(); }
    const std::vector<AgentDynamics>& agents() const noexcept { return agents_; }

    double eval(std::size_t i, double x) const;
    Vector eval(std::span<const double> x) const;
    double lipschitz(std::size_t i) const;
    double lipschitz() const;  // L_f

    /// Common slope when every agent is linear with the same gain; then
    /// E_T^T (F(x) - F(y)) = slope * E_T^T (x - y).
    std::optional<double> uniform_linear_slope() const;

    friend bool operator==(const InternalDynamics&, const InternalDynamics&) = default;

private:
    std::vector<AgentDynamics> agents_;
};

/// x' = F(x) - c E_odot diag(w(t)) E^T x + u.
Vector plant_rhs(const CompleteGraphModel& model, const WeightTrajectory& traj, const InternalDynamics& dyn,
                 double coupling, std::span<const double> x, std::span<const double> u, double t);

/// Same vector field with the weights already evaluated.
Vector plant_rhs(const CompleteGraphModel& model, std::span<const double> weights, const InternalDynamics& dyn,
                 double coupling, std::span<const double> x, std::span<const double> u);

}  // namespace edgesync
