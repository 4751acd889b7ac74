#include "edgesync/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace edgesync {

namespace {

struct DescriptorBounds {
    double value;
    double rate;
};

DescriptorBounds bounds_of(const WeightDescriptor& d) {
    if (const auto* c = std::get_if<ConstantWeight>(&d)) return {std::abs(c->value), 0.0};
    const auto& s = std::get<SinusoidWeight>(d);
    return {std::abs(s.base) + std::abs(s.amplitude), std::abs(s.amplitude * s.omega)};
}

void check_finite_descriptor(const WeightDescriptor& d) {
    bool ok = true;
    if (const auto* c = std::get_if<ConstantWeight>(&d)) {
        ok = std::isfinite(c->value);
    } else {
        const auto& s = std::get<SinusoidWeight>(d);
        ok = std::isfinite(s.base) && std::isfinite(s.amplitude) && std::isfinite(s.omega) &&
             std::isfinite(s.phase);
    }
    if (!ok) throw std::invalid_argument("weight descriptor has a non-finite parameter");
}

}  // namespace

WeightTrajectory::WeightTrajectory(std::vector<WeightDescriptor> edges) : edges_(std::move(edges)) {
    for (const auto& d : edges_) {
        check_finite_descriptor(d);
        const auto b = bounds_of(d);
        bound_ = std::max(bound_, b.value);
        rate_bound_ = std::max(rate_bound_, b.rate);
    }
}

WeightTrajectory::WeightTrajectory(std::vector<WeightDescriptor> edges, double bound, double rate_bound)
    : edges_(std::move(edges)), bound_(bound), rate_bound_(rate_bound) {
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        check_finite_descriptor(edges_[k]);
        const auto b = bounds_of(edges_[k]);
        if (b.value > bound_)
            throw std::invalid_argument("weight " + std::to_string(k + 1) + " exceeds the amplitude bound");
        if (b.rate > rate_bound_)
            throw std::invalid_argument("weight " + std::to_string(k + 1) + " exceeds the rate bound");
    }
}

WeightSample WeightTrajectory::eval(double t) const {
    WeightSample out{Vector(edges_.size(), 0.0), Vector(edges_.size(), 0.0)};
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        if (const auto* c = std::get_if<ConstantWeight>(&edges_[k])) {
            out.value[k] = c->value;
            continue;
        }
        const auto& s = std::get<SinusoidWeight>(edges_[k]);
        const double arg = s.omega * t + s.phase;
        if (s.wave == Wave::Sine) {
            out.value[k] = s.base + s.amplitude * std::sin(arg);
            out.rate[k] = s.amplitude * s.omega * std::cos(arg);
        } else {
            out.value[k] = s.base + s.amplitude * std::cos(arg);
            out.rate[k] = -s.amplitude * s.omega * std::sin(arg);
        }
    }
    return out;
}

WeightTrajectory paper_weight_trajectory() {
    using std::numbers::pi;
    std::vector<WeightDescriptor> w(30, ConstantWeight{0.0});
    w[0] = SinusoidWeight{0.7, 0.02, 0.02, 0.0, Wave::Sine};
    w[1] = SinusoidWeight{0.8, 0.1, 0.01, 0.0, Wave::Cosine};
    w[2] = SinusoidWeight{0.6, 0.02, 0.5 * pi, 0.0, Wave::Sine};
    w[3] = ConstantWeight{0.25};
    w[4] = ConstantWeight{0.4};
    w[5] = SinusoidWeight{0.45, 0.02, 0.05 * pi, 0.0, Wave::Cosine};
    // entries 7..21 are zero
    w[21] = SinusoidWeight{0.3, 0.05, 0.01 * pi, 0.0, Wave::Cosine};
    w[22] = ConstantWeight{0.6};
    w[23] = ConstantWeight{0.2};
    // entries 25..29 are zero
    w[29] = ConstantWeight{0.5};
    return WeightTrajectory(std::move(w));
}

WeightTrajectory constant_weights(std::span<const double> w) {
    std::vector<WeightDescriptor> d;
    d.reserve(w.size());
    for (double v : w) d.emplace_back(ConstantWeight{v});
    return WeightTrajectory(std::move(d));
}

InternalDynamics::InternalDynamics(std::vector<AgentDynamics> agents) : agents_(std::move(agents)) {
    for (const auto& a : agents_)
        if (!std::isfinite(a.gain)) throw std::invalid_argument("internal dynamics gain must be finite");
}

InternalDynamics InternalDynamics::uniform(std::size_t n, AgentDynamics agent) {
    return InternalDynamics(std::vector<AgentDynamics>(n, agent));
}

double InternalDynamics::eval(std::size_t i, double x) const {
    const AgentDynamics& a = agents_.at(i);
    return a.kind == DynamicsKind::Linear ? a.gain * x : a.gain * std::tanh(x);
}

Vector InternalDynamics::eval(std::span<const double> x) const {
    if (x.size() != agents_.size()) throw DimensionError("InternalDynamics: state has wrong length");
    Vector f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = eval(i, x[i]);
    return f;
}

double InternalDynamics::lipschitz(std::size_t i) const { return std::abs(agents_.at(i).gain); }

double InternalDynamics::lipschitz() const {
    double l = 0.0;
    for (std::size_t i = 0; i < agents_.size(); ++i) l = std::max(l, lipschitz(i));
    return l;
}

std::optional<double> InternalDynamics::uniform_linear_slope() const {
    if (agents_.empty()) return std::nullopt;
    const double slope = agents_.front().gain;
    for (const auto& a : agents_) {
        if (a.kind == DynamicsKind::Tanh && a.gain != 0.0) return std::nullopt;
        const double g = a.kind == DynamicsKind::Linear ? a.gain : 0.0;
        if (g != slope) return std::nullopt;
    }
    return slope;
}

Vector plant_rhs(const CompleteGraphModel& model, std::span<const double> weights, const InternalDynamics& dyn,
                 double coupling, std::span<const double> x, std::span<const double> u) {
    const std::size_t n = model.agents();
    if (x.size() != n || u.size() != n || dyn.size() != n || weights.size() != model.edges())
        throw DimensionError("plant_rhs: dimension mismatch");

    Vector dx = dyn.eval(x);
    // -c E_odot diag(w) E^T x: each edge pushes c w_k (x_tail - x_head)
    // into its head node.
    for (const EdgeLabel& e : model.labels()) {
        const double w = weights[e.index - 1];
        if (w == 0.0) continue;
        dx[e.head - 1] += coupling * w * (x[e.tail - 1] - x[e.head - 1]);
    }
    for (std::size_t i = 0; i < n; ++i) dx[i] += u[i];
    return dx;
}

Vector plant_rhs(const CompleteGraphModel& model, const WeightTrajectory& traj, const InternalDynamics& dyn,
                 double coupling, std::span<const double> x, std::span<const double> u, double t) {
    if (traj.size() != model.edges()) throw DimensionError("plant_rhs: trajectory has wrong length");
    const Vector w = traj.values(t);
    return plant_rhs(model, w, dyn, coupling, x, u);
}

}  // namespace edgesync
