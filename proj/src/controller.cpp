#include "edgesync/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace edgesync {

void ControllerConfig::validate(double lipschitz) const {
    auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_positive(c)) throw std::invalid_argument("controller: c must be positive");
    if (!finite_positive(c1)) throw std::invalid_argument("controller: c1 must be positive");
    if (!finite_positive(c2)) throw std::invalid_argument("controller: c2 must be positive");
    if (!std::isfinite(sigma1) || sigma1 < 0.0) throw std::invalid_argument("controller: sigma1 must be >= 0");
    if (!std::isfinite(kappa) || kappa < 0.0) throw std::invalid_argument("controller: kappa must be >= 0");
    if (!std::isfinite(excitation_gain)) throw std::invalid_argument("controller: excitation_gain must be finite");
    if (mode == Mode::EstimateAndSync && !(c2 > lipschitz))
        throw std::invalid_argument("controller: c2 must exceed the Lipschitz constant L_f=" +
                                    std::to_string(lipschitz));
}

PEReference PEReference::default_for(std::size_t agents) {
    PEReference ref;
    for (std::size_t i = 1; i <= agents; ++i)
        ref.terms.push_back({i, 1.0, 0.7 + 0.3 * static_cast<double>(i), 0.0});
    return ref;
}

void PEReference::validate(std::size_t agents) const {
    for (std::size_t a = 0; a < terms.size(); ++a) {
        const auto& t = terms[a];
        if (t.node < 1 || t.node > agents)
            throw std::invalid_argument("reference term " + std::to_string(a + 1) + " names a missing node");
        if (!std::isfinite(t.amplitude) || !std::isfinite(t.omega) || !std::isfinite(t.phase))
            throw std::invalid_argument("reference term " + std::to_string(a + 1) + " is not finite");
        if (t.omega == 0.0)
            throw std::invalid_argument("reference term " + std::to_string(a + 1) + " has zero frequency");
        for (std::size_t b = 0; b < a; ++b)
            if (terms[b].omega == t.omega)
                throw std::invalid_argument("reference terms " + std::to_string(b + 1) + " and " +
                                            std::to_string(a + 1) + " share a frequency");
    }
}

double PEReference::max_frequency_hz() const {
    double w = 0.0;
    for (const auto& t : terms) w = std::max(w, std::abs(t.omega));
    return w / (2.0 * std::numbers::pi);
}

ReferenceSample pe_reference(const PEReference& ref, std::size_t agents, double t) {
    ReferenceSample s{Vector(agents, 0.0), Vector(agents, 0.0)};
    for (const auto& term : ref.terms) {
        if (term.node < 1 || term.node > agents) throw DimensionError("pe_reference: term names a missing node");
        const double arg = term.omega * t + term.phase;
        s.x_hat[term.node - 1] += term.amplitude * std::sin(arg);
        s.dx_hat[term.node - 1] += term.amplitude * term.omega * std::cos(arg);
    }
    return s;
}

Vector control_input(const ControllerConfig& cfg, const InternalDynamics& dyn, const CompleteGraphModel& model,
                     std::span<const double> x, std::span<const double> x_hat, std::span<const double> dx_hat,
                     std::span<const double> w_hat, std::span<const double> z_hat) {
    const std::size_t n = model.agents();
    if (x.size() != n || x_hat.size() != n || dx_hat.size() != n || w_hat.size() != model.edges() ||
        z_hat.size() != model.edges() || dyn.size() != n)
        throw DimensionError("control_input: dimension mismatch");

    Vector u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = -cfg.c1 * (x[i] - x_hat[i]) + dx_hat[i] - dyn.eval(i, x_hat[i]);
    // c E_odot diag(w_hat) z_hat: E_odot has -1 at each edge's head.
    for (const EdgeLabel& e : model.labels()) {
        const std::size_t k = e.index - 1;
        u[e.head - 1] -= cfg.c * w_hat[k] * z_hat[k];
    }
    return u;
}

Vector update_pure(const ControllerConfig& cfg, const CompleteGraphModel& model, std::span<const double> z_hat,
                   std::span<const double> z_tilde_tree) {
    if (z_hat.size() != model.edges() || z_tilde_tree.size() != model.tree_edges())
        throw DimensionError("update_pure: dimension mismatch");

    // y = E_T z_tilde_T: the star tree puts the sum at node 1 and -z_j at node j+1.
    const std::size_t n = model.agents();
    Vector y(n, 0.0);
    for (std::size_t j = 0; j < z_tilde_tree.size(); ++j) {
        y[0] += z_tilde_tree[j];
        y[j + 1] = -z_tilde_tree[j];
    }
    // (E_odot^T y)_k = -y_head(k)
    Vector dw(model.edges());
    for (const EdgeLabel& e : model.labels()) {
        const std::size_t k = e.index - 1;
        dw[k] = cfg.c * z_hat[k] * y[e.head - 1];
    }
    return dw;
}

Vector update_sigma(const ControllerConfig& cfg, const CompleteGraphModel& model, std::span<const double> z_hat,
                    std::span<const double> z_tilde_tree, std::span<const double> w_hat) {
    if (w_hat.size() != model.edges()) throw DimensionError("update_sigma: dimension mismatch");
    Vector dw = update_pure(cfg, model, z_hat, z_tilde_tree);
    if (cfg.sigma1 != 0.0)
        for (std::size_t k = 0; k < dw.size(); ++k) dw[k] -= cfg.sigma1 * w_hat[k];
    return dw;
}

double excitation_p(double t) {
    using std::numbers::pi;
    return 5.0 * std::sin(0.5 * pi * t) + 4.0 * std::cos(2.0 * pi * t) - 6.0 * std::sin(8.0 * pi * t) +
           std::sin(pi * t) - 4.0 * std::cos(10.0 * pi * t) + 2.0 * std::cos(6.0 * pi * t) +
           3.0 * std::sin(3.0 * pi * t);
}

Vector psi(const ControllerConfig& cfg, const CompleteGraphModel& model, std::span<const double> z_tilde_tree,
           double t) {
    if (z_tilde_tree.size() != model.tree_edges()) throw DimensionError("psi: dimension mismatch");
    Vector y = model.tree_incidence() * z_tilde_tree;
    for (double& v : y) v = std::tanh(cfg.kappa * v);
    Vector out = model.incidence_pinv() * y;
    const double scale = cfg.excitation_gain * excitation_p(t);
    for (double& v : out) v *= scale;
    return out;
}

Vector node_estimate(const CompleteGraphModel& model, std::span<const double> z_hat) {
    if (z_hat.size() != model.edges()) throw DimensionError("node_estimate: dimension mismatch");
    return model.incidence_transpose_pinv() * z_hat;
}

Vector aux_rhs(const ControllerConfig& cfg, const CompleteGraphModel& model, const InternalDynamics& dyn,
               std::span<const double> z_hat, std::span<const double> z_tilde_tree, double t) {
    if (cfg.mode != Mode::EstimateAndSync) throw std::logic_error("aux_rhs: only defined in EstimateAndSync mode");
    if (z_hat.size() != model.edges() || z_tilde_tree.size() != model.tree_edges() || dyn.size() != model.agents())
        throw DimensionError("aux_rhs: dimension mismatch");

    const Vector x_hat = node_estimate(model, z_hat);
    Vector dz = node_to_edge(model, dyn.eval(x_hat));
    const Vector excite = psi(cfg, model, z_tilde_tree, t);
    for (std::size_t k = 0; k < dz.size(); ++k) dz[k] += -cfg.c2 * z_hat[k] + excite[k];
    return dz;
}

}  // namespace edgesync
