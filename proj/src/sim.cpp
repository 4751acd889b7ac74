#include "edgesync/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edgesync {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("scenario: " + what);
}

bool finite_all(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void guard(std::span<const double> y, double t) {
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!std::isfinite(y[i]) || std::abs(y[i]) > kDivergenceLimit) throw DivergenceError(t, i);
}

// True when z lies in the range of E^T, i.e. z = E^T x for some x.
bool edge_consistent(const CompleteGraphModel& model, std::span<const double> z) {
    const Vector back = node_to_edge(model, node_estimate(model, z));
    return norm(subtract(z, back)) < 1e-8 * std::max(1.0, norm(z));
}

}  // namespace

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

void Scenario::validate() const {
    require(agents >= 2, "need at least 2 agents");
    const std::size_t m = agents * (agents - 1);
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    require(std::isfinite(t_end) && t_end > 0.0, "t_end must be positive");
    require(sample_every >= 1, "sample_every must be >= 1");
    const double ratio = t_end / dt;
    require(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio, "t_end must be an integer multiple of dt");
    require(steps() % sample_every == 0, "t_end/dt must be a multiple of sample_every");
    require(weights.size() == m, "weight trajectory must have N(N-1)=" + std::to_string(m) + " entries");
    require(dynamics.size() == agents, "internal dynamics must list every agent");
    require(x0.size() == agents && finite_all(x0), "x0 must hold N finite values");
    require(w_hat0.size() == m && finite_all(w_hat0), "w_hat0 must hold N(N-1) finite values");
    require(z_hat0.size() == m && finite_all(z_hat0), "z_hat0 must hold N(N-1) finite values");
    require(x_hat0.size() == agents && finite_all(x_hat0), "x_hat0 must hold N finite values");

    controller.validate(dynamics.lipschitz());

    double f_max = 0.0;
    if (controller.mode == Mode::EstimateOnly) {
        reference.validate(agents);
        f_max = reference.max_frequency_hz();
    } else {
        require(edge_consistent(complete_graph(agents), z_hat0), "z_hat0 must lie in the range of E^T");
        if (controller.excitation_gain != 0.0) f_max = kExcitationMaxHz;
    }
    if (f_max > 0.0) require(dt <= 1.0 / (20.0 * f_max), "dt too coarse for the excitation frequency");
}

namespace {

class ClosedLoop {
public:
    explicit ClosedLoop(const Scenario& s) : s_(s), model_(complete_graph(s.agents)) {}

    const CompleteGraphModel& model() const { return model_; }
    std::size_t n() const { return model_.agents(); }
    std::size_t m() const { return model_.edges(); }
    bool sync() const { return s_.controller.mode == Mode::EstimateAndSync; }

    Vector initial_state() const {
        Vector y(s_.x0);
        y.insert(y.end(), s_.w_hat0.begin(), s_.w_hat0.end());
        if (sync()) y.insert(y.end(), s_.z_hat0.begin(), s_.z_hat0.end());
        return y;
    }

    ReferenceSample reference(double t) const {
        ReferenceSample r = pe_reference(s_.reference, n(), t);
        for (std::size_t i = 0; i < n(); ++i) r.x_hat[i] += s_.x_hat0[i];
        return r;
    }

    Vector rhs(double t, std::span<const double> y) const {
        const auto x = y.subspan(0, n());
        const auto w_hat = y.subspan(n(), m());
        const ControllerConfig& cfg = s_.controller;

        Vector x_hat, dx_hat, z_hat, dz_hat;
        if (sync()) {
            const auto zh = y.subspan(n() + m(), m());
            z_hat.assign(zh.begin(), zh.end());
            x_hat = node_estimate(model_, z_hat);
            const Vector zt = node_to_tree(model_, subtract(x, x_hat));
            dz_hat = aux_rhs(cfg, model_, s_.dynamics, z_hat, zt, t);
            dx_hat = node_estimate(model_, dz_hat);
        } else {
            ReferenceSample r = reference(t);
            x_hat = std::move(r.x_hat);
            dx_hat = std::move(r.dx_hat);
            z_hat = node_to_edge(model_, x_hat);
        }
        const Vector z_tilde_tree = node_to_tree(model_, subtract(x, x_hat));
        const Vector u = control_input(cfg, s_.dynamics, model_, x, x_hat, dx_hat, w_hat, z_hat);
        const Vector dx = plant_rhs(model_, s_.weights, s_.dynamics, cfg.c, x, u, t);
        const Vector dw = update_sigma(cfg, model_, z_hat, z_tilde_tree, w_hat);

        Vector out(dx);
        out.insert(out.end(), dw.begin(), dw.end());
        if (sync()) out.insert(out.end(), dz_hat.begin(), dz_hat.end());
        return out;
    }

    void record(SimulationRecord& rec, double t, std::span<const double> y) const {
        const auto x = y.subspan(0, n());
        const auto w_hat = y.subspan(n(), m());
        Vector x_hat, z_hat;
        if (sync()) {
            const auto zh = y.subspan(n() + m(), m());
            z_hat.assign(zh.begin(), zh.end());
            x_hat = node_estimate(model_, z_hat);
        } else {
            x_hat = reference(t).x_hat;
            z_hat = node_to_edge(model_, x_hat);
        }
        Vector w_true = s_.weights.values(t);
        Vector z = node_to_edge(model_, x);
        Vector zt = node_to_tree(model_, subtract(x, x_hat));
        Vector wt = subtract(w_true, w_hat);

        const double nzt = norm(zt);
        const double nwt = norm(wt);
        rec.times.push_back(t);
        rec.x.emplace_back(x.begin(), x.end());
        rec.x_hat.push_back(std::move(x_hat));
        rec.w_hat.emplace_back(w_hat.begin(), w_hat.end());
        rec.z_hat.push_back(std::move(z_hat));
        rec.w_true.push_back(std::move(w_true));
        rec.norm_z.push_back(norm(z));
        rec.z.push_back(std::move(z));
        rec.z_tilde_tree.push_back(std::move(zt));
        rec.w_tilde.push_back(std::move(wt));
        rec.norm_z_tilde.push_back(nzt);
        rec.norm_w_tilde.push_back(nwt);
        rec.v1.push_back(0.5 * nzt * nzt + 0.5 * nwt * nwt);
    }

private:
    const Scenario& s_;
    CompleteGraphModel model_;
};

}  // namespace

SimulationRecord simulate(const Scenario& scenario) {
    scenario.validate();
    const ClosedLoop loop(scenario);

    SimulationRecord rec;
    rec.agents = loop.n();
    rec.edges = loop.m();
    rec.mode = scenario.controller.mode;
    const std::size_t steps = scenario.steps();
    const std::size_t samples = steps / scenario.sample_every + 1;
    rec.times.reserve(samples);

    Vector y = loop.initial_state();
    guard(y, 0.0);
    loop.record(rec, 0.0, y);
    auto field = [&loop](double t, std::span<const double> s) { return loop.rhs(t, s); };
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * scenario.dt;
        y = rk4_step(field, t, y, scenario.dt);
        const double t_next = static_cast<double>(k + 1) * scenario.dt;
        guard(y, t_next);
        if ((k + 1) % scenario.sample_every == 0) loop.record(rec, t_next, y);
    }
    return rec;
}

ErrorTrajectory simulate_error_system(const Scenario& scenario) {
    scenario.validate();
    const auto slope = scenario.dynamics.uniform_linear_slope();
    if (!slope)
        throw std::invalid_argument("simulate_error_system: requires identical linear dynamics on every agent");

    const CompleteGraphModel model = complete_graph(scenario.agents);
    const ControllerConfig& cfg = scenario.controller;
    const std::size_t nt = model.tree_edges();
    const std::size_t m = model.edges();
    const bool sync = cfg.mode == Mode::EstimateAndSync;
    const Matrix& b = model.reduced_input();
    const Matrix bt = b.transpose();

    auto exogenous_z_hat = [&](double t) {
        ReferenceSample r = pe_reference(scenario.reference, scenario.agents, t);
        for (std::size_t i = 0; i < scenario.agents; ++i) r.x_hat[i] += scenario.x_hat0[i];
        return node_to_edge(model, r.x_hat);
    };

    auto field = [&](double t, std::span<const double> y) {
        const auto zt = y.subspan(0, nt);
        const auto wt = y.subspan(nt, m);
        Vector z_hat = sync ? Vector(y.begin() + static_cast<std::ptrdiff_t>(nt + m), y.end()) : exogenous_z_hat(t);

        const WeightSample w = scenario.weights.eval(t);
        const Matrix a = (*slope - cfg.c1) * Matrix::identity(nt) - cfg.c * edge_laplacian(model, w.value);
        // z_tilde_T' = (a - c1 - c L_e) z_tilde_T - c B diag(z_hat) w_tilde
        Vector dzt = a * zt;
        const Vector coupling = b * hadamard(z_hat, wt);
        for (std::size_t i = 0; i < nt; ++i) dzt[i] -= cfg.c * coupling[i];
        // w_tilde' = w' + c diag(z_hat) B^T z_tilde_T + sigma1 (w - w_tilde)
        const Vector back = bt * zt;
        Vector out = std::move(dzt);
        out.reserve(y.size());
        for (std::size_t k = 0; k < m; ++k)
            out.push_back(w.rate[k] + cfg.c * z_hat[k] * back[k] + cfg.sigma1 * (w.value[k] - wt[k]));
        if (sync) {
            const Vector dz = aux_rhs(cfg, model, scenario.dynamics, z_hat, zt, t);
            out.insert(out.end(), dz.begin(), dz.end());
        }
        return out;
    };

    const Vector x_hat_start = sync ? node_estimate(model, scenario.z_hat0) : [&] {
        Vector xh = pe_reference(scenario.reference, scenario.agents, 0.0).x_hat;
        for (std::size_t i = 0; i < xh.size(); ++i) xh[i] += scenario.x_hat0[i];
        return xh;
    }();
    Vector y = node_to_tree(model, subtract(scenario.x0, x_hat_start));
    const Vector w0 = scenario.weights.values(0.0);
    for (std::size_t k = 0; k < m; ++k) y.push_back(w0[k] - scenario.w_hat0[k]);
    if (sync) y.insert(y.end(), scenario.z_hat0.begin(), scenario.z_hat0.end());

    ErrorTrajectory out;
    auto push = [&](double t) {
        out.times.push_back(t);
        out.z_tilde_tree.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(nt));
        out.w_tilde.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(nt),
                                 y.begin() + static_cast<std::ptrdiff_t>(nt + m));
    };
    push(0.0);
    const std::size_t steps = scenario.steps();
    for (std::size_t k = 0; k < steps; ++k) {
        y = rk4_step(field, static_cast<double>(k) * scenario.dt, y, scenario.dt);
        const double t_next = static_cast<double>(k + 1) * scenario.dt;
        guard(y, t_next);
        if ((k + 1) % scenario.sample_every == 0) push(t_next);
    }
    return out;
}

Scenario reproduce_paper_scenario() {
    constexpr std::size_t n = 6;
    constexpr std::size_t m = n * (n - 1);
    Scenario s;
    s.agents = n;
    s.weights = paper_weight_trajectory();
    s.dynamics = InternalDynamics::uniform(n, {DynamicsKind::Linear, 1.0});
    s.controller.c = 1.0;
    s.controller.c1 = 2.0;
    s.controller.c2 = 1.3;
    s.controller.sigma1 = 0.001;
    s.controller.kappa = kPaperKappa;
    s.controller.mode = Mode::EstimateAndSync;
    s.reference = PEReference::default_for(n);
    s.x0.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.x0[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    s.w_hat0.assign(m, 0.0);
    s.z_hat0.assign(m, 0.0);
    s.x_hat0.assign(n, 0.0);
    s.dt = 1e-3;
    s.t_end = 100.0;
    s.sample_every = 10;
    return s;
}

}  // namespace edgesync
