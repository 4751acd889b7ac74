#include <doctest.h>

#include <cmath>

#include "edgesync/analysis.hpp"
#include "edgesync/sim.hpp"
#include "test_support.hpp"

using namespace edgesync;
using namespace edgesync::testing;

namespace {

Scenario base_scenario(std::size_t n) {
    const std::size_t m = n * (n - 1);
    Scenario s;
    s.agents = n;
    s.weights = constant_weights(Vector(m, 0.0));
    s.dynamics = InternalDynamics::uniform(n, {DynamicsKind::Linear, 1.0});
    s.reference = PEReference::default_for(n);
    s.x0.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.x0[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    s.w_hat0.assign(m, 0.0);
    s.z_hat0.assign(m, 0.0);
    s.x_hat0.assign(n, 0.0);
    s.dt = 1e-3;
    s.t_end = 1.0;
    s.sample_every = 10;
    return s;
}

// Directed 4-ring 1->2->3->4->1, every node has the same out-weight.
Vector ring_weights(const CompleteGraphModel& g, double w) {
    Vector out(g.edges(), 0.0);
    for (std::size_t i = 1; i <= 4; ++i) out[g.edge_index(i, i % 4 + 1)] = w;
    return out;
}

Vector final_state(const SimulationRecord& r) {
    Vector y = r.x.back();
    y.insert(y.end(), r.w_hat.back().begin(), r.w_hat.back().end());
    y.insert(y.end(), r.z_hat.back().begin(), r.z_hat.back().end());
    return y;
}

void check_same(const SimulationRecord& a, const SimulationRecord& b) {
    CHECK(a.times == b.times);
    CHECK(a.x == b.x);
    CHECK(a.x_hat == b.x_hat);
    CHECK(a.w_hat == b.w_hat);
    CHECK(a.z_hat == b.z_hat);
    CHECK(a.w_true == b.w_true);
    CHECK(a.v1 == b.v1);
}

}  // namespace

TEST_CASE("scenario validation") {
    Scenario s = base_scenario(3);
    CHECK_NOTHROW(s.validate());
    CHECK(s.steps() == 1000);

    Scenario bad = s;
    bad.t_end = 1.0005;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.sample_every = 7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.x0.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.dt = 0.25;
    bad.sample_every = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // 0.25 > 1 / (20 f_max) = 0.196
    bad = s;
    bad.controller.c1 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Scenario sync = s;
    sync.controller.mode = Mode::EstimateAndSync;
    CHECK_NOTHROW(sync.validate());
    sync.z_hat0[0] = 1.0;  // not of the form E^T x
    CHECK_THROWS_AS(sync.validate(), std::invalid_argument);
    sync.z_hat0 = node_to_edge(complete_graph(3), Vector{1, -2, 0.5});
    CHECK_NOTHROW(sync.validate());
    sync.controller.c2 = 0.5;
    CHECK_THROWS_AS(sync.validate(), std::invalid_argument);
}

TEST_CASE("an unforced loop keeps x constant") {
    Scenario s = base_scenario(3);
    s.dynamics = InternalDynamics::uniform(3, {DynamicsKind::Linear, 0.0});
    for (auto& t : s.reference.terms) t.amplitude = 0.0;
    s.x_hat0 = s.x0;
    const SimulationRecord r = simulate(s);
    for (const Vector& x : r.x) CHECK(x == s.x0);
    for (const Vector& w : r.w_hat) CHECK(max_abs(w) == 0.0);
}

TEST_CASE("simulate is deterministic") {
    Scenario s = reproduce_paper_scenario();
    s.t_end = 5.0;
    check_same(simulate(s), simulate(s));
    Scenario e = base_scenario(4);
    e.weights = constant_weights(ring_weights(complete_graph(4), 0.5));
    check_same(simulate(e), simulate(e));
}

TEST_CASE("record samples and derived series are self-consistent") {
    Scenario s = reproduce_paper_scenario();
    s.t_end = 3.0;
    const SimulationRecord r = simulate(s);
    const auto g = complete_graph(6);
    REQUIRE(r.size() == 301);
    for (std::size_t k = 0; k < r.size(); ++k) {
        CHECK(r.times[k] == doctest::Approx(0.01 * static_cast<double>(k)).epsilon(1e-14));
        const Vector zt = node_to_tree(g, subtract(r.x[k], r.x_hat[k]));
        CHECK(norm(subtract(zt, r.z_tilde_tree[k])) < 1e-12);
        CHECK(norm(subtract(subtract(r.w_true[k], r.w_hat[k]), r.w_tilde[k])) < 1e-12);
        CHECK(norm(subtract(node_to_edge(g, r.x[k]), r.z[k])) < 1e-12);
        CHECK(std::abs(r.v1[k] - lyapunov_v1(zt, r.w_tilde[k])) < 1e-12);
        CHECK(std::abs(r.norm_z_tilde[k] - norm(zt)) < 1e-12);
        CHECK(std::abs(r.norm_w_tilde[k] - norm(r.w_tilde[k])) < 1e-12);
        CHECK(std::abs(r.norm_z[k] - norm(r.z[k])) < 1e-12);
        // z_hat stays edge-consistent in sync mode.
        CHECK(norm(subtract(node_to_edge(g, node_estimate(g, r.z_hat[k])), r.z_hat[k])) < 1e-8);
        CHECK(norm(subtract(node_estimate(g, r.z_hat[k]), r.x_hat[k])) < 1e-12);
    }
}

// Smooth loops only: with kappa = 100 the tanh switching in psi is too sharp
// for dt near 1e-3 to be in the asymptotic regime.
TEST_CASE("halving dt changes the final state at RK4 order") {
    Scenario sync = reproduce_paper_scenario();
    sync.controller.kappa = 1.0;
    Scenario only = reproduce_paper_scenario();
    only.controller.mode = Mode::EstimateOnly;
    only.controller.sigma1 = 0.0;
    only.reference = PEReference::default_for(6);
    for (Scenario s : {sync, only}) {
        for (double dt : {2e-3, 1e-3}) {
            s.t_end = 2.0;
            s.dt = dt;
            s.sample_every = static_cast<std::size_t>(std::lround(s.t_end / dt));
            const Vector coarse = final_state(simulate(s));
            s.dt = dt / 2;
            s.sample_every *= 2;
            const Vector fine = final_state(simulate(s));
            const double scale = std::max(1.0, max_abs(coarse));
            CHECK(max_abs(subtract(coarse, fine)) < 10.0 * std::pow(dt, 4) * scale);
        }
    }
}

TEST_CASE("divergence is reported with its time") {
    Scenario s = base_scenario(2);
    s.dynamics = InternalDynamics::uniform(2, {DynamicsKind::Linear, 60.0});
    s.x_hat0 = Vector{5.0, -5.0};
    s.t_end = 2.0;
    try {
        (void)simulate(s);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.time() > 0.1);
        CHECK(e.time() < 2.0);
    }
}

TEST_CASE("static weights with equal out-degrees are identified") {
    const auto g = complete_graph(4);
    Scenario s = base_scenario(4);
    s.weights = constant_weights(ring_weights(g, 0.6));
    s.t_end = 200.0;
    s.sample_every = 100;
    const SimulationRecord r = simulate(s);
    CHECK(r.norm_w_tilde.back() < 1e-2);
    const RecoveryReport rec = recover_topology(r.w_hat.back(), r.w_true.back(), 0.1);
    CHECK(rec.precision == 1.0);
    CHECK(rec.recall == 1.0);
}

TEST_CASE("static weights converge to the truth up to the unobservable component") {
    const auto g = complete_graph(4);
    Vector w(12, 0.0);
    w[g.edge_index(1, 2)] = 0.9;
    w[g.edge_index(2, 3)] = 0.3;
    w[g.edge_index(3, 4)] = 0.7;
    w[g.edge_index(4, 1)] = 0.5;
    w[g.edge_index(2, 4)] = 0.4;
    Scenario s = base_scenario(4);
    s.weights = constant_weights(w);
    s.t_end = 200.0;
    s.sample_every = 100;
    const SimulationRecord r = simulate(s);
    const Vector hidden = unobservable_weight_component(g, w);
    CHECK(norm(hidden) > 0.1);
    CHECK(norm(subtract(r.w_tilde.back(), hidden)) < 1e-2);
}

TEST_CASE("reduced error system equilibrium") {
    const auto g = complete_graph(3);
    Scenario s = base_scenario(3);
    const Vector w{0.4, 0.0, 0.8, 0.0, 0.0, 0.6};
    s.weights = constant_weights(w);
    s.w_hat0 = w;
    s.x_hat0 = s.x0;
    s.t_end = 2.0;
    const ErrorTrajectory e = simulate_error_system(s);
    for (const auto& zt : e.z_tilde_tree) CHECK(max_abs(zt) == 0.0);
    for (const auto& wt : e.w_tilde) CHECK(max_abs(wt) == 0.0);
}

TEST_CASE("full loop and reduced error system agree") {
    auto gen = rng(51);
    for (Mode mode : {Mode::EstimateOnly, Mode::EstimateAndSync}) {
        Scenario s = base_scenario(3);
        s.controller.mode = mode;
        s.controller.kappa = 2.0;
        s.weights = constant_weights(random_vector(gen, 6, 0.0, 1.0));
        s.x0 = random_vector(gen, 3);
        s.w_hat0 = random_vector(gen, 6, 0.0, 0.5);
        s.x_hat0 = random_vector(gen, 3);
        if (mode == Mode::EstimateAndSync) s.z_hat0 = node_to_edge(complete_graph(3), random_vector(gen, 3));
        s.t_end = 10.0;
        const SimulationRecord full = simulate(s);
        const ErrorTrajectory red = simulate_error_system(s);
        REQUIRE(red.times.size() == full.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k)
            worst = std::max(worst, norm(subtract(full.z_tilde_tree[k], red.z_tilde_tree[k])));
        CHECK(worst < 1e-6);
    }

    Scenario tanh_s = base_scenario(3);
    tanh_s.dynamics = InternalDynamics::uniform(3, {DynamicsKind::Tanh, 1.0});
    CHECK_THROWS_AS(simulate_error_system(tanh_s), std::invalid_argument);
}

TEST_CASE("reduced error norm shrinks for constant weights") {
    auto gen = rng(52);
    for (int rep = 0; rep < 5; ++rep) {
        Scenario s = base_scenario(3);
        s.weights = constant_weights(random_vector(gen, 6, 0.0, 1.0));
        s.x0 = random_vector(gen, 3, -2, 2);
        s.w_hat0 = random_vector(gen, 6, -1, 1);
        s.t_end = 10.0;
        const ErrorTrajectory e = simulate_error_system(s);
        const double start = std::hypot(norm(e.z_tilde_tree.front()), norm(e.w_tilde.front()));
        const double end = std::hypot(norm(e.z_tilde_tree.back()), norm(e.w_tilde.back()));
        CHECK(start > 0.0);
        CHECK(end < start);
    }
}

TEST_CASE("six-agent scenario parameters") {
    const Scenario s = reproduce_paper_scenario();
    CHECK(s.agents == 6);
    CHECK(s.controller.c == 1.0);
    CHECK(s.controller.c1 == 2.0);
    CHECK(s.controller.c2 == 1.3);
    CHECK(s.controller.sigma1 == 0.001);
    CHECK(s.controller.kappa == kPaperKappa);
    CHECK(s.controller.mode == Mode::EstimateAndSync);
    CHECK(s.weights == paper_weight_trajectory());
    CHECK(s.weights.size() == 30);
    CHECK(s.dynamics == InternalDynamics::uniform(6, {DynamicsKind::Linear, 1.0}));
    CHECK(s.dt == 1e-3);
    CHECK(s.t_end == 100.0);
    CHECK(s.x0 == Vector{1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6, 1.0});
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("ultimate boundedness in both modes on the six-agent trajectory") {
    Scenario s = reproduce_paper_scenario();
    SUBCASE("estimate and synchronize") {
        const SimulationRecord r = simulate(s);
        CHECK(interval_bound(r.times, r.norm_w_tilde, 50, 100) <= interval_bound(r.times, r.norm_w_tilde, 0, 5));
        CHECK(interval_bound(r.times, r.norm_z, 50, 100) <= interval_bound(r.times, r.norm_z, 0, 5));
    }
    SUBCASE("estimate only") {
        s.controller.mode = Mode::EstimateOnly;
        s.controller.sigma1 = 0.0;
        s.reference = PEReference::default_for(6);
        const SimulationRecord r = simulate(s);
        const double sup_all = interval_bound(r.times, r.norm_w_tilde, 0, 100);
        CHECK(std::isfinite(sup_all));
        CHECK(interval_bound(r.times, r.norm_w_tilde, 50, 100) <= interval_bound(r.times, r.norm_w_tilde, 0, 5));
    }
}
