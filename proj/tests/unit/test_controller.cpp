#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edgesync/controller.hpp"
#include "test_support.hpp"

using namespace edgesync;
using namespace edgesync::testing;

namespace {

InternalDynamics zero_dynamics(std::size_t n) { return InternalDynamics::uniform(n, {DynamicsKind::Linear, 0.0}); }

ControllerConfig sync_config() {
    ControllerConfig cfg;
    cfg.mode = Mode::EstimateAndSync;
    return cfg;
}

double operator_norm(const Matrix& a) {
    const SymEig e = sym_eig(a.transpose() * a);
    return std::sqrt(std::max(0.0, e.values.back()));
}

}  // namespace

TEST_CASE("control_input examples") {
    const auto g2 = complete_graph(2);
    const ControllerConfig cfg;
    const auto f0 = zero_dynamics(2);
    const Vector zeros2(2, 0.0);

    const Vector x{0.4, -1.2};
    CHECK(max_abs(control_input(cfg, f0, g2, x, x, zeros2, zeros2, node_to_edge(g2, x))) == 0.0);

    const Vector u = control_input(cfg, f0, g2, Vector{1, 0}, zeros2, zeros2, zeros2, zeros2);
    CHECK(u == Vector{-2, 0});

    auto g = rng(41);
    const auto g4 = complete_graph(4);
    const auto f4 = zero_dynamics(4);
    const Vector xa = random_vector(g, 4);
    const Vector xh = random_vector(g, 4);
    const Vector wh = random_vector(g, 12);
    const Vector zh = node_to_edge(g4, xh);
    const Vector base = control_input(cfg, f4, g4, xa, xh, Vector(4, 0.0), wh, zh);
    Vector xs = xa, xhs = xh;
    for (auto& v : xs) v += 0.8;
    for (auto& v : xhs) v += 0.8;
    const Vector shifted = control_input(cfg, f4, g4, xs, xhs, Vector(4, 0.0), wh, zh);
    CHECK(norm(subtract(base, shifted)) < 1e-14);
}

TEST_CASE("update_pure examples") {
    const auto g2 = complete_graph(2);
    const ControllerConfig cfg;
    CHECK(max_abs(update_pure(cfg, g2, Vector{1, 1}, Vector{0})) == 0.0);
    CHECK(max_abs(update_pure(cfg, g2, Vector{0, 0}, Vector{1})) == 0.0);
    CHECK(update_pure(cfg, g2, Vector{1, 1}, Vector{1}) == Vector{-1, 1});
}

TEST_CASE("update_pure matches the dense formula") {
    auto g = rng(42);
    for (std::size_t n = 2; n <= 7; ++n) {
        const auto model = complete_graph(n);
        ControllerConfig cfg;
        cfg.c = 1.7;
        const Vector zh = random_vector(g, model.edges());
        const Vector zt = random_vector(g, n - 1);
        const Vector y = model.in_incidence().transpose() * (model.tree_incidence() * zt);
        Vector expect(model.edges());
        for (std::size_t k = 0; k < expect.size(); ++k) expect[k] = -cfg.c * zh[k] * y[k];
        CHECK(norm(subtract(update_pure(cfg, model, zh, zt), expect)) < 1e-13);
    }
}

TEST_CASE("update_sigma examples") {
    const auto g2 = complete_graph(2);
    ControllerConfig cfg;
    cfg.sigma1 = 0.25;
    const Vector w0{0.4, -2.0};
    CHECK(update_sigma(cfg, g2, Vector{1, 1}, Vector{0}, w0) == Vector{-0.1, 0.5});

    cfg.sigma1 = 0.001;
    const Vector d = update_sigma(cfg, g2, Vector{1, 1}, Vector{1}, Vector{1, 1});
    CHECK(d[0] == doctest::Approx(-1.001).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(0.999).epsilon(1e-14));
}

TEST_CASE("update_sigma with zero leakage is update_pure bit for bit") {
    auto g = rng(43);
    const ControllerConfig cfg;
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto model = complete_graph(n);
        for (int rep = 0; rep < 20; ++rep) {
            const Vector zh = random_vector(g, model.edges());
            const Vector zt = random_vector(g, n - 1);
            const Vector wh = random_vector(g, model.edges());
            CHECK(update_sigma(cfg, model, zh, zt, wh) == update_pure(cfg, model, zh, zt));
        }
    }
}

TEST_CASE("update_pure is linear in z_tilde_T") {
    auto g = rng(44);
    const ControllerConfig cfg;
    const auto model = complete_graph(5);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector zh = random_vector(g, model.edges());
        const Vector a = random_vector(g, 4);
        const Vector b = random_vector(g, 4);
        const double alpha = uniform(g, -3, 3);
        const double beta = uniform(g, -3, 3);
        Vector mix(4);
        for (std::size_t i = 0; i < 4; ++i) mix[i] = alpha * a[i] + beta * b[i];
        const Vector lhs = update_pure(cfg, model, zh, mix);
        const Vector ua = update_pure(cfg, model, zh, a);
        const Vector ub = update_pure(cfg, model, zh, b);
        for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(std::abs(lhs[k] - (alpha * ua[k] + beta * ub[k])) < 1e-12);
    }
}

TEST_CASE("excitation_p values and period") {
    CHECK(excitation_p(0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(excitation_p(1.0) == doctest::Approx(7.0).epsilon(1e-13));
    auto g = rng(45);
    for (int rep = 0; rep < 200; ++rep) {
        const double t = uniform(g, -50, 50);
        CHECK(std::abs(excitation_p(t + 4.0) - excitation_p(t)) < 1e-11);
    }
}

TEST_CASE("psi examples and bound") {
    const auto model = complete_graph(6);
    const ControllerConfig cfg = sync_config();
    auto g = rng(46);
    for (double t : {0.0, 0.37, 12.5}) CHECK(max_abs(psi(cfg, model, Vector(5, 0.0), t)) == 0.0);

    // Bisect to a root of p from the first sign change after t = 0.
    double lo = 0.0, hi = 0.0;
    for (int i = 1; i < 4000; ++i) {
        hi = 1e-3 * i;
        if (excitation_p(hi - 1e-3) * excitation_p(hi) < 0.0) {
            lo = hi - 1e-3;
            break;
        }
    }
    REQUIRE(excitation_p(lo) * excitation_p(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excitation_p(lo) * excitation_p(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double root = excitation_p(lo) == 0.0 ? lo : hi;
    CHECK(max_abs(psi(cfg, model, Vector{1, -2, 3, 0.5, 1}, root)) < 1e-13);

    double p_max = 0.0;
    for (int i = 0; i <= 400000; ++i) p_max = std::max(p_max, std::abs(excitation_p(4.0 * i / 400000.0)));
    const double bound = operator_norm(model.incidence_pinv()) * std::sqrt(6.0) * p_max;
    double sup = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const double t = uniform(g, 0, 100);
        const Vector zt = random_vector(g, 5, -10, 10);
        sup = std::max(sup, norm(psi(cfg, model, zt, t)));
    }
    CHECK(std::isfinite(sup));
    CHECK(sup <= bound);
}

TEST_CASE("psi lies in the range of E^T") {
    const auto model = complete_graph(4);
    ControllerConfig cfg = sync_config();
    cfg.kappa = 3.0;
    const Vector p = psi(cfg, model, Vector{0.2, -0.4, 0.9}, 1.0);
    const Vector back = node_to_edge(model, node_estimate(model, p));
    CHECK(norm(subtract(back, p)) < 1e-12);
}

TEST_CASE("aux_rhs examples") {
    const auto model = complete_graph(4);
    const ControllerConfig cfg = sync_config();
    const auto f0 = zero_dynamics(4);
    CHECK(max_abs(aux_rhs(cfg, model, f0, Vector(12, 0.0), Vector(3, 0.0), 0.3)) == 0.0);

    auto g = rng(47);
    const Vector zh = random_vector(g, 12);
    const Vector d = aux_rhs(cfg, model, f0, zh, Vector(3, 0.0), 1.1);
    for (std::size_t k = 0; k < 12; ++k) CHECK(d[k] == doctest::Approx(-1.3 * zh[k]).epsilon(1e-14));

    Vector e1(12, 0.0);
    e1[0] = 1.0;
    const Vector de = aux_rhs(cfg, model, f0, e1, Vector(3, 0.0), 0.0);
    CHECK(de[0] == doctest::Approx(-1.3));
    for (std::size_t k = 1; k < 12; ++k) CHECK(de[k] == 0.0);

    CHECK_THROWS_AS(aux_rhs(ControllerConfig{}, model, f0, zh, Vector(3, 0.0), 0.0), std::logic_error);
}

TEST_CASE("pe_reference examples") {
    PEReference silent{{{1, 0.0, 1.0, 0.0}, {2, 0.0, 2.0, 0.3}}};
    const ReferenceSample s = pe_reference(silent, 2, 0.9);
    CHECK(max_abs(s.x_hat) == 0.0);
    CHECK(max_abs(s.dx_hat) == 0.0);

    PEReference one{{{1, 1.0, 1.0, 0.0}}};
    const ReferenceSample r = pe_reference(one, 2, std::numbers::pi / 2);
    CHECK(r.x_hat[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.dx_hat[0]) < 1e-15);
    CHECK(r.x_hat[1] == 0.0);

    const PEReference def = PEReference::default_for(5);
    REQUIRE(def.terms.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(def.terms[i].node == i + 1);
        CHECK(def.terms[i].amplitude == 1.0);
        CHECK(def.terms[i].omega == doctest::Approx(0.7 + 0.3 * static_cast<double>(i + 1)));
    }
    auto g = rng(48);
    const double h = 1e-5;
    for (int rep = 0; rep < 100; ++rep) {
        const double t = uniform(g, 0, 100);
        const Vector up = pe_reference(def, 5, t + h).x_hat;
        const Vector down = pe_reference(def, 5, t - h).x_hat;
        const Vector rate = pe_reference(def, 5, t).dx_hat;
        for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs((up[i] - down[i]) / (2 * h) - rate[i]) < 1e-8);
    }
}

TEST_CASE("reference and gain validation") {
    CHECK_NOTHROW(PEReference::default_for(4).validate(4));
    CHECK_THROWS_AS((PEReference{{{1, 1.0, 0.0, 0.0}}}.validate(2)), std::invalid_argument);
    CHECK_THROWS_AS((PEReference{{{1, 1.0, 1.0, 0.0}, {2, 1.0, 1.0, 0.0}}}.validate(2)), std::invalid_argument);
    CHECK_THROWS_AS((PEReference{{{3, 1.0, 1.0, 0.0}}}.validate(2)), std::invalid_argument);

    ControllerConfig cfg = sync_config();
    CHECK_NOTHROW(cfg.validate(1.0));
    cfg.c2 = 0.9;
    CHECK_THROWS_AS(cfg.validate(1.0), std::invalid_argument);
}

// With the true plant substituted, E_T^T (x' - x_hat') equals the first row of
// the reduced error system.
TEST_CASE("closed-loop identity for the tree-error derivative") {
    auto g = rng(49);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto model = complete_graph(n);
        const double a = 0.8;
        const InternalDynamics dyn = InternalDynamics::uniform(n, {DynamicsKind::Linear, a});
        ControllerConfig cfg;
        cfg.c = 1.3;
        cfg.c1 = 2.2;
        for (int rep = 0; rep < 10; ++rep) {
            const Vector x = random_vector(g, n);
            const Vector xh = random_vector(g, n);
            const Vector dxh = random_vector(g, n);
            const Vector w = random_vector(g, model.edges(), 0.0, 1.0);
            const Vector wh = random_vector(g, model.edges());
            const Vector zh = node_to_edge(model, xh);

            const Vector u = control_input(cfg, dyn, model, x, xh, dxh, wh, zh);
            const Vector dx = plant_rhs(model, w, dyn, cfg.c, x, u);
            const Vector lhs = node_to_tree(model, subtract(dx, dxh));

            const Vector zt = node_to_tree(model, subtract(x, xh));
            const Vector wt = subtract(w, wh);
            const Vector lz = edge_laplacian(model, w) * zt;
            const Vector bw = model.reduced_input() * hadamard(zh, wt);
            Vector rhs(n - 1);
            for (std::size_t i = 0; i + 1 < n; ++i) rhs[i] = (a - cfg.c1) * zt[i] - cfg.c * lz[i] - cfg.c * bw[i];
            CHECK(norm(subtract(lhs, rhs)) < 1e-9);
        }
    }
}
