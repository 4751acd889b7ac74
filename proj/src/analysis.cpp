#include "edgesync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace edgesync {

namespace {

constexpr double kNullCutoff = 1e-12;

double uniform_spacing(std::span<const double> times) {
    if (times.size() < 2) throw CoverageError("excitation margin: need at least two samples");
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw std::invalid_argument("excitation margin: sample times must increase");
    for (std::size_t i = 2; i < times.size(); ++i) {
        const double expected = times[0] + static_cast<double>(i) * h;
        if (std::abs(times[i] - expected) > 1e-6 * h)
            throw std::invalid_argument("excitation margin: samples are not uniformly spaced");
    }
    return h;
}

WindowMargin margin_of(const Matrix& gram, double start, double end) {
    const SymEig eig = sym_eig(gram);
    const double top = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.back());
    WindowMargin out{start, end, true, 0.0, 0};
    for (double v : eig.values)
        if (v <= kNullCutoff * top) ++out.null_directions;
    out.lambda_min = (eig.values.empty() || eig.values.front() <= kNullCutoff * top) ? 0.0 : eig.values.front();
    return out;
}

// Shared windowing over samples [first, last] of a uniformly spaced series.
// `keep` decides per window (by sample range) whether it qualifies.
PEReport windowed(std::span<const double> times, std::span<const Matrix> values, double window, double stride,
                  std::size_t first, std::size_t last,
                  const std::function<bool(std::size_t, std::size_t)>& keep) {
    if (!(window > 0.0) || !(stride > 0.0)) throw std::invalid_argument("excitation margin: window and stride must be positive");
    if (times.size() != values.size()) throw DimensionError("excitation margin: times and values differ in length");
    const double h = uniform_spacing(times);

    PEReport rep;
    rep.window = window;
    rep.stride = stride;
    if (last < first || last >= times.size()) throw CoverageError("excitation margin: empty horizon");
    rep.horizon_begin = times[first];
    rep.horizon_end = times[last];

    const auto len = static_cast<std::size_t>(std::llround(window / h));
    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(stride / h)));
    if (len == 0 || last - first < len)
        throw CoverageError("excitation margin: window of " + std::to_string(window) +
                            " is longer than the sampled span " + std::to_string(times[last] - times[first]));

    const std::size_t count = (last - first - len) / step + 1;
    bool any = false;
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t a = first + j * step;
        const std::size_t b = a + len;
        if (!keep(a, b)) {
            rep.margins.push_back({times[a], times[b], false, 0.0, 0});
            continue;
        }
        rep.margins.push_back(margin_of(gram_integral(values, h, a, b), times[a], times[b]));
        rep.mu_hat = any ? std::min(rep.mu_hat, rep.margins.back().lambda_min) : rep.margins.back().lambda_min;
        any = true;
        ++rep.qualified_windows;
    }
    return rep;
}

std::pair<std::size_t, std::size_t> horizon_indices(std::span<const double> times, double t_begin, double t_end) {
    const double slack = 1e-9 * std::max(1.0, std::abs(times.empty() ? 0.0 : times.back()));
    std::size_t first = 0;
    while (first < times.size() && times[first] < t_begin - slack) ++first;
    std::size_t last = times.size();
    while (last > 0 && times[last - 1] > t_end + slack) --last;
    if (first >= times.size() || last == 0 || last - 1 < first)
        throw CoverageError("excitation margin: no samples inside the requested horizon");
    return {first, last - 1};
}

}  // namespace

std::size_t PEReport::max_null_directions() const noexcept {
    std::size_t m = 0;
    for (const auto& w : margins)
        if (w.qualified) m = std::max(m, w.null_directions);
    return m;
}

Matrix gram_integral(std::span<const Matrix> values, double spacing, std::size_t first, std::size_t last) {
    if (values.empty() || last >= values.size() || last < first) throw CoverageError("gram_integral: bad sample range");
    const std::size_t cols = values[first].cols();
    Matrix g(cols, cols);
    for (std::size_t s = first; s <= last; ++s) {
        const Matrix& phi = values[s];
        if (phi.cols() != cols) throw DimensionError("gram_integral: signal changes shape");
        const double weight = (s == first || s == last) && last > first ? 0.5 * spacing : spacing;
        for (std::size_t r = 0; r < phi.rows(); ++r) {
            const auto row = phi.row(r);
            for (std::size_t i = 0; i < cols; ++i) {
                const double ri = row[i];
                if (ri == 0.0) continue;
                for (std::size_t j = 0; j < cols; ++j) g(i, j) += weight * ri * row[j];
            }
        }
    }
    return g;
}

PEReport pe_margin(std::span<const double> times, std::span<const Matrix> values, double window, double stride) {
    if (times.empty()) throw CoverageError("pe_margin: no samples");
    return windowed(times, values, window, stride, 0, times.size() - 1, [](std::size_t, std::size_t) { return true; });
}

PEReport udpe_margin(const SimulationRecord& run, const CompleteGraphModel& model, const UdpeOptions& opts) {
    if (run.z_hat.size() != run.size() || run.norm_z_tilde.size() != run.size())
        throw std::invalid_argument("udpe_margin: run lacks z_hat or z_tilde_T series");
    const auto [first, last] = horizon_indices(run.times, opts.t_begin, opts.t_end);

    const Matrix& b = model.reduced_input();
    std::vector<Matrix> signal;
    signal.reserve(run.size());
    for (const Vector& zh : run.z_hat) {
        if (zh.size() != model.edges()) throw DimensionError("udpe_margin: run and model disagree on edge count");
        Matrix phi = b;
        for (std::size_t r = 0; r < phi.rows(); ++r)
            for (std::size_t k = 0; k < phi.cols(); ++k) phi(r, k) *= zh[k];
        signal.push_back(std::move(phi));
    }
    const auto keep = [&](std::size_t a, std::size_t bnd) {
        for (std::size_t s = a; s <= bnd; ++s)
            if (run.norm_z_tilde[s] < opts.floor) return false;
        return true;
    };
    return windowed(run.times, signal, opts.window, opts.stride, first, last, keep);
}

PEReport regressor_pe_margin(const SimulationRecord& run, double window, double stride, double t_begin,
                             double t_end) {
    const auto [first, last] = horizon_indices(run.times, t_begin, t_end);
    std::vector<Matrix> signal;
    signal.reserve(run.size());
    for (const Vector& zh : run.z_hat) signal.push_back(Matrix::diagonal(zh));
    return windowed(run.times, signal, window, stride, first, last, [](std::size_t, std::size_t) { return true; });
}

FiltrationReport filtration_check(const Scenario& scenario, double horizon, double t_begin, double window,
                                  double stride) {
    if (scenario.controller.mode != Mode::EstimateAndSync)
        throw std::invalid_argument("filtration_check: needs an EstimateAndSync scenario");
    Scenario s = scenario;
    s.t_end = horizon;
    const SimulationRecord run = simulate(s);
    const CompleteGraphModel model = complete_graph(s.agents);

    UdpeOptions opts;
    opts.window = window;
    opts.stride = stride;
    opts.floor = 0.0;
    opts.t_begin = t_begin;
    opts.t_end = horizon;
    return {udpe_margin(run, model, opts), regressor_pe_margin(run, window, stride, t_begin, horizon)};
}

double ultimate_bound(std::span<const double> times, std::span<const double> series, double t0) {
    if (times.size() != series.size()) throw DimensionError("ultimate_bound: length mismatch");
    if (times.empty() || t0 > times.back() + 1e-12 * std::max(1.0, std::abs(t0)))
        throw CoverageError("ultimate_bound: t0 lies beyond the series");
    return interval_bound(times, series, t0, times.back());
}

double interval_bound(std::span<const double> times, std::span<const double> series, double t_begin, double t_end) {
    if (times.size() != series.size()) throw DimensionError("interval_bound: length mismatch");
    const double slack = 1e-9 * std::max({1.0, std::abs(t_begin), std::abs(t_end)});
    double sup = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_begin - slack || times[i] > t_end + slack) continue;
        sup = std::max(sup, std::abs(series[i]));
        any = true;
    }
    if (!any) throw CoverageError("interval_bound: no samples in the interval");
    return sup;
}

RecoveryReport recover_topology(std::span<const double> w_hat, std::span<const double> truth, double threshold) {
    if (w_hat.size() != truth.size()) throw DimensionError("recover_topology: length mismatch");
    if (!(threshold > 0.0)) throw std::invalid_argument("recover_topology: threshold must be positive");

    RecoveryReport rep;
    rep.threshold = threshold;
    std::size_t true_pos = 0;
    std::size_t actual = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const bool is_edge = std::abs(truth[k]) > 0.0;
        const bool predicted = std::abs(w_hat[k]) >= threshold;
        if (predicted) rep.predicted.push_back(k);
        if (is_edge) {
            ++actual;
            rep.max_error = std::max(rep.max_error, std::abs(w_hat[k] - truth[k]));
            if (predicted) ++true_pos;
        }
    }
    if (!rep.predicted.empty())
        rep.precision = static_cast<double>(true_pos) / static_cast<double>(rep.predicted.size());
    if (actual > 0) rep.recall = static_cast<double>(true_pos) / static_cast<double>(actual);
    return rep;
}

double lyapunov_v1(std::span<const double> z_tilde_tree, std::span<const double> w_tilde) {
    return 0.5 * dot(z_tilde_tree, z_tilde_tree) + 0.5 * dot(w_tilde, w_tilde);
}

Vector unobservable_weight_component(const CompleteGraphModel& model, std::span<const double> w) {
    if (w.size() != model.edges()) throw DimensionError("unobservable_weight_component: length mismatch");
    const std::size_t n = model.agents();
    Vector out_sum(n, 0.0);
    for (const EdgeLabel& e : model.labels()) out_sum[e.tail - 1] += w[e.index - 1];
    double mean = 0.0;
    for (double o : out_sum) mean += o;
    mean /= static_cast<double>(n);

    Vector proj(model.edges());
    for (const EdgeLabel& e : model.labels())
        proj[e.index - 1] = (out_sum[e.tail - 1] - mean) / static_cast<double>(n - 1);
    return proj;
}

}  // namespace edgesync
