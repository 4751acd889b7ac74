#include "edgesync/report.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "edgesync/svg.hpp"

namespace edgesync {

namespace {

void append_num(std::string& out, double v) { fmt::format_to(std::back_inserter(out), ",{:.17g}", v); }

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::vector<double> column(const std::vector<Vector>& rows, std::size_t k) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

}  // namespace

std::string timeseries_header(std::size_t agents) {
    const std::size_t m = agents * (agents - 1);
    std::string h = "t";
    for (std::size_t i = 1; i <= agents; ++i) h += fmt::format(",x_{}", i);
    for (std::size_t i = 1; i <= agents; ++i) h += fmt::format(",xhat_{}", i);
    for (std::size_t k = 1; k <= m; ++k) h += fmt::format(",what_{}", k);
    for (std::size_t k = 1; k <= m; ++k) h += fmt::format(",wtrue_{}", k);
    h += ",norm_ztilde,norm_wtilde,norm_z,V1";
    return h;
}

std::string timeseries_csv(const SimulationRecord& run, std::size_t decimation) {
    if (decimation == 0) throw std::invalid_argument("timeseries_csv: decimation must be >= 1");
    std::string out = timeseries_header(run.agents);
    out += '\n';
    const std::size_t n = run.size();
    for (std::size_t s = 0; s < n; ++s) {
        if (s % decimation != 0 && s + 1 != n) continue;
        fmt::format_to(std::back_inserter(out), "{:.17g}", run.times[s]);
        for (double v : run.x[s]) append_num(out, v);
        for (double v : run.x_hat[s]) append_num(out, v);
        for (double v : run.w_hat[s]) append_num(out, v);
        for (double v : run.w_true[s]) append_num(out, v);
        append_num(out, run.norm_z_tilde[s]);
        append_num(out, run.norm_w_tilde[s]);
        append_num(out, run.norm_z[s]);
        append_num(out, run.v1[s]);
        out += '\n';
    }
    return out;
}

std::string pe_report_csv(const PEReport& report) {
    std::string out = "window_start,window_end,qualified,lambda_min,null_directions\n";
    for (const auto& w : report.margins)
        fmt::format_to(std::back_inserter(out), "{:.17g},{:.17g},{},{:.17g},{}\n", w.start, w.end, w.qualified ? 1 : 0,
                       w.lambda_min, w.null_directions);
    return out;
}

PEReport mode_pe_report(const RunConfig& cfg, const SimulationRecord& run, double window, double stride,
                        double t_begin) {
    if (cfg.scenario.controller.mode == Mode::EstimateOnly) return regressor_pe_margin(run, window, stride, t_begin);
    UdpeOptions opts;
    opts.window = window;
    opts.stride = stride;
    opts.floor = cfg.udpe_floor;
    opts.t_begin = t_begin;
    return udpe_margin(run, complete_graph(cfg.scenario.agents), opts);
}

RunSummary summarize(const RunConfig& cfg, const SimulationRecord& run, double pe_t_begin) {
    if (run.size() < 2) throw CoverageError("summarize: run has fewer than two samples");
    const Scenario& sc = cfg.scenario;
    RunSummary s;
    s.mode = sc.controller.mode;
    s.agents = sc.agents;
    s.t_end = run.times.back();
    s.early_end = 0.05 * s.t_end;
    s.late_begin = 0.5 * s.t_end;
    s.sup_w_tilde_early = interval_bound(run.times, run.norm_w_tilde, 0.0, s.early_end);
    s.sup_z_early = interval_bound(run.times, run.norm_z, 0.0, s.early_end);
    s.sup_w_tilde_late = interval_bound(run.times, run.norm_w_tilde, s.late_begin, s.t_end);
    s.sup_z_late = interval_bound(run.times, run.norm_z, s.late_begin, s.t_end);
    s.final_w_tilde = run.norm_w_tilde.back();
    s.final_z = run.norm_z.back();

    s.pe_signal = s.mode == Mode::EstimateOnly ? "diag(z_hat)" : "B diag(z_hat)";
    try {
        s.pe = mode_pe_report(cfg, run, cfg.pe_window, cfg.pe_stride, pe_t_begin);
    } catch (const CoverageError&) {
        // Run shorter than one window: report no windows rather than fail the run.
        s.pe = PEReport{};
        s.pe.window = cfg.pe_window;
        s.pe.stride = cfg.pe_stride;
    }
    s.recovery = recover_topology(run.w_hat.back(), run.w_true.back(), cfg.recovery_threshold);
    const CompleteGraphModel model = complete_graph(sc.agents);
    s.unobservable_norm = norm(unobservable_weight_component(model, subtract(run.w_true.back(), sc.w_hat0)));
    return s;
}

std::string summary_text(const RunSummary& s) {
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& value) { out += key + " = " + value + '\n'; };
    auto num = [](double v) { return fmt::format("{:.17g}", v); };
    const std::string early = fmt::format("[0,{:g}]", s.early_end);
    const std::string late = fmt::format("[{:g},{:g}]", s.late_begin, s.t_end);
    kv("mode", std::string(mode_name(s.mode)));
    kv("agents", std::to_string(s.agents));
    kv("t_end", num(s.t_end));
    kv("sup_norm_wtilde" + early, num(s.sup_w_tilde_early));
    kv("sup_norm_z" + early, num(s.sup_z_early));
    kv("sup_norm_wtilde" + late, num(s.sup_w_tilde_late));
    kv("sup_norm_z" + late, num(s.sup_z_late));
    kv("final_norm_wtilde", num(s.final_w_tilde));
    kv("final_norm_z", num(s.final_z));
    kv("pe_signal", s.pe_signal);
    kv("pe_window", num(s.pe.window));
    kv("pe_stride", num(s.pe.stride));
    kv("pe_windows", std::to_string(s.pe.margins.size()));
    kv("pe_qualified_windows", std::to_string(s.pe.qualified_windows));
    kv("pe_mu_hat", num(s.pe.mu_hat));
    kv("pe_max_null_directions", std::to_string(s.pe.max_null_directions()));
    kv("recovery_threshold", num(s.recovery.threshold));
    kv("recovery_precision", num(s.recovery.precision));
    kv("recovery_recall", num(s.recovery.recall));
    kv("recovery_max_error", num(s.recovery.max_error));
    kv("unobservable_weight_norm", num(s.unobservable_norm));
    return out;
}

void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg, const SimulationRecord& run,
                     const RunSummary& summary) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    write_file(dir / "timeseries.csv", timeseries_csv(run, cfg.csv_decimation));
    write_file(dir / "pe_report.csv", pe_report_csv(summary.pe));
    write_file(dir / "summary.txt", summary_text(summary));
    if (!cfg.emit_svg) return;

    const std::size_t m = run.edges;
    {
        std::vector<PlotSeries> series;
        for (std::size_t k = 0; k < m; ++k) series.push_back({fmt::format("what_{}", k + 1), column(run.w_hat, k), false});
        for (std::size_t k = 0; k < m; ++k)
            series.push_back({fmt::format("wtrue_{}", k + 1), column(run.w_true, k), true});
        write_file(dir / "weights.svg",
                   render_line_plot({"Estimated and true edge weights", "t", "weight"}, run.times, series));
    }
    {
        std::vector<PlotSeries> series;
        for (std::size_t k = 0; k < m; ++k)
            series.push_back({fmt::format("wtilde_{}", k + 1), column(run.w_tilde, k), false});
        write_file(dir / "weight_errors.svg",
                   render_line_plot({"Weight estimation errors", "t", "w_tilde"}, run.times, series));
    }
    {
        std::vector<PlotSeries> series;
        for (std::size_t k = 0; k < m; ++k) series.push_back({fmt::format("z_{}", k + 1), column(run.z, k), false});
        write_file(dir / "sync_errors.svg", render_line_plot({"Synchronization errors", "t", "z"}, run.times, series));
    }
    {
        std::vector<PlotSeries> series;
        const std::size_t nt = run.agents - 1;
        for (std::size_t k = 0; k < nt; ++k)
            series.push_back({fmt::format("ztilde_{}", k + 1), column(run.z_tilde_tree, k), false});
        write_file(dir / "ztilde.svg", render_line_plot({"Tree edge estimation errors", "t", "z_tilde_T"}, run.times, series));
    }
}

}  // namespace edgesync
