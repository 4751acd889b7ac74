#include "edgesync/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace edgesync {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "graph.agents",
        "plant.dynamics", "plant.dynamics_gain", "plant.weight_base", "plant.weight_amplitude",
        "plant.weight_omega", "plant.weight_phase", "plant.weight_wave", "plant.weight_bound",
        "plant.weight_rate_bound",
        "controller.mode", "controller.c", "controller.c1", "controller.c2", "controller.sigma1",
        "controller.kappa", "controller.excitation_gain", "controller.reference_node",
        "controller.reference_amplitude", "controller.reference_omega", "controller.reference_phase",
        "sim.x0", "sim.w_hat0", "sim.z_hat0", "sim.x_hat0", "sim.dt", "sim.t_end", "sim.sample_every",
        "output.dir", "output.emit_svg", "output.csv_decimation", "output.pe_window", "output.pe_stride",
        "output.udpe_floor", "output.recovery_threshold",
    };
    return keys;
}

std::string trim(std::string_view s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || text.empty())
        throw ConfigError(key + ": '" + text + "' is not a number");
    return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        throw ConfigError(key + ": '" + text + "' is not a non-negative integer");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(key + ": '" + text + "' is not a boolean");
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    bool has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }
    std::string raw(const std::string& key) const { return trim(tree_.get<std::string>(key)); }

    template <typename T, typename Convert>
    std::vector<T> list(const std::string& key, std::size_t length, Convert conv) const {
        std::vector<std::string> items = split_list(raw(key));
        if (items.size() == 1 && length > 1) items.assign(length, items.front());
        if (length != 0 && items.size() != length)
            throw ConfigError(key + ": expected " + std::to_string(length) + " values, got " +
                              std::to_string(items.size()));
        std::vector<T> out;
        out.reserve(items.size());
        for (const auto& it : items) out.push_back(conv(key, it));
        return out;
    }

    Vector doubles(const std::string& key, std::size_t length) const { return list<double>(key, length, to_double); }

    void number(const std::string& key, double& target) const {
        if (has(key)) target = to_double(key, raw(key));
    }
    void count(const std::string& key, std::size_t& target) const {
        if (has(key)) target = to_count(key, raw(key));
    }
    void vector(const std::string& key, std::size_t length, Vector& target) const {
        if (has(key)) target = doubles(key, length);
    }

private:
    const pt::ptree& tree_;
};

Mode parse_mode(const std::string& text) {
    if (text == "estimate-only") return Mode::EstimateOnly;
    if (text == "estimate-and-sync") return Mode::EstimateAndSync;
    throw ConfigError("controller.mode: expected estimate-only or estimate-and-sync, got '" + text + "'");
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

template <typename T, typename F>
std::string join(const std::vector<T>& items, F fmt_one) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += fmt_one(items[i]);
    }
    return out;
}

std::string join_doubles(const Vector& v) { return join(v, num); }

void parse_plant(const Reader& r, std::size_t n, RunConfig& cfg) {
    const std::size_t m = n * (n - 1);
    Scenario& s = cfg.scenario;

    if (r.has("plant.dynamics") || r.has("plant.dynamics_gain")) {
        std::vector<AgentDynamics> agents = s.dynamics.agents();
        if (r.has("plant.dynamics")) {
            const auto kinds = r.list<DynamicsKind>("plant.dynamics", n, [](const std::string& key, const std::string& t) {
                if (t == "linear") return DynamicsKind::Linear;
                if (t == "tanh") return DynamicsKind::Tanh;
                throw ConfigError(key + ": expected linear or tanh, got '" + t + "'");
            });
            for (std::size_t i = 0; i < n; ++i) agents[i].kind = kinds[i];
        }
        if (r.has("plant.dynamics_gain")) {
            const Vector g = r.doubles("plant.dynamics_gain", n);
            for (std::size_t i = 0; i < n; ++i) agents[i].gain = g[i];
        }
        s.dynamics = InternalDynamics(std::move(agents));
    }

    const bool any_weight = r.has("plant.weight_base") || r.has("plant.weight_amplitude") ||
                            r.has("plant.weight_omega") || r.has("plant.weight_phase") || r.has("plant.weight_wave");
    if (!any_weight && !r.has("plant.weight_bound") && !r.has("plant.weight_rate_bound")) return;

    Vector base(m, 0.0), amp(m, 0.0), omega(m, 0.0), phase(m, 0.0);
    std::vector<Wave> wave(m, Wave::Sine);
    r.vector("plant.weight_base", m, base);
    r.vector("plant.weight_amplitude", m, amp);
    r.vector("plant.weight_omega", m, omega);
    r.vector("plant.weight_phase", m, phase);
    if (r.has("plant.weight_wave")) {
        wave = r.list<Wave>("plant.weight_wave", m, [](const std::string& key, const std::string& t) {
            if (t == "sin") return Wave::Sine;
            if (t == "cos") return Wave::Cosine;
            throw ConfigError(key + ": expected sin or cos, got '" + t + "'");
        });
    }
    std::vector<WeightDescriptor> desc;
    desc.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (amp[k] == 0.0)
            desc.emplace_back(ConstantWeight{base[k]});
        else
            desc.emplace_back(SinusoidWeight{base[k], amp[k], omega[k], phase[k], wave[k]});
    }
    if (r.has("plant.weight_bound") || r.has("plant.weight_rate_bound")) {
        const WeightTrajectory tight(desc);
        double bound = tight.bound();
        double rate = tight.rate_bound();
        r.number("plant.weight_bound", bound);
        r.number("plant.weight_rate_bound", rate);
        s.weights = WeightTrajectory(std::move(desc), bound, rate);
    } else {
        s.weights = WeightTrajectory(std::move(desc));
    }
}

void parse_controller(const Reader& r, std::size_t n, RunConfig& cfg) {
    ControllerConfig& c = cfg.scenario.controller;
    if (r.has("controller.mode")) c.mode = parse_mode(r.raw("controller.mode"));
    r.number("controller.c", c.c);
    r.number("controller.c1", c.c1);
    r.number("controller.c2", c.c2);
    r.number("controller.sigma1", c.sigma1);
    r.number("controller.kappa", c.kappa);
    r.number("controller.excitation_gain", c.excitation_gain);

    const bool any_ref = r.has("controller.reference_node") || r.has("controller.reference_amplitude") ||
                         r.has("controller.reference_omega") || r.has("controller.reference_phase");
    if (!any_ref) return;
    if (!r.has("controller.reference_node"))
        throw ConfigError("controller.reference_node: required when any reference_* key is given");
    const auto nodes = r.list<std::size_t>("controller.reference_node", 0, to_count);
    const std::size_t terms = nodes.size();
    Vector amp(terms, 1.0), omega(terms, 0.0), phase(terms, 0.0);
    r.vector("controller.reference_amplitude", terms, amp);
    r.vector("controller.reference_omega", terms, omega);
    r.vector("controller.reference_phase", terms, phase);
    PEReference ref;
    for (std::size_t j = 0; j < terms; ++j) {
        if (nodes[j] < 1 || nodes[j] > n)
            throw ConfigError("controller.reference_node: node " + std::to_string(nodes[j]) + " does not exist");
        ref.terms.push_back({nodes[j], amp[j], omega[j], phase[j]});
    }
    cfg.scenario.reference = std::move(ref);
}

}  // namespace

std::string_view mode_name(Mode mode) {
    return mode == Mode::EstimateOnly ? "estimate-only" : "estimate-and-sync";
}

RunConfig default_run_config(std::size_t agents) {
    if (agents < 2) throw ConfigError("graph.agents: need at least 2 agents");
    const std::size_t m = agents * (agents - 1);
    RunConfig cfg;
    Scenario& s = cfg.scenario;
    s.agents = agents;
    s.weights = constant_weights(Vector(m, 0.0));
    s.dynamics = InternalDynamics::uniform(agents, {DynamicsKind::Linear, 1.0});
    s.reference = PEReference::default_for(agents);
    s.x0.resize(agents);
    for (std::size_t i = 0; i < agents; ++i) s.x0[i] = static_cast<double>(i + 1) / static_cast<double>(agents);
    s.w_hat0.assign(m, 0.0);
    s.z_hat0.assign(m, 0.0);
    s.x_hat0.assign(agents, 0.0);
    s.dt = 1e-3;
    s.t_end = 10.0;
    s.sample_every = 10;
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }

    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' must sit inside a [section]");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            if (!known_keys().contains(full)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }
    }

    const Reader r(tree);
    if (!r.has("graph.agents")) throw ConfigError("graph.agents: missing");
    const std::size_t n = to_count("graph.agents", r.raw("graph.agents"));

    try {
        RunConfig cfg = default_run_config(n);
        const std::size_t m = n * (n - 1);
        parse_plant(r, n, cfg);
        parse_controller(r, n, cfg);

        Scenario& s = cfg.scenario;
        r.vector("sim.x0", n, s.x0);
        r.vector("sim.w_hat0", m, s.w_hat0);
        r.vector("sim.z_hat0", m, s.z_hat0);
        r.vector("sim.x_hat0", n, s.x_hat0);
        r.number("sim.dt", s.dt);
        r.number("sim.t_end", s.t_end);
        r.count("sim.sample_every", s.sample_every);

        if (r.has("output.dir")) cfg.output_dir = r.raw("output.dir");
        if (r.has("output.emit_svg")) cfg.emit_svg = to_bool("output.emit_svg", r.raw("output.emit_svg"));
        r.count("output.csv_decimation", cfg.csv_decimation);
        r.number("output.pe_window", cfg.pe_window);
        r.number("output.pe_stride", cfg.pe_stride);
        r.number("output.udpe_floor", cfg.udpe_floor);
        r.number("output.recovery_threshold", cfg.recovery_threshold);

        if (cfg.csv_decimation < 1) throw ConfigError("output.csv_decimation: must be >= 1");
        if (!(cfg.pe_window > 0.0)) throw ConfigError("output.pe_window: must be positive");
        if (!(cfg.pe_stride > 0.0)) throw ConfigError("output.pe_stride: must be positive");
        if (!(cfg.udpe_floor >= 0.0)) throw ConfigError("output.udpe_floor: must be >= 0");
        if (!(cfg.recovery_threshold > 0.0)) throw ConfigError("output.recovery_threshold: must be positive");

        s.validate();
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    std::string out;
    auto line = [&out](std::string_view key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };

    out += "[graph]\n";
    line("agents", std::to_string(s.agents));

    out += "\n[plant]\n";
    line("dynamics", join(s.dynamics.agents(), [](const AgentDynamics& a) {
        return std::string(a.kind == DynamicsKind::Linear ? "linear" : "tanh");
    }));
    line("dynamics_gain", join(s.dynamics.agents(), [](const AgentDynamics& a) { return num(a.gain); }));
    Vector base, amp, omega, phase;
    std::vector<std::string> wave;
    for (const auto& d : s.weights.descriptors()) {
        if (const auto* c = std::get_if<ConstantWeight>(&d)) {
            base.push_back(c->value);
            amp.push_back(0.0);
            omega.push_back(0.0);
            phase.push_back(0.0);
            wave.emplace_back("sin");
        } else {
            const auto& sw = std::get<SinusoidWeight>(d);
            base.push_back(sw.base);
            amp.push_back(sw.amplitude);
            omega.push_back(sw.omega);
            phase.push_back(sw.phase);
            wave.emplace_back(sw.wave == Wave::Sine ? "sin" : "cos");
        }
    }
    line("weight_base", join_doubles(base));
    line("weight_amplitude", join_doubles(amp));
    line("weight_omega", join_doubles(omega));
    line("weight_phase", join_doubles(phase));
    line("weight_wave", join(wave, [](const std::string& w) { return w; }));
    line("weight_bound", num(s.weights.bound()));
    line("weight_rate_bound", num(s.weights.rate_bound()));

    const ControllerConfig& c = s.controller;
    out += "\n[controller]\n";
    line("mode", std::string(mode_name(c.mode)));
    line("c", num(c.c));
    line("c1", num(c.c1));
    line("c2", num(c.c2));
    line("sigma1", num(c.sigma1));
    line("kappa", num(c.kappa));
    line("excitation_gain", num(c.excitation_gain));
    const auto& terms = s.reference.terms;
    if (!terms.empty()) {
        line("reference_node", join(terms, [](const ReferenceTerm& t) { return std::to_string(t.node); }));
        line("reference_amplitude", join(terms, [](const ReferenceTerm& t) { return num(t.amplitude); }));
        line("reference_omega", join(terms, [](const ReferenceTerm& t) { return num(t.omega); }));
        line("reference_phase", join(terms, [](const ReferenceTerm& t) { return num(t.phase); }));
    }

    out += "\n[sim]\n";
    line("x0", join_doubles(s.x0));
    line("w_hat0", join_doubles(s.w_hat0));
    line("z_hat0", join_doubles(s.z_hat0));
    line("x_hat0", join_doubles(s.x_hat0));
    line("dt", num(s.dt));
    line("t_end", num(s.t_end));
    line("sample_every", std::to_string(s.sample_every));

    out += "\n[output]\n";
    line("dir", cfg.output_dir.string());
    line("emit_svg", cfg.emit_svg ? "true" : "false");
    line("csv_decimation", std::to_string(cfg.csv_decimation));
    line("pe_window", num(cfg.pe_window));
    line("pe_stride", num(cfg.pe_stride));
    line("udpe_floor", num(cfg.udpe_floor));
    line("recovery_threshold", num(cfg.recovery_threshold));
    return out;
}

}  // namespace edgesync
