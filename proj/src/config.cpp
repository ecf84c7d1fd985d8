#include "phyllo/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace phyllo {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw InvalidArgument(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
    Int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw InvalidArgument(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
    return out;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
    const long long x = parse_int<long long>(key, v);
    if (x < 0) throw InvalidArgument(std::string(key) + " must be non-negative");
    return std::size_t(x);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Key {
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<std::pair<std::string, Key>>& keys() {
    using C = RunConfig;
    using V = std::string_view;
    static const std::vector<std::pair<std::string, Key>> table = {
        {"grid.r_min", {[](C& c, V v) { c.grid.r_min = parse_double("grid.r_min", v); }, [](const C& c) { return fmt(c.grid.r_min); }}},
        {"grid.r_max", {[](C& c, V v) { c.grid.r_max = parse_double("grid.r_max", v); }, [](const C& c) { return fmt(c.grid.r_max); }}},
        {"grid.n_r", {[](C& c, V v) { c.grid.n_r = parse_int<Index>("grid.n_r", v); }, [](const C& c) { return std::to_string(c.grid.n_r); }}},
        {"grid.n_theta", {[](C& c, V v) { c.grid.n_theta = parse_int<Index>("grid.n_theta", v); }, [](const C& c) { return std::to_string(c.grid.n_theta); }}},
        {"params.mu", {[](C& c, V v) { c.params.mu = parse_double("params.mu", v); }, [](const C& c) { return fmt(c.params.mu); }}},
        {"params.beta", {[](C& c, V v) { c.params.beta = parse_double("params.beta", v); }, [](const C& c) { return fmt(c.params.beta); }}},
        {"params.dt", {[](C& c, V v) { c.params.dt = parse_double("params.dt", v); }, [](const C& c) { return fmt(c.params.dt); }}},
        {"params.solver_tol", {[](C& c, V v) { c.params.solver_tol = parse_double("params.solver_tol", v); }, [](const C& c) { return fmt(c.params.solver_tol); }}},
        {"params.max_iter", {[](C& c, V v) { c.params.max_iter = parse_int<int>("params.max_iter", v); }, [](const C& c) { return std::to_string(c.params.max_iter); }}},
        {"seed.m", {[](C& c, V v) { c.seed.m = parse_int<int>("seed.m", v); }, [](const C& c) { return std::to_string(c.seed.m); }}},
        {"seed.n", {[](C& c, V v) { c.seed.n = parse_int<int>("seed.n", v); }, [](const C& c) { return std::to_string(c.seed.n); }}},
        {"seed.r0", {[](C& c, V v) { c.seed.r0 = parse_double("seed.r0", v); }, [](const C& c) { return fmt(c.seed.r0); }}},
        {"seed.band_width", {[](C& c, V v) { c.seed.band_width = parse_double("seed.band_width", v); }, [](const C& c) { return fmt(c.seed.band_width); }}},
        {"seed.amplitude", {[](C& c, V v) { c.seed.amplitude = parse_double("seed.amplitude", v); }, [](const C& c) { return fmt(c.seed.amplitude); }}},
        {"seed.phase_m", {[](C& c, V v) { c.seed.phase_m = parse_double("seed.phase_m", v); }, [](const C& c) { return fmt(c.seed.phase_m); }}},
        {"seed.phase_n", {[](C& c, V v) { c.seed.phase_n = parse_double("seed.phase_n", v); }, [](const C& c) { return fmt(c.seed.phase_n); }}},
        {"seed.resonance_sum", {[](C& c, V v) { c.seed.resonance_sum = parse_double("seed.resonance_sum", v); }, [](const C& c) { return fmt(c.seed.resonance_sum); }}},
        {"seed.taper_width", {[](C& c, V v) { c.seed.taper_width = parse_double("seed.taper_width", v); }, [](const C& c) { return fmt(c.seed.taper_width); }}},
        {"schedule.t_end", {[](C& c, V v) { c.schedule.t_end = parse_double("schedule.t_end", v); }, [](const C& c) { return fmt(c.schedule.t_end); }}},
        {"schedule.checkpoint_stride", {[](C& c, V v) { c.schedule.checkpoint_stride = parse_count("schedule.checkpoint_stride", v); }, [](const C& c) { return std::to_string(c.schedule.checkpoint_stride); }}},
        {"schedule.observer_stride", {[](C& c, V v) { c.schedule.observer_stride = parse_count("schedule.observer_stride", v); }, [](const C& c) { return std::to_string(c.schedule.observer_stride); }}},
        {"schedule.stop_radius", {[](C& c, V v) { c.schedule.stop_radius = parse_double("schedule.stop_radius", v); }, [](const C& c) { return fmt(c.schedule.stop_radius); }}},
        {"rng_seed", {[](C& c, V v) { c.rng_seed = parse_int<std::uint64_t>("rng_seed", v); }, [](const C& c) { return std::to_string(c.rng_seed); }}},
        {"noise.amplitude", {[](C& c, V v) { c.noise_amplitude = parse_double("noise.amplitude", v); }, [](const C& c) { return fmt(c.noise_amplitude); }}},
        {"front.fraction", {[](C& c, V v) { c.front_fraction = parse_double("front.fraction", v); }, [](const C& c) { return fmt(c.front_fraction); }}},
        {"output_dir", {[](C& c, V v) { c.output_dir = std::string(v); }, [](const C& c) { return c.output_dir; }}},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    try {
        make_grid(grid.r_min, grid.r_max, grid.n_r, grid.n_theta);
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(std::string("grid: ") + e.what());
    }
    params.validate();
    seed.validate();
    if (seed.r0 < grid.r_min || seed.r0 + seed.band_width > grid.r_max + 1e-9)
        throw InvalidArgument("seed.band_width: band [seed.r0, seed.r0 + seed.band_width] must lie inside the grid");
    if (grid.n_theta < 4 * (seed.m + seed.n))
        throw InvalidArgument("grid.n_theta must be at least 4(seed.m + seed.n)");
    if (!(schedule.t_end > 0.0)) throw InvalidArgument("schedule.t_end must be positive");
    if (schedule.checkpoint_stride < 1) throw InvalidArgument("schedule.checkpoint_stride must be at least 1");
    if (schedule.observer_stride < 1) throw InvalidArgument("schedule.observer_stride must be at least 1");
    if (schedule.stop_radius < 0.0) throw InvalidArgument("schedule.stop_radius must be non-negative");
    if (!(noise_amplitude >= 0.0)) throw InvalidArgument("noise.amplitude must be non-negative");
    if (!(front_fraction > 0.0 && front_fraction < 1.0)) throw InvalidArgument("front.fraction must lie in (0, 1)");
    if (output_dir.empty()) throw InvalidArgument("output_dir must not be empty");
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    if (name == "desk-13-21") {
        c.grid = make_grid(5.0, 40.0, 141, 512);
        c.seed.m = 13;
        c.seed.n = 21;
        c.seed.r0 = 34.0;
        c.seed.band_width = 6.0;
        c.schedule.t_end = 200.0;
        c.schedule.stop_radius = 6.0;
        c.output_dir = "out-desk-13-21";
    } else if (name == "desk-21-34") {
        c.grid = make_grid(5.0, 62.0, 229, 768);
        c.seed.m = 21;
        c.seed.n = 34;
        c.seed.r0 = 55.0;
        c.seed.band_width = 7.0;
        c.schedule.t_end = 300.0;
        c.schedule.stop_radius = 6.0;
        c.output_dir = "out-desk-21-34";
    } else if (name == "paper-89-144") {
        c.grid = make_grid(5.0, 240.0, 941, 2048);
        c.seed.m = 89;
        c.seed.n = 144;
        c.seed.r0 = 233.0;
        c.seed.band_width = 7.0;
        c.schedule.t_end = 2000.0;
        c.schedule.checkpoint_stride = 200;
        c.schedule.stop_radius = 6.0;
        c.output_dir = "out-paper-89-144";
    } else {
        throw InvalidArgument("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

std::vector<std::string> preset_names() { return {"desk-13-21", "desk-21-34", "paper-89-144"}; }

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& [k, _] : keys()) out.push_back(k);
    return out;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& [k, h] : keys()) {
        if (k == key) {
            h.set(cfg, trim(value));
            return;
        }
    }
    throw InvalidArgument("unknown config key '" + std::string(key) + "'");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view s = line;
        if (const auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw InvalidArgument(path.string() + ":" + std::to_string(number) + ": expected 'key = value'");
        apply_setting(base, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return base;
}

std::string to_text(const RunConfig& cfg) {
    std::ostringstream out;
    for (const auto& [k, h] : keys()) out << k << " = " << h.get(cfg) << "\n";
    return out.str();
}

}  // namespace phyllo
