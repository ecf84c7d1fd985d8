#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phyllo/dynamics.hpp"
#include "phyllo/seeding.hpp"

namespace phyllo {

struct Schedule {
    double t_end = 200.0;
    std::size_t checkpoint_stride = 50;  ///< steps between checkpoints
    std::size_t observer_stride = 1;     ///< steps between diagnostics
    double stop_radius = 0.0;            ///< stop once the front reaches it; 0 disables
};

struct RunConfig {
    GridSpec grid = make_grid(5.0, 40.0, 141, 512);
    ModelParams params;
    ParastichySeed seed;
    Schedule schedule;
    std::uint64_t rng_seed = 0;
    double noise_amplitude = 0.0;  ///< uniform noise on the free rings, ±amplitude
    double front_fraction = 0.5;
    std::string output_dir = "out";

    /// Throws InvalidArgument naming the offending key.
    void validate() const;
};

/// Named presets: desk-13-21, desk-21-34, paper-89-144.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Every settable dotted key, in file order.
std::vector<std::string> config_keys();

/// Sets one key from its textual value.  Grid keys are applied without
/// validation so several may be changed in sequence; call validate() after.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Reads "key = value" lines ('#' starts a comment) on top of `base`.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Serialises every key, readable by load_config.
std::string to_text(const RunConfig& cfg);

}  // namespace phyllo
