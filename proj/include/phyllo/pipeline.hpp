#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "phyllo/checkpoint.hpp"
#include "phyllo/config.hpp"
#include "phyllo/csv.hpp"
#include "phyllo/front.hpp"
#include "phyllo/lattice.hpp"
#include "phyllo/modes.hpp"
#include "phyllo/oracle.hpp"

namespace phyllo {

/// Seeded field plus optional uniform noise on the free rings inside the band.
ScalarField initial_field(const RunConfig& cfg);

struct RunHooks {
    bool write_files = true;
    std::optional<Checkpoint> resume;  ///< continue from this state instead of seeding
    std::function<void(double t, std::uint64_t step, double energy)> progress;
};

struct RunOutput {
    ScalarField field;
    EnergyTrace energy;
    FrontTrace front;
    double t = 0.0;
    std::uint64_t steps = 0;
    std::vector<std::filesystem::path> checkpoints;
};

/// Evolves the configured run.  With write_files, output_dir receives
/// config.txt, energy.csv, front.csv, checkpoint_<step>.bin every
/// checkpoint_stride steps and final.bin.  Traces are flushed before a
/// NoConvergence is rethrown.
RunOutput run_simulation(const RunConfig& cfg, const RunHooks& hooks = {});

CsvTable energy_table(const EnergyTrace& trace);
CsvTable front_table(const FrontTrace& trace);

struct AnalysisOptions {
    int m_max = 0;             ///< 0 selects min(n_theta/2 − 1, 160)
    double r_step = 0.5;       ///< spacing of lattice sample radii
    double window = 4.0 * std::numbers::pi;
    double dominant_fraction = 0.5;
    int branch_samples = 65;
    double front_fraction = 0.5;
};

struct LatticeRow {
    double r;
    int m;
    int n;
    LatticeMetrics metrics;
};

struct Analysis {
    std::vector<ModeProfile> profiles;
    std::map<int, double> maxima;
    std::vector<int> sequence;  ///< dominant modes, ascending
    std::vector<CurvePoint> curve;
    std::vector<LatticeRow> lattice;
    std::map<std::pair<int, int>, std::vector<Eigen::Vector2d>> branches;
    double front_radius = 0.0;
};

/// Lattice rows cover the patterned region behind the front, one window
/// clear of either edge.
Analysis analyze_field(const ScalarField& u, const ModelParams& p, const AnalysisOptions& opts = {});

/// modes.csv, max_amplitudes.csv, invariant_curve.csv, lattice.csv, vaniterson.csv.
std::vector<std::pair<std::string, CsvTable>> analysis_tables(const Analysis& a);
void write_analysis(const std::filesystem::path& dir, const Analysis& a);

CsvTable points_table(const PointConfig& c);
PointConfig points_from_table(const CsvTable& t);

}  // namespace phyllo
