#include "phyllo/pipeline.hpp"

#include <cstdio>
#include <random>
#include <set>

namespace phyllo {

namespace fs = std::filesystem;

ScalarField initial_field(const RunConfig& cfg) {
    cfg.validate();
    ScalarField u = seed_field(cfg.grid, cfg.seed);
    if (cfg.noise_amplitude > 0.0) {
        std::mt19937_64 rng(cfg.rng_seed);
        const GridSpec& g = cfg.grid;
        for (Index i = 0; i < g.free_rings(); ++i) {
            const double r = g.radius(i);
            const bool in_band = r >= cfg.seed.r0 && r <= cfg.seed.r0 + cfg.seed.band_width;
            for (Index j = 0; j < g.n_theta; ++j) {
                // Draw for every sample so the stream does not depend on the band.
                const double x = double(rng() >> 11) * 0x1.0p-53;
                if (in_band) u.values(i, j) += cfg.noise_amplitude * (2.0 * x - 1.0);
            }
        }
    }
    return u;
}

CsvTable energy_table(const EnergyTrace& trace) {
    CsvTable t{"phyllo.energy/1", {}, {"t", "energy"}, {}};
    for (const auto& s : trace) t.rows.push_back({s.t, s.energy});
    return t;
}

CsvTable front_table(const FrontTrace& trace) {
    CsvTable t{"phyllo.front/1", {}, {"t", "R", "nu"}, {}};
    for (const auto& s : trace.samples) t.rows.push_back({s.t, s.R, s.nu});
    return t;
}

namespace {

void fill_speeds(FrontTrace& f) {
    if (f.samples.size() < 3) {
        for (auto& s : f.samples) s.nu = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    const auto nu = front_speed(f);
    for (std::size_t k = 0; k < nu.size(); ++k) f.samples[k].nu = nu[k];
}

std::string checkpoint_name(std::uint64_t step) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "checkpoint_%08llu.bin", static_cast<unsigned long long>(step));
    return buf;
}

}  // namespace

RunOutput run_simulation(const RunConfig& cfg, const RunHooks& hooks) {
    cfg.validate();
    const fs::path dir = cfg.output_dir;
    if (hooks.write_files) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
        write_file_atomic(dir / "config.txt", to_text(cfg));
    }

    ScalarField u0;
    double t0 = 0.0;
    std::uint64_t step0 = 0;
    if (hooks.resume) {
        if (!(hooks.resume->field.grid == cfg.grid))
            throw InvalidArgument("grid: resume checkpoint grid differs from the configuration");
        u0 = hooks.resume->field;
        t0 = hooks.resume->t;
        step0 = hooks.resume->step;
    } else {
        u0 = initial_field(cfg);
    }

    RunOutput out;
    Observer diag{cfg.schedule.observer_stride, [&](const Snapshot& s) {
                      const double t = t0 + s.t;
                      try {
                          out.front.samples.push_back({t, front_position(s.field, cfg.front_fraction), 0.0});
                      } catch (const NoFront&) {
                      }
                      if (hooks.progress) hooks.progress(t, step0 + s.step_index, s.energy);
                  }};
    Observer ckpt{cfg.schedule.checkpoint_stride, [&](const Snapshot& s) {
                      if (!hooks.write_files || s.step_index == 0) return;
                      const std::uint64_t step = step0 + s.step_index;
                      const fs::path p = dir / checkpoint_name(step);
                      save_checkpoint(p, {cfg.params, t0 + s.t, step, s.field});
                      out.checkpoints.push_back(p);
                  }};
    std::vector<Observer> observers{diag};
    if (hooks.write_files) observers.push_back(ckpt);

    auto stop = [&](const Snapshot& s) {
        if (!(cfg.schedule.stop_radius > 0.0)) return false;
        try {
            return front_position(s.field, cfg.front_fraction) <= cfg.schedule.stop_radius;
        } catch (const NoFront&) {
            return false;
        }
    };

    auto flush = [&]() {
        fill_speeds(out.front);
        if (!hooks.write_files) return;
        write_csv(dir / "energy.csv", energy_table(out.energy));
        write_csv(dir / "front.csv", front_table(out.front));
    };

    const double remaining = cfg.schedule.t_end - t0;
    if (!(remaining > 0.0)) throw InvalidArgument("schedule.t_end must exceed the resume time");
    try {
        EvolveResult r = evolve(u0, cfg.params, remaining, observers, stop);
        out.field = std::move(r.field);
        for (auto s : r.trace) out.energy.push_back({t0 + s.t, s.energy});
        out.steps = step0 + r.steps;
        out.t = out.energy.back().t;
    } catch (const NoConvergence&) {
        flush();
        throw;
    }
    flush();
    if (hooks.write_files) {
        const fs::path p = dir / "final.bin";
        save_checkpoint(p, {cfg.params, out.t, out.steps, out.field});
        out.checkpoints.push_back(p);
    }
    return out;
}

Analysis analyze_field(const ScalarField& u, const ModelParams& p, const AnalysisOptions& opts) {
    const GridSpec& g = u.grid;
    if (g.geometry != Geometry::Annulus) throw InvalidArgument("analysis requires an annulus grid");
    Analysis a;
    const int m_max = opts.m_max > 0 ? opts.m_max : int(std::min<Index>(g.n_theta / 2 - 1, 160));
    a.profiles = decompose(u, m_max);
    a.maxima = max_amplitudes(a.profiles);
    a.sequence = dominant_modes(a.maxima, opts.dominant_fraction);
    if (!a.sequence.empty()) a.curve = invariant_amplitude_curve(a.profiles, a.sequence);

    try {
        a.front_radius = front_position(u, opts.front_fraction);
    } catch (const NoFront&) {
        return a;
    }
    const double half = 0.5 * opts.window;
    const double lo = std::max(a.front_radius, g.r_min) + half;
    const double hi = g.r_max - half;
    for (double r = lo; r <= hi + 1e-9; r += opts.r_step) {
        try {
            const LocalLattice lat = local_lattice(a.profiles, r);
            const RiseDivergence rd = rise_divergence(lat);
            LatticeMetrics m;
            m.rho = rd.rho;
            m.delta = rd.delta;
            m.eta = packing_efficiency(rd.delta, rd.rho);
            m.epsilon = local_energy(u, r, p, opts.window);
            a.lattice.push_back({r, lat.m, lat.n, m});
            auto key = std::make_pair(lat.m, lat.n);
            if (!a.branches.count(key)) a.branches[key] = van_iterson_branch(lat.m, lat.n, opts.branch_samples);
        } catch (const InvalidArgument&) {
            // Non-coprime or single-mode radius: flagged by omission.
        }
    }
    return a;
}

std::vector<std::pair<std::string, CsvTable>> analysis_tables(const Analysis& a) {
    std::vector<std::pair<std::string, CsvTable>> out;
    CsvTable modes{"phyllo.modes/1", {}, {"r", "m", "amplitude", "phase", "ell"}, {}};
    for (const auto& p : a.profiles)
        for (Index i = 0; i < p.size(); ++i)
            if (p.valid[std::size_t(i)])
                modes.rows.push_back({p.radius(i), double(p.m), p.amplitude(i), p.phase(i), p.radial_wavenumber(i)});
    out.emplace_back("modes.csv", std::move(modes));

    CsvTable maxima{"phyllo.max_amplitudes/1", {}, {"m", "a_max"}, {}};
    for (const auto& [m, v] : a.maxima) maxima.rows.push_back({double(m), v});
    out.emplace_back("max_amplitudes.csv", std::move(maxima));

    CsvTable curve{"phyllo.invariant_curve/1", {}, {"scaled_r", "amplitude", "j"}, {}};
    std::string seq = "sequence=";
    for (std::size_t k = 0; k < a.sequence.size(); ++k) seq += (k ? " " : "") + std::to_string(a.sequence[k]);
    curve.comments.push_back(seq);
    for (const auto& c : a.curve) curve.rows.push_back({c.scaled_radius, c.amplitude, double(c.j)});
    out.emplace_back("invariant_curve.csv", std::move(curve));

    CsvTable lattice{"phyllo.lattice/1", {}, {"r", "m", "n", "delta", "rho", "eta", "epsilon"}, {}};
    for (const auto& row : a.lattice)
        lattice.rows.push_back({row.r, double(row.m), double(row.n), row.metrics.delta, row.metrics.rho,
                                row.metrics.eta, row.metrics.epsilon});
    out.emplace_back("lattice.csv", std::move(lattice));

    CsvTable vi{"phyllo.vaniterson/1", {}, {"m", "n", "delta", "rho"}, {}};
    for (const auto& [key, branch] : a.branches)
        for (const auto& pt : branch) vi.rows.push_back({double(key.first), double(key.second), pt(0), pt(1)});
    out.emplace_back("vaniterson.csv", std::move(vi));
    return out;
}

void write_analysis(const fs::path& dir, const Analysis& a) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
    for (const auto& [name, table] : analysis_tables(a)) write_csv(dir / name, table);
}

CsvTable points_table(const PointConfig& c) {
    CsvTable t{"phyllo.points/1", {"circumference=" + format_number(c.circumference)}, {"index", "axial", "angle"}, {}};
    for (std::size_t k = 0; k < c.points.size(); ++k) t.rows.push_back({double(k), c.points[k].axial, c.points[k].angle});
    return t;
}

PointConfig points_from_table(const CsvTable& t) {
    PointConfig c;
    bool have_c = false;
    for (const auto& line : t.comments) {
        if (line.rfind("circumference=", 0) == 0) {
            c.circumference = std::stod(line.substr(14));
            have_c = true;
        }
    }
    if (!have_c) throw IoError("points table lacks a circumference comment");
    const std::size_t ia = t.column("axial"), it = t.column("angle");
    for (const auto& row : t.rows) c.points.push_back({row[ia], row[it]});
    return c;
}

}  // namespace phyllo
