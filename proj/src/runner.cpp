#include "vpmcf/runner.hpp"

#include "vpmcf/interface.hpp"
#include "vpmcf/operators.hpp"
#include "vpmcf/oracle.hpp"
#include "vpmcf/potential.hpp"
#include "vpmcf/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace vpmcf {

namespace fs = std::filesystem;

int env_thread_count() {
    const char* raw = std::getenv(kEnvThreads);
    if (!raw) return 1;
    const long v = std::strtol(raw, nullptr, 10);
    return static_cast<int>(std::clamp(v, 1L, 64L));
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
    const char* root = std::getenv(kEnvOutputRoot);
    if (root && *root) return fs::path(root) / cfg.output_dir;
    return fs::path(cfg.output_dir);
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_density_csv(const fs::path& path, const DensityScanReport& rep, int d) {
    std::ofstream out(path, std::ios::trunc);
    out << "center_x0,center_x1,center_x2,radius,ratio\n";
    for (const auto& e : rep.entries) {
        out << fmt(e.center[0]) << "," << (d > 1 ? fmt(e.center[1]) : "0") << ","
            << (d > 2 ? fmt(e.center[2]) : "0") << "," << fmt(e.radius) << "," << fmt(e.ratio)
            << "\n";
    }
}

void write_monotonicity_csv(const fs::path& path, const RunHistory& history, int samples,
                            double c5, std::uint64_t seed, int d) {
    std::ofstream out(path, std::ios::trunc);
    out << "y_x0,y_x1,y_x2,s,t1,t2,lhs,rhs,slack\n";
    if (history.snaps.size() < 2) return;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> upos(0.25, 0.75);
    std::uniform_int_distribution<std::size_t> uidx(0, history.snaps.size() - 1);
    const double eps = history.eps;

    for (int k = 0; k < samples; ++k) {
        std::size_t i1 = uidx(rng), i2 = uidx(rng);
        if (i1 == i2) { if (i2 + 1 < history.snaps.size()) ++i2; else --i1; }
        if (i1 > i2) std::swap(i1, i2);
        MonotonicityKernel kernel;
        for (int a = 0; a < d; ++a) kernel.y[static_cast<std::size_t>(a)] = upos(rng);
        // keep the kernel width resolvable on the grid at evaluation time
        std::uniform_real_distribution<double> udelta(4.0 * eps * eps, 4.0 * eps * eps + 0.05);
        kernel.s = history.snaps[i2].t + udelta(rng);
        const MonotonicityResult res = monotonicity_check(history, kernel, i1, i2, c5);
        out << fmt(kernel.y[0]) << "," << (d > 1 ? fmt(kernel.y[1]) : "0") << ","
            << (d > 2 ? fmt(kernel.y[2]) : "0") << "," << fmt(kernel.s) << ","
            << fmt(history.snaps[i1].t) << "," << fmt(history.snaps[i2].t) << "," << fmt(res.lhs)
            << "," << fmt(res.rhs) << "," << fmt(res.slack) << "\n";
    }
}

} // namespace

RunArtifacts run_experiment(const RunConfig& cfg, bool keep_history, bool write_outputs) {
    validate_config(cfg);
    const GridSpec grid = GridSpec::make(cfg.d, cfg.n, cfg.disc);
    const ShapeSpec shape = build_shape(cfg, grid);
    validate_shape(shape, cfg.eps, grid);

    RunArtifacts art;
    art.cfg = cfg;
    art.out_dir = resolve_output_dir(cfg);

    ScalarField phi0 = make_initial(shape, cfg.eps, grid, cfg.saturation_k);
    art.preparedness = check_well_prepared(phi0, cfg.eps, cfg.disc);
    if (art.preparedness.fatal)
        throw ValidationError("run: initial data has omega <= 0, multiplier estimate degenerates");

    StepperSpec spec;
    spec.scheme = cfg.scheme;
    spec.dt = effective_dt(cfg);
    spec.multiplier_mode = cfg.multiplier_mode;
    spec.conservative_tol = cfg.conservative_tol;

    EvolutionState state = make_state(std::move(phi0), 0.0, cfg.eps, cfg.variant);

    std::ofstream csv;
    fs::path snap_dir;
    if (write_outputs) {
        fs::create_directories(art.out_dir);
        save_config(cfg, (art.out_dir / "config.cfg").string());
        csv.open(art.out_dir / "diagnostics.csv", std::ios::trunc);
        csv << diagnostics_csv_header() << "\n";
        if (cfg.snapshot_cadence > 0) {
            snap_dir = art.out_dir / "snapshots";
            fs::create_directories(snap_dir);
            write_snapshot((snap_dir / "step_00000000.vpmf").string(), state.phi, state.eps, state.t);
        }
    }

    art.history.eps = cfg.eps;
    art.history.disc = cfg.disc;

    RecordHook hook = [&](const EvolutionState& s, const DiagnosticsRecord& r) {
        if (write_outputs && csv) csv << diagnostics_csv_row(r) << "\n";
        if (keep_history)
            art.history.snaps.push_back(HistorySnapshot{s.t, s.phi, r.lambda, s.lambda_sq_accum});
    };
    StepHook per_step;
    if (write_outputs && cfg.snapshot_cadence > 0) {
        per_step = [&](const EvolutionState& s) {
            if (s.step_index % cfg.snapshot_cadence == 0) {
                char name[64];
                std::snprintf(name, sizeof(name), "step_%08ld.vpmf", s.step_index);
                write_snapshot((snap_dir / name).string(), s.phi, s.eps, s.t);
            }
        };
    }

    art.result = run(std::move(state), spec, cfg.disc, cfg.T, cfg.csv_cadence, hook, per_step);

    if (write_outputs) {
        if (cfg.density_scan_enabled) {
            CentersSpec centers;
            centers.lattice_per_axis = cfg.density_centers;
            const std::vector<double> radii =
                cfg.density_radii.empty() ? dyadic_radii(grid) : cfg.density_radii;
            const DensityScanReport rep = density_scan(art.result.state.phi, cfg.eps, cfg.disc,
                                                       radii, centers, env_thread_count());
            write_density_csv(art.out_dir / "density.csv", rep, cfg.d);
        }
        if (cfg.monotonicity_samples > 0 && keep_history)
            write_monotonicity_csv(art.out_dir / "monotonicity.csv", art.history,
                                   cfg.monotonicity_samples, cfg.monotonicity_c5,
                                   cfg.monotonicity_seed, cfg.d);
    }
    return art;
}

namespace {

double oracle_radius_error(const RunConfig& cfg, const RunArtifacts& art) {
    if (cfg.shape.kind != "ball" && cfg.shape.kind != "balls")
        return std::numeric_limits<double>::quiet_NaN();
    SharpLaw law;
    if (cfg.variant == EquationVariant::plain_allen_cahn) law = SharpLaw::plain_mcf;
    else if (cfg.variant == EquationVariant::golovaty) law = SharpLaw::volume_preserving;
    else return std::numeric_limits<double>::quiet_NaN();

    OracleSystem sys;
    sys.d = cfg.d;
    sys.law = law;
    if (cfg.shape.kind == "ball") sys.radii = {cfg.shape.radius};
    else
        for (const Ball& b : cfg.shape.balls) sys.radii.push_back(b.radius);

    OracleTrajectory traj = oracle_integrate(sys, cfg.T, cfg.T > 0 ? cfg.T / 256.0 : 0.0);
    if (traj.extinct) return std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> expected = traj.radii_at(cfg.T);

    const auto fits = fit_interface_spheres(art.result.state.phi);
    if (fits.size() < expected.size()) return std::numeric_limits<double>::quiet_NaN();

    // greedy match by center against the configured shapes
    double worst = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const std::array<double, 3> want =
            cfg.shape.kind == "ball"
                ? std::array<double, 3>{cfg.shape.center[0], cfg.d > 1 ? cfg.shape.center[1] : 0.0,
                                        cfg.d > 2 ? cfg.shape.center[2] : 0.0}
                : cfg.shape.balls[i].center;
        double best = std::numeric_limits<double>::infinity();
        double radius = 0.0;
        for (const auto& f : fits) {
            const double dist = torus_dist2(f.center.data(), want.data(), cfg.d);
            if (dist < best) { best = dist; radius = f.radius; }
        }
        worst = std::max(worst, std::abs(radius - expected[i]) / expected[i]);
    }
    return worst;
}

} // namespace

SweepSummary run_sweep(const RunConfig& base, const std::string& parameter,
                       const std::vector<double>& factors) {
    if (parameter != "dt" && parameter != "eps" && parameter != "n")
        throw ValidationError("sweep: parameter must be one of dt, eps, n");
    if (factors.size() < 2) throw ValidationError("sweep: need at least 2 factors");

    SweepSummary summary;
    summary.parameter = parameter;
    const fs::path root = resolve_output_dir(base);
    fs::create_directories(root);

    auto finalize = [&]() {
        std::ofstream out(root / "sweep_summary.csv", std::ios::trunc);
        out << "factor,param_value,volume_drift,dissipation_residual,max_discrepancy,"
               "oracle_radius_err,order_volume_drift,order_dissipation_residual\n";
        summary.drift_orders.assign(summary.rows.size(), std::numeric_limits<double>::quiet_NaN());
        summary.residual_orders.assign(summary.rows.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 1; i < summary.rows.size(); ++i) {
            const auto& a = summary.rows[i - 1];
            const auto& b = summary.rows[i];
            if (a.failed || b.failed) continue;
            const double pr = a.param_value / b.param_value;
            if (pr > 0.0 && pr != 1.0) {
                if (a.volume_drift > 0.0 && b.volume_drift > 0.0)
                    summary.drift_orders[i] = std::log(a.volume_drift / b.volume_drift) / std::log(pr);
                if (a.dissipation_residual > 0.0 && b.dissipation_residual > 0.0)
                    summary.residual_orders[i] =
                        std::log(a.dissipation_residual / b.dissipation_residual) / std::log(pr);
            }
        }
        for (std::size_t i = 0; i < summary.rows.size(); ++i) {
            const auto& r = summary.rows[i];
            out << fmt(r.factor) << "," << fmt(r.param_value) << "," << fmt(r.volume_drift) << ","
                << fmt(r.dissipation_residual) << "," << fmt(r.max_discrepancy) << ","
                << fmt(r.oracle_radius_err) << ",";
            if (std::isnan(summary.drift_orders[i])) out << "na"; else out << fmt(summary.drift_orders[i]);
            out << ",";
            if (std::isnan(summary.residual_orders[i])) out << "na"; else out << fmt(summary.residual_orders[i]);
            out << "\n";
        }
    };

    for (std::size_t i = 0; i < factors.size(); ++i) {
        RunConfig cfg = base;
        std::ostringstream dir;
        dir << base.output_dir << "/" << parameter << "_" << i;
        cfg.output_dir = dir.str();
        SweepRow row;
        row.factor = factors[i];
        if (parameter == "dt") {
            cfg.dt = effective_dt(base) * factors[i];
            row.param_value = cfg.dt;
        } else if (parameter == "eps") {
            cfg.eps = base.eps * factors[i];
            row.param_value = cfg.eps;
        } else {
            cfg.n = static_cast<int>(std::lround(base.n * factors[i]));
            row.param_value = 1.0 / static_cast<double>(cfg.n); // refinement variable h
            if (base.dt > 0.0) cfg.dt = base.dt * factors[i] > 0 ? base.dt : 0.0;
        }
        try {
            RunArtifacts art = run_experiment(cfg);
            double drift = 0.0, resid = 0.0, disc_max = -std::numeric_limits<double>::infinity();
            const double v0 = art.result.records.front().volume;
            for (const auto& rec : art.result.records) {
                drift = std::max(drift, std::abs(rec.volume - v0));
                resid += rec.dissipation_residual;
                disc_max = std::max(disc_max, rec.max_discrepancy);
            }
            row.volume_drift = drift;
            row.dissipation_residual = resid;
            row.max_discrepancy = disc_max;
            row.oracle_radius_err = oracle_radius_error(cfg, art);
            summary.rows.push_back(row);
        } catch (...) {
            row.failed = true;
            summary.rows.push_back(row);
            finalize(); // preserve partial results
            throw;
        }
    }
    finalize();
    return summary;
}

int run_check(const std::string& history_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(history_dir))
        if (entry.path().extension() == ".vpmf") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ValidationError("check: no .vpmf snapshots in " + history_dir);

    std::ofstream out(fs::path(history_dir) / "check.csv", std::ios::trunc);
    out << diagnostics_csv_header() << "\n";

    Snapshot prev;
    bool have_prev = false;
    int count = 0;
    for (const auto& f : files) {
        Snapshot snap = read_snapshot(f.string());
        const Discretization disc = is_pow2(static_cast<std::uint64_t>(snap.phi.grid.n))
                                        ? Discretization::spectral
                                        : Discretization::central2;
        DiagnosticsRecord r;
        r.t = snap.t;
        r.energy = energy(snap.phi, snap.eps, disc);
        r.volume = volume(snap.phi);
        r.lambda = std::numeric_limits<double>::quiet_NaN();
        try {
            r.lambda = analytic_multiplier(EquationVariant::golovaty, snap.phi, snap.eps, disc);
        } catch (const NumericalError&) {
        }
        r.max_discrepancy = discrepancy_max(snap.phi, snap.eps, disc);
        r.curvature_l2 = curvature_l2(snap.phi, snap.eps, disc);
        r.max_abs_phi = max_abs(snap.phi);
        r.interface_measure = interface_measure(snap.phi, snap.eps, disc);
        if (have_prev && snap.t > prev.t && prev.phi.grid == snap.phi.grid)
            r.dissipation_residual =
                dissipation_residual(prev.phi, snap.phi, snap.eps, disc, snap.t - prev.t);
        out << diagnostics_csv_row(r) << "\n";
        prev = std::move(snap);
        have_prev = true;
        ++count;
    }
    return count;
}

} // namespace vpmcf
