#include "vpmcf/cli.hpp"

#include "vpmcf/oracle.hpp"
#include "vpmcf/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vpmcf {

namespace {

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

int do_run(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const RunArtifacts art = run_experiment(cfg, cfg.monotonicity_samples > 0);
    const auto& last = art.result.records.back();
    std::cout << "run: finished at t = " << last.t << ", energy = " << last.energy
              << ", volume = " << last.volume << "\n";
    std::cout << "run: outputs in " << art.out_dir.string() << "\n";
    return 0;
}

int do_sweep(const std::string& config_path, const std::string& param, const std::string& factors) {
    const RunConfig cfg = load_config(config_path);
    const SweepSummary summary = run_sweep(cfg, param, parse_csv_doubles(factors));
    std::cout << "sweep: " << summary.rows.size() << " runs over " << summary.parameter << "\n";
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        const auto& r = summary.rows[i];
        std::cout << "  factor " << r.factor << ": volume drift " << r.volume_drift
                  << ", dissipation residual " << r.dissipation_residual;
        if (i < summary.drift_orders.size() && !std::isnan(summary.drift_orders[i]))
            std::cout << ", drift order " << summary.drift_orders[i];
        std::cout << "\n";
    }
    return 0;
}

int do_oracle(const std::string& radii, int d, double T, const std::string& law,
              const std::string& out_path) {
    OracleSystem sys;
    sys.d = d;
    sys.radii = parse_csv_doubles(radii);
    if (law == "vpmcf") sys.law = SharpLaw::volume_preserving;
    else if (law == "mcf") sys.law = SharpLaw::plain_mcf;
    else throw ValidationError("oracle: law must be vpmcf or mcf");

    const OracleTrajectory traj = oracle_integrate(sys, T, T > 0 ? T / 512.0 : 0.0);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::trunc);
        if (!file) throw ValidationError("oracle: cannot write " + out_path);
        out = &file;
    }
    (*out) << "t";
    for (std::size_t i = 0; i < sys.radii.size(); ++i) (*out) << ",R" << i;
    (*out) << "\n";
    char buf[64];
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[j]);
        (*out) << buf;
        for (double r : traj.radii[j]) {
            std::snprintf(buf, sizeof(buf), "%.17g", r);
            (*out) << "," << buf;
        }
        (*out) << "\n";
    }
    if (traj.extinct)
        std::cerr << "oracle: component " << traj.extinct_component << " extinct at t = "
                  << traj.extinction_time << ", trajectory truncated\n";
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Phase-field laboratory for volume-preserving mean curvature flow"};
    app.require_subcommand(1);

    std::string config_path, param = "dt", factors = "1,0.5", radii, law = "vpmcf", out_path;
    std::string check_dir;
    int d = 2;
    double T = 1.0;

    auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
    run_cmd->add_option("config", config_path, "config file")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Refinement sweep over dt, eps or n");
    sweep_cmd->add_option("config", config_path, "base config file")->required();
    sweep_cmd->add_option("--param", param, "dt | eps | n");
    sweep_cmd->add_option("--factors", factors, "comma-separated multipliers");

    auto* oracle_cmd = app.add_subcommand("oracle", "Sharp-interface ODE for sphere radii");
    oracle_cmd->add_option("radii", radii, "comma-separated radii")->required();
    oracle_cmd->add_option("--d", d, "spatial dimension");
    oracle_cmd->add_option("--T", T, "final time");
    oracle_cmd->add_option("--law", law, "vpmcf | mcf");
    oracle_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* check_cmd = app.add_subcommand("check", "Re-run diagnostics on stored snapshots");
    check_cmd->add_option("dir", check_dir, "directory with .vpmf files")->required();

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(config_path);
        if (sweep_cmd->parsed()) return do_sweep(config_path, param, factors);
        if (oracle_cmd->parsed()) return do_oracle(radii, d, T, law, out_path);
        if (check_cmd->parsed()) {
            const int count = run_check(check_dir);
            std::cout << "check: processed " << count << " snapshots\n";
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure";
        if (e.step_index() >= 0) std::cerr << " at step " << e.step_index();
        std::cerr << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace vpmcf
