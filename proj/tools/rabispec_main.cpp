#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rabispec/commands.hpp"
#include "rabispec/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void add_common(CLI::App* cmd, rabispec::CommonConfig& config, std::string& format,
                bool needs_system = true) {
    auto* sys = cmd->add_option("--system", config.system_path, "system description file");
    if (needs_system) sys->required();
    cmd->add_option("--out", config.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--format", format, "output format: csv, json or svg")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and analysis of selective population transfer in "
                 "driven discrete-level systems"};
    app.require_subcommand(1);

    rabispec::SimulateConfig sim;
    rabispec::ProfileConfig prof;
    rabispec::SpectrumConfig spec;
    rabispec::ValidateConfig val;
    rabispec::PathwayConfig path;
    rabispec::FiguresConfig figs;
    std::string sim_fmt = "csv", prof_fmt = "csv", spec_fmt = "csv", val_fmt = "csv",
                path_fmt = "csv", figs_fmt = "csv";

    auto* c_sim = app.add_subcommand(
        "simulate", "integrate the exact (non-RWA) dynamics and export the trace");
    add_common(c_sim, sim, sim_fmt);
    c_sim->add_option("--omega", sim.omegas, "drive frequency (repeat or comma-list for a sweep)")
        ->required()
        ->delimiter(',');
    c_sim->add_option("--f0", sim.f0, "perturbation intensity")->required();
    c_sim->add_option("--t-end", sim.t_end, "integration end time")->required();
    c_sim->add_option("--initial", sim.initial, "initially populated level")
        ->capture_default_str();
    c_sim->add_option("--rel-tol", sim.rel_tol, "relative tolerance")->capture_default_str();
    c_sim->add_option("--abs-tol", sim.abs_tol, "absolute tolerance")->capture_default_str();
    c_sim->add_option("--norm-tol", sim.norm_tol, "allowed norm drift")->capture_default_str();
    c_sim->add_option("--sample-dt", sim.sample_dt, "dense-output spacing (0 = auto)");

    auto* c_prof = app.add_subcommand("profile", "sample one transition's Rabi profile");
    add_common(c_prof, prof, prof_fmt);
    c_prof->add_option("--target", prof.target, "transition 'a,b'")->required();
    c_prof->add_option("--f0", prof.f0, "perturbation intensity")->required();
    c_prof->add_option("--omega-min", prof.omega_min, "grid start (default: auto)");
    c_prof->add_option("--omega-max", prof.omega_max, "grid end (default: auto)");
    c_prof->add_option("--omega-points", prof.omega_points, "grid size")
        ->capture_default_str();

    auto* c_spec = app.add_subcommand(
        "spectrum", "overlay all Rabi profiles of a targeted transition's spectrum");
    add_common(c_spec, spec, spec_fmt);
    c_spec->add_option("--target", spec.target, "transition 'a,b'")->required();
    c_spec->add_option("--f0", spec.f0, "perturbation intensity")->required();
    c_spec->add_option("--omega", spec.drive_omega, "drive frequency to mark (default: resonance)");
    c_spec->add_option("--omega-min", spec.omega_min, "grid start (default: auto)");
    c_spec->add_option("--omega-max", spec.omega_max, "grid end (default: auto)");
    c_spec->add_option("--omega-points", spec.omega_points, "grid size")
        ->capture_default_str();

    auto* c_val = app.add_subcommand(
        "validate", "RWA validity and selectivity diagnostics for one transition");
    add_common(c_val, val, val_fmt);
    c_val->add_option("--target", val.target, "transition 'a,b'")->required();
    c_val->add_option("--f0", val.f0, "perturbation intensity")->required();
    c_val->add_option("--omega", val.drive_omega, "drive frequency (default: resonance)");
    c_val->add_option("--eps-leak", val.eps_leak, "leakage budget")->capture_default_str();
    c_val->add_option("--theta-rwa", val.theta_rwa, "RWA ratio bound")->capture_default_str();
    c_val->add_option("--gamma-valid", val.gamma_valid, "RWA_VALID threshold")
        ->capture_default_str();
    c_val->add_option("--gamma-extreme", val.gamma_extreme, "EXTREME threshold")
        ->capture_default_str();

    auto* c_path = app.add_subcommand(
        "pathway", "fastest clean population-transfer route between two levels");
    add_common(c_path, path, path_fmt);
    c_path->add_option("--source", path.source, "source level")->required();
    c_path->add_option("--dest", path.dest, "destination level")->required();
    c_path->add_option("--eps-leak", path.eps_leak, "per-hop leakage budget")
        ->capture_default_str();
    c_path->add_option("--theta-rwa", path.theta_rwa, "RWA ratio bound")
        ->capture_default_str();

    auto* c_figs = app.add_subcommand(
        "figures", "regenerate the full reference dataset deterministically");
    add_common(c_figs, figs, figs_fmt, /*needs_system=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (c_sim->parsed()) {
            sim.format = rabispec::parse_format(sim_fmt);
            rabispec::cmd_simulate(sim);
        } else if (c_prof->parsed()) {
            prof.format = rabispec::parse_format(prof_fmt);
            rabispec::cmd_profile(prof);
        } else if (c_spec->parsed()) {
            spec.format = rabispec::parse_format(spec_fmt);
            rabispec::cmd_spectrum(spec);
        } else if (c_val->parsed()) {
            val.format = rabispec::parse_format(val_fmt);
            rabispec::cmd_validate(val);
        } else if (c_path->parsed()) {
            path.format = rabispec::parse_format(path_fmt);
            rabispec::cmd_pathway(path);
        } else if (c_figs->parsed()) {
            figs.format = rabispec::parse_format(figs_fmt);
            rabispec::cmd_figures(figs);
        }
    } catch (const rabispec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.numeric_failure() ? kExitNumeric : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
