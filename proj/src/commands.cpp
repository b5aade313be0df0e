#include "rabispec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rabispec/analytic.hpp"
#include "rabispec/dynamics.hpp"
#include "rabispec/pathway.hpp"
#include "rabispec/spectra.hpp"
#include "rabispec/svg.hpp"
#include "rabispec/system_io.hpp"
#include "rabispec/trace_io.hpp"

namespace rabispec {

namespace fs = std::filesystem;
using nlohmann::json;

OutputFormat parse_format(const std::string& name) {
    if (name == "csv" || name == "delimited") return OutputFormat::csv;
    if (name == "json" || name == "document") return OutputFormat::json;
    if (name == "svg" || name == "vector") return OutputFormat::svg;
    fail(errc::parse_error, "unknown output format '" + name + "' (csv|json|svg)");
}

std::pair<int, int> parse_target(const LevelSystem& system, const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= spec.size())
        fail(errc::parse_error, "target must be 'a,b' (got '" + spec + "')");
    const int a = resolve_level(system, spec.substr(0, comma));
    const int b = resolve_level(system, spec.substr(comma + 1));
    return {a, b};
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(errc::io_error, "cannot create output directory '" + dir + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write '" + path + "'");
    out << text;
}

json target_json(const LevelSystem& system, int a, int b) {
    return json{{"alpha", a + 1},
                {"beta", b + 1},
                {"labels", {system.level(a).label, system.level(b).label}}};
}

// RWA annotations for every non-degenerate coupled transition: predicted
// amplitude at the drive frequency, transfer period, and the period
// multiples that mark expected extrema on the trace.
json rwa_annotations(const LevelSystem& system, const Drive& drive, double t_end) {
    json out = json::array();
    for (const auto& [i, j] : system.coupled_pairs()) {
        if (system.transition_freq(i, j) == 0.0) continue;
        const RwaPrediction pred = rwa_prediction(system, drive, i, j);
        json gridlines = json::array();
        for (int k = 1; k <= 64 && k * pred.transfer_period <= t_end; ++k)
            gridlines.push_back(k * pred.transfer_period);
        out.push_back({{"i", i + 1},
                       {"j", j + 1},
                       {"omega_ij", system.transition_freq(i, j)},
                       {"d_ij", drive.f0 * system.couplings()(i, j)},
                       {"amplitude", pred.amplitude},
                       {"transfer_period", pred.transfer_period},
                       {"gamma", pred.gamma},
                       {"bloch_siegert_amplitude", pred.bloch_siegert_amplitude},
                       {"regime", regime_name(pred.regime)},
                       {"period_gridlines", gridlines}});
    }
    return out;
}

json trace_meta_json(const LevelSystem& system, const Drive& drive, double t_end,
                     int initial_level, const PopulationTrace& trace) {
    json meta;
    meta["system_hash"] = system_hash_hex(system);
    meta["drive"] = {{"f0", drive.f0}, {"omega", drive.omega}};
    meta["initial_level"] = initial_level + 1;
    meta["t_end"] = t_end;
    meta["tolerances"] = {{"rel_tol", trace.meta.rel_tol},
                          {"abs_tol", trace.meta.abs_tol},
                          {"norm_tolerance", trace.meta.norm_tolerance},
                          {"max_step", trace.meta.max_step}};
    meta["norm_drift"] = {{"max", trace.meta.max_norm_drift},
                          {"final", trace.meta.final_norm_drift}};
    meta["degenerate_levels"] = trace.meta.degenerate_levels;
    meta["steps"] = {{"accepted", trace.meta.accepted_steps},
                     {"rejected", trace.meta.rejected_steps}};
    meta["rwa"] = rwa_annotations(system, drive, t_end);
    return meta;
}

void write_trace_svg(const std::string& path, const LevelSystem& system,
                     const PopulationTrace& trace, const json& meta) {
    std::vector<PlotSeries> series(static_cast<std::size_t>(trace.levels()));
    for (int i = 0; i < trace.levels(); ++i) {
        auto& s = series[static_cast<std::size_t>(i)];
        s.name = "Pi_" + system.level(i).label;
        s.x = trace.times;
        s.y.resize(trace.times.size());
        for (int r = 0; r < trace.samples(); ++r)
            s.y[static_cast<std::size_t>(r)] = trace.populations(r, i);
    }
    PlotLayout layout;
    layout.title = "population dynamics";
    layout.x_label = "t";
    layout.y_label = "Pi(t)";
    // annotate with the dominant driven transition's RWA prediction
    double best = -1.0;
    for (const auto& entry : meta.at("rwa")) {
        if (entry.at("amplitude").get<double>() > best) {
            best = entry.at("amplitude").get<double>();
            layout.h_gridlines = {best};
            layout.v_gridlines.clear();
            for (const auto& g : entry.at("period_gridlines"))
                layout.v_gridlines.push_back(g.get<double>());
        }
    }
    write_svg_lineplot(path, layout, series);
}

PopulationTrace empty_trace(int levels, const IntegratorOptions& opts) {
    PopulationTrace t;
    t.amplitudes.resize(0, levels);
    t.populations.resize(0, levels);
    t.meta.rel_tol = opts.rel_tol;
    t.meta.abs_tol = opts.abs_tol;
    t.meta.norm_tolerance = opts.norm_tolerance;
    return t;
}

struct SimJob {
    Drive drive;
    std::string stem;
};

} // namespace

void cmd_simulate(const SimulateConfig& config) {
    const LevelSystem system = load_system(config.system_path);
    const int initial = resolve_level(system, config.initial);
    if (config.omegas.empty()) fail(errc::parse_error, "simulate needs --omega");
    if (config.t_end < 0.0) fail(errc::bad_time_span, "t_end must be non-negative");
    ensure_dir(config.out_dir);

    std::vector<SimJob> jobs;
    for (std::size_t k = 0; k < config.omegas.size(); ++k) {
        std::string stem = "trace";
        if (config.omegas.size() > 1) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "_%03zu", k);
            stem += buf;
        }
        jobs.push_back(SimJob{make_drive(config.f0, config.omegas[k]), stem});
    }

    IntegratorOptions opts;
    opts.rel_tol = config.rel_tol;
    opts.abs_tol = config.abs_tol;
    opts.norm_tolerance = config.norm_tol;
    opts.sample_dt = config.sample_dt;

    // independent integrations fan out concurrently; results are merged and
    // written in input order
    std::vector<std::future<PopulationTrace>> futures;
    for (const auto& job : jobs) {
        futures.push_back(std::async(
            config.t_end == 0.0 || jobs.size() == 1 ? std::launch::deferred
                                                    : std::launch::async,
            [&system, &opts, initial, t_end = config.t_end, drive = job.drive] {
                if (t_end == 0.0) return empty_trace(system.size(), opts);
                return integrate(system, drive, basis_state(system, initial), t_end, opts);
            }));
    }

    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const PopulationTrace trace = futures[k].get();
        const std::string base = join(config.out_dir, jobs[k].stem);
        write_trace_csv(trace, base + ".csv");
        const json meta =
            trace_meta_json(system, jobs[k].drive, config.t_end, initial, trace);
        write_text(base + ".meta.json", meta.dump(2) + "\n");
        if (config.format == OutputFormat::json) write_trace_json(trace, base + ".json");
        if (config.format == OutputFormat::svg && trace.samples() > 0)
            write_trace_svg(base + ".svg", system, trace, meta);
    }
}

namespace {

CurveSet sample_profiles(const std::vector<RabiProfile>& profiles,
                         const LevelSystem& system, double lo, double hi, int points) {
    if (points < 1) fail(errc::parse_error, "frequency grid needs at least 1 point");
    if (hi < lo) fail(errc::parse_error, "empty frequency window");
    CurveSet curves;
    curves.x_name = "omega";
    for (int k = 0; k < points; ++k) {
        curves.x.push_back(points == 1 ? lo : lo + (hi - lo) * k / (points - 1));
    }
    for (const auto& p : profiles) {
        curves.names.push_back("P_" + system.level(p.i).label + "_" +
                               system.level(p.j).label);
        std::vector<double> col(curves.x.size());
        for (std::size_t k = 0; k < curves.x.size(); ++k)
            col[k] = profile_height(p, curves.x[k]);
        curves.columns.push_back(std::move(col));
    }
    return curves;
}

void write_curve_svg(const std::string& path, const CurveSet& curves,
                     const std::string& title, const std::vector<double>& vlines) {
    std::vector<PlotSeries> series;
    for (std::size_t c = 0; c < curves.names.size(); ++c)
        series.push_back(PlotSeries{curves.names[c], curves.x, curves.columns[c]});
    PlotLayout layout;
    layout.title = title;
    layout.x_label = "omega";
    layout.y_label = "P(omega)";
    layout.v_gridlines = vlines;
    write_svg_lineplot(path, layout, series);
}

} // namespace

void cmd_profile(const ProfileConfig& config) {
    const LevelSystem system = load_system(config.system_path);
    const auto [a, b] = parse_target(system, config.target);
    const RabiProfile profile = make_profile(system, config.f0, a, b);
    ensure_dir(config.out_dir);

    double lo = config.omega_min, hi = config.omega_max;
    if (lo < 0.0) lo = std::max(0.0, profile.center - 10.0 * profile.halfwidth);
    if (hi < 0.0) hi = profile.center + 10.0 * profile.halfwidth;
    const CurveSet curves =
        sample_profiles({profile}, system, lo, hi, config.omega_points);

    const std::string base =
        join(config.out_dir, "profile_" + system.level(a).label + "_" +
                                 system.level(b).label);
    write_curves_csv(curves, base + ".csv");
    json meta{{"system_hash", system_hash_hex(system)},
              {"target", target_json(system, a, b)},
              {"f0", config.f0},
              {"center", profile.center},
              {"halfwidth", profile.halfwidth}};
    write_text(base + ".meta.json", meta.dump(2) + "\n");
    if (config.format == OutputFormat::svg)
        write_curve_svg(base + ".svg", curves, "Rabi profile", {});
}

void cmd_spectrum(const SpectrumConfig& config) {
    const LevelSystem system = load_system(config.system_path);
    const auto [a, b] = parse_target(system, config.target);
    const RabiSpectrum spectrum = rabi_spectrum(system, config.f0, a, b);
    const double drive_omega =
        config.drive_omega > 0.0 ? config.drive_omega : spectrum.profiles.front().center;
    ensure_dir(config.out_dir);

    double lo = config.omega_min, hi = config.omega_max;
    if (lo < 0.0 || hi < 0.0) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (const auto& p : spectrum.profiles) {
            lo = std::min(lo, p.center - 10.0 * p.halfwidth);
            hi = std::max(hi, p.center + 10.0 * p.halfwidth);
        }
        lo = std::max(0.0, lo);
        if (config.omega_min >= 0.0) lo = config.omega_min;
        if (config.omega_max >= 0.0) hi = config.omega_max;
    }
    const CurveSet curves =
        sample_profiles(spectrum.profiles, system, lo, hi, config.omega_points);

    const std::string base =
        join(config.out_dir, "spectrum_" + system.level(a).label + "_" +
                                 system.level(b).label);
    write_curves_csv(curves, base + ".csv");
    json profiles = json::array();
    for (const auto& p : spectrum.profiles) {
        profiles.push_back({{"i", p.i + 1},
                            {"j", p.j + 1},
                            {"center", p.center},
                            {"halfwidth", p.halfwidth},
                            {"height_at_drive", profile_height(p, drive_omega)}});
    }
    json meta{{"system_hash", system_hash_hex(system)},
              {"target", target_json(system, a, b)},
              {"f0", config.f0},
              {"drive_omega", drive_omega},
              {"profiles", profiles}};
    write_text(base + ".meta.json", meta.dump(2) + "\n");
    if (config.format == OutputFormat::svg)
        write_curve_svg(base + ".svg", curves, "Rabi spectrum", {drive_omega});
}

void cmd_validate(const ValidateConfig& config) {
    const LevelSystem system = load_system(config.system_path);
    const auto [a, b] = parse_target(system, config.target);
    const double drive_omega =
        config.drive_omega > 0.0 ? config.drive_omega : system.transition_freq(a, b);
    const RegimeThresholds thresholds{config.gamma_valid, config.gamma_extreme};
    const ValidityReport report = validity_report(system, config.f0, a, b, drive_omega,
                                                  config.eps_leak, thresholds);
    const double f0_max =
        max_clean_intensity(system, a, b, config.eps_leak, config.theta_rwa);
    const double t_min = min_transfer_time(system, a, b, config.eps_leak, config.theta_rwa);
    ensure_dir(config.out_dir);

    json spectators = json::array();
    for (const auto& entry : report.spectator_leakage) {
        spectators.push_back({{"i", entry.i + 1},
                              {"j", entry.j + 1},
                              {"omega_ij", system.transition_freq(entry.i, entry.j)},
                              {"height_at_drive", entry.height}});
    }
    json doc{{"system_hash", system_hash_hex(system)},
             {"target", target_json(system, a, b)},
             {"f0", report.f0},
             {"drive_omega", report.drive_omega},
             {"gamma_at_resonance", report.gamma_at_resonance},
             {"gamma_at_drive", report.gamma_at_drive},
             {"rwa_ratio", report.rwa_ratio},
             {"regime", regime_name(report.regime)},
             {"selective", report.selective},
             {"eps_leak", report.eps_leak},
             {"spectators", spectators},
             {"worst_leakage", report.worst_leakage},
             {"theta_rwa", config.theta_rwa},
             {"max_clean_intensity", f0_max},
             {"min_transfer_time",
              std::isfinite(t_min) ? json(t_min) : json(nullptr)},
             {"notes",
              {{"spectator_rwa_bound",
                "intensity limit also enforces the RWA bound on each spectator "
                "profile at its own center (self-consistency constraint)"}}}};
    write_text(join(config.out_dir, "validity.json"), doc.dump(2) + "\n");

    std::ostringstream table;
    table << "Rabi validity report\n"
          << "  target      : " << system.level(a).label << " <-> "
          << system.level(b).label << "   omega_t = " << system.transition_freq(a, b)
          << "\n";
    table << "  f0          : " << report.f0 << "   drive omega: " << report.drive_omega
          << "\n";
    table << "  Gamma(res)  : " << report.gamma_at_resonance
          << "   Gamma(drive): " << report.gamma_at_drive
          << "   |D|/omega_t: " << report.rwa_ratio << "\n";
    table << "  regime      : " << regime_name(report.regime)
          << "   selective: " << (report.selective ? "yes" : "no")
          << " (eps_leak = " << report.eps_leak << ")\n";
    table << "  spectators  :\n";
    if (report.spectator_leakage.empty()) table << "    (none)\n";
    for (const auto& entry : report.spectator_leakage) {
        table << "    (" << system.level(entry.i).label << ","
              << system.level(entry.j).label << "): P(drive) = " << entry.height << "\n";
    }
    table << "  worst leak  : " << report.worst_leakage << "\n";
    table << "  f0_max      : " << f0_max << " (theta_rwa = " << config.theta_rwa << ")\n";
    table << "  t_min       : ";
    if (std::isfinite(t_min))
        table << t_min << "\n";
    else
        table << "unbounded (degenerate spectator)\n";
    write_text(join(config.out_dir, "validity.txt"), table.str());
    std::cout << table.str();
}

void cmd_pathway(const PathwayConfig& config) {
    const LevelSystem system = load_system(config.system_path);
    const int source = resolve_level(system, config.source);
    const int dest = resolve_level(system, config.dest);
    const PathResult result =
        fastest_path(system, source, dest, config.eps_leak, config.theta_rwa);
    ensure_dir(config.out_dir);

    json steps = json::array();
    for (const auto& step : result.steps) {
        steps.push_back({{"from", step.from + 1},
                         {"to", step.to + 1},
                         {"f0", step.f0},
                         {"time", step.time}});
    }
    json route = json::array();
    for (int node : result.route) route.push_back(node + 1);
    json doc{{"system_hash", system_hash_hex(system)},
             {"source", source + 1},
             {"dest", dest + 1},
             {"eps_leak", config.eps_leak},
             {"theta_rwa", config.theta_rwa},
             {"found", result.found},
             {"route", route},
             {"steps", steps},
             {"total_time", result.found ? json(result.total_time) : json(nullptr)},
             {"notes",
              {{"spectator_rwa_bound",
                "per-edge intensity limits also enforce the RWA bound on each "
                "spectator profile at its own center (self-consistency constraint)"},
               {"per_hop_leakage_budget", config.eps_leak}}}};
    write_text(join(config.out_dir, "pathway.json"), doc.dump(2) + "\n");

    std::ostringstream table;
    table << "Fastest clean transfer " << system.level(source).label << " -> "
          << system.level(dest).label << " (eps_leak = " << config.eps_leak
          << ", theta_rwa = " << config.theta_rwa << ")\n";
    if (!result.found) {
        table << "  no pathway: destination unreachable over coupled transitions\n";
    } else {
        table << "  route : ";
        for (std::size_t k = 0; k < result.route.size(); ++k) {
            if (k) table << " -> ";
            table << system.level(result.route[k]).label;
        }
        table << "\n  steps :\n";
        for (const auto& step : result.steps) {
            table << "    " << system.level(step.from).label << " -> "
                  << system.level(step.to).label << ": f0 = " << step.f0
                  << "  T = " << step.time << "\n";
        }
        table << "  total : " << result.total_time << "\n";
    }
    write_text(join(config.out_dir, "pathway.txt"), table.str());
    std::cout << table.str();
}

namespace {

LevelSystem two_level_system() {
    Eigen::MatrixXd couplings(2, 2);
    couplings << 0, 1, 1, 0;
    return validate_system({{"1", 0.0}, {"2", 1.0}}, couplings);
}

LevelSystem ladder_system() {
    Eigen::MatrixXd couplings(3, 3);
    couplings << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    return validate_system({{"1", 0.0}, {"2", 1.0}, {"3", 1.93}}, couplings);
}

} // namespace

void cmd_figures(const FiguresConfig& config) {
    ensure_dir(config.out_dir);
    const LevelSystem two = two_level_system();
    const LevelSystem ladder = ladder_system();
    const bool svg = config.format == OutputFormat::svg;
    std::vector<std::string> written;

    auto emit_curves = [&](const std::string& rel, const CurveSet& curves,
                           const std::string& title, std::vector<double> vlines) {
        const std::string base = join(config.out_dir, rel);
        write_curves_csv(curves, base + ".csv");
        written.push_back(rel + ".csv");
        if (svg) {
            write_curve_svg(base + ".svg", curves, title, vlines);
            written.push_back(rel + ".svg");
        }
    };

    struct FigRun {
        std::string rel;
        const LevelSystem* system;
        Drive drive;
        int initial;
        double t_end;
        double rel_tol;
        double abs_tol;
    };
    std::vector<FigRun> runs;
    auto queue_run = [&](const std::string& rel, const LevelSystem& system, double f0,
                         double omega, int initial, double t_end, double rel_tol = 1e-9,
                         double abs_tol = 1e-11) {
        runs.push_back(FigRun{rel, &system, make_drive(f0, omega), initial, t_end,
                              rel_tol, abs_tol});
    };

    // single spectral line at increasing coupling (Gamma = 50, 5, 1, 0.1)
    {
        std::vector<RabiProfile> profiles;
        for (double d : {0.04, 0.4, 2.0, 20.0})
            profiles.push_back(make_profile(two, d, 0, 1));
        CurveSet curves = sample_profiles(profiles, two, 0.0, 3.0, 1501);
        curves.names = {"P_D0.04", "P_D0.4", "P_D2", "P_D20"};
        ensure_dir(join(config.out_dir, "fig1"));
        emit_curves("fig1/profiles", curves, "Rabi profiles of a single line", {});
    }

    // resonant two-level dynamics across the four coupling regimes
    ensure_dir(join(config.out_dir, "fig2"));
    queue_run("fig2/case_d0.04", two, 0.04, 1.0, 0, 3.0 * M_PI / 0.04);
    queue_run("fig2/case_d0.4", two, 0.4, 1.0, 0, 3.0 * M_PI / 0.4);
    queue_run("fig2/case_d2", two, 2.0, 1.0, 0, 3.0 * M_PI / 2.0, 1e-10, 1e-12);
    queue_run("fig2/case_d20", two, 20.0, 1.0, 0, 3.0, 1e-10, 1e-12);

    // off-resonant dynamics on a common profile (D = 0.05 omega_12)
    {
        ensure_dir(join(config.out_dir, "fig3"));
        const RabiProfile profile = make_profile(two, 0.05, 0, 1);
        emit_curves("fig3/profile", sample_profiles({profile}, two, 0.0, 3.0, 1501),
                    "common Rabi profile", {1.050, 0.850, 0.503, 2.580});
        const char* names[] = {"fig3/case_a", "fig3/case_b", "fig3/case_c", "fig3/case_d"};
        const double freqs[] = {1.050, 0.850, 0.503, 2.580};
        for (int k = 0; k < 4; ++k) {
            const double period = transfer_period(profile, freqs[k]);
            queue_run(names[k], two, 0.05, freqs[k], 0, 2.2 * period);
        }
    }

    // three-level ladder: selective, leaking, and destroyed transfer
    {
        const double fig_f0[] = {0.005, 0.02, 0.1};
        const char* dirs[] = {"fig4", "fig5", "fig6"};
        for (int k = 0; k < 3; ++k) {
            ensure_dir(join(config.out_dir, dirs[k]));
            const RabiSpectrum spectrum = rabi_spectrum(ladder, fig_f0[k], 1, 0);
            emit_curves(std::string(dirs[k]) + "/spectrum",
                        sample_profiles(spectrum.profiles, ladder, 0.8, 1.15, 1401),
                        "Rabi spectrum of the targeted transition", {1.0});
            const double t_end = k == 2 ? 150.0 : 2.0 * M_PI / fig_f0[k];
            queue_run(std::string(dirs[k]) + "/dynamics", ladder, fig_f0[k], 1.0, 1,
                      t_end, k == 2 ? 1e-10 : 1e-9, k == 2 ? 1e-12 : 1e-11);
        }
    }

    // independent runs fan out concurrently, outputs land in input order
    std::vector<std::future<PopulationTrace>> futures;
    for (const auto& run : runs) {
        futures.push_back(std::async(std::launch::async, [&run] {
            IntegratorOptions opts;
            opts.rel_tol = run.rel_tol;
            opts.abs_tol = run.abs_tol;
            return integrate(*run.system, run.drive, basis_state(*run.system, run.initial),
                             run.t_end, opts);
        }));
    }
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const FigRun& run = runs[k];
        const PopulationTrace trace = futures[k].get();
        const std::string base = join(config.out_dir, run.rel);
        write_trace_csv(trace, base + ".csv");
        written.push_back(run.rel + ".csv");
        const json meta =
            trace_meta_json(*run.system, run.drive, run.t_end, run.initial, trace);
        write_text(base + ".meta.json", meta.dump(2) + "\n");
        written.push_back(run.rel + ".meta.json");
        if (svg) {
            write_trace_svg(base + ".svg", *run.system, trace, meta);
            written.push_back(run.rel + ".svg");
        }
    }

    json manifest{{"files", written}};
    write_text(join(config.out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

} // namespace rabispec
