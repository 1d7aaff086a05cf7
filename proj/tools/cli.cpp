#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "compass/grid_io.hpp"
#include "compass/sensitivity.hpp"
#include "compass/states.hpp"

namespace compass::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double radius_of(const RunConfig& cfg) {
    return cfg.a.value_or(default_radius(cfg.n));
}

void warn_if_crowded(int n, double a, std::ostream& err) {
    const double need = min_separated_radius(n);
    if (a < need) {
        err << "warning: neighbouring coherent components are only "
            << fmt("%.3g", 2.0 * a * std::sin(pi / (4.0 * n)))
            << " units apart (a >= " << fmt("%.4g", need)
            << " keeps them 6 apart); cross terms are no longer negligible\n";
    }
}

StateSpec load_state(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.state_file.empty()) {
        return read_state_file(cfg.state_file);
    }
    const double a = radius_of(cfg);
    warn_if_crowded(cfg.n, a, err);
    return make_n_compass(cfg.n, a);
}

double outer_radius(const StateSpec& s) {
    double r = 0.0;
    for (const auto& c : s.components()) {
        r = std::max(r, c.radius);
    }
    return r;
}

GridAxes axes_for(const RunConfig& cfg, FieldKind kind, const StateSpec& state) {
    if (cfg.window) {
        const auto& w = *cfg.window;
        GridAxes axes{w[0], w[1], w[2], w[3], cfg.resolution, cfg.resolution};
        validate_axes(axes);
        return axes;
    }
    double a = state.provenance() ? state.provenance()->a : outer_radius(state);
    if (!(a > 0.0)) {
        a = 1.0;
    }
    return default_window(kind, a, cfg.resolution);
}

// Grid data go to --output when given, otherwise to stdout; the summary then
// moves to stderr so stdout stays a clean data stream.
std::ostream& summary_stream(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cfg.output.empty() ? err : out;
}

void emit_field(const RunConfig& cfg, const GridField& field, PgmScale scale, std::ostream& out) {
    if (cfg.format == Format::table) {
        throw UsageError("grid fields are written as csv or pgm");
    }
    if (cfg.output.empty()) {
        if (cfg.format == Format::csv) {
            out << to_csv(field);
        } else {
            const auto levels = pgm_levels(field, scale);
            out << "P5\n" << field.axes.nx << ' ' << field.axes.np << "\n65535\n";
            for (int j = field.axes.np - 1; j >= 0; --j) {
                for (int i = 0; i < field.axes.nx; ++i) {
                    const auto v = levels[static_cast<std::size_t>(j) * field.axes.nx + i];
                    out.put(static_cast<char>(v >> 8)).put(static_cast<char>(v & 0xff));
                }
            }
        }
        return;
    }
    if (cfg.format == Format::csv) {
        write_csv(field, cfg.output);
    } else {
        write_pgm(field, cfg.output, scale);
    }
}

void emit_text(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream os(cfg.output, std::ios::binary);
    if (!os) {
        throw std::runtime_error(cfg.output.string() + ": cannot open for writing");
    }
    os << text;
    if (!os) {
        throw std::runtime_error(cfg.output.string() + ": write failed");
    }
}

void check_config(const RunConfig& cfg) {
    if (cfg.n < 1) {
        throw UsageError("--n must be at least 1");
    }
    if (cfg.a && !(*cfg.a > 0.0)) {
        throw UsageError("--a must be positive");
    }
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw UsageError("--epsilon must lie in (0, 1)");
    }
    if (!(cfg.cutoff > 0.0 && cfg.cutoff < 1.0)) {
        throw UsageError("--cutoff must lie in (0, 1)");
    }
    if (cfg.resolution < 2) {
        throw UsageError("--resolution must be at least 2");
    }
    if (cfg.steps < 8) {
        throw UsageError("--steps must be at least 8");
    }
    if (cfg.y && !(*cfg.y > 0.0)) {
        throw UsageError("--y must be positive");
    }
    if (cfg.window) {
        const auto& w = *cfg.window;
        if (!(w[0] < w[1]) || !(w[2] < w[3])) {
            throw UsageError("--window expects x_min x_max p_min p_max with min < max");
        }
    }
}

}  // namespace

double default_radius(int n) {
    switch (n) {
        case 1: return 5.0;
        case 2: return 8.0;
        case 3: return 12.0;
        default: return std::ceil(min_separated_radius(n));
    }
}

int cmd_wigner(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.mode == Mode::approx) {
        throw UsageError("wigner supports --mode exact or --mode center");
    }
    const FieldKind kind = cfg.mode == Mode::center ? FieldKind::wigner_center : FieldKind::wigner;
    const StateSpec state = load_state(cfg, err);
    const GridField field = sample_field(kind, state, axes_for(cfg, kind, state));

    const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
    double sum = 0.0;
    for (double v : field.values) {
        sum += v;
    }
    emit_field(cfg, field, PgmScale::symmetric, out);
    std::ostream& s = summary_stream(cfg, out, err);
    s << "field     " << to_string(kind) << " (" << field.axes.nx << "x" << field.axes.np << ")\n"
      << "min       " << fmt("%.10g", *lo) << "\n"
      << "max       " << fmt("%.10g", *hi) << "\n"
      << "integral  " << fmt("%.10g", sum * field.axes.dx() * field.axes.dp()) << "\n";
    return exit_ok;
}

int cmd_overlap(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.mode == Mode::center) {
        throw UsageError("overlap supports --mode exact or --mode approx");
    }
    const StateSpec state = load_state(cfg, err);
    const FieldKind kind = cfg.mask ? FieldKind::gamma_zero_mask : FieldKind::gamma;
    SampleOptions opts;
    opts.overlap_mode = cfg.mode == Mode::approx ? OverlapMode::approx : OverlapMode::exact;
    opts.cutoff = cfg.cutoff;
    const GridAxes axes = axes_for(cfg, kind, state);
    const GridField field = sample_field(kind, state, axes, opts);
    emit_field(cfg, field, PgmScale::linear, out);

    std::ostream& s = summary_stream(cfg, out, err);
    s << "field     " << to_string(kind) << " (" << field.meta.mode << ", " << axes.nx << "x" << axes.np
      << ")\n";
    if (cfg.mask) {
        std::size_t zeros = 0;
        for (double v : field.values) {
            zeros += v != 0.0;
        }
        s << "cutoff    " << fmt("%.3g", cfg.cutoff) << "\n"
          << "zero      " << zeros << " of " << field.values.size() << " cells\n";
    } else {
        const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
        s << "min       " << fmt("%.10g", *lo) << "\n"
          << "max       " << fmt("%.10g", *hi) << "\n";
    }
    if (cfg.compare) {
        SampleOptions e = opts, a = opts;
        e.overlap_mode = OverlapMode::exact;
        a.overlap_mode = OverlapMode::approx;
        const GridField fe = sample_field(FieldKind::gamma, state, axes, e);
        const GridField fa = sample_field(FieldKind::gamma, state, axes, a);
        double diff = 0.0;
        for (std::size_t i = 0; i < fe.values.size(); ++i) {
            diff = std::max(diff, std::abs(fe.values[i] - fa.values[i]));
        }
        s << "max |exact - approx|  " << fmt("%.3e", diff) << "\n";
    }
    return exit_ok;
}

int cmd_sensitivity(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.state_file.empty()) {
        throw UsageError("sensitivity is defined for n-compass states; use --n and --a");
    }
    const double a = radius_of(cfg);
    warn_if_crowded(cfg.n, a, err);
    const SensitivityReport rep = sensitivity_sweep(cfg.n, a, cfg.steps, cfg.y);
    const double g = gamma_approx(cfg.n, a, {rep.delta_min, rep.arg_min}).gamma;

    std::string text = format_report(rep);
    text += "gamma at min    " + fmt("%.3e", g) + (g < cfg.epsilon ? " (below " : " (NOT below ") +
            fmt("%.0e", cfg.epsilon) + ")\n";
    if (cfg.rows) {
        text += format_report_rows(rep);
    }
    emit_text(cfg, text, out);
    if (!cfg.output.empty()) {
        out << format_report(rep);
    }
    return exit_ok;
}

int cmd_isotropy(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.n_max < 1) {
        throw UsageError("--n-max must be at least 1");
    }
    const double a = cfg.a.value_or(std::ceil(min_separated_radius(cfg.n_max)));
    const auto rows = asymptotic_isotropy_table(cfg.n_max, a, cfg.steps);
    std::ostringstream os;
    os << "# a = " << fmt("%.10g", a) << ", expansion 2ay = 12/5\n";
    os << "# n  isotropy  a*delta_min  separated\n";
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d %.6e %.12f %s\n", r.n, r.metric, r.delta_min_scaled,
                      r.well_separated ? "yes" : "no");
        os << buf;
        if (!r.well_separated) {
            warn_if_crowded(r.n, a, err);
        }
    }
    emit_text(cfg, os.str(), out);
    return exit_ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Compass-state phase-space toolkit: Wigner functions, displacement overlaps and "
                 "sub-Planck sensitivity of superposed compass states.",
                 "compass"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file; command-line flags win over file entries");

    const std::map<std::string, Mode> modes{{"exact", Mode::exact}, {"approx", Mode::approx}, {"center", Mode::center}};
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"pgm", Format::pgm}, {"table", Format::table}};
    std::vector<double> window;

    app.add_option("--n", cfg.n, "Number of superposed compass states (4n coherent components)")
        ->capture_default_str();
    app.add_option("--a", cfg.a,
                   "Coherent amplitude of every component; default 5, 8, 12 for n = 1, 2, 3 and the "
                   "smallest a keeping neighbours 6 units apart beyond that");
    app.add_option("--window", window, "Grid window x_min x_max p_min p_max (for overlaps: Re and Im of the displacement)")
        ->expected(4);
    app.add_option("--resolution", cfg.resolution, "Grid cells per axis")->capture_default_str();
    app.add_option("--mode", cfg.mode,
                   "exact: every component pair; approx: self terms only (overlap); center: "
                   "interference pattern near the origin (wigner)")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    app.add_option("--epsilon", cfg.epsilon, "Overlap threshold below which a displaced state counts as orthogonal")
        ->capture_default_str();
    app.add_option("--cutoff", cfg.cutoff, "Overlap value below which a cell is marked as zero in masks")
        ->capture_default_str();
    app.add_option("--y", cfg.y, "Taylor expansion point for the root search, as |delta| (default 6/(5a))");
    app.add_option("--output,-o", cfg.output, "Output file; data go to stdout when omitted");
    app.add_option("--format", cfg.format, "Output format: csv, pgm or table")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--state-file", cfg.state_file, "Read an arbitrary superposition from a state file");
    app.add_flag("--mask", cfg.mask, "Write the zero mask (overlap below --cutoff) instead of the overlap");
    app.add_flag("--compare", cfg.compare, "Also report the largest exact-vs-approx overlap difference");
    app.add_flag("--rows", cfg.rows, "Append one 'n a arg_delta root' row per sweep sample");
    app.add_flag("--quick", cfg.quick, "validate: skip the slow quadrature checks");
    app.add_option("--steps", cfg.steps, "Direction samples per sweep period")->capture_default_str();
    app.add_option("--n-max", cfg.n_max, "Largest n in the isotropy table")->capture_default_str();

    const std::pair<const char*, const char*> subs[] = {
        {"wigner", "Sample the normalised Wigner function on a grid"},
        {"overlap", "Sample the displacement overlap |<psi|D(delta)|psi>|^2 on a grid"},
        {"sensitivity", "Smallest displacement that makes the state orthogonal to itself"},
        {"isotropy", "Direction dependence of the first zero ring for n = 1..n-max"},
        {"validate", "Check closed forms against brute-force references"},
    };
    std::map<std::string, CLI::App*> apps;
    for (const auto& [name, help] : subs) {
        apps[name] = app.add_subcommand(name, help)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }
    if (!window.empty()) {
        cfg.window = std::array<double, 4>{window[0], window[1], window[2], window[3]};
    }
    for (const auto& [name, sub] : apps) {
        if (sub->parsed()) {
            cfg.command = name == "wigner"        ? Command::wigner
                          : name == "overlap"     ? Command::overlap
                          : name == "sensitivity" ? Command::sensitivity
                          : name == "isotropy"    ? Command::isotropy
                                                  : Command::validate;
        }
    }

    try {
        check_config(cfg);
        switch (cfg.command) {
            case Command::wigner: return cmd_wigner(cfg, out, err);
            case Command::overlap: return cmd_overlap(cfg, out, err);
            case Command::sensitivity: return cmd_sensitivity(cfg, out, err);
            case Command::isotropy: return cmd_isotropy(cfg, out, err);
            case Command::validate: return cmd_validate(cfg, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("compass");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace compass::cli
