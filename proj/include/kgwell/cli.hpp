#pragma once

// Command-line front end: solve, spectrum, critical, limit-check, wavefunction.
//
// Exit codes: 0 ok, 1 limit check failed, 2 usage, 3 numerical failure,
// 4 invalid bracket, 5 energy is not an eigenvalue.

#include "kgwell/error.hpp"
#include "kgwell/oracle.hpp"
#include "kgwell/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace kgwell::cli {

enum ExitCode : int {
    kOk = 0,
    kLimitCheckFailed = 1,
    kUsage = 2,
    kNumerics = 3,
    kBracket = 4,
    kNotEigenvalue = 5,
};

/// 12 significant digits, "." decimal point regardless of locale.
inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    for (auto& c : s)
        if (c == ',')
            c = '.';
    return s;
}

/// The JSON counterpart of fmt: the double nearest the 12-digit rendering.
inline nlohmann::json jnum(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return std::strtod(fmt(v).c_str(), nullptr);
}

/// Reads `key = value` lines ('#' starts a comment) and appends `--key value`
/// for every key not already given on the command line, so flags win.
inline std::vector<std::string> apply_config(std::vector<std::string> args, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--config", "cannot open config file " + path);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) +
                                                       ": expected key = value");
        const std::string key = "--" + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool given = false;
        for (const auto& a : args)
            if (a == key || a.rfind(key + "=", 0) == 0)
                given = true;
        if (!given) {
            args.push_back(key);
            args.push_back(value);
        }
    }
    return args;
}

struct Options {
    double v0 = 0.0;
    double a = 0.5;
    std::vector<double> x0{0.0};
    std::string format = "csv";
    std::string out;
    ScanConfig scan;
    // spectrum
    double v0_min = 0.0, v0_max = 0.0;
    int steps = 100;
    bool cold = false;
    // critical
    double lo = kDefaultDepthLo, hi = kDefaultDepthHi;
    // limit-check
    std::string mode;
    double width = 0.0;
    // wavefunction
    double e = 0.0;
    double e_tol = 1e-5;
    double x_min = std::numeric_limits<double>::quiet_NaN();
    double x_max = std::numeric_limits<double>::quiet_NaN();
    int points = 801;
};

inline unsigned thread_count()
{
    if (const char* env = std::getenv("KGWELL_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

class Output {
public:
    explicit Output(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw CLI::ValidationError("--out", "cannot write " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

inline void write_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

inline int cmd_solve(const Options& o, std::ostream& out)
{
    const PotentialParams p{o.v0, o.a, o.x0.front()};
    p.validate();
    const auto states = find_bound_states(p, o.scan);
    Output sink(o.out, out);
    auto& os = sink.stream();
    if (o.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& s : states)
            arr.push_back({{"e", jnum(s.e)}, {"n", jnum(s.norm)}, {"kind", to_string(s.kind)},
                           {"v0", jnum(p.v0)}, {"a", jnum(p.a)}, {"x0", jnum(p.x0)}});
        write_json(os, arr);
    } else {
        os << "e,n,kind\n";
        for (const auto& s : states)
            os << fmt(s.e) << ',' << fmt(s.norm) << ',' << to_string(s.kind) << '\n';
    }
    return kOk;
}

inline int cmd_spectrum(const Options& o, std::ostream& out)
{
    SweepOptions sweep;
    sweep.warm_start = !o.cold;
    sweep.threads = thread_count();
    const auto curve = sweep_v0(o.a, o.x0.front(), o.v0_min, o.v0_max, o.steps, o.scan, sweep);
    Output sink(o.out, out);
    auto& os = sink.stream();
    if (o.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& pt : curve.points)
            for (std::size_t i = 0; i < pt.states.size(); ++i)
                arr.push_back({{"v0", jnum(pt.v0)}, {"a", jnum(curve.a)}, {"x0", jnum(curve.x0)},
                               {"branch_id", pt.branch_ids[i]}, {"e", jnum(pt.states[i].e)},
                               {"n", jnum(pt.states[i].norm)}, {"kind", to_string(pt.states[i].kind)}});
        write_json(os, arr);
    } else {
        os << "v0,branch_id,e,n\n";
        for (const auto& pt : curve.points)
            for (std::size_t i = 0; i < pt.states.size(); ++i)
                os << fmt(pt.v0) << ',' << pt.branch_ids[i] << ',' << fmt(pt.states[i].e) << ','
                   << fmt(pt.states[i].norm) << '\n';
    }
    return kOk;
}

inline int cmd_critical(const Options& o, std::ostream& out)
{
    const auto points = sweep_x0(o.a, o.x0, o.lo, o.hi, o.scan, thread_count());
    Output sink(o.out, out);
    auto& os = sink.stream();
    if (o.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& c : points)
            arr.push_back({{"a", jnum(o.a)}, {"x0", jnum(c.x0)}, {"v_cr", jnum(c.v_cr)},
                           {"e_cr", jnum(c.e_cr)}, {"abs_n", jnum(c.n_cr)}, {"v_onset", jnum(c.v_onset)}});
        write_json(os, arr);
    } else {
        os << "a,x0,v_cr,e_cr,abs_n,v_onset\n";
        for (const auto& c : points)
            os << fmt(o.a) << ',' << fmt(c.x0) << ',' << fmt(c.v_cr) << ',' << fmt(c.e_cr) << ','
               << fmt(c.n_cr) << ',' << fmt(c.v_onset) << '\n';
    }
    return kOk;
}

inline int cmd_limit_check(const Options& o, std::ostream& out, std::ostream& err)
{
    std::vector<double> analytic, reference;
    double tol = 0.0;
    if (o.mode == "square") {
        if (!(o.width > 0.0))
            throw InvalidParameter("--width must be > 0 in square mode");
        analytic = find_eigenvalues({o.v0, o.a, -o.width}, o.scan);
        reference = square_well_eigenvalues(o.v0, o.width, o.scan);
        tol = 1e-3;
    } else {
        analytic = cusp_limit_check(o.v0, o.a, o.scan);
        reference = shooting_eigenvalues({o.v0, o.a, 0.0}, o.scan);
        tol = 1e-6;
    }
    const double dev = max_deviation(analytic, reference);
    const bool pass = dev <= tol;

    Output sink(o.out, out);
    auto& os = sink.stream();
    if (o.format == "json") {
        nlohmann::json j;
        j["mode"] = o.mode;
        j["analytic"] = nlohmann::json::array();
        j["reference"] = nlohmann::json::array();
        for (double e : analytic)
            j["analytic"].push_back(jnum(e));
        for (double e : reference)
            j["reference"].push_back(jnum(e));
        j["max_deviation"] = jnum(dev);
        j["tolerance"] = jnum(tol);
        j["pass"] = pass;
        write_json(os, j);
    } else {
        os << "index,analytic,reference,deviation\n";
        const std::size_t n = std::max(analytic.size(), reference.size());
        for (std::size_t i = 0; i < n; ++i) {
            os << i << ',';
            if (i < analytic.size())
                os << fmt(analytic[i]);
            os << ',';
            if (i < reference.size())
                os << fmt(reference[i]);
            os << ',';
            if (i < analytic.size() && i < reference.size())
                os << fmt(std::abs(analytic[i] - reference[i]));
            os << '\n';
        }
    }
    err << "limit-check " << o.mode << ": max deviation " << fmt(dev) << " (tolerance " << fmt(tol)
        << ") " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kOk : kLimitCheckFailed;
}

inline int cmd_wavefunction(const Options& o, std::ostream& out)
{
    const PotentialParams p{o.v0, o.a, o.x0.front()};
    p.validate();
    check_window(o.e);

    // Snap the requested energy onto the nearest root within e_tol.
    ScanConfig local = o.scan;
    local.e_min = std::max(o.e - o.e_tol, -1.0 + 1e-12);
    local.e_max = std::min(o.e + o.e_tol, 1.0 - 1e-12);
    local.grid_points = 65;
    const auto roots = find_eigenvalues(p, local);
    if (roots.empty())
        throw NotAnEigenvalue("no eigenvalue within " + fmt(o.e_tol) + " of E = " + fmt(o.e));
    double e = roots.front();
    for (double r : roots)
        if (std::abs(r - o.e) < std::abs(e - o.e))
            e = r;
    const auto state = match_coefficients(e, p, 1e-6);

    const double lambda = energy_quantities(p, e).lambda;
    const double span = std::min(8.0 / lambda, 60.0);
    const double x_min = std::isnan(o.x_min) ? p.x0 - span : o.x_min;
    const double x_max = std::isnan(o.x_max) ? span : o.x_max;
    if (!(x_min < x_max) || o.points < 2)
        throw InvalidParameter("wavefunction grid requires x-min < x-max and points >= 2");

    Output sink(o.out, out);
    auto& os = sink.stream();
    os << "x,re_phi,im_phi,abs2_phi,v\n";
    for (int i = 0; i < o.points; ++i) {
        const double x = x_min + (x_max - x_min) * i / (o.points - 1);
        const Complex phi = wavefunction_eval(state, x);
        os << fmt(x) << ',' << fmt(phi.real()) << ',' << fmt(phi.imag()) << ',' << fmt(std::norm(phi))
           << ',' << fmt(potential_value(p, x)) << '\n';
    }
    return kOk;
}

} // namespace detail

/// Runs the CLI on an argument vector (args[0] is the program name).
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Bound states of the Klein-Gordon equation in a smooth potential well"};
    app.require_subcommand(1);
    Options o;
    std::string config;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out, "Output file (default: stdout)");
        sub->add_option("--config", config, "File of key = value lines; flags override it");
        sub->add_option("--grid-points", o.scan.grid_points, "Energy grid size")->check(CLI::Range(2, 10000000));
        sub->add_option("--e-min", o.scan.e_min, "Lower end of the energy scan");
        sub->add_option("--e-max", o.scan.e_max, "Upper end of the energy scan");
        sub->add_option("--refine-tol", o.scan.refine_tol, "Root bracket width")->check(CLI::PositiveNumber);
    };
    auto add_a = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--a", o.a, "Smoothness length")->check(CLI::PositiveNumber);
        if (required)
            opt->required();
    };

    auto* solve = app.add_subcommand("solve", "Bound states at one depth");
    solve->add_option("--v0", o.v0, "Well depth")->required()->check(CLI::PositiveNumber);
    add_a(solve, true);
    solve->add_option("--x0", o.x0, "Width parameter (<= 0)")->required()->expected(1);
    add_common(solve);

    auto* spectrum = app.add_subcommand("spectrum", "Bound states over a range of depths");
    add_a(spectrum, true);
    spectrum->add_option("--x0", o.x0, "Width parameter (<= 0)")->required()->expected(1);
    spectrum->add_option("--v0-min", o.v0_min, "First depth")->required()->check(CLI::PositiveNumber);
    spectrum->add_option("--v0-max", o.v0_max, "Last depth")->required()->check(CLI::PositiveNumber);
    spectrum->add_option("--steps", o.steps, "Number of depths")->check(CLI::Range(1, 10000000));
    spectrum->add_flag("--cold", o.cold, "Independent scans per depth (parallel) instead of warm starts");
    add_common(spectrum);

    auto* critical = app.add_subcommand("critical", "Depth where the particle and antiparticle states merge");
    add_a(critical, true);
    critical->add_option("--x0", o.x0, "Width parameter(s) (<= 0)")->required();
    critical->add_option("--lo", o.lo, "Lower depth bracket")->check(CLI::PositiveNumber);
    critical->add_option("--hi", o.hi, "Upper depth bracket")->check(CLI::PositiveNumber);
    add_common(critical);

    auto* limit = app.add_subcommand("limit-check", "Compare against the square-well or cusp-well limit");
    limit->add_option("--mode", o.mode, "square or cusp")->required()->check(CLI::IsMember({"square", "cusp"}));
    limit->add_option("--v0", o.v0, "Well depth")->required()->check(CLI::PositiveNumber);
    limit->add_option("--width", o.width, "Square-well width (square mode)")->check(CLI::PositiveNumber);
    add_a(limit, false);
    add_common(limit);

    auto* wave = app.add_subcommand("wavefunction", "Export an eigenfunction profile");
    wave->add_option("--v0", o.v0, "Well depth")->required()->check(CLI::PositiveNumber);
    add_a(wave, true);
    wave->add_option("--x0", o.x0, "Width parameter (<= 0)")->required()->expected(1);
    wave->add_option("--e", o.e, "Eigenvalue (snapped to the nearest root within --e-tol)")->required();
    wave->add_option("--e-tol", o.e_tol, "Snap window")->check(CLI::PositiveNumber);
    wave->add_option("--x-min", o.x_min, "Left end of the grid");
    wave->add_option("--x-max", o.x_max, "Right end of the grid");
    wave->add_option("--points", o.points, "Grid points")->check(CLI::Range(2, 10000000));
    add_common(wave);

    try {
        // Config file: locate --config before the real parse.
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                args = apply_config(args, args[i + 1]);
                break;
            }
            if (args[i].rfind("--config=", 0) == 0) {
                args = apply_config(args, args[i].substr(9));
                break;
            }
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    // Only the first subcommand is meaningful; limit-check defaults a to 1e-3 in square mode.
    if (limit->parsed() && o.mode == "square" && limit->count("--a") == 0)
        o.a = 1e-3;

    try {
        if (solve->parsed())
            return detail::cmd_solve(o, out);
        if (spectrum->parsed())
            return detail::cmd_spectrum(o, out);
        if (critical->parsed())
            return detail::cmd_critical(o, out);
        if (limit->parsed())
            return detail::cmd_limit_check(o, out, err);
        if (wave->parsed())
            return detail::cmd_wavefunction(o, out);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const OutOfWindow& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BracketInvalid& e) {
        err << "error: " << e.what() << '\n';
        return kBracket;
    } catch (const NotAnEigenvalue& e) {
        err << "error: " << e.what() << '\n';
        return kNotEigenvalue;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerics;
    }
    return kUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

} // namespace kgwell::cli
