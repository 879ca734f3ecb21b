// Command-line front end. Subcommands map one-to-one onto the library entry points;
// every run is deterministic for a fixed flag set and seed.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frankdefect/frank_constants.hpp"
#include "frankdefect/profile.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;  // a computation or verification did not pass
constexpr int kExitUsage = 2;        // bad invocation or malformed input

// Write-then-rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& payload) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os << payload;
        if (!os) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " into place");
}

void emit(const std::optional<std::string>& out, const std::string& payload) {
    if (out)
        atomic_write(*out, payload);
    else
        std::cout << payload;
}

// Flags shared by the numeric subcommands. Config-file values fill in only where the
// command line stayed silent.
struct CommonOpts {
    double k1 = 1.0, k2 = 1.0, k3 = 1.0;
    double k4 = 0.0;
    std::string k4_convention = "minus-k2";
    double tol = 1e-10;
    std::size_t grid_theta = 513;
    std::string format = "csv";
    bool degrees = false;
    std::optional<std::string> out;
    std::optional<std::string> config;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--k1", o.k1, "Splay constant");
    cmd->add_option("--k2", o.k2, "Twist constant");
    cmd->add_option("--k3", o.k3, "Bend constant");
    cmd->add_option("--k4", o.k4, "Saddle-splay constant (explicit convention only)");
    cmd->add_option("--k4-convention", o.k4_convention,
                    "One of minus-k2, alpha-minus-k2, explicit")
        ->check(CLI::IsMember({"minus-k2", "alpha-minus-k2", "explicit"}));
    cmd->add_option("--tol", o.tol, "Solver tolerance");
    cmd->add_option("--grid-theta", o.grid_theta, "Polar node count");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    cmd->add_flag("--degrees", o.degrees, "Interpret angle inputs in degrees");
    cmd->add_option_function<std::string>(
        "--out", [&o](const std::string& s) { o.out = s; }, "Output path (default stdout)");
    cmd->add_option_function<std::string>(
        "--config", [&o](const std::string& s) { o.config = s; },
        "JSON config file; command-line flags win");
}

// Apply config-file values for keys the command line did not set.
void merge_config(CLI::App* cmd, CommonOpts& o, double* t) {
    if (!o.config) return;
    std::ifstream is(*o.config);
    if (!is) throw CLI::ValidationError("--config: cannot open " + *o.config);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw CLI::ValidationError(std::string("--config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ValidationError("--config: top level must be an object");
    auto unset = [&](const char* flag) {
        auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    if (j.contains("k1") && unset("--k1")) o.k1 = j["k1"].get<double>();
    if (j.contains("k2") && unset("--k2")) o.k2 = j["k2"].get<double>();
    if (j.contains("k3") && unset("--k3")) o.k3 = j["k3"].get<double>();
    if (j.contains("k4") && unset("--k4")) o.k4 = j["k4"].get<double>();
    if (j.contains("k4_convention") && unset("--k4-convention"))
        o.k4_convention = j["k4_convention"].get<std::string>();
    if (j.contains("tol") && unset("--tol")) o.tol = j["tol"].get<double>();
    if (j.contains("grid_theta") && unset("--grid-theta"))
        o.grid_theta = j["grid_theta"].get<std::size_t>();
    if (j.contains("format") && unset("--format")) o.format = j["format"].get<std::string>();
    if (j.contains("degrees") && unset("--degrees")) o.degrees = j["degrees"].get<bool>();
    if (j.contains("out") && !o.out) o.out = j["out"].get<std::string>();
    if (t != nullptr && j.contains("t") && unset("--t")) *t = j["t"].get<double>();
}

frankdefect::FrankConstants constants_from(const CommonOpts& o) {
    using frankdefect::FrankConstants;
    FrankConstants k;
    if (o.k4_convention == "minus-k2")
        k = FrankConstants::minus_k2(o.k1, o.k2, o.k3);
    else if (o.k4_convention == "alpha-minus-k2")
        k = FrankConstants::alpha_minus_k2(o.k1, o.k2, o.k3);
    else
        k = FrankConstants::explicit_k4(o.k1, o.k2, o.k3, o.k4);
    k.validate();
    return k;
}

double to_radians(const CommonOpts& o, double angle) {
    return o.degrees ? angle * kPi / 180.0 : angle;
}

// Simple polyline plot of psi and chi against theta.
std::string profile_svg(const frankdefect::ProfileSolution& sol) {
    const int w = 640, h = 420, m = 40;
    double ymin = 1e300, ymax = -1e300;
    for (double v : sol.psi) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    for (double v : sol.chi) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    if (ymax <= ymin) ymax = ymin + 1.0;
    auto xmap = [&](double th) { return m + (w - 2 * m) * th / kPi; };
    auto ymap = [&](double v) { return h - m - (h - 2 * m) * (v - ymin) / (ymax - ymin); };
    auto polyline = [&](const std::vector<double>& vals, const char* color) {
        std::ostringstream ss;
        ss << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < vals.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", xmap(sol.theta_nodes[i]), ymap(vals[i]));
            ss << buf;
        }
        ss << "\"/>\n";
        return ss.str();
    };
    std::ostringstream ss;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
       << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "  <line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\""
       << h - m << "\" stroke=\"black\"/>\n"
       << "  <line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
       << "\" stroke=\"black\"/>\n"
       << polyline(sol.psi, "#1f6fb2") << polyline(sol.chi, "#b23a1f")
       << "  <text x=\"" << w / 2 << "\" y=\"" << h - 10
       << "\" font-size=\"12\" text-anchor=\"middle\">theta</text>\n"
       << "  <text x=\"" << w - m << "\" y=\"" << m << "\" font-size=\"12\" text-anchor=\"end\""
       << " fill=\"#1f6fb2\">psi</text>\n"
       << "  <text x=\"" << w - m << "\" y=\"" << m + 16
       << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#b23a1f\">chi</text>\n"
       << "</svg>\n";
    return ss.str();
}

int run_solve(CLI::App* cmd, CommonOpts& o, double& t) {
    merge_config(cmd, o, &t);
    constants_from(o);  // validates the triple even though only k1, k3 enter the profile
    double t_rad = to_radians(o, t);
    frankdefect::ProfileSolution sol = frankdefect::solve_branch_on(
        o.k1, o.k3, t_rad, o.tol, frankdefect::default_theta_grid(o.grid_theta));
    sol.validate();
    std::ostringstream payload;
    if (o.format == "csv")
        sol.write_csv(payload);
    else if (o.format == "json")
        sol.write_json(payload);
    else
        payload << profile_svg(sol);
    emit(o.out, payload.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-homogeneous equivariant director profiles and their energies"};
    app.require_subcommand(1);

    CommonOpts solve_opts;
    double solve_t = kPi / 2;
    CLI::App* solve = app.add_subcommand("solve", "Solve a profile and write it out");
    add_common(solve, solve_opts);
    solve->add_option("--t", solve_t, "Equator value psi(pi/2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(solve, solve_opts, solve_t);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}
