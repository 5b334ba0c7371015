// shadowctl: build ball systems, verify shadows, sweep parameters and draw
// cross-sections.
//
// Exit codes: 0 shadow / success, 1 no shadow, 2 invalid input or
// parameters, 3 undetermined.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadow/constructions.hpp"
#include "shadow/coverage.hpp"
#include "shadow/errors.hpp"
#include "shadow/io.hpp"
#include "shadow/svg.hpp"
#include "shadow/sweep.hpp"

namespace {

using namespace shadow;

constexpr int kExitShadow = 0;
constexpr int kExitNoShadow = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUndetermined = 3;

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidParameter, "cannot write '" + out + "'");
    f << text;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::SchemaError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Vec to_vec(const std::vector<double>& v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

int verdict_exit(Verdict v) {
    switch (v) {
    case Verdict::Shadow: return kExitShadow;
    case Verdict::NoShadow: return kExitNoShadow;
    case Verdict::Undetermined: return kExitUndetermined;
    }
    return kExitInvalid;
}

struct Options {
    std::string out;
    std::string input;

    std::size_t dim = 3;
    double epsilon = 0.0;
    double shrink = 0.5;
    bool closed = false;

    double a = 1.0;
    double bprime = 4.0;
    std::optional<double> theta;

    double r = 1.0;
    double h = 0.9;

    std::string method = "auto";
    std::uint64_t samples = 1'000'000;
    std::uint64_t starts = 32;
    std::uint64_t seed = 42;
    bool timing = false;

    SweepSpec sweep;
    std::optional<double> sweep_r, sweep_h, sweep_a, sweep_bprime;

    std::vector<double> u, v;
};

int run_verify(const Options& o) {
    const ShadowInstance inst = load_instance(slurp(o.input));
    const ValidityReport validity = validate_instance(inst);
    require_coverable(inst);

    const auto t0 = std::chrono::steady_clock::now();
    CoverageReport report;
    if (o.method == "exact") {
        if (inst.dimension() == 2)
            report = verify_exact_2d(inst);
        else if (inst.dimension() == 3)
            report = verify_exact_3d(inst);
        else
            throw Error(ErrorCode::InvalidParameter, "exact verification needs dimension 2 or 3");
    } else if (o.method == "mc") {
        report = verify_monte_carlo(inst, o.samples, o.seed);
    } else if (o.method == "adversarial") {
        report = adversarial_min_margin(inst, o.starts, o.seed);
    } else {
        report = verify_auto(inst, o.samples, o.starts, o.seed);
    }
    const auto t1 = std::chrono::steady_clock::now();

    std::optional<double> elapsed;
    if (o.timing) elapsed = std::chrono::duration<double, std::milli>(t1 - t0).count();
    emit(save_report(report, validity, elapsed), o.out);

    if (!validity.valid) {
        std::cerr << finding_name(validity.errors.front().kind) << ": " << validity.errors.front().message << "\n";
        return kExitInvalid;
    }
    return verdict_exit(report.verdict);
}

int run_sweep_cmd(Options o) {
    if (o.sweep_r) o.sweep.fixed["r"] = *o.sweep_r;
    if (o.sweep_h) o.sweep.fixed["h"] = *o.sweep_h;
    if (o.sweep_a) o.sweep.fixed["a"] = *o.sweep_a;
    if (o.sweep_bprime) o.sweep.fixed["bprime"] = *o.sweep_bprime;
    const auto rows = run_sweep(o.sweep);
    emit(sweep_csv(o.sweep.param, rows), o.out);
    return kExitShadow;
}

int run_plot(const Options& o) {
    const ShadowInstance inst = load_instance(slurp(o.input));
    PlaneSpec plane = default_plane(inst.dimension());
    if (!o.u.empty() || !o.v.empty()) {
        if (o.u.empty() || o.v.empty()) throw Error(ErrorCode::DegeneratePlane, "give both --u and --v");
        plane = {to_vec(o.u), to_vec(o.v)};
    }
    emit(emit_svg(inst, plane), o.out);
    return kExitShadow;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ball systems that shade a point"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    Options o;

    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "Output file (default: standard output)"); };

    auto* simplex = app.add_subcommand("simplex", "Simplex system of n+1 balls around x");
    simplex->add_option("--dim", o.dim, "Dimension n")->required();
    simplex->add_option("--epsilon", o.epsilon, "Radius perturbation; 0 gives the regular simplex")->required();
    simplex->add_option("--shrink", o.shrink, "Fraction of the margin given up by shrinking");
    simplex->add_flag("--closed", o.closed, "Closed balls (regular simplex only)");
    add_out(simplex);

    auto* ellipsoid = app.add_subcommand("ellipsoid3", "Three open balls shading the surface point of a spheroid");
    ellipsoid->add_option("--a", o.a, "Minor semi-axis")->required();
    ellipsoid->add_option("--bprime", o.bprime, "Major semi-axis")->required();
    ellipsoid->add_option("--theta", o.theta, "Angular position of the second ball");
    add_out(ellipsoid);

    auto* interior = app.add_subcommand("interior3", "Three open balls on a sphere shading an interior point");
    interior->add_option("--r", o.r, "Sphere radius")->required();
    interior->add_option("--h", o.h, "Distance of x from the center")->required();
    add_out(interior);

    auto* equalize = app.add_subcommand("equalize", "Equal-radius system with the same shadow");
    equalize->add_option("--input", o.input, "Instance document")->required();
    add_out(equalize);

    auto* diskpair = app.add_subcommand("diskpair", "Two open disks shading the center of a circle");
    diskpair->add_option("--r", o.r, "Circle radius")->required();
    add_out(diskpair);

    auto* verify = app.add_subcommand("verify", "Decide whether the balls shade x");
    verify->add_option("--input", o.input, "Instance document")->required();
    verify->add_option("--method", o.method, "exact, mc, adversarial or auto")
        ->check(CLI::IsMember({"exact", "mc", "adversarial", "auto"}));
    verify->add_option("--samples", o.samples, "Monte Carlo samples");
    verify->add_option("--starts", o.starts, "Adversarial starts");
    verify->add_option("--seed", o.seed, "Random seed");
    verify->add_flag("--timing", o.timing, "Record wall time in the report");
    add_out(verify);

    auto* sweep = app.add_subcommand("sweep", "Scan one construction parameter, CSV output");
    sweep->add_option("--construction", o.sweep.construction, "interior3 or ellipsoid3")->required();
    sweep->add_option("--param", o.sweep.param, "Swept parameter")->required();
    sweep->add_option("--from", o.sweep.from, "First value")->required();
    sweep->add_option("--to", o.sweep.to, "Last value")->required();
    sweep->add_option("--steps", o.sweep.steps, "Number of values")->required();
    sweep->add_option("--r", o.sweep_r, "Fixed sphere radius");
    sweep->add_option("--h", o.sweep_h, "Fixed distance of x");
    sweep->add_option("--a", o.sweep_a, "Fixed minor semi-axis");
    sweep->add_option("--bprime", o.sweep_bprime, "Fixed major semi-axis");
    add_out(sweep);

    auto* plot = app.add_subcommand("plot", "SVG cross-section through x");
    plot->add_option("--input", o.input, "Instance document")->required();
    plot->add_option("--u", o.u, "First plane vector")->delimiter(',');
    plot->add_option("--v", o.v, "Second plane vector")->delimiter(',');
    add_out(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*simplex) {
            ShadowInstance inst;
            if (o.epsilon == 0.0) {
                inst = regular_simplex_system(o.dim, o.closed);
            } else {
                if (o.closed) throw Error(ErrorCode::MixedBallKinds, "the perturbed simplex uses open balls");
                inst = perturbed_simplex_system({o.dim, o.epsilon, o.shrink});
            }
            emit(save_instance(inst), o.out);
        } else if (*ellipsoid) {
            emit(save_instance(ellipsoid_three_balls({o.a, o.bprime, o.theta})), o.out);
        } else if (*interior) {
            emit(save_instance(interior_point_three_balls({o.r, o.h})), o.out);
        } else if (*equalize) {
            emit(save_instance(equalize_radii(load_instance(slurp(o.input)))), o.out);
        } else if (*diskpair) {
            emit(save_instance(disk_pair_2d(o.r)), o.out);
        } else if (*verify) {
            return run_verify(o);
        } else if (*sweep) {
            return run_sweep_cmd(o);
        } else if (*plot) {
            return run_plot(o);
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitShadow;
}
