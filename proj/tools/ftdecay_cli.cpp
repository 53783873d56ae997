// ftdecay: Fourier transforms of convex-body indicators, spherical L2
// averages with decay-exponent fits, and rotational lattice-point
// discrepancies, behind one experiment runner.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftdecay/bodyspec.hpp"
#include "ftdecay/checks.hpp"
#include "ftdecay/decay.hpp"
#include "ftdecay/errors.hpp"
#include "ftdecay/fourier.hpp"
#include "ftdecay/geometry.hpp"
#include "ftdecay/lattice.hpp"

namespace {

using ftdecay::Vec;

// Configuration problems found before any computation starts; exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(std::complex<double> z) {
    double re = z.real(), im = z.imag();
    if (im == 0.0) im = 0.0;  // normalize -0
    std::string s = g17(re);
    s += (im >= 0.0 || std::isnan(im)) ? "+" + g17(im) : g17(im);
    s += "i";
    return s;
}

std::string method_name(ftdecay::fourier::Method m) {
    switch (m) {
        case ftdecay::fourier::Method::ClosedForm: return "closed-form";
        case ftdecay::fourier::Method::ExactRecursion: return "exact-recursion";
        case ftdecay::fourier::Method::BoundaryQuadrature: return "boundary-quadrature";
        case ftdecay::fourier::Method::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

Vec parse_csv_doubles(const std::string& s, const char* what) {
    Vec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse '" + tok + "' as a number");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty value list");
    return out;
}

ftdecay::geometry::BodyPtr parse_body_cfg(const std::string& spec) {
    try {
        return ftdecay::bodyspec::parse_body(spec);
    } catch (const ftdecay::Error& e) {
        throw ConfigError(e.what());
    }
}

std::string csv_join(const Vec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += g17(v[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------

struct FtArgs {
    std::string body, xi;
    double resonance_eps = 1e-6, quad_c = 8.0;
};

int run_ft(const FtArgs& a) {
    const auto body = parse_body_cfg(a.body);
    const Vec xi = parse_csv_doubles(a.xi, "--xi");
    if (static_cast<int>(xi.size()) != body->d)
        throw ConfigError("--xi: expected " + std::to_string(body->d) + " components, got " +
                          std::to_string(xi.size()));
    ftdecay::fourier::QuadratureSpec spec;
    spec.resonance_eps = a.resonance_eps;
    spec.c = a.quad_c;
    const auto v = ftdecay::fourier::ft(body, xi, spec);
    std::cout << "value=" << format_complex(v.value) << " method=" << method_name(v.method)
              << " err=" << g17(v.err) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
    std::string body, omega, out, fit = "envelope";
    double rmin = 32.0, rmax = 1024.0;
    int ppo = 16, ndir = 0, jobs = 1;
    uint64_t seed = 2026;
    double resonance_eps = 1e-6, quad_c = 8.0;
    double tol = 0.1;
    std::optional<double> target;
};

void write_output(const std::string& path, const std::string& content,
                  const std::string& summary) {
    if (path.empty()) {
        std::cout << content;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("--out: cannot open '" + path + "' for writing");
        f << content;
    }
    std::cout << summary << "\n";
}

int run_scan(const char* cmd, ftdecay::decay::ScanKind kind, const ScanArgs& a) {
    namespace decay = ftdecay::decay;
    const auto body = parse_body_cfg(a.body);
    if (a.rmin <= 0.0 || a.rmax <= a.rmin)
        throw ConfigError("--rmin/--rmax: need 0 < rmin < rmax");
    if (a.ppo < 1) throw ConfigError("--ppo: must be >= 1");
    if (a.jobs < 1) throw ConfigError("--jobs: must be >= 1");

    decay::ScanOptions opt;
    opt.kind = kind;
    opt.ndir = a.ndir;
    opt.seed = a.seed;
    opt.jobs = a.jobs;
    opt.quad.resonance_eps = a.resonance_eps;
    opt.quad.c = a.quad_c;
    opt.quad.seed = a.seed;

    Vec omega;
    const bool pointwise =
        kind == decay::ScanKind::Pointwise || kind == decay::ScanKind::PointwiseSurface;
    if (pointwise) {
        if (!a.omega.empty()) {
            omega = parse_csv_doubles(a.omega, "--omega");
            if (static_cast<int>(omega.size()) != body->d)
                throw ConfigError("--omega: expected " + std::to_string(body->d) + " components");
            const double n = ftdecay::norm2(omega);
            if (n < 1e-14) throw ConfigError("--omega: zero direction");
            omega = ftdecay::scaled(omega, 1.0 / n);
        } else {
            omega.assign(static_cast<size_t>(body->d), 0.0);
            omega[0] = 1.0;
        }
        opt.omega = omega;
    }

    double target;
    if (a.target) {
        target = *a.target;
    } else if (kind == decay::ScanKind::Average) {
        target = -0.5 * (body->d + 1);
    } else if (kind == decay::ScanKind::AverageSurface) {
        target = -0.5 * (body->d - 1);
    } else {
        target = -1.0;  // flat-facet normal direction rate
    }
    const decay::FitKind fk =
        a.fit == "direct" ? decay::FitKind::Direct : decay::FitKind::Envelope;

    const auto series = decay::scan(body, a.rmin, a.rmax, a.ppo, opt);
    decay::FitResult fitres;
    std::string fit_msg;
    try {
        fitres = decay::fit_exponent(series, fk);
    } catch (const ftdecay::Error& e) {
        fit_msg = e.what();
    }

    std::string summary;
    if (fit_msg.empty()) {
        const double residual = fitres.exponent - target;
        const bool pass = std::fabs(residual) <= a.tol;
        summary = "exponent=" + g17(fitres.exponent) + " target=" + g17(target) +
                  " residual=" + g17(residual) + " rms=" + g17(fitres.rms) +
                  " n=" + std::to_string(fitres.n_used) + " status=" + (pass ? "pass" : "fail");
    } else {
        summary = "fit-failed reason=\"" + fit_msg + "\" status=fail";
    }

    std::ostringstream os;
    os << "# ftdecay " << cmd << " body=" << a.body << "\n";
    os << "# d=" << body->d << " rmin=" << g17(a.rmin) << " rmax=" << g17(a.rmax)
       << " ppo=" << a.ppo << " ndir=" << a.ndir;
    if (pointwise) os << " omega=" << csv_join(omega);
    os << " seed=" << a.seed << " jobs=" << a.jobs << " resonance-eps=" << g17(a.resonance_eps)
       << " quad-c=" << g17(a.quad_c) << " fit=" << a.fit << " target=" << g17(target)
       << " tol=" << g17(a.tol) << "\n";
    os << "# columns: R,value,se,ok\n";
    for (const auto& p : series.points)
        os << g17(p.R) << "," << g17(p.value) << "," << g17(p.se) << "," << (p.ok ? 1 : 0)
           << "\n";
    os << "# summary: " << summary << "\n";

    write_output(a.out, os.str(), summary);
    if (!fit_msg.empty()) {
        std::cerr << "ftdecay: fit failure: " << fit_msg << "\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct LatticeArgs {
    std::string body, out, ensemble = "haar", fit = "direct";
    double tmin = 64.0, tmax = 2048.0;
    int ppo = 4, nrot = 64, jobs = 1;
    uint64_t seed = 2026;
    double tol = 0.1;
    std::optional<double> target;
};

int run_lattice(const LatticeArgs& a) {
    namespace lattice = ftdecay::lattice;
    const auto body = parse_body_cfg(a.body);
    if (a.tmin <= 0.0 || a.tmax <= a.tmin)
        throw ConfigError("--tmin/--tmax: need 0 < tmin < tmax");
    if (a.ppo < 1 || a.nrot < 1 || a.jobs < 1)
        throw ConfigError("--ppo/--nrot/--jobs: must be >= 1");
    const auto ens = a.ensemble == "axis-angle" ? lattice::RotationEnsemble::AxisAngle
                                                : lattice::RotationEnsemble::Haar;
    if (ens == lattice::RotationEnsemble::AxisAngle && body->d != 3)
        throw ConfigError("--ensemble axis-angle: only defined for d=3");

    const auto series =
        lattice::rotational_l2(body, a.tmin, a.tmax, a.ppo, a.nrot, a.seed, ens, a.jobs);
    ftdecay::decay::FitResult fitres;
    std::string fit_msg;
    try {
        fitres = lattice::fit(series, a.fit == "envelope" ? ftdecay::decay::FitKind::Envelope
                                                          : ftdecay::decay::FitKind::Direct);
    } catch (const ftdecay::Error& e) {
        fit_msg = e.what();
    }

    const double d = body->d;
    const double target = a.target ? *a.target : (d - 2.0 + 2.0 / (d + 1.0));
    std::string summary;
    if (fit_msg.empty()) {
        const double residual = fitres.exponent - target;
        const bool pass = fitres.exponent <= target + a.tol;  // upper bound on growth
        summary = "exponent=" + g17(fitres.exponent) + " target=" + g17(target) +
                  " residual=" + g17(residual) + " rms=" + g17(fitres.rms) +
                  " n=" + std::to_string(fitres.n_used) + " status=" + (pass ? "pass" : "fail");
    } else {
        summary = "fit-failed reason=\"" + fit_msg + "\" status=fail";
    }

    std::ostringstream os;
    os << "# ftdecay lattice body=" << a.body << "\n";
    os << "# d=" << body->d << " tmin=" << g17(a.tmin) << " tmax=" << g17(a.tmax)
       << " ppo=" << a.ppo << " nrot=" << a.nrot << " ensemble=" << a.ensemble
       << " seed=" << a.seed << " jobs=" << a.jobs << " fit=" << a.fit
       << " target=" << g17(target) << " tol=" << g17(a.tol) << "\n";
    os << "# columns: t,rot_index,count,discrepancy\n";
    for (const auto& s : series.samples)
        os << g17(s.t) << "," << s.rot_index << "," << s.count << "," << g17(s.discrepancy)
           << "\n";
    os << "# columns: t,rms,se,ok\n";
    for (const auto& p : series.rms)
        os << g17(p.R) << "," << g17(p.value) << "," << g17(p.se) << "," << (p.ok ? 1 : 0)
           << "\n";
    os << "# summary: " << summary << "\n";

    write_output(a.out, os.str(), summary);
    if (!fit_msg.empty()) {
        std::cerr << "ftdecay: fit failure: " << fit_msg << "\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------------------

int run_check(bool quick, uint64_t seed) {
    const auto results = ftdecay::checks::run_checks(quick, seed);
    size_t passed = 0;
    for (const auto& r : results) {
        if (r.pass) ++passed;
        std::printf("[%s] %-32s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
    }
    std::printf("check: %zu/%zu passed\n", passed, results.size());
    return passed == results.size() ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier decay of convex-body indicators: transforms, spherical averages, "
                 "decay-exponent fits, and lattice-point discrepancies",
                 "ftdecay"};
    app.require_subcommand(1);

    FtArgs fa;
    auto* ft = app.add_subcommand("ft", "Evaluate the indicator transform at one frequency");
    ft->add_option("--body", fa.body, "Body spec, e.g. ball:d=2,r=1")->required();
    ft->add_option("--xi", fa.xi, "Frequency vector, comma separated")->required();
    ft->add_option("--resonance-eps", fa.resonance_eps, "Face resonance threshold");
    ft->add_option("--quad-c", fa.quad_c, "Quadrature nodes per oscillation wavelength");

    auto add_scan_flags = [](CLI::App* sub, ScanArgs& s, bool pointwise) {
        sub->add_option("--body", s.body, "Body spec, e.g. ball:d=2,r=1")->required();
        sub->add_option("--rmin", s.rmin, "Smallest radius of the geometric grid");
        sub->add_option("--rmax", s.rmax, "Largest radius of the geometric grid");
        sub->add_option("--ppo", s.ppo, "Grid points per octave");
        sub->add_option("--ndir", s.ndir, "Direction count override (0 keeps the default)");
        if (pointwise) sub->add_option("--omega", s.omega, "Fixed direction, comma separated");
        sub->add_option("--seed", s.seed, "Experiment seed");
        sub->add_option("--jobs", s.jobs, "Concurrent grid points");
        sub->add_option("--out", s.out, "CSV output path (default: stdout)");
        sub->add_option("--resonance-eps", s.resonance_eps, "Face resonance threshold");
        sub->add_option("--quad-c", s.quad_c, "Quadrature nodes per oscillation wavelength");
        sub->add_option("--fit", s.fit, "Fit kind")
            ->check(CLI::IsMember({"envelope", "direct"}));
        sub->add_option("--tol", s.tol, "Pass/fail tolerance on the exponent residual");
        sub->add_option("--target", s.target, "Override the target exponent");
    };

    ScanArgs avg_args, pw_args, surf_args;
    auto* avg = app.add_subcommand(
        "avg-decay", "Spherical L2 average of the indicator transform vs the -(d+1)/2 law");
    add_scan_flags(avg, avg_args, false);
    auto* pw = app.add_subcommand(
        "pointwise", "Transform modulus along a fixed direction vs its target exponent");
    add_scan_flags(pw, pw_args, true);
    pw_args.tol = 0.05;
    auto* surf = app.add_subcommand(
        "surface", "Spherical L2 average of the surface-measure transform vs -(d-1)/2");
    add_scan_flags(surf, surf_args, false);
    surf_args.tol = 0.05;

    LatticeArgs la;
    auto* lat = app.add_subcommand(
        "lattice", "RMS lattice-point discrepancy over a rotation ensemble vs its growth law");
    lat->add_option("--body", la.body, "Body spec, e.g. ball:d=2,r=1")->required();
    lat->add_option("--tmin", la.tmin, "Smallest dilation");
    lat->add_option("--tmax", la.tmax, "Largest dilation");
    lat->add_option("--ppo", la.ppo, "Grid points per octave");
    lat->add_option("--nrot", la.nrot, "Rotations in the ensemble");
    lat->add_option("--seed", la.seed, "Experiment seed");
    lat->add_option("--jobs", la.jobs, "Concurrent dilations");
    lat->add_option("--out", la.out, "CSV output path (default: stdout)");
    lat->add_option("--ensemble", la.ensemble, "Rotation ensemble")
        ->check(CLI::IsMember({"haar", "axis-angle"}));
    lat->add_option("--fit", la.fit, "Fit kind")->check(CLI::IsMember({"envelope", "direct"}));
    lat->add_option("--tol", la.tol, "One-sided tolerance above the target exponent");
    lat->add_option("--target", la.target, "Override the target exponent");

    bool quick = false;
    uint64_t check_seed = 2026;
    auto* chk = app.add_subcommand("check", "Run the cross-module invariant suite");
    chk->add_flag("--quick", quick, "Reduced sample sizes");
    chk->add_option("--seed", check_seed, "Suite seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ftdecay: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*ft) return run_ft(fa);
        if (*avg) return run_scan("avg-decay", ftdecay::decay::ScanKind::Average, avg_args);
        if (*pw) return run_scan("pointwise", ftdecay::decay::ScanKind::Pointwise, pw_args);
        if (*surf)
            return run_scan("surface", ftdecay::decay::ScanKind::AverageSurface, surf_args);
        if (*lat) return run_lattice(la);
        if (*chk) return run_check(quick, check_seed);
    } catch (const ConfigError& e) {
        std::cerr << "ftdecay: config error: " << e.what() << "\n";
        return 2;
    } catch (const ftdecay::InsufficientData& e) {
        std::cerr << "ftdecay: fit failure: " << e.what() << "\n";
        return 4;
    } catch (const ftdecay::AllZeros& e) {
        std::cerr << "ftdecay: fit failure: " << e.what() << "\n";
        return 4;
    } catch (const ftdecay::Error& e) {
        std::cerr << "ftdecay: evaluator error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ftdecay: error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
