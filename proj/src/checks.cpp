#include "ftdecay/checks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <utility>

#include "ftdecay/bodyspec.hpp"
#include "ftdecay/decay.hpp"
#include "ftdecay/fourier.hpp"
#include "ftdecay/geometry.hpp"
#include "ftdecay/lattice.hpp"
#include "ftdecay/rng.hpp"
#include "ftdecay/specfun.hpp"
#include "ftdecay/sphere.hpp"

namespace ftdecay::checks {

namespace {

using geometry::BodyPtr;
using geometry::Rotation;
using fourier::Cplx;

constexpr double kPi = std::numbers::pi;

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

Vec rand_dir(int d, rng::Stream& s) {
    Vec v(static_cast<size_t>(d));
    double n = 0.0;
    do {
        for (double& x : v) x = s.gaussian();
        n = norm2(v);
    } while (n < 1e-12);
    return scaled(v, 1.0 / n);
}

// Rejection sampling in the support bounding box; every variant here has a
// comfortable volume fraction.
Vec rand_point_in(const BodyPtr& b, rng::Stream& s) {
    const int d = b->d;
    Vec lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        Vec e(static_cast<size_t>(d), 0.0);
        e[static_cast<size_t>(i)] = 1.0;
        hi[static_cast<size_t>(i)] = b->support(e);
        e[static_cast<size_t>(i)] = -1.0;
        lo[static_cast<size_t>(i)] = -b->support(e);
    }
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vec x(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i)
            x[static_cast<size_t>(i)] = s.uniform(lo[static_cast<size_t>(i)], hi[static_cast<size_t>(i)]);
        if (b->contains(x)) return x;
    }
    throw Error("rand_point_in: rejection sampling failed");
}

struct Named {
    std::string name;
    BodyPtr body;
};

std::vector<Named> variant_bodies() {
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    std::vector<Named> out;
    out.push_back({"ball2", geometry::make_ball(2, 1.0)});
    out.push_back({"ball3", geometry::make_ball(3, 1.0)});
    out.push_back({"ell2", geometry::make_ellipsoid(Vec{1.3, 0.7})});
    out.push_back({"ell3", geometry::make_ellipsoid(Vec{1.2, 0.9, 0.6})});
    out.push_back({"box2", geometry::make_axis_box(Vec{0.5, 0.5})});
    out.push_back({"box3", geometry::make_axis_box(Vec{0.6, 0.5, 0.4})});
    out.push_back({"pball2-p4", geometry::make_pball(2, 4.0, 1.0)});
    out.push_back({"pball2-p1", geometry::make_pball(2, 1.0, 1.0)});
    out.push_back({"tri2", geometry::make_polytope_h(
                               {Vec{-1.0, 0.0}, Vec{0.0, -1.0}, Vec{1.0 / s2, 1.0 / s2}},
                               {0.0, 0.0, 1.0 / s2})});
    out.push_back({"simplex3", geometry::make_polytope_h(
                                   {Vec{-1.0, 0.0, 0.0}, Vec{0.0, -1.0, 0.0}, Vec{0.0, 0.0, -1.0},
                                    Vec{1.0 / s3, 1.0 / s3, 1.0 / s3}},
                                   {0.0, 0.0, 0.0, 1.0 / s3})});
    out.push_back({"rot-pball2-p4",
                   geometry::rotate(geometry::make_pball(2, 4.0, 1.0), geometry::rotation_2d(0.3))});
    out.push_back({"rot-box3", geometry::rotate(geometry::make_axis_box(Vec{0.6, 0.5, 0.4}),
                                                geometry::rotation_from_quaternion(0.9, 0.2, 0.3, 0.1))});
    return out;
}

Rotation body_rotation(int d, rng::Stream& s) { return geometry::random_rotation(d, s); }

using CheckFn = std::function<std::string()>;

void add_check(std::vector<CheckResult>& out, const std::string& name, const CheckFn& fn) {
    CheckResult r;
    r.name = name;
    try {
        std::string detail = fn();
        if (!detail.empty() && detail[0] == '!') {
            r.pass = false;
            r.detail = detail.substr(1);
        } else {
            r.pass = true;
            r.detail = detail;
        }
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = strf("exception: %s", e.what());
    }
    out.push_back(std::move(r));
}

double bessel_nu(int nu2, double x) { return specfun::bessel_j(nu2, x); }

}  // namespace

std::vector<CheckResult> run_checks(bool quick, uint64_t seed) {
    std::vector<CheckResult> out;
    const auto bodies = variant_bodies();

    // ---------------- specfun ----------------

    add_check(out, "specfun-bessel-recurrence", [&]() -> std::string {
        double worst = 0.0;
        for (int k = 0; k <= 10; ++k) {
            const double x = 0.5 * std::pow(2.0, k);
            for (int nu2 : {2, 3, 4, 5, 6, 7, 8}) {  // nu = 1 .. 4 in half steps
                const double nu = 0.5 * nu2;
                const double a = bessel_nu(nu2 - 2, x), b = bessel_nu(nu2 + 2, x);
                const double c = (2.0 * nu / x) * bessel_nu(nu2, x);
                const double denom = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
                if (denom < 1e-14) continue;
                worst = std::max(worst, std::fabs(a + b - c) / denom);
            }
        }
        if (worst > 1e-8) return strf("!recurrence rel dev %.3g > 1e-8", worst);
        return strf("max rel dev %.3g", worst);
    });

    add_check(out, "specfun-bessel-derivative", [&]() -> std::string {
        double worst = 0.0;
        const double h = 1e-5;
        for (double x : {1.0, 2.0, 8.0, 32.0, 128.0}) {
            for (int nu2 : {2, 3, 4, 6}) {
                const double nu = 0.5 * nu2;
                auto f = [&](double t) { return std::pow(t, nu) * bessel_nu(nu2, t); };
                const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
                const double exact = std::pow(x, nu) * bessel_nu(nu2 - 2, x);
                const double dev = std::fabs(fd - exact) / std::max(1.0, std::fabs(exact));
                worst = std::max(worst, dev);
            }
        }
        if (worst > 1e-6) return strf("!derivative dev %.3g > 1e-6", worst);
        return strf("max dev %.3g", worst);
    });

    add_check(out, "specfun-bessel-bounded", [&]() -> std::string {
        double worst = 0.0;
        for (int nu2 = 0; nu2 <= 10; ++nu2)
            for (double x = 0.0; x <= 100.0; x += 0.37)
                worst = std::max(worst, std::fabs(bessel_nu(nu2, x)));
        if (worst > 1.0 + 1e-12) return strf("!|J| reaches %.12g > 1", worst);
        return strf("max |J| %.6g", worst);
    });

    add_check(out, "specfun-bessel-envelope", [&]() -> std::string {
        // Per-octave maxima of |J_nu| on [32, 4096] follow x^{-1/2}.
        double worst = 0.0;
        for (int nu2 : {0, 2}) {
            std::vector<double> lx, lm;
            for (double lo = 32.0; lo < 4096.0; lo *= 2.0) {
                double m = 0.0;
                const int n = 4096;
                for (int i = 0; i < n; ++i)
                    m = std::max(m, std::fabs(bessel_nu(nu2, lo * (1.0 + static_cast<double>(i) / n))));
                lx.push_back(std::log(lo * std::sqrt(2.0)));
                lm.push_back(std::log(m));
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(lx.size());
            for (size_t i = 0; i < lx.size(); ++i) {
                sx += lx[i];
                sy += lm[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * lm[i];
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            worst = std::max(worst, std::fabs(slope + 0.5));
        }
        if (worst > 0.05) return strf("!envelope slope off by %.3g > 0.05", worst);
        return strf("max slope dev %.3g", worst);
    });

    add_check(out, "specfun-sinc-values", [&]() -> std::string {
        if (std::fabs(specfun::sinc(0.0) - 1.0) > 1e-15) return "!sinc(0) != 1";
        if (std::fabs(specfun::sinc(1.0) - 0.8414709848078965) > 1e-15)
            return "!sinc(1) mismatch";
        if (std::fabs(specfun::sinc(kPi)) > 1e-15) return "!sinc(pi) not ~0";
        for (double x : {1e-6, 1e-5, 2e-4, 0.3, 7.0})
            if (std::fabs(specfun::sinc(x) - specfun::sinc(-x)) > 1e-16) return "!sinc not even";
        return "values and symmetry ok";
    });

    // ---------------- geometry ----------------

    add_check(out, "geometry-support-subadditive", [&]() -> std::string {
        const int npair = quick ? 50 : 200;
        double worst = -1e300;
        for (size_t bi = 0; bi < bodies.size(); ++bi) {
            auto st = rng::make_stream(seed, "check-subadd", bi);
            const auto& b = bodies[bi].body;
            for (int i = 0; i < npair; ++i) {
                Vec u = rand_dir(b->d, st), v = rand_dir(b->d, st);
                const double hu = b->support(u), hv = b->support(v);
                const double huv = b->support(add(u, v));
                const double slack = huv - hu - hv;
                worst = std::max(worst, slack);
                if (slack > 1e-9 * (std::fabs(hu) + std::fabs(hv) + 1.0))
                    return strf("!%s violates subadditivity by %.3g", bodies[bi].name.c_str(), slack);
            }
        }
        return strf("max slack %.3g", worst);
    });

    add_check(out, "geometry-support-containment", [&]() -> std::string {
        const int npts = quick ? 5 : 20, ndir = quick ? 30 : 100;
        double worst = -1e300;
        for (size_t bi = 0; bi < bodies.size(); ++bi) {
            auto st = rng::make_stream(seed, "check-containment", bi);
            const auto& b = bodies[bi].body;
            for (int i = 0; i < npts; ++i) {
                Vec x = rand_point_in(b, st);
                for (int j = 0; j < ndir; ++j) {
                    Vec w = rand_dir(b->d, st);
                    const double gap = dot(x, w) - b->support(w);
                    worst = std::max(worst, gap);
                    if (gap > 1e-9 * std::max(1.0, b->diameter()))
                        return strf("!%s point exceeds support by %.3g", bodies[bi].name.c_str(), gap);
                }
            }
        }
        return strf("max gap %.3g", worst);
    });

    add_check(out, "geometry-rotate-consistency", [&]() -> std::string {
        double worst = 0.0;
        for (size_t bi = 0; bi < bodies.size(); ++bi) {
            const auto& b = bodies[bi].body;
            auto st = rng::make_stream(seed, "check-rotate", bi);
            const Rotation rho = body_rotation(b->d, st);
            const BodyPtr rb = geometry::rotate(b, rho);
            const double dv = std::fabs(rb->volume() - b->volume());
            if (dv > 1e-12 * b->volume())
                return strf("!%s volume drifts by %.3g under rotation", bodies[bi].name.c_str(), dv);
            for (int j = 0; j < (quick ? 30 : 100); ++j) {
                Vec w = rand_dir(b->d, st);
                const double h1 = rb->support(w);
                const double h2 = b->support(mattvec(rho.m, w));
                const double dev = std::fabs(h1 - h2) / (1.0 + std::fabs(h2));
                worst = std::max(worst, dev);
                if (dev > 1e-12)
                    return strf("!%s support drifts by %.3g under rotation", bodies[bi].name.c_str(), dev);
            }
        }
        return strf("max support dev %.3g", worst);
    });

    add_check(out, "geometry-polytope-vertices", [&]() -> std::string {
        for (const auto& nb : bodies) {
            if (nb.body->kind != geometry::BodyKind::PolytopeH) continue;
            const auto& P = *nb.body->poly;
            for (const Vec& v : P.vertices) {
                int active = 0;
                for (size_t f = 0; f < P.normals.size(); ++f) {
                    const double r = dot(P.normals[f], v) - P.offsets[f];
                    if (r > 1e-9 * std::max(1.0, P.diameter))
                        return strf("!%s vertex violates facet by %.3g", nb.name.c_str(), r);
                    if (std::fabs(r) <= 1e-9 * std::max(1.0, P.diameter)) ++active;
                }
                if (active < nb.body->d)
                    return strf("!%s vertex has only %d active facets", nb.name.c_str(), active);
            }
        }
        return "all vertices feasible with >= d active facets";
    });

    add_check(out, "geometry-patch-secant", [&]() -> std::string {
        const int npair = quick ? 300 : 1000;
        const double bound = 1.0 / std::sqrt(2.0) - 1e-6;
        double worst = 0.0;
        std::string where;
        for (const auto& nb : bodies) {
            const auto patches = geometry::decompose_boundary(nb.body);
            for (size_t pi = 0; pi < patches.size(); ++pi) {
                const double r = geometry::check_secant_property(patches[pi], npair, seed);
                if (r > worst) {
                    worst = r;
                    where = strf("%s[%zu]", nb.name.c_str(), pi);
                }
            }
        }
        if (worst > bound) return strf("!secant ratio %.6f at %s exceeds %.6f", worst, where.c_str(), bound);
        return strf("worst ratio %.4f (%s)", worst, where.c_str());
    });

    add_check(out, "geometry-c32-sphere", [&]() -> std::string {
        const int npair = quick ? 300 : 1000;
        double worst = 0.0;
        for (const char* name : {"ball2", "ball3"}) {
            BodyPtr b;
            for (const auto& nb : bodies)
                if (nb.name == name) b = nb.body;
            const auto patches = geometry::decompose_boundary(b);
            for (const auto& p : patches)
                worst = std::max(worst, geometry::check_c32(b, p, npair, seed));
        }
        if (worst > 1.05) return strf("!sphere C^{3/2} constant %.4f > 1.05", worst);
        return strf("max constant %.4f", worst);
    });

    // ---------------- fourier ----------------

    const fourier::QuadratureSpec qspec{};

    add_check(out, "fourier-conjugate-symmetry", [&]() -> std::string {
        double worst = 0.0;
        for (size_t bi = 0; bi < bodies.size(); ++bi) {
            auto st = rng::make_stream(seed, "check-conj", bi);
            const auto& b = bodies[bi].body;
            for (int i = 0; i < (quick ? 4 : 10); ++i) {
                const double R = st.uniform(0.5, 12.0);
                const Vec xi = scaled(rand_dir(b->d, st), R);
                const auto fp = fourier::ft(b, xi, qspec);
                const auto fm = fourier::ft(b, scaled(xi, -1.0), qspec);
                const double dev =
                    std::abs(fm.value - std::conj(fp.value)) / (1.0 + std::abs(fp.value));
                worst = std::max(worst, dev);
                if (dev > 1e-11 + fp.err + fm.err)
                    return strf("!%s conjugate symmetry off by %.3g", bodies[bi].name.c_str(), dev);
            }
        }
        return strf("max dev %.3g", worst);
    });

    add_check(out, "fourier-scaling", [&]() -> std::string {
        auto st = rng::make_stream(seed, "check-scaling");
        double worst = 0.0;
        for (double s : {0.5, 2.0, 3.0}) {
            const BodyPtr b1 = geometry::make_ball(2, 1.0), bs = geometry::make_ball(2, s);
            const BodyPtr c1 = geometry::make_axis_box(Vec{0.5, 0.7}),
                          cs = geometry::make_axis_box(Vec{0.5 * s, 0.7 * s});
            for (int i = 0; i < 12; ++i) {
                const Vec xi = scaled(rand_dir(2, st), st.uniform(0.3, 9.0));
                for (auto [base, scaledb] : {std::pair{b1, bs}, std::pair{c1, cs}}) {
                    const Cplx lhs = fourier::ft(scaledb, xi, qspec).value;
                    const Cplx rhs =
                        std::pow(s, 2.0) * fourier::ft(base, scaled(xi, s), qspec).value;
                    const double dev = std::abs(lhs - rhs) / (std::pow(s, 2.0) * base->volume());
                    worst = std::max(worst, dev);
                    if (dev > 1e-12) return strf("!scaling identity off by %.3g at s=%g", dev, s);
                }
            }
        }
        return strf("max rel dev %.3g", worst);
    });

    add_check(out, "fourier-translation-modulus", [&]() -> std::string {
        auto st = rng::make_stream(seed, "check-translation");
        double worst = 0.0;
        const Vec shift{0.37, -1.21};
        const BodyPtr a0 = geometry::make_ball(2, 1.0), a1 = geometry::make_ball(2, 1.0, shift);
        const BodyPtr b0 = geometry::make_axis_box(Vec{0.5, 0.7}),
                      b1 = geometry::make_axis_box(Vec{0.5, 0.7}, shift);
        const BodyPtr c0 = geometry::make_pball(2, 4.0, 1.0),
                      c1 = geometry::make_pball(2, 4.0, 1.0, shift);
        for (int i = 0; i < 12; ++i) {
            const Vec xi = scaled(rand_dir(2, st), st.uniform(0.3, 9.0));
            for (auto [p, q] : {std::pair{a0, a1}, std::pair{b0, b1}, std::pair{c0, c1}}) {
                const auto f0 = fourier::ft(p, xi, qspec), f1 = fourier::ft(q, xi, qspec);
                const double dev = std::fabs(std::abs(f0.value) - std::abs(f1.value)) /
                                   (1.0 + std::abs(f0.value));
                worst = std::max(worst, dev);
                if (dev > 1e-11 + f0.err + f1.err)
                    return strf("!translation modulus off by %.3g", dev);
            }
        }
        return strf("max rel dev %.3g", worst);
    });

    add_check(out, "fourier-method-agreement", [&]() -> std::string {
        auto st = rng::make_stream(seed, "check-agree");
        const BodyPtr ball = geometry::make_ball(2, 1.0);
        const BodyPtr box = geometry::make_axis_box(Vec{0.5, 0.5});
        const double s2 = std::sqrt(2.0);
        const BodyPtr tri = geometry::make_polytope_h(
            {Vec{-1.0, 0.0}, Vec{0.0, -1.0}, Vec{1.0 / s2, 1.0 / s2}}, {0.0, 0.0, 1.0 / s2});
        double worst = 0.0;
        std::vector<double> radii{1.0, 5.0, 25.0, 100.0};
        if (quick) radii = {1.0, 25.0};
        for (const BodyPtr& b : {ball, box, tri}) {
            for (double R : radii) {
                for (int i = 0; i < 5; ++i) {
                    const Vec xi = scaled(rand_dir(2, st), R);
                    const Cplx ref = fourier::ft(b, xi, qspec).value;  // closed / exact
                    const auto q = fourier::ft_boundary_divergence(b, xi, qspec);
                    const double dev = std::abs(q.value - ref);
                    worst = std::max(worst, dev - q.err);
                    if (dev > q.err + 1e-8)
                        return strf("!quadrature off closed/exact by %.3g (err %.3g, R=%g)", dev,
                                    q.err, R);
                }
            }
        }
        return strf("max excess %.3g over reported err", worst);
    });

    add_check(out, "fourier-mc-agreement", [&]() -> std::string {
        const int64_t n = quick ? 20000 : 100000;
        auto st = rng::make_stream(seed, "check-mc");
        double worst = 0.0;
        size_t bi = 0;
        for (const auto& nb : bodies) {
            if (nb.name != "ball2" && nb.name != "box2" && nb.name != "tri2" &&
                nb.name != "pball2-p4")
                continue;
            const Vec xi = scaled(rand_dir(2, st), 3.7);
            const auto f = fourier::ft(nb.body, xi, qspec);
            const auto m = fourier::ft_mc_oracle(nb.body, xi, n, seed + 17 * bi++);
            const double dev = std::abs(f.value - m.value);
            const double tol = 3.0 * m.err + f.err + 1e-9;
            worst = std::max(worst, dev / tol);
            if (dev > tol)
                return strf("!%s MC deviation %.3g > %.3g", nb.name.c_str(), dev, tol);
        }
        return strf("worst dev/tol %.3f", worst);
    });

    add_check(out, "fourier-volume-bound", [&]() -> std::string {
        double worst = -1e300;
        for (size_t bi = 0; bi < bodies.size(); ++bi) {
            auto st = rng::make_stream(seed, "check-ftbound", bi);
            const auto& b = bodies[bi].body;
            for (double R : {0.5, 3.0, 17.0}) {
                const Vec xi = scaled(rand_dir(b->d, st), R);
                const auto f = fourier::ft(b, xi, qspec);
                const double excess = std::abs(f.value) - b->volume() - f.err;
                worst = std::max(worst, excess);
                if (excess > 1e-10 * (1.0 + b->volume()))
                    return strf("!%s |ft| exceeds volume by %.3g", bodies[bi].name.c_str(), excess);
            }
        }
        return strf("max excess %.3g", worst);
    });

    add_check(out, "fourier-surface-quadrature", [&]() -> std::string {
        // Ellipsoids with equal axes are spheres; their surface transform must
        // match the closed form through the independent quadrature path.
        auto st = rng::make_stream(seed, "check-surfq");
        const BodyPtr ball2 = geometry::make_ball(2, 1.0), sph2 = geometry::make_ellipsoid(Vec{1.0, 1.0});
        const BodyPtr ball3 = geometry::make_ball(3, 1.0),
                      sph3 = geometry::make_ellipsoid(Vec{1.0, 1.0, 1.0});
        double worst = 0.0;
        for (auto [ref, alt] : {std::pair{ball2, sph2}, std::pair{ball3, sph3}}) {
            for (int i = 0; i < (quick ? 3 : 8); ++i) {
                const Vec xi = scaled(rand_dir(ref->d, st), st.uniform(0.5, 15.0));
                const auto fr = fourier::ft_surface_measure(ref, xi, qspec);
                const auto fa = fourier::ft_surface_measure(alt, xi, qspec);
                const double dev = std::abs(fr.value - fa.value);
                worst = std::max(worst, dev - fa.err);
                if (dev > fa.err + 1e-8)
                    return strf("!surface quadrature off closed form by %.3g (err %.3g)", dev, fa.err);
            }
        }
        return strf("max excess %.3g over reported err", worst);
    });

    // ---------------- sphere ----------------

    add_check(out, "sphere-rotation-invariance", [&]() -> std::string {
        auto st = rng::make_stream(seed, "check-sphrot");
        double worst = 0.0;
        const BodyPtr sq = geometry::make_axis_box(Vec{0.5, 0.5});
        const BodyPtr bx = geometry::make_axis_box(Vec{0.6, 0.5, 0.4});
        for (const BodyPtr& b : {sq, bx}) {
            const Rotation rho = body_rotation(b->d, st);
            const auto sch = sphere::default_scheme(b->d, 10.0, seed);
            const auto a0 = sphere::l2_average(b, 10.0, sch, qspec);
            const auto a1 = sphere::l2_average(geometry::rotate(b, rho), 10.0, sch, qspec);
            const double dev = std::fabs(a0.value - a1.value);
            const double tol = 3.0 * (a0.se + a1.se) + 1e-12;
            worst = std::max(worst, dev / tol);
            if (dev > tol) return strf("!rotation shifts average by %.3g > %.3g", dev, tol);
        }
        return strf("worst dev/tol %.3f", worst);
    });

    add_check(out, "sphere-uniform-angle-exact", [&]() -> std::string {
        double worst = 0.0;
        const BodyPtr disk = geometry::make_ball(2, 1.0);
        for (double R : {32.0, 500.0}) {
            const auto sch = sphere::default_scheme(2, R, seed);
            const auto a = sphere::l2_average(disk, R, sch, qspec);
            const double exact = std::fabs(2.0 * kPi * specfun::bessel_j(2, R) / R);
            const double rel = std::fabs(a.value - exact) / exact;
            worst = std::max(worst, rel);
            if (rel > 1e-3) return strf("!disk average off closed form by %.3g rel", rel);
        }
        const BodyPtr sq = geometry::make_axis_box(Vec{0.5, 0.5});
        const auto lo = sphere::l2_average(sq, 32.0, sphere::SphereScheme{2, sphere::SchemeKind::UniformAngle, 4096, seed}, qspec);
        const auto hi = sphere::l2_average(sq, 32.0, sphere::SphereScheme{2, sphere::SchemeKind::UniformAngle, 8192, seed}, qspec);
        const double rel = std::fabs(lo.value - hi.value) / hi.value;
        if (rel > 1e-6) return strf("!doubling N moves square average by %.3g rel", rel);
        return strf("disk rel %.3g, doubling rel %.3g", worst, rel);
    });

    add_check(out, "sphere-average-upper-bound", [&]() -> std::string {
        double worst = -1e300;
        for (size_t bi = 0; bi < bodies.size(); ++bi) {
            const auto& b = bodies[bi].body;
            const double sphere_measure =
                2.0 * std::pow(kPi, 0.5 * b->d) / std::tgamma(0.5 * b->d);
            for (double R : {5.0, 50.0}) {
                const auto sch = sphere::default_scheme(b->d, R, seed);
                const auto a = sphere::l2_average(b, R, sch, qspec);
                const double excess = a.value - b->volume() * std::sqrt(sphere_measure);
                worst = std::max(worst, excess);
                if (excess > 1e-9)
                    return strf("!%s average exceeds bound by %.3g", bodies[bi].name.c_str(), excess);
            }
        }
        return strf("max excess %.3g", worst);
    });

    // ---------------- decay ----------------

    add_check(out, "decay-scale-equivariance", [&]() -> std::string {
        const auto grid = decay::log_grid(32.0, 4096.0, 8);
        std::vector<decay::ScanPoint> pts, scaled_pts;
        for (double R : grid) {
            decay::ScanPoint p;
            p.R = R;
            p.value = 0.7 * std::pow(R, -1.7);
            p.ok = true;
            pts.push_back(p);
            p.value *= 123.456;  // constant rescale: intercept moves, slope must not
            scaled_pts.push_back(p);
        }
        const auto f0 = decay::fit_points(pts, 0.0, decay::FitKind::Direct);
        const auto f1 = decay::fit_points(scaled_pts, 0.0, decay::FitKind::Direct);
        const double dev = std::fabs(f0.exponent - f1.exponent);
        const double dev0 = std::fabs(f0.exponent + 1.7);
        if (dev > 1e-12 || dev0 > 1e-12)
            return strf("!exponent drift %.3g, absolute dev %.3g", dev, dev0);
        return strf("exponent drift %.3g", dev);
    });

    add_check(out, "decay-envelope-recovery", [&]() -> std::string {
        std::vector<double> alphas{0.5, 1.0, 1.5, 2.0};
        if (quick) alphas = {0.5, 1.5};
        const auto grid = decay::log_grid(32.0, 4096.0, 16);
        double worst = 0.0;
        for (double alpha : alphas) {
            std::vector<decay::ScanPoint> pts;
            for (double R : grid) {
                decay::ScanPoint p;
                p.R = R;
                p.value = std::fabs(std::cos(R)) * std::pow(R, -alpha);
                p.ok = p.value > 0.0;
                pts.push_back(p);
            }
            const auto f = decay::fit_points(pts, 0.0, decay::FitKind::Envelope);
            worst = std::max(worst, std::fabs(f.exponent + alpha));
        }
        if (worst > 0.03) return strf("!envelope exponent off by %.3g > 0.03", worst);
        return strf("max |dev| %.3g", worst);
    });

    add_check(out, "decay-grid-shift-stability", [&]() -> std::string {
        auto st = rng::make_stream(seed, "check-gridshift");
        const auto grid = decay::log_grid(32.0, 4096.0, 16);
        std::vector<decay::ScanPoint> full, half;
        for (size_t i = 0; i < grid.size(); ++i) {
            decay::ScanPoint p;
            p.R = grid[i];
            p.value = std::pow(grid[i], -1.5) * std::exp(0.05 * st.gaussian());
            p.ok = true;
            full.push_back(p);
            if (i % 2 == 0) half.push_back(p);
        }
        const auto ff = decay::fit_points(full, 0.0, decay::FitKind::Direct);
        const auto fh = decay::fit_points(half, 0.0, decay::FitKind::Direct);
        double sx = 0.0, sxx = 0.0;
        for (const auto& p : half) {
            const double x = std::log(p.R);
            sx += x;
            sxx += x * x;
        }
        const double n = static_cast<double>(half.size());
        const double sxx_c = sxx - sx * sx / n;
        const double se = fh.rms * std::sqrt(n / std::max(1.0, n - 2.0)) / std::sqrt(sxx_c);
        const double dev = std::fabs(ff.exponent - fh.exponent);
        if (dev > 2.0 * se)
            return strf("!subgrid shifts exponent by %.4g > 2 x se %.4g", dev, se);
        return strf("shift %.4g vs 2 x se %.4g", dev, 2.0 * se);
    });

    // ---------------- lattice ----------------

    add_check(out, "lattice-count-oracle", [&]() -> std::string {
        auto st = rng::make_stream(seed, "check-lattice-oracle");
        const int ncase = quick ? 10 : 50;
        for (int c = 0; c < ncase; ++c) {
            BodyPtr b;
            const int which = static_cast<int>(st.below(3));
            const Vec ctr{st.uniform(-1.0, 1.0), st.uniform(-1.0, 1.0)};
            if (which == 0) {
                b = geometry::make_ball(2, st.uniform(0.5, 3.0), ctr);
            } else if (which == 1) {
                b = geometry::make_axis_box(Vec{st.uniform(0.3, 1.5), st.uniform(0.3, 1.5)}, ctr);
            } else {
                const double s2 = std::sqrt(2.0);
                b = geometry::make_polytope_h(
                    {Vec{-1.0, 0.0}, Vec{0.0, -1.0}, Vec{1.0 / s2, 1.0 / s2}},
                    {0.5, 0.5, st.uniform(0.5, 2.0)});
            }
            const double t = st.uniform(1.0, 30.0);
            const Rotation rho = geometry::random_rotation(2, st);
            const int64_t fast = lattice::count_points(b, t, rho);
            // Independent brute force over the support bounding box in y-space.
            int64_t slow = 0;
            Vec e(2, 0.0);
            int64_t lo[2], hi[2];
            for (int i = 0; i < 2; ++i) {
                e.assign(2, 0.0);
                e[static_cast<size_t>(i)] = 1.0;
                const double hp = t * b->support(mattvec(rho.m, e));
                e[static_cast<size_t>(i)] = -1.0;
                const double hm = t * b->support(mattvec(rho.m, e));
                lo[i] = static_cast<int64_t>(std::floor(-hm)) - 2;
                hi[i] = static_cast<int64_t>(std::ceil(hp)) + 2;
            }
            for (int64_t y0 = lo[0]; y0 <= hi[0]; ++y0)
                for (int64_t y1 = lo[1]; y1 <= hi[1]; ++y1) {
                    Vec y{static_cast<double>(y0), static_cast<double>(y1)};
                    Vec x = mattvec(rho.m, y);
                    for (double& v : x) v /= t;
                    if (b->contains(x)) ++slow;
                }
            if (fast != slow)
                return strf("!case %d: scanner %lld vs brute force %lld", c,
                            static_cast<long long>(fast), static_cast<long long>(slow));
        }
        return strf("%d random instances exact", ncase);
    });

    add_check(out, "lattice-count-monotone", [&]() -> std::string {
        const BodyPtr disk = geometry::make_ball(2, 1.3);
        const BodyPtr sq = geometry::make_axis_box(Vec{0.7, 0.7});
        const Rotation rho = geometry::rotation_2d(0.3);
        for (const BodyPtr& b : {disk, sq}) {
            int64_t prev = -1;
            for (double t = 0.5; t <= 20.0; t += 0.65) {
                const int64_t c = lattice::count_points(b, t, rho);
                if (c < prev) return strf("!count drops from %lld at t=%g",
                                          static_cast<long long>(prev), t);
                prev = c;
            }
        }
        return "counts nondecreasing in t";
    });

    add_check(out, "lattice-volume-consistency", [&]() -> std::string {
        const BodyPtr disk = geometry::make_ball(2, 1.0);
        const double t = 512.0;
        const int64_t c = lattice::count_points(disk, t, Rotation::identity(2));
        const double dev = std::fabs(static_cast<double>(c) / (t * t) - kPi);
        if (dev > 0.01) return strf("!count/t^2 off pi by %.4g", dev);
        return strf("count/t^2 off pi by %.4g", dev);
    });

    add_check(out, "lattice-ensemble-determinism", [&]() -> std::string {
        const BodyPtr disk = geometry::make_ball(2, 1.0);
        const auto a = lattice::rotational_l2(disk, 8.0, 32.0, 2, 6, 7,
                                              lattice::RotationEnsemble::Haar, 1);
        const auto b = lattice::rotational_l2(disk, 8.0, 32.0, 2, 6, 7,
                                              lattice::RotationEnsemble::Haar, 4);
        if (a.samples.size() != b.samples.size()) return "!sample count differs across jobs";
        for (size_t i = 0; i < a.samples.size(); ++i)
            if (a.samples[i].count != b.samples[i].count)
                return strf("!counts differ at sample %zu across thread schedules", i);
        const BodyPtr bx = geometry::make_axis_box(Vec{0.6, 0.5, 0.4});
        const auto c = lattice::rotational_l2(bx, 4.0, 8.0, 1, 4, 7,
                                              lattice::RotationEnsemble::AxisAngle, 2);
        const auto d = lattice::rotational_l2(bx, 4.0, 8.0, 1, 4, 7,
                                              lattice::RotationEnsemble::AxisAngle, 1);
        for (size_t i = 0; i < c.samples.size(); ++i)
            if (c.samples[i].count != d.samples[i].count)
                return "!axis-angle ensemble not deterministic";
        return "identical counts across runs and thread schedules";
    });

    // ---------------- bodyspec ----------------

    add_check(out, "bodyspec-parse", [&]() -> std::string {
        const auto b1 = bodyspec::parse_body("ball:d=2,r=1");
        if (std::fabs(b1->volume() - kPi) > 1e-12) return "!ball volume wrong";
        const auto b2 = bodyspec::parse_body("box:d=3,h=0.5,0.5,0.5");
        if (std::fabs(b2->volume() - 1.0) > 1e-12) return "!box volume wrong";
        const auto b3 = bodyspec::parse_body("pball:d=2,p=4,r=1");
        if (std::fabs(b3->volume() - 3.7081493546027438) > 1e-10) return "!pball volume wrong";
        auto rejects = [&](const char* s) {
            try {
                (void)bodyspec::parse_body(s);
            } catch (const Error&) {
                return true;
            }
            return false;
        };
        for (const char* bad : {"ball:d=1,r=1", "ball:d=2", "box:d=2,h=0.5",
                                "pball:d=2,p=0.5,r=1", "ball:d=2,r=1,q=3", "foo:d=2",
                                "ball:d=2,r=zzz"})
            if (!rejects(bad)) return strf("!accepted malformed spec %s", bad);
        return "parses valid specs, rejects malformed ones";
    });

    return out;
}

}  // namespace ftdecay::checks
