#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ftdecay/decay.hpp"
#include "ftdecay/rng.hpp"

using namespace ftdecay;
using namespace ftdecay::geometry;
using namespace ftdecay::decay;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ScanPoint> power_law(const std::vector<double>& grid, double c, double alpha) {
    std::vector<ScanPoint> pts;
    for (double R : grid) pts.push_back({R, c * std::pow(R, alpha), 0.0, true});
    return pts;
}

}  // namespace

TEST_SUITE("decay") {

TEST_CASE("log grid is geometric with the right density") {
    std::vector<double> g = log_grid(32.0, 4096.0, 4);
    // 7 octaves at 4 per octave: 29 points, ratio 2^{1/4}
    REQUIRE(g.size() == 29);
    CHECK(g.front() == doctest::Approx(32.0).epsilon(1e-14));
    CHECK(g.back() == doctest::Approx(4096.0).epsilon(1e-14));
    for (size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == doctest::Approx(32.0 * std::pow(2.0, i / 4.0)).epsilon(1e-12));

    CHECK(log_grid(10.0, 20.0, 1).size() == 2);
    CHECK(log_grid(5.0, 5.0 * 1.0001, 4).size() == 2);  // K floors at 1
}

TEST_CASE("exact power law is fit exactly") {
    std::vector<double> g = log_grid(1.0, 1024.0, 4);
    FitResult f = fit_points(power_law(g, 3.7, -1.5), 0.0, FitKind::Direct);
    CHECK(std::fabs(f.exponent + 1.5) < 1e-12);
    CHECK(std::fabs(f.intercept - std::log(3.7)) < 1e-12);
    CHECK(f.rms < 1e-13);
    CHECK(f.n_used == static_cast<int>(g.size()));
}

TEST_CASE("fit is equivariant under grid rescaling") {
    // same alpha when every R is multiplied by a constant
    std::vector<double> g1 = log_grid(8.0, 512.0, 6);
    std::vector<double> g2;
    for (double R : g1) g2.push_back(4.0 * R);
    rng::Stream st = rng::make_stream(3, "decay-equi", 0);
    std::vector<ScanPoint> p1, p2;
    for (size_t i = 0; i < g1.size(); ++i) {
        double noise = std::exp(0.02 * st.gaussian());
        p1.push_back({g1[i], 2.0 * std::pow(g1[i], -1.7) * noise, 0.0, true});
        p2.push_back({g2[i], 2.0 * std::pow(g2[i], -1.7) * noise, 0.0, true});
    }
    FitResult f1 = fit_points(p1, 0.0, FitKind::Direct);
    FitResult f2 = fit_points(p2, 0.0, FitKind::Direct);
    CHECK(std::fabs(f1.exponent - f2.exponent) < 1e-10);
}

TEST_CASE("envelope fit recovers the upper envelope of oscillations") {
    // |cos| modulated power laws: the envelope estimator must find alpha
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        std::vector<double> g = log_grid(32.0, 4096.0, 16);
        std::vector<ScanPoint> pts;
        for (double R : g) {
            double v = std::pow(R, -alpha) * std::fabs(std::cos(0.9 * R));
            pts.push_back({R, v, 0.0, v > 1e-300});
        }
        FitResult f = fit_points(pts, 0.0, FitKind::Envelope);
        CHECK(std::fabs(f.exponent + alpha) <= 0.03);
        CHECK(f.n_used >= 8);
    }
}

TEST_CASE("envelope and direct fits disagree on a two-level series") {
    // every other point halved: direct mixes the levels, envelope tracks the top
    std::vector<double> g = log_grid(4.0, 4096.0, 8);
    std::vector<ScanPoint> pts;
    for (size_t i = 0; i < g.size(); ++i) {
        double v = std::pow(g[i], -1.0) * (i % 2 == 1 ? 0.5 : 1.0);
        pts.push_back({g[i], v, 0.0, true});
    }
    FitResult env = fit_points(pts, 0.0, FitKind::Envelope);
    FitResult dir = fit_points(pts, 0.0, FitKind::Direct);
    CHECK(std::fabs(env.exponent + 1.0) < 1e-10);  // maxima lie exactly on R^{-1}
    CHECK(env.rms < 1e-12);
    CHECK(std::fabs(dir.rms) > 0.1);  // the level split shows up as residual
}

TEST_CASE("fit failures are typed") {
    std::vector<double> g = log_grid(1.0, 256.0, 2);
    std::vector<ScanPoint> zero;
    for (double R : g) zero.push_back({R, 0.0, 0.0, false});
    CHECK_THROWS_AS(fit_points(zero, 1e-14, FitKind::Direct), AllZeros);

    // a handful of usable points is not enough
    std::vector<ScanPoint> few = power_law(log_grid(1.0, 8.0, 2), 1.0, -1.0);
    REQUIRE(few.size() < 8);
    CHECK_THROWS_AS(fit_points(few, 0.0, FitKind::Direct), InsufficientData);

    // envelope on monotone data has no interior maxima at all
    std::vector<ScanPoint> mono = power_law(log_grid(1.0, 1024.0, 4), 1.0, -1.0);
    CHECK_THROWS_AS(fit_points(mono, 0.0, FitKind::Envelope), InsufficientData);
}

TEST_CASE("fit is stable under subgrid shifts") {
    // dropping to every other grid point moves the estimate by at most 2 se
    rng::Stream st = rng::make_stream(2026, "check-gridshift", 0);
    std::vector<double> g = log_grid(32.0, 4096.0, 16);
    std::vector<ScanPoint> all;
    for (double R : g)
        all.push_back({R, std::pow(R, -1.5) * std::exp(0.05 * st.gaussian()), 0.0, true});
    std::vector<ScanPoint> sub;
    for (size_t i = 0; i < all.size(); i += 2) sub.push_back(all[i]);

    FitResult ffull = fit_points(all, 0.0, FitKind::Direct);
    FitResult fsub = fit_points(sub, 0.0, FitKind::Direct);

    // slope standard error of the subgrid fit
    double sx = 0.0, sxx = 0.0;
    for (const ScanPoint& p : sub) {
        sx += std::log(p.R);
        sxx += std::log(p.R) * std::log(p.R);
    }
    double n = static_cast<double>(sub.size());
    double sxx_c = sxx - sx * sx / n;
    double se = fsub.rms * std::sqrt(n / (n - 2.0)) / std::sqrt(sxx_c);
    CHECK(std::fabs(ffull.exponent - fsub.exponent) <= 2.0 * se);
}

TEST_CASE("scan evaluates the pointwise modulus on the grid") {
    BodyPtr disk = make_ball(2, 1.0);
    ScanOptions opt;
    opt.kind = ScanKind::Pointwise;
    opt.omega = {1.0, 0.0};
    ScanSeries s = scan(disk, 4.0, 64.0, 4, opt);
    std::vector<double> g = log_grid(4.0, 64.0, 4);
    REQUIRE(s.points.size() == g.size());
    CHECK(s.floor == doctest::Approx(1e-14 * kPi).epsilon(1e-12));
    for (size_t i = 0; i < g.size(); ++i) {
        CHECK(s.points[i].R == doctest::Approx(g[i]).epsilon(1e-14));
        double want = std::abs(fourier::ft(disk, {g[i], 0.0}).value);
        CHECK(std::fabs(s.points[i].value - want) < 1e-12);
        CHECK(s.points[i].se == 0.0);  // closed form: no sampling error
    }
}

TEST_CASE("scan defaults the pointwise direction to the first axis") {
    BodyPtr box = make_axis_box({0.5, 0.3});
    ScanOptions opt;
    opt.kind = ScanKind::Pointwise;
    ScanSeries s = scan(box, 2.0, 32.0, 4, opt);
    ScanOptions opt2 = opt;
    opt2.omega = {1.0, 0.0};
    ScanSeries s2 = scan(box, 2.0, 32.0, 4, opt2);
    for (size_t i = 0; i < s.points.size(); ++i)
        CHECK(s.points[i].value == s2.points[i].value);
}

TEST_CASE("average scan matches a direct spherical average") {
    BodyPtr disk = make_ball(2, 1.0);
    ScanOptions opt;
    opt.kind = ScanKind::Average;
    ScanSeries s = scan(disk, 8.0, 32.0, 2, opt);
    for (const ScanPoint& p : s.points) {
        sphere::AvgResult a = sphere::l2_average(disk, p.R, sphere::default_scheme(2, p.R));
        CHECK(std::fabs(p.value - a.value) < 1e-12);
    }
}

TEST_CASE("average decay of the disk has the right exponent") {
    BodyPtr disk = make_ball(2, 1.0);
    ScanOptions opt;
    opt.kind = ScanKind::Average;
    ScanSeries s = scan(disk, 32.0, 4096.0, 16, opt);
    FitResult f = fit_exponent(s, FitKind::Envelope);
    CHECK(std::fabs(f.exponent + 1.5) < 0.05);
}

TEST_CASE("surface scan uses the boundary measure floor") {
    BodyPtr disk = make_ball(2, 1.0);
    ScanOptions opt;
    opt.kind = ScanKind::AverageSurface;
    ScanSeries s = scan(disk, 8.0, 16.0, 2, opt);
    CHECK(s.floor == doctest::Approx(1e-14 * 2.0 * kPi).epsilon(1e-12));
    for (const ScanPoint& p : s.points) CHECK(p.value <= 2.0 * kPi + 1e-9);
}

TEST_CASE("scans are reproducible and job-count independent") {
    BodyPtr pb = make_pball(2, 4.0, 1.0);
    ScanOptions opt;
    opt.kind = ScanKind::Average;
    opt.ndir = 64;
    ScanSeries a = scan(pb, 4.0, 16.0, 4, opt);
    ScanSeries b = scan(pb, 4.0, 16.0, 4, opt);
    ScanOptions opt4 = opt;
    opt4.jobs = 4;
    ScanSeries c = scan(pb, 4.0, 16.0, 4, opt4);
    REQUIRE(a.points.size() == b.points.size());
    REQUIRE(a.points.size() == c.points.size());
    for (size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].value == b.points[i].value);
        CHECK(a.points[i].value == c.points[i].value);
        CHECK(a.points[i].se == c.points[i].se);
    }
}

TEST_CASE("scan marks sub-floor values as unusable") {
    // at R = 2^k * 2 pi the first-axis pointwise scan of the unit square sits
    // exactly on a sinc zero; a ppo = 1 grid hits nothing else
    BodyPtr box = make_axis_box({0.5, 0.5});
    ScanOptions opt;
    opt.kind = ScanKind::Pointwise;
    opt.omega = {1.0, 0.0};
    ScanSeries dead = scan(box, 2.0 * kPi, 32.0 * kPi, 1, opt);
    for (const ScanPoint& p : dead.points) CHECK_FALSE(p.ok);
    CHECK_THROWS_AS(fit_exponent(dead, FitKind::Direct), AllZeros);

    // ppo = 2 interleaves surviving half-octave points, but too few to fit
    ScanSeries mixed = scan(box, 2.0 * kPi, 32.0 * kPi, 2, opt);
    int good = 0;
    for (const ScanPoint& p : mixed.points)
        if (p.ok) ++good;
    CHECK(good >= 3);
    CHECK(good < 8);
    CHECK_THROWS_AS(fit_exponent(mixed, FitKind::Direct), InsufficientData);
}

}  // TEST_SUITE
