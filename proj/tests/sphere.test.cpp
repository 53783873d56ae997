#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "ftdecay/specfun.hpp"
#include "ftdecay/sphere.hpp"

using namespace ftdecay;
using namespace ftdecay::geometry;
using namespace ftdecay::sphere;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("sphere") {

TEST_CASE("default scheme sizes") {
    SphereScheme s2a = default_scheme(2, 100.0);
    CHECK(s2a.kind == SchemeKind::UniformAngle);
    CHECK(s2a.n == 4096);  // floor dominates below R = 512
    SphereScheme s2b = default_scheme(2, 1000.0);
    CHECK(s2b.n == 8000);  // ceil(8 R) beyond it
    SphereScheme s3 = default_scheme(3, 50.0);
    CHECK(s3.kind == SchemeKind::LowDiscrepancy);
    CHECK(s3.n == 16384);
}

TEST_CASE("sampled directions are unit and deterministic") {
    for (int d : {2, 3}) {
        SphereScheme s = default_scheme(d, 10.0);
        s.n = 512;
        std::vector<Vec> dirs = sample_directions(s);
        REQUIRE(static_cast<int>(dirs.size()) == s.n);
        for (const Vec& w : dirs) CHECK(std::fabs(norm2(w) - 1.0) < 1e-12);
        std::vector<Vec> again = sample_directions(s);
        for (size_t i = 0; i < dirs.size(); ++i) CHECK(dirs[i] == again[i]);

        SphereScheme other = s;
        other.seed = s.seed + 1;
        if (s.kind != SchemeKind::UniformAngle) {
            std::vector<Vec> shifted = sample_directions(other);
            CHECK(norm2(sub(shifted[0], dirs[0])) > 1e-9);
        }
    }
}

TEST_CASE("inverse normal cdf reference values") {
    CHECK(std::fabs(inverse_normal_cdf(0.5)) < 1e-12);
    CHECK(std::fabs(inverse_normal_cdf(0.975) - 1.959963984540054) < 1e-8);
    CHECK(std::fabs(inverse_normal_cdf(0.8) - 0.8416212335729143) < 1e-8);
    CHECK(std::fabs(inverse_normal_cdf(0.025) + 1.959963984540054) < 1e-8);
    // symmetry and monotonicity
    for (double p : {0.01, 0.1, 0.3, 0.45}) {
        CHECK(std::fabs(inverse_normal_cdf(p) + inverse_normal_cdf(1.0 - p)) < 1e-9);
        CHECK(inverse_normal_cdf(p) < inverse_normal_cdf(p + 0.05));
    }
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), Error);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), Error);
    CHECK_THROWS_AS(inverse_normal_cdf(-0.2), Error);
}

TEST_CASE("disk average matches the closed form") {
    // A(R)^2 = mean over angles of |2 pi J1(R)/R|^2, and the equispaced rule is
    // exact for this rotation-invariant integrand.
    BodyPtr disk = make_ball(2, 1.0);
    for (double R : {32.0, 500.0}) {
        SphereScheme s = default_scheme(2, R);
        AvgResult a = l2_average(disk, R, s);
        double want = std::fabs(2.0 * kPi * specfun::bessel_j(2, R) / R);
        CHECK(std::fabs(a.value - want) <= 1e-3 * want);
        CHECK(a.se <= 1e-6 * want);  // jackknife detects the invariance
    }
}

TEST_CASE("doubling the rule leaves the square average unchanged") {
    BodyPtr box = make_axis_box({0.5, 0.5});
    double R = 40.0;
    SphereScheme s1 = default_scheme(2, R);
    SphereScheme s2 = s1;
    s2.n = 2 * s1.n;
    AvgResult a1 = l2_average(box, R, s1);
    AvgResult a2 = l2_average(box, R, s2);
    CHECK(std::fabs(a1.value - a2.value) <= 1e-6 * a1.value);
}

TEST_CASE("rotation invariance of the average") {
    Rotation r2 = rotation_2d(0.77);
    BodyPtr sq = make_axis_box({0.5, 0.5});
    AvgResult a = l2_average(sq, 10.0, default_scheme(2, 10.0));
    AvgResult b = l2_average(rotate(sq, r2), 10.0, default_scheme(2, 10.0));
    CHECK(std::fabs(a.value - b.value) <= 3.0 * (a.se + b.se) + 1e-12);

    Rotation r3 = rotation_from_quaternion(0.9, 0.2, 0.3, 0.1);
    BodyPtr bx = make_axis_box({0.6, 0.5, 0.4});
    AvgResult c = l2_average(bx, 10.0, default_scheme(3, 10.0));
    AvgResult d = l2_average(rotate(bx, r3), 10.0, default_scheme(3, 10.0));
    CHECK(std::fabs(c.value - d.value) <= 3.0 * (c.se + d.se) + 1e-12);
}

TEST_CASE("average is bounded by the volume") {
    for (const BodyPtr& b : {make_ball(2, 1.0), make_axis_box({0.6, 0.5, 0.4})}) {
        for (double R : {0.1, 1.0, 20.0}) {
            AvgResult a = l2_average(b, R, default_scheme(b->d, R));
            CHECK(a.value <= b->volume() + 1e-9);
        }
    }
}

TEST_CASE("monte carlo scheme agrees with low discrepancy") {
    BodyPtr bx = make_axis_box({0.6, 0.5, 0.4});
    double R = 5.0;
    SphereScheme ld = default_scheme(3, R);
    ld.n = 8192;
    SphereScheme mc = ld;
    mc.kind = SchemeKind::MonteCarlo;
    AvgResult a = l2_average(bx, R, ld);
    AvgResult b = l2_average(bx, R, mc);
    CHECK(std::fabs(a.value - b.value) <= 4.0 * (a.se + b.se));
    CHECK(b.se > 0.0);
}

TEST_CASE("surface average of the sphere is exactly flat in modulus") {
    // |sigma-hat| for the unit 2-sphere is 4 pi |sin s| / s, direction independent.
    BodyPtr ball = make_ball(3, 1.0);
    double R = 7.0;
    SphereScheme s = default_scheme(3, R);
    s.n = 2048;
    AvgResult a = l2_average_surface(ball, R, s);
    double want = 4.0 * kPi * std::fabs(std::sin(R)) / R;
    CHECK(std::fabs(a.value - want) < 1e-10);
    CHECK(a.se < 1e-10);
}

TEST_CASE("low discrepancy directions cover the sphere evenly") {
    SphereScheme s = default_scheme(3, 10.0);
    std::vector<Vec> dirs = sample_directions(s);
    // octant counts within 5 percent of the uniform share
    std::vector<int> counts(8, 0);
    for (const Vec& w : dirs) {
        int idx = (w[0] > 0) | ((w[1] > 0) << 1) | ((w[2] > 0) << 2);
        ++counts[idx];
    }
    double share = static_cast<double>(s.n) / 8.0;
    for (int c : counts) CHECK(std::fabs(c - share) < 0.05 * share);
    // first moment vanishes
    Vec m(3, 0.0);
    for (const Vec& w : dirs) axpy(1.0 / s.n, w, m);
    CHECK(norm2(m) < 0.02);
}

}  // TEST_SUITE
