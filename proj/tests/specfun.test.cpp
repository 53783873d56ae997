#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ftdecay/specfun.hpp"

using ftdecay::specfun::bessel_j;
using ftdecay::specfun::sinc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("specfun") {

TEST_CASE("bessel reference values") {
    // Reference values from an independent implementation (scipy.special.jv).
    struct Ref {
        int nu2;
        double x, val;
    };
    const std::vector<Ref> refs{
        {0, 1.0, 0.7651976865579666},
        {2, 1.0, 0.44005058574493355},
        {4, 10.0, 0.2546303136851206},
        {0, 500.0, -0.034100556880732005},
        {10, 512.0, 0.026277654181874555},
        {1, 2.5, 0.30200490606236574},
        {3, 2.5, 0.5250802646640036},
        {5, 7.0, -0.2834366512017008},
        {0, 0.001, 0.9999997500000156},
        {6, 0.5, 0.002563729994587244},
    };
    for (const auto& r : refs)
        CHECK(std::fabs(bessel_j(r.nu2, r.x) - r.val) < 1e-9);
}

TEST_CASE("bessel zeros") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(2, 0.0) == 0.0);
    CHECK(std::fabs(bessel_j(0, 2.404825557695773)) < 1e-10);   // first J0 zero
    CHECK(std::fabs(bessel_j(2, 3.8317059702075123)) < 1e-8);   // first J1 zero
}

TEST_CASE("half-integer orders match the spherical closed forms") {
    for (double x : {0.3, 1.0, 2.5, 7.0, 40.0, 300.0}) {
        const double j12 = std::sqrt(2.0 / (kPi * x)) * std::sin(x);
        const double j32 = std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x));
        CHECK(std::fabs(bessel_j(1, x) - j12) < 1e-10);
        CHECK(std::fabs(bessel_j(3, x) - j32) < 1e-10);
    }
}

TEST_CASE("three-term recurrence") {
    // J_{nu-1}(x) + J_{nu+1}(x) = (2 nu / x) J_nu(x), relative 1e-8.
    for (int k = 0; k <= 10; ++k) {
        const double x = 0.5 * std::pow(2.0, k);
        for (int nu2 : {2, 3, 4, 5, 6, 7, 8}) {
            const double nu = 0.5 * nu2;
            const double a = bessel_j(nu2 - 2, x), b = bessel_j(nu2 + 2, x);
            const double c = (2.0 * nu / x) * bessel_j(nu2, x);
            const double denom = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
            if (denom < 1e-14) continue;
            CHECK(std::fabs(a + b - c) / denom < 1e-8);
        }
    }
}

TEST_CASE("derivative identity") {
    // d/dx [x^nu J_nu(x)] = x^nu J_{nu-1}(x), central difference step 1e-5.
    const double h = 1e-5;
    for (double x : {1.0, 2.0, 8.0, 32.0, 128.0}) {
        for (int nu2 : {2, 3, 4, 6}) {
            const double nu = 0.5 * nu2;
            auto f = [&](double t) { return std::pow(t, nu) * bessel_j(nu2, t); };
            const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
            const double exact = std::pow(x, nu) * bessel_j(nu2 - 2, x);
            CHECK(std::fabs(fd - exact) <= 1e-6 * std::max(1.0, std::fabs(exact)));
        }
    }
}

TEST_CASE("|J_nu| bounded by one") {
    for (int nu2 = 0; nu2 <= 10; ++nu2)
        for (double x = 0.0; x <= 100.0; x += 0.37)
            CHECK(std::fabs(bessel_j(nu2, x)) <= 1.0 + 1e-12);
}

TEST_CASE("oscillation envelope decays like x^{-1/2}") {
    for (int nu2 : {0, 2}) {
        std::vector<double> lx, lm;
        for (double lo = 32.0; lo < 4096.0; lo *= 2.0) {
            double m = 0.0;
            const int n = 4096;
            for (int i = 0; i < n; ++i)
                m = std::max(m, std::fabs(bessel_j(nu2, lo * (1.0 + static_cast<double>(i) / n))));
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
        CHECK(std::fabs(slope + 0.5) < 0.05);
    }
}

TEST_CASE("sinc values") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::fabs(sinc(1.0) - 0.8414709848078965) < 1e-15);
    CHECK(std::fabs(sinc(kPi)) < 1e-15);
    CHECK(std::fabs(sinc(-2.0) - sinc(2.0)) < 1e-16);
}

TEST_CASE("sinc is smooth across the series threshold") {
    // The Taylor branch engages below 1e-4; both branches must agree there.
    for (double x : {0.9e-4, 0.99e-4, 1.01e-4, 1.1e-4}) {
        const double direct = std::sin(x) / x;
        CHECK(std::fabs(sinc(x) - direct) < 1e-15);
    }
}

}  // TEST_SUITE
