#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ftdecay/geometry.hpp"
#include "ftdecay/rng.hpp"

using namespace ftdecay;
using namespace ftdecay::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

Vec rand_dir(int d, rng::Stream& st) {
    Vec v(d);
    double n = 0.0;
    do {
        for (int i = 0; i < d; ++i) v[i] = st.gaussian();
        n = norm2(v);
    } while (n < 1e-12);
    return scaled(v, 1.0 / n);
}

BodyPtr triangle() {
    const double s = 1.0 / std::sqrt(2.0);
    return make_polytope_h({{-1.0, 0.0}, {0.0, -1.0}, {s, s}}, {0.0, 0.0, s});
}

BodyPtr simplex3() {
    const double s = 1.0 / std::sqrt(3.0);
    return make_polytope_h({{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {s, s, s}}, {0.0, 0.0, 0.0, s});
}

std::vector<BodyPtr> sample_bodies() {
    return {
        make_ball(2, 1.0),
        make_ball(3, 2.5, {0.3, -0.1, 0.7}),
        make_ellipsoid({1.3, 0.7}),
        make_ellipsoid({1.2, 0.9, 0.6}),
        make_axis_box({0.5, 0.5}),
        make_axis_box({0.6, 0.5, 0.4}, {0.1, 0.0, -0.2}),
        make_pball(2, 4.0, 1.0),
        make_pball(2, 1.0, 1.0),
        triangle(),
        simplex3(),
    };
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("rotation constructors and algebra") {
    Rotation r = rotation_2d(0.7);
    CHECK(r.m(0, 0) == doctest::Approx(std::cos(0.7)).epsilon(1e-15));
    CHECK(r.m(0, 1) == doctest::Approx(-std::sin(0.7)).epsilon(1e-15));
    CHECK(r.m(1, 0) == doctest::Approx(std::sin(0.7)).epsilon(1e-15));

    Rotation q = rotation_from_quaternion(0.9, 0.2, 0.3, 0.1);
    rng::Stream st = rng::make_stream(11, "geom-rot", 0);
    for (const Rotation& rr : {q, random_rotation(2, st), random_rotation(3, st)}) {
        int d = rr.dim();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int k = 0; k < d; ++k) s += rr.m(k, i) * rr.m(k, j);
                CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        // round trip through the transpose is the identity
        Rotation rt = compose(rr, transpose(rr));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                CHECK(std::fabs(rt.m(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }

    // compose applies the right factor first
    Rotation a = rotation_2d(0.3), b = rotation_2d(1.1);
    Vec x{0.4, -0.9};
    Vec lhs = matvec(compose(a, b).m, x);
    Vec rhs = matvec(a.m, matvec(b.m, x));
    CHECK(norm2(sub(lhs, rhs)) < 1e-14);

    Mat bad = Mat::identity(2);
    bad(1, 1) = -1.0;  // reflection
    CHECK_THROWS_AS(make_rotation(bad), Error);
    Mat skew = Mat::identity(2);
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(make_rotation(skew), Error);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(make_ball(1, 1.0), Error);
    CHECK_THROWS_AS(make_ball(2, 0.0), Error);
    CHECK_THROWS_AS(make_ball(2, 1.0, {0.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(make_ellipsoid({1.0, -2.0}), Error);
    CHECK_THROWS_AS(make_axis_box({0.5, 0.0}), Error);
    CHECK_THROWS_AS(make_pball(2, 0.5, 1.0), Error);
    CHECK_THROWS_AS(make_polytope_h({{1.0, 0.0}}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(make_polytope_h({{1, 0, 0, 0}, {-1, 0, 0, 0}}, {1.0, 1.0}), DimensionUnsupported);
}

TEST_CASE("unbounded and empty polytopes are rejected") {
    // slab: bounded in x only
    CHECK_THROWS_AS(make_polytope_h({{1.0, 0.0}, {-1.0, 0.0}}, {1.0, 1.0}), UnboundedBody);
    // x <= 0 and x >= 1 cannot both hold
    CHECK_THROWS_AS(
        make_polytope_h({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}, {0.0, -1.0, 1.0, 1.0}),
        EmptyInterior);
}

TEST_CASE("reference volumes and surface areas") {
    CHECK(make_ball(2, 1.0)->volume() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(make_ball(3, 1.0)->volume() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    CHECK(make_ball(2, 1.0)->surface_area() == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(make_ball(3, 1.0)->surface_area() == doctest::Approx(4.0 * kPi).epsilon(1e-12));

    CHECK(make_ellipsoid({1.3, 0.7})->volume() == doctest::Approx(kPi * 0.91).epsilon(1e-12));
    CHECK(make_ellipsoid({1.2, 0.9, 0.6})->volume() ==
          doctest::Approx(4.0 * kPi / 3.0 * 0.648).epsilon(1e-12));

    CHECK(make_axis_box({0.5, 0.5})->volume() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(make_axis_box({0.5, 0.5})->surface_area() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(make_axis_box({0.6, 0.5, 0.4})->volume() == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(make_axis_box({0.6, 0.5, 0.4})->surface_area() == doctest::Approx(5.92).epsilon(1e-12));

    // independently computed: vol = (2 Gamma(5/4) r)^2 / Gamma(3/2) at p=4
    CHECK(make_pball(2, 4.0, 1.0)->volume() ==
          doctest::Approx(3.7081493546027438).epsilon(1e-10));
    CHECK(make_pball(2, 1.0, 1.0)->volume() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(make_pball(2, 1.0, 1.0)->surface_area() ==
          doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-10));

    CHECK(triangle()->volume() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(triangle()->surface_area() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(simplex3()->volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(simplex3()->surface_area() ==
          doctest::Approx(1.5 + std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("diameters") {
    CHECK(make_ball(2, 1.5)->diameter() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(triangle()->diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(make_axis_box({0.6, 0.5, 0.4})->diameter() ==
          doctest::Approx(2.0 * std::sqrt(0.77)).epsilon(1e-12));
    CHECK(simplex3()->diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("polytope vertex enumeration") {
    BodyPtr tri = triangle();
    REQUIRE(tri->poly);
    REQUIRE(tri->poly->vertices.size() == 3);
    std::vector<Vec> want{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    for (const Vec& w : want) {
        bool found = false;
        for (const Vec& v : tri->poly->vertices) found = found || norm2(sub(v, w)) < 1e-9;
        CHECK(found);
    }

    BodyPtr cube = make_polytope_h(
        {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
        {0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    CHECK(cube->poly->vertices.size() == 8);
    CHECK(cube->volume() == doctest::Approx(1.0).epsilon(1e-12));

    // every vertex sits on at least d facets
    for (const BodyPtr& b : {tri, cube, simplex3()}) {
        const PolytopeData& pd = *b->poly;
        for (const Vec& v : pd.vertices) {
            int active = 0;
            for (size_t i = 0; i < pd.normals.size(); ++i)
                if (std::fabs(dot(pd.normals[i], v) - pd.offsets[i]) <= 1e-9) ++active;
            CHECK(active >= b->d);
        }
    }
}

TEST_CASE("support function is subadditive and dominates the body") {
    rng::Stream st = rng::make_stream(11, "geom-support", 0);
    for (const BodyPtr& b : sample_bodies()) {
        int d = b->d;
        double scale = b->diameter();
        for (int it = 0; it < 60; ++it) {
            Vec u = rand_dir(d, st), v = rand_dir(d, st);
            CHECK(b->support(add(u, v)) <= b->support(u) + b->support(v) + 1e-10 * scale);
            // positive homogeneity
            CHECK(std::fabs(b->support(scaled(u, 2.75)) - 2.75 * b->support(u)) < 1e-9 * scale);
        }
        // sampled member points never exceed the support value
        Vec c = b->interior_point();
        CHECK(b->contains(c));
        CHECK(b->defining(c) < 0.0);
        for (int it = 0; it < 200; ++it) {
            Vec x(d);
            for (int i = 0; i < d; ++i) x[i] = c[i] + st.uniform(-1.0, 1.0) * scale;
            if (!b->contains(x)) continue;
            Vec w = rand_dir(d, st);
            CHECK(dot(x, w) <= b->support(w) + 1e-9 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("cross-polytope support is the max-norm dual") {
    BodyPtr cp = make_pball(2, 1.0, 1.0);
    CHECK(cp->support({3.0, -4.0}) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cp->support({1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp->support({-0.2, 0.1}) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("smoothness classification") {
    CHECK(make_ball(2, 1.0)->is_smooth());
    CHECK(make_ellipsoid({1.2, 0.9, 0.6})->is_smooth());
    CHECK(make_pball(2, 4.0, 1.0)->is_smooth());
    CHECK_FALSE(make_pball(2, 1.0, 1.0)->is_smooth());
    CHECK_FALSE(make_axis_box({0.5, 0.5})->is_smooth());
    CHECK_FALSE(triangle()->is_smooth());
}

TEST_CASE("radial parametrization lands on the boundary") {
    rng::Stream st = rng::make_stream(11, "geom-radial", 0);
    for (const BodyPtr& b : sample_bodies()) {
        if (!b->is_smooth()) continue;
        for (int it = 0; it < 50; ++it) {
            Vec e = rand_dir(b->d, st);
            double t = b->radial_scale(e);
            CHECK(t > 0.0);
            Vec x = b->center;
            axpy(t, e, x);
            CHECK(std::fabs(b->defining(x)) < 1e-9);
            CHECK(b->contains(add(b->center, scaled(e, 0.999 * t))));

            Vec n = b->normal_at(x);
            CHECK(std::fabs(norm2(n) - 1.0) < 1e-12);
            Vec g = b->gradient(x);
            CHECK(dot(n, normalized(g)) == doctest::Approx(1.0).epsilon(1e-9));
            // outward: moving along the normal exits the body
            CHECK_FALSE(b->contains(add(x, scaled(n, 1e-6 * b->diameter()))));
        }
    }

    BodyPtr ball = make_ball(2, 2.0, {1.0, -1.0});
    Vec n = ball->normal_at({3.0, -1.0});
    CHECK(norm2(sub(n, Vec{1.0, 0.0})) < 1e-12);
}

TEST_CASE("normal_at on flat facets and ridges") {
    BodyPtr box = make_axis_box({0.5, 0.5, 0.5});
    Vec n = box->normal_at({0.5, 0.1, -0.2});
    CHECK(norm2(sub(n, Vec{1.0, 0.0, 0.0})) < 1e-12);
    CHECK_THROWS_AS(box->normal_at({0.5, 0.5, 0.5}), NonSmoothPoint);
    CHECK_THROWS_AS(box->normal_at({0.5, 0.5, 0.0}), NonSmoothPoint);

    BodyPtr tri = triangle();
    Vec nt = tri->normal_at({0.25, 0.0});
    CHECK(norm2(sub(nt, Vec{0.0, -1.0})) < 1e-12);
    CHECK_THROWS_AS(tri->normal_at({0.0, 0.0}), NonSmoothPoint);
}

TEST_CASE("rotation maps bodies consistently") {
    rng::Stream st = rng::make_stream(11, "geom-rotate", 0);
    for (const BodyPtr& b : sample_bodies()) {
        Rotation r = random_rotation(b->d, st);
        BodyPtr rb = rotate(b, r);
        CHECK(rb->volume() == doctest::Approx(b->volume()).epsilon(1e-9));
        // area is quadrature-based for ellipsoids, so allow its tolerance
        CHECK(rb->surface_area() == doctest::Approx(b->surface_area()).epsilon(1e-6));
        double scale = std::max(1.0, b->diameter());
        for (int it = 0; it < 40; ++it) {
            Vec w = rand_dir(b->d, st);
            CHECK(std::fabs(rb->support(w) - b->support(mattvec(r.m, w))) < 1e-10 * scale);
            Vec x(b->d);
            for (int i = 0; i < b->d; ++i) x[i] = st.uniform(-1.0, 1.0) * scale;
            CHECK(rb->contains(matvec(r.m, x)) == b->contains(x));
        }
    }
}

TEST_CASE("rotation picks the exact representation where one exists") {
    rng::Stream st = rng::make_stream(11, "geom-rotkind", 0);
    Rotation r2 = rotation_2d(0.3);
    Rotation r3 = rotation_from_quaternion(0.9, 0.2, 0.3, 0.1);
    CHECK(rotate(make_ball(2, 1.0, {0.5, 0.0}), r2)->kind == BodyKind::Ball);
    CHECK(rotate(make_ellipsoid({1.3, 0.7}), r2)->kind == BodyKind::Ellipsoid);
    CHECK(rotate(make_axis_box({0.6, 0.5, 0.4}), r3)->kind == BodyKind::PolytopeH);
    CHECK(rotate(triangle(), r2)->kind == BodyKind::PolytopeH);
    CHECK(rotate(make_pball(2, 4.0, 1.0), r2)->kind == BodyKind::Rotated);

    // double rotation of a wrapper still matches the composed rotation
    BodyPtr pb = make_pball(2, 4.0, 1.0);
    BodyPtr twice = rotate(rotate(pb, rotation_2d(0.3)), rotation_2d(0.5));
    BodyPtr once = rotate(pb, rotation_2d(0.8));
    for (int it = 0; it < 20; ++it) {
        Vec w = rand_dir(2, st);
        CHECK(std::fabs(twice->support(w) - once->support(w)) < 1e-10);
    }
}

TEST_CASE("sphere cells form a fixed cover") {
    std::vector<ConeCell> c2 = sphere_cells(2);
    std::vector<ConeCell> c3 = sphere_cells(3);
    CHECK(c2.size() == 16);
    CHECK(c3.size() == 96);
    rng::Stream st = rng::make_stream(11, "geom-cells", 0);
    for (int d : {2, 3}) {
        const auto& cells = d == 2 ? c2 : c3;
        for (int it = 0; it < 500; ++it) {
            Vec n = rand_dir(d, st);
            int hits = 0;
            for (const ConeCell& c : cells)
                if (c.contains_direction(n)) ++hits;
            CHECK(hits >= 1);
        }
    }
}

TEST_CASE("tangent_basis spans the orthogonal complement") {
    rng::Stream st = rng::make_stream(11, "geom-tb", 0);
    for (int d : {2, 3}) {
        for (int it = 0; it < 30; ++it) {
            Vec a = rand_dir(d, st);
            std::vector<Vec> tb = tangent_basis(a);
            REQUIRE(static_cast<int>(tb.size()) == d - 1);
            for (size_t i = 0; i < tb.size(); ++i) {
                CHECK(std::fabs(dot(tb[i], a)) < 1e-12);
                for (size_t j = 0; j <= i; ++j)
                    CHECK(std::fabs(dot(tb[i], tb[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("boundary decomposition: patch counts and flat patches") {
    CHECK(decompose_boundary(make_ball(2, 1.0)).size() == 16);
    CHECK(decompose_boundary(make_ball(3, 1.0)).size() == 96);

    BodyPtr tri = triangle();
    std::vector<BoundaryPatch> tp = decompose_boundary(tri);
    CHECK(tp.size() >= 3);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Vec> fnormals{{-1.0, 0.0}, {0.0, -1.0}, {s, s}};
    for (const Vec& fn : fnormals) {
        bool covered = false;
        for (const BoundaryPatch& p : tp) covered = covered || norm2(sub(p.axis, fn)) < 1e-9;
        CHECK(covered);
    }
    for (const BoundaryPatch& p : tp) {
        CHECK(p.lipschitz == 0.0);  // all singleton groups: normals are >= 45 deg apart
        CHECK(std::fabs(norm2(p.axis) - 1.0) < 1e-12);
    }

    for (const BoundaryPatch& p : decompose_boundary(make_axis_box({0.6, 0.5, 0.4}))) {
        CHECK(p.lipschitz == 0.0);
        CHECK(std::fabs(p.base_offset - p.body->support(p.axis)) < 1e-12);
    }
}

TEST_CASE("patch invariants hold for every variant") {
    const double bound = 1.0 / std::sqrt(2.0);
    for (const BodyPtr& b : sample_bodies()) {
        std::vector<BoundaryPatch> patches = decompose_boundary(b);
        REQUIRE(!patches.empty());
        for (const BoundaryPatch& p : patches) {
            CHECK(std::fabs(norm2(p.axis) - 1.0) < 1e-12);
            CHECK(p.aperture < kPi / 4.0);
            CHECK(p.lipschitz < 1.0);
            CHECK(static_cast<int>(p.tangent.size()) == b->d - 1);
            for (const Vec& t : p.tangent) CHECK(std::fabs(dot(t, p.axis)) < 1e-10);
        }
        // spot-check the secant bound on a few patches (full sweep lives in the check suite)
        for (size_t i = 0; i < patches.size(); i += std::max<size_t>(1, patches.size() / 3)) {
            double worst = check_secant_property(patches[i], 200, 77);
            double cap = patches[i].lipschitz > 0.0
                             ? patches[i].lipschitz /
                                   std::sqrt(1.0 + patches[i].lipschitz * patches[i].lipschitz)
                             : 1e-9;
            CHECK(worst <= cap + 1e-9);
            CHECK(worst < bound);
        }
    }
}

TEST_CASE("c32 constant stays small on the sphere") {
    BodyPtr ball = make_ball(2, 1.0);
    std::vector<BoundaryPatch> patches = decompose_boundary(ball);
    double worst = 0.0;
    for (size_t i = 0; i < patches.size(); i += 4)
        worst = std::max(worst, check_c32(ball, patches[i], 200, 77));
    CHECK(worst <= 1.05);
}

TEST_CASE("degenerate patches are reported") {
    // graph domain placed entirely off the body: the lift can never succeed
    BoundaryPatch p;
    p.body = make_ball(2, 1.0);
    p.axis = {1.0, 0.0};
    p.tangent = {{0.0, 1.0}};
    p.base_offset = 1.0;
    p.aperture = 0.1;
    p.lipschitz = 0.1;
    p.dom_lo = {2.0};
    p.dom_hi = {3.0};
    CHECK_THROWS_AS(check_secant_property(p, 100, 77), DegeneratePatch);
    CHECK_THROWS_AS(check_c32(p.body, p, 100, 77), DegeneratePatch);
}

}  // TEST_SUITE
