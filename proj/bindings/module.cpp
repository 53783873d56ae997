// Python bindings for the ftdecay core: body construction, indicator and
// surface transforms, spherical-average decay scans with power-law fits,
// rotational lattice counts, and the invariant check suite.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftdecay/bodyspec.hpp"
#include "ftdecay/checks.hpp"
#include "ftdecay/decay.hpp"
#include "ftdecay/errors.hpp"
#include "ftdecay/fourier.hpp"
#include "ftdecay/geometry.hpp"
#include "ftdecay/lattice.hpp"
#include "ftdecay/sphere.hpp"

namespace py = pybind11;

using namespace ftdecay;
using geometry::BodyPtr;
using geometry::BoundaryPatch;
using geometry::ConvexBody;
using geometry::Rotation;

namespace {

std::string kind_name(geometry::BodyKind k) {
    switch (k) {
        case geometry::BodyKind::Ball: return "ball";
        case geometry::BodyKind::Ellipsoid: return "ellipsoid";
        case geometry::BodyKind::AxisBox: return "box";
        case geometry::BodyKind::PBall: return "pball";
        case geometry::BodyKind::PolytopeH: return "polytope";
        case geometry::BodyKind::Rotated: return "rotated";
    }
    return "?";
}

std::string method_name(fourier::Method m) {
    switch (m) {
        case fourier::Method::ClosedForm: return "closed-form";
        case fourier::Method::ExactRecursion: return "exact-recursion";
        case fourier::Method::BoundaryQuadrature: return "boundary-quadrature";
        case fourier::Method::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

decay::FitKind parse_fit_kind(const std::string& s) {
    if (s == "direct") return decay::FitKind::Direct;
    if (s == "envelope") return decay::FitKind::Envelope;
    throw Error("unknown fit kind '" + s + "' (expected direct or envelope)");
}

decay::ScanKind parse_scan_kind(const std::string& s) {
    if (s == "average") return decay::ScanKind::Average;
    if (s == "average-surface") return decay::ScanKind::AverageSurface;
    if (s == "pointwise") return decay::ScanKind::Pointwise;
    if (s == "pointwise-surface") return decay::ScanKind::PointwiseSurface;
    throw Error("unknown scan kind '" + s + "'");
}

fourier::QuadratureSpec make_quad(double resonance_eps, double quad_c, int64_t max_nodes,
                                  uint64_t seed) {
    fourier::QuadratureSpec q;
    q.resonance_eps = resonance_eps;
    q.c = quad_c;
    q.max_nodes = max_nodes;
    q.seed = seed;
    return q;
}

Mat mat_from_rows(const std::vector<Vec>& rows) {
    Mat m;
    m.n = static_cast<int>(rows.size());
    m.a.reserve(static_cast<size_t>(m.n) * m.n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != m.n) throw Error("orientation matrix must be square");
        m.a.insert(m.a.end(), row.begin(), row.end());
    }
    return m;
}

std::vector<Vec> mat_rows(const Mat& m) {
    std::vector<Vec> rows(static_cast<size_t>(m.n), Vec(static_cast<size_t>(m.n)));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = m(i, j);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fourier decay of convex-body indicators: transforms, spherical averages, "
              "power-law fits, and lattice-point discrepancy";

    py::register_exception<Error>(m, "FtdecayError");

    py::class_<Rotation>(m, "Rotation")
        .def_property_readonly("d", &Rotation::dim)
        .def("matrix", [](const Rotation& r) { return mat_rows(r.m); },
             "Rotation matrix as a list of rows")
        .def("__repr__", [](const Rotation& r) {
            return "<Rotation d=" + std::to_string(r.dim()) + ">";
        });

    m.def("rotation_2d", &geometry::rotation_2d, py::arg("angle"),
          "Counterclockwise planar rotation by the given angle");
    m.def("rotation_from_quaternion", &geometry::rotation_from_quaternion, py::arg("w"),
          py::arg("x"), py::arg("y"), py::arg("z"),
          "3-d rotation from a (not necessarily unit) quaternion");
    m.def("make_rotation",
          [](const std::vector<Vec>& rows) { return geometry::make_rotation(mat_from_rows(rows)); },
          py::arg("rows"), "Rotation from an explicit orthogonal matrix (rows), det +1");

    py::class_<ConvexBody, std::shared_ptr<ConvexBody>>(m, "Body")
        .def_readonly("d", &ConvexBody::d)
        .def_property_readonly("kind",
                               [](const ConvexBody& b) { return kind_name(b.kind); })
        .def("volume", &ConvexBody::volume)
        .def("surface_area", &ConvexBody::surface_area)
        .def("diameter", &ConvexBody::diameter)
        .def("support", &ConvexBody::support, py::arg("omega"),
             "Support function sup_{x in B} x.omega")
        .def("contains", &ConvexBody::contains, py::arg("x"))
        .def("defining", &ConvexBody::defining, py::arg("x"),
             "Convex defining function, <= 0 inside, 0 on the boundary")
        .def("normal_at", &ConvexBody::normal_at, py::arg("x"),
             "Outward unit normal at a boundary point")
        .def("is_smooth", &ConvexBody::is_smooth)
        .def("interior_point", &ConvexBody::interior_point)
        .def("__repr__", [](const ConvexBody& b) {
            return "<Body " + kind_name(b.kind) + " d=" + std::to_string(b.d) + ">";
        });

    m.def("make_ball",
          [](int d, double r, const Vec& center) {
              return center.empty() ? geometry::make_ball(d, r) : geometry::make_ball(d, r, center);
          },
          py::arg("d"), py::arg("r"), py::arg("center") = Vec{});
    m.def("make_ellipsoid",
          [](const Vec& semi_axes, const Vec& center, const std::vector<Vec>& orientation) {
              const int d = static_cast<int>(semi_axes.size());
              Vec c = center.empty() ? Vec(static_cast<size_t>(d), 0.0) : center;
              Mat o = orientation.empty() ? Mat::identity(d) : mat_from_rows(orientation);
              return geometry::make_ellipsoid(semi_axes, c, o);
          },
          py::arg("semi_axes"), py::arg("center") = Vec{},
          py::arg("orientation") = std::vector<Vec>{},
          "Ellipsoid with principal directions given by the orientation matrix columns");
    m.def("make_axis_box",
          [](const Vec& half_widths, const Vec& center) {
              return center.empty() ? geometry::make_axis_box(half_widths)
                                    : geometry::make_axis_box(half_widths, center);
          },
          py::arg("half_widths"), py::arg("center") = Vec{});
    m.def("make_pball",
          [](int d, double p, double r, const Vec& center) {
              return center.empty() ? geometry::make_pball(d, p, r)
                                    : geometry::make_pball(d, p, r, center);
          },
          py::arg("d"), py::arg("p"), py::arg("r"), py::arg("center") = Vec{},
          "l^p unit-ball scaled by r, p >= 1");
    m.def("make_polytope_h", &geometry::make_polytope_h, py::arg("normals"), py::arg("offsets"),
          "Bounded polytope {x : n_i.x <= c_i} from unit facet normals and offsets");
    m.def("parse_body", &bodyspec::parse_body, py::arg("spec"),
          "Parse the CLI body mini-language, e.g. 'ball:d=2,r=1' or 'poly:file=PATH'");
    m.def("rotate", &geometry::rotate, py::arg("body"), py::arg("rot"),
          "Rotated copy of the body (exact representation where one exists)");

    py::class_<BoundaryPatch>(m, "BoundaryPatch")
        .def_readonly("axis", &BoundaryPatch::axis)
        .def_readonly("aperture", &BoundaryPatch::aperture)
        .def_readonly("lipschitz", &BoundaryPatch::lipschitz)
        .def_readonly("base_offset", &BoundaryPatch::base_offset)
        .def_readonly("tangent", &BoundaryPatch::tangent)
        .def_readonly("dom_lo", &BoundaryPatch::dom_lo)
        .def_readonly("dom_hi", &BoundaryPatch::dom_hi)
        .def("__repr__", [](const BoundaryPatch& p) {
            return "<BoundaryPatch K=" + std::to_string(p.lipschitz) + ">";
        });

    m.def("decompose_boundary", &geometry::decompose_boundary, py::arg("body"),
          py::call_guard<py::gil_scoped_release>(),
          "Gauss-map cone decomposition of the boundary into Lipschitz graph patches");
    m.def("check_secant_property", &geometry::check_secant_property, py::arg("patch"),
          py::arg("n_pairs"), py::arg("seed"), py::call_guard<py::gil_scoped_release>(),
          "Max sampled secant slope against the patch axis; < 1/sqrt(2) passes");
    m.def("check_c32", &geometry::check_c32, py::arg("body"), py::arg("patch"),
          py::arg("n_pairs"), py::arg("seed"), py::call_guard<py::gil_scoped_release>(),
          "Empirical C^{3/2} constant of the patch");

    py::class_<fourier::FtValue>(m, "FtValue")
        .def_readonly("value", &fourier::FtValue::value)
        .def_readonly("err", &fourier::FtValue::err)
        .def_property_readonly("method",
                               [](const fourier::FtValue& v) { return method_name(v.method); })
        .def("__repr__", [](const fourier::FtValue& v) {
            return "<FtValue " + std::to_string(v.value.real()) +
                   (v.value.imag() < 0 ? "-" : "+") + std::to_string(std::abs(v.value.imag())) +
                   "i " + method_name(v.method) + ">";
        });

    m.def("ft",
          [](const BodyPtr& b, const Vec& xi, double resonance_eps, double quad_c,
             int64_t max_nodes, uint64_t seed) {
              return fourier::ft(b, xi, make_quad(resonance_eps, quad_c, max_nodes, seed));
          },
          py::arg("body"), py::arg("xi"), py::arg("resonance_eps") = 1e-6,
          py::arg("quad_c") = 8.0, py::arg("max_nodes") = int64_t(1) << 27,
          py::arg("seed") = 2026, py::call_guard<py::gil_scoped_release>(),
          "Indicator transform chi-hat(xi); closed form, exact recursion, or quadrature");
    m.def("ft_surface_measure",
          [](const BodyPtr& b, const Vec& xi, double resonance_eps, double quad_c,
             int64_t max_nodes, uint64_t seed) {
              return fourier::ft_surface_measure(b, xi,
                                                 make_quad(resonance_eps, quad_c, max_nodes, seed));
          },
          py::arg("body"), py::arg("xi"), py::arg("resonance_eps") = 1e-6,
          py::arg("quad_c") = 8.0, py::arg("max_nodes") = int64_t(1) << 27,
          py::arg("seed") = 2026, py::call_guard<py::gil_scoped_release>(),
          "Surface-measure transform sigma-hat(xi)");

    m.def("l2_average",
          [](const BodyPtr& b, double R, int n, uint64_t seed, bool surface) {
              auto scheme = sphere::default_scheme(b->d, R, seed);
              if (n > 0) scheme.n = n;
              auto r = surface ? sphere::l2_average_surface(b, R, scheme)
                               : sphere::l2_average(b, R, scheme);
              return std::make_pair(r.value, r.se);
          },
          py::arg("body"), py::arg("R"), py::arg("n") = 0, py::arg("seed") = 2026,
          py::arg("surface") = false, py::call_guard<py::gil_scoped_release>(),
          "Spherical L2 average sqrt(mean |f(R w)|^2) and its jackknife SE");

    py::class_<decay::ScanPoint>(m, "ScanPoint")
        .def(py::init([](double R, double value, double se, bool ok) {
                 return decay::ScanPoint{R, value, se, ok};
             }),
             py::arg("R"), py::arg("value"), py::arg("se") = 0.0, py::arg("ok") = true)
        .def_readonly("R", &decay::ScanPoint::R)
        .def_readonly("value", &decay::ScanPoint::value)
        .def_readonly("se", &decay::ScanPoint::se)
        .def_readonly("ok", &decay::ScanPoint::ok)
        .def("__repr__", [](const decay::ScanPoint& p) {
            return "<ScanPoint R=" + std::to_string(p.R) + " value=" + std::to_string(p.value) +
                   ">";
        });

    py::class_<decay::ScanSeries>(m, "ScanSeries")
        .def_readonly("points", &decay::ScanSeries::points)
        .def_readonly("floor", &decay::ScanSeries::floor);

    py::class_<decay::FitResult>(m, "FitResult")
        .def_readonly("exponent", &decay::FitResult::exponent)
        .def_readonly("intercept", &decay::FitResult::intercept)
        .def_readonly("rms", &decay::FitResult::rms)
        .def_readonly("n_used", &decay::FitResult::n_used)
        .def("__repr__", [](const decay::FitResult& f) {
            return "<FitResult exponent=" + std::to_string(f.exponent) + " n_used=" +
                   std::to_string(f.n_used) + ">";
        });

    m.def("log_grid", &decay::log_grid, py::arg("rmin"), py::arg("rmax"), py::arg("ppo"),
          "Geometric grid with ppo points per octave");

    m.def("scan",
          [](const BodyPtr& b, double rmin, double rmax, int ppo, const std::string& kind,
             const Vec& omega, int ndir, uint64_t seed, int jobs) {
              decay::ScanOptions opt;
              opt.kind = parse_scan_kind(kind);
              opt.omega = omega;
              opt.ndir = ndir;
              opt.seed = seed;
              opt.jobs = jobs;
              return decay::scan(b, rmin, rmax, ppo, opt);
          },
          py::arg("body"), py::arg("rmin"), py::arg("rmax"), py::arg("ppo"),
          py::arg("kind") = "average", py::arg("omega") = Vec{}, py::arg("ndir") = 0,
          py::arg("seed") = 2026, py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "Decay scan on a geometric R grid; kind is average, average-surface, pointwise, "
          "or pointwise-surface");

    m.def("fit_points",
          [](const std::vector<decay::ScanPoint>& pts, double floor, const std::string& kind) {
              return decay::fit_points(pts, floor, parse_fit_kind(kind));
          },
          py::arg("points"), py::arg("floor") = 0.0, py::arg("kind") = "direct",
          "Log-log OLS power-law fit of (R, value) samples above the floor");
    m.def("fit_exponent",
          [](const decay::ScanSeries& s, const std::string& kind) {
              return decay::fit_exponent(s, parse_fit_kind(kind));
          },
          py::arg("series"), py::arg("kind") = "envelope",
          "Power-law fit of a scan series; envelope keeps strict local maxima");

    py::class_<lattice::LatticeSample>(m, "LatticeSample")
        .def_readonly("t", &lattice::LatticeSample::t)
        .def_readonly("rot_index", &lattice::LatticeSample::rot_index)
        .def_readonly("count", &lattice::LatticeSample::count)
        .def_readonly("discrepancy", &lattice::LatticeSample::discrepancy);

    py::class_<lattice::LatticeSeries>(m, "LatticeSeries")
        .def_readonly("tgrid", &lattice::LatticeSeries::tgrid)
        .def_readonly("samples", &lattice::LatticeSeries::samples)
        .def_readonly("rms", &lattice::LatticeSeries::rms);

    m.def("count_points",
          [](const BodyPtr& b, double t, const std::optional<Rotation>& rot) {
              return lattice::count_points(b, t, rot ? *rot : Rotation::identity(b->d));
          },
          py::arg("body"), py::arg("t"), py::arg("rot") = std::nullopt,
          py::call_guard<py::gil_scoped_release>(),
          "Integer points in t * rot(B) by exact row scanning, d <= 3");

    m.def("rotational_l2",
          [](const BodyPtr& b, double tmin, double tmax, int ppo, int nrot, uint64_t seed,
             const std::string& ensemble, int jobs) {
              lattice::RotationEnsemble ens;
              if (ensemble == "haar") ens = lattice::RotationEnsemble::Haar;
              else if (ensemble == "axis-angle") ens = lattice::RotationEnsemble::AxisAngle;
              else throw Error("unknown ensemble '" + ensemble + "'");
              return lattice::rotational_l2(b, tmin, tmax, ppo, nrot, seed, ens, jobs);
          },
          py::arg("body"), py::arg("tmin"), py::arg("tmax"), py::arg("ppo"), py::arg("nrot"),
          py::arg("seed") = 2026, py::arg("ensemble") = "haar", py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "RMS lattice discrepancy over a rotation ensemble on a geometric t grid");
    m.def("lattice_fit",
          [](const lattice::LatticeSeries& s, const std::string& kind) {
              return lattice::fit(s, parse_fit_kind(kind));
          },
          py::arg("series"), py::arg("kind") = "direct",
          "Power-law fit of the RMS discrepancy series");

    m.def("run_checks",
          [](bool quick, uint64_t seed) {
              std::vector<std::tuple<std::string, bool, std::string>> rows;
              for (const auto& c : checks::run_checks(quick, seed))
                  rows.emplace_back(c.name, c.pass, c.detail);
              return rows;
          },
          py::arg("quick") = false, py::arg("seed") = 2026,
          py::call_guard<py::gil_scoped_release>(),
          "Cross-module invariant suite; returns (name, pass, detail) rows");
}
