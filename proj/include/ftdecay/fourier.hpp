#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "ftdecay/geometry.hpp"

namespace ftdecay::fourier {

using geometry::BodyPtr;
using geometry::ConvexBody;
using Cplx = std::complex<double>;

enum class Method { ClosedForm, ExactRecursion, BoundaryQuadrature, MonteCarlo };

struct FtValue {
    Cplx value{0.0, 0.0};
    Method method = Method::ClosedForm;
    double err = 0.0;  // reported error estimate; 0 for exact methods
};

// Boundary quadrature controls. Node spacing is h_eff = min(h, 2*pi/(c*|xi|)),
// keeping at least c nodes per oscillation wavelength.
struct QuadratureSpec {
    double h = 0.05;
    double c = 8.0;
    double resonance_eps = 1e-6;
    int64_t max_nodes = int64_t(1) << 27;
    int64_t mc_n = 200000;
    uint64_t seed = 2026;
};

// Closed forms (error-free): indicator transforms of balls/ellipsoids and
// axis boxes, and the surface transform of the sphere.
Cplx ft_closed_ball(const ConvexBody& b, const Vec& xi);    // Ball or Ellipsoid
Cplx ft_closed_box(const ConvexBody& b, const Vec& xi);     // AxisBox
Cplx ft_closed_sphere_surface(const ConvexBody& b, const Vec& xi);  // Ball boundary

// Exact distributional recursion for the polytope indicator transform.
// Near-resonant faces (|xi_F| <= resonance_eps * |xi|) fall back to direct
// face quadrature on a refined midpoint grid.
Cplx ft_polytope_exact(const ConvexBody& b, const Vec& xi, double resonance_eps = 1e-6);

// Surface transform of a polytope boundary (sum of exact face integrals).
Cplx ft_polytope_surface_exact(const ConvexBody& b, const Vec& xi, double resonance_eps = 1e-6);

// Divergence-theorem boundary quadrature of the indicator transform:
//   chi-hat(xi) = (i/|xi|^2) * Int_{dB} (xi . n(x)) e^{-i x.xi} dsigma(x).
// err is the Richardson estimate |I_h - I_{h/2}|; the returned value is the
// fine-grid sweep. Throws QuadratureBudgetExceeded past spec.max_nodes.
FtValue ft_boundary_divergence(const BodyPtr& b, const Vec& xi, const QuadratureSpec& spec = {});

// Surface-measure transform sigma-hat(xi) = Int_{dB} e^{-i x.xi} dsigma(x).
// Dispatches to closed/exact forms where available, boundary quadrature else.
FtValue ft_surface_measure(const BodyPtr& b, const Vec& xi, const QuadratureSpec& spec = {});

// Indicator transform dispatch: closed form for ball/ellipsoid/box, exact
// recursion for polytopes (and l1-balls), boundary quadrature otherwise.
FtValue ft(const BodyPtr& b, const Vec& xi, const QuadratureSpec& spec = {});

// Batch evaluation at xi_j = R * dirs[j] with a single streaming sweep over
// boundary nodes (plus one coarse sweep for the shared error estimate).
// surface = true evaluates sigma-hat instead of chi-hat. The same dispatch
// rules as ft / ft_surface_measure apply per body; closed-form and exact
// bodies are evaluated per direction.
struct BatchResult {
    std::vector<Cplx> values;
    double err = 0.0;
    Method method = Method::ClosedForm;
};
BatchResult ft_batch(const BodyPtr& b, double R, const std::vector<Vec>& dirs,
                     const QuadratureSpec& spec = {}, bool surface = false);

// Plain Monte Carlo volume-integral oracle with a standard-error estimate
// (err is one SE of the complex estimator).
FtValue ft_mc_oracle(const BodyPtr& b, const Vec& xi, int64_t n, uint64_t seed);

}  // namespace ftdecay::fourier
