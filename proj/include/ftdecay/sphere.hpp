#pragma once

#include <cstdint>
#include <vector>

#include "ftdecay/fourier.hpp"
#include "ftdecay/geometry.hpp"

namespace ftdecay::sphere {

using geometry::BodyPtr;

enum class SchemeKind {
    UniformAngle,    // d = 2: equispaced angles (exact for band-limited integrands)
    LowDiscrepancy,  // d >= 3: Kronecker sequence + inverse-normal map + shift
    MonteCarlo,
};

struct SphereScheme {
    int d = 2;
    SchemeKind kind = SchemeKind::UniformAngle;
    int n = 0;
    uint64_t seed = 2026;
};

// Pipeline defaults: d = 2 equispaced with N = max(4096, ceil(8R));
// d >= 3 low-discrepancy with N = 2^14.
SphereScheme default_scheme(int d, double R, uint64_t seed = 2026);

// Unit directions; deterministic for a given scheme.
std::vector<Vec> sample_directions(const SphereScheme& scheme);

struct AvgResult {
    double value = 0.0;  // sqrt(mean |f(R w)|^2) over the scheme's directions
    double se = 0.0;     // 10-block delete-jackknife standard error of value
};

// Spherical L2 average of the indicator transform at radius R.
AvgResult l2_average(const BodyPtr& b, double R, const SphereScheme& scheme,
                     const fourier::QuadratureSpec& quad = {});

// Same for the surface-measure transform.
AvgResult l2_average_surface(const BodyPtr& b, double R, const SphereScheme& scheme,
                             const fourier::QuadratureSpec& quad = {});

// Inverse of the standard normal CDF (Acklam's rational approximation),
// used to push low-discrepancy points to gaussians. Exposed for tests.
double inverse_normal_cdf(double p);

}  // namespace ftdecay::sphere
