#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ftdecay/fourier.hpp"
#include "ftdecay/sphere.hpp"

namespace ftdecay::decay {

using geometry::BodyPtr;

enum class FitKind { Direct, Envelope };
enum class ScanKind { Average, AverageSurface, Pointwise, PointwiseSurface };

struct ScanPoint {
    double R = 0.0;
    double value = 0.0;
    double se = 0.0;
    bool ok = false;  // value strictly above the numerical floor
};

struct ScanSeries {
    std::vector<ScanPoint> points;
    double floor = 0.0;
};

// Geometric grid rmin * (rmax/rmin)^{k/K}, k = 0..K, with
// K = max(1, round(ppo * log2(rmax/rmin))) points per octave density.
std::vector<double> log_grid(double rmin, double rmax, int ppo);

struct ScanOptions {
    ScanKind kind = ScanKind::Average;
    Vec omega;    // pointwise direction; empty selects the first axis
    int ndir = 0;  // direction count override; 0 keeps the pipeline default
    std::optional<sphere::SchemeKind> scheme_kind;  // override; default by dimension
    uint64_t seed = 2026;
    int jobs = 1;
    fourier::QuadratureSpec quad{};
};

// Evaluates the requested quantity on the grid. The floor is
// 1e-14 * |B| for indicator quantities and 1e-14 * area(dB) for surface ones.
ScanSeries scan(const BodyPtr& b, double rmin, double rmax, int ppo, const ScanOptions& opt);

struct FitResult {
    double exponent = 0.0;
    double intercept = 0.0;  // natural-log intercept
    double rms = 0.0;        // sqrt(SSR / n) of the log-log residuals
    int n_used = 0;
};

// Log-log OLS. Direct uses every point above the floor; Envelope keeps only
// strict local maxima of the floor-filtered sequence. Throws AllZeros when
// nothing clears the floor and InsufficientData below 8 usable points/maxima.
FitResult fit_points(const std::vector<ScanPoint>& pts, double floor, FitKind kind);
FitResult fit_exponent(const ScanSeries& s, FitKind kind);

}  // namespace ftdecay::decay
