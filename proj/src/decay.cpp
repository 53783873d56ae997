#include "ftdecay/decay.hpp"

#include <cmath>

#include "ftdecay/parallel.hpp"

namespace ftdecay::decay {

std::vector<double> log_grid(double rmin, double rmax, int ppo) {
    if (!(rmin > 0.0) || !(rmax > rmin)) throw Error("log_grid: need 0 < rmin < rmax");
    if (ppo < 1) throw Error("log_grid: points per octave must be >= 1");
    int K = std::max<int>(1, static_cast<int>(std::llround(ppo * std::log2(rmax / rmin))));
    std::vector<double> grid(K + 1);
    for (int k = 0; k <= K; ++k) grid[k] = rmin * std::pow(rmax / rmin, static_cast<double>(k) / K);
    return grid;
}

ScanSeries scan(const BodyPtr& b, double rmin, double rmax, int ppo, const ScanOptions& opt) {
    std::vector<double> grid = log_grid(rmin, rmax, ppo);
    bool surface = opt.kind == ScanKind::AverageSurface || opt.kind == ScanKind::PointwiseSurface;
    bool pointwise = opt.kind == ScanKind::Pointwise || opt.kind == ScanKind::PointwiseSurface;

    Vec omega = opt.omega;
    if (pointwise) {
        if (omega.empty()) {
            omega.assign(b->d, 0.0);
            omega[0] = 1.0;
        }
        if (static_cast<int>(omega.size()) != b->d)
            throw Error("scan: pointwise direction dimension mismatch");
        double len = norm2(omega);
        if (len < 1e-12) throw Error("scan: pointwise direction must be nonzero");
        omega = scaled(omega, 1.0 / len);
    }

    ScanSeries series;
    series.floor = 1e-14 * (surface ? b->surface_area() : b->volume());
    series.points.resize(grid.size());

    detail::parallel_for(static_cast<int64_t>(grid.size()), opt.jobs, [&](int64_t i) {
        double R = grid[i];
        ScanPoint pt;
        pt.R = R;
        if (pointwise) {
            Vec xi = scaled(omega, R);
            fourier::FtValue v =
                surface ? fourier::ft_surface_measure(b, xi, opt.quad) : fourier::ft(b, xi, opt.quad);
            pt.value = std::abs(v.value);
            pt.se = v.err;
        } else {
            sphere::SphereScheme scheme = sphere::default_scheme(b->d, R, opt.seed);
            if (opt.scheme_kind) scheme.kind = *opt.scheme_kind;
            if (opt.ndir > 0) scheme.n = opt.ndir;
            // Fresh substream per grid point so direction noise is independent.
            scheme.seed = rng::splitmix64(opt.seed ^ (0x9E3779B97F4A7C15ull + static_cast<uint64_t>(i)));
            sphere::AvgResult r = surface ? sphere::l2_average_surface(b, R, scheme, opt.quad)
                                          : sphere::l2_average(b, R, scheme, opt.quad);
            pt.value = r.value;
            pt.se = r.se;
        }
        pt.ok = pt.value > series.floor;
        series.points[i] = pt;
    });
    return series;
}

FitResult fit_points(const std::vector<ScanPoint>& pts, double floor, FitKind kind) {
    std::vector<ScanPoint> usable;
    usable.reserve(pts.size());
    for (const ScanPoint& p : pts)
        if (p.value > floor) usable.push_back(p);
    if (usable.empty()) throw AllZeros("fit: every scan value is at or below the floor");

    std::vector<ScanPoint> sel;
    if (kind == FitKind::Direct) {
        sel = usable;
    } else {
        for (size_t i = 1; i + 1 < usable.size(); ++i)
            if (usable[i].value > usable[i - 1].value && usable[i].value > usable[i + 1].value)
                sel.push_back(usable[i]);
    }
    if (sel.size() < 8)
        throw InsufficientData(kind == FitKind::Direct
                                   ? "fit: fewer than 8 points above the floor"
                                   : "fit: fewer than 8 envelope maxima above the floor");

    double n = static_cast<double>(sel.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const ScanPoint& p : sel) {
        double x = std::log(p.R), y = std::log(p.value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-30) throw InsufficientData("fit: degenerate abscissa spread");
    FitResult res;
    res.exponent = (n * sxy - sx * sy) / denom;
    res.intercept = (sy - res.exponent * sx) / n;
    double ssr = 0.0;
    for (const ScanPoint& p : sel) {
        double r = std::log(p.value) - (res.intercept + res.exponent * std::log(p.R));
        ssr += r * r;
    }
    res.rms = std::sqrt(ssr / n);
    res.n_used = static_cast<int>(sel.size());
    return res;
}

FitResult fit_exponent(const ScanSeries& s, FitKind kind) {
    return fit_points(s.points, s.floor, kind);
}

}  // namespace ftdecay::decay
