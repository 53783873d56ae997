#include "ftdecay/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace ftdecay::sphere {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Root of x^{d+1} = x + 1 (the "harmonious" constant of the R_d sequence).
double kronecker_root(int d) {
    double x = 1.5;
    for (int it = 0; it < 64; ++it) {
        double f = std::pow(x, d + 1) - x - 1.0;
        double fp = (d + 1) * std::pow(x, d) - 1.0;
        x -= f / fp;
    }
    return x;
}

}  // namespace

double inverse_normal_cdf(double p) {
    // Acklam's algorithm, absolute error below 1.15e-9 on (0, 1).
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (!(p > 0.0 && p < 1.0)) throw Error("inverse_normal_cdf: p must be in (0,1)");
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

SphereScheme default_scheme(int d, double R, uint64_t seed) {
    SphereScheme s;
    s.d = d;
    s.seed = seed;
    if (d == 2) {
        s.kind = SchemeKind::UniformAngle;
        s.n = std::max(4096, static_cast<int>(std::ceil(8.0 * R)));
    } else {
        s.kind = SchemeKind::LowDiscrepancy;
        s.n = 1 << 14;
    }
    return s;
}

std::vector<Vec> sample_directions(const SphereScheme& scheme) {
    int d = scheme.d;
    int n = scheme.n;
    if (d < 2) throw Error("sample_directions: d must be >= 2");
    if (n < 1) throw Error("sample_directions: n must be >= 1");
    std::vector<Vec> out;
    out.reserve(n);
    if (scheme.kind == SchemeKind::UniformAngle) {
        if (d != 2) throw Error("sample_directions: UniformAngle requires d = 2");
        for (int i = 0; i < n; ++i) {
            double al = 2.0 * kPi * i / n;
            out.push_back(Vec{std::cos(al), std::sin(al)});
        }
        return out;
    }
    if (scheme.kind == SchemeKind::MonteCarlo) {
        rng::Stream st = rng::make_stream(scheme.seed, "sphere-mc-directions", 0);
        for (int i = 0; i < n; ++i) {
            Vec w(d);
            double len = 0.0;
            do {
                len = 0.0;
                for (int k = 0; k < d; ++k) {
                    w[k] = st.gaussian();
                    len += w[k] * w[k];
                }
            } while (len < 1e-24);
            out.push_back(scaled(w, 1.0 / std::sqrt(len)));
        }
        return out;
    }
    // Kronecker (R_d) sequence with a Cranley-Patterson shift, mapped to the
    // sphere through independent inverse-normal coordinates.
    double phi = kronecker_root(d);
    Vec alpha(d);
    double inv = 1.0;
    for (int k = 0; k < d; ++k) {
        inv /= phi;
        alpha[k] = inv;
    }
    rng::Stream st = rng::make_stream(scheme.seed, "sphere-ld-shift", 0);
    Vec shift(d);
    for (int k = 0; k < d; ++k) shift[k] = st.uniform();
    for (int i = 0; i < n; ++i) {
        Vec w(d);
        double len = 0.0;
        for (int k = 0; k < d; ++k) {
            double u = shift[k] + (i + 1.0) * alpha[k];
            u -= std::floor(u);
            u = std::clamp(u, 1e-16, 1.0 - 1e-16);
            w[k] = inverse_normal_cdf(u);
            len += w[k] * w[k];
        }
        if (len < 1e-24) {
            w[0] = 1.0;
            len = 1.0;
        }
        out.push_back(scaled(w, 1.0 / std::sqrt(len)));
    }
    return out;
}

namespace {

AvgResult average_of(const BodyPtr& b, double R, const SphereScheme& scheme,
                     const fourier::QuadratureSpec& quad, bool surface) {
    std::vector<Vec> dirs = sample_directions(scheme);
    fourier::BatchResult batch = fourier::ft_batch(b, R, dirs, quad, surface);
    size_t n = dirs.size();
    double total = 0.0;
    for (const auto& v : batch.values) total += std::norm(v);
    AvgResult res;
    res.value = std::sqrt(total / n);
    int nblocks = static_cast<int>(std::min<size_t>(10, n));
    if (nblocks < 2) {
        res.se = 0.0;
        return res;
    }
    std::vector<double> bsum(nblocks, 0.0);
    std::vector<int64_t> bcnt(nblocks, 0);
    for (size_t j = 0; j < n; ++j) {
        bsum[j % nblocks] += std::norm(batch.values[j]);
        ++bcnt[j % nblocks];
    }
    std::vector<double> ak(nblocks);
    double amean = 0.0;
    for (int k = 0; k < nblocks; ++k) {
        ak[k] = std::sqrt((total - bsum[k]) / (n - bcnt[k]));
        amean += ak[k] / nblocks;
    }
    double ss = 0.0;
    for (int k = 0; k < nblocks; ++k) ss += (ak[k] - amean) * (ak[k] - amean);
    res.se = std::sqrt(ss * (nblocks - 1.0) / nblocks);
    return res;
}

}  // namespace

AvgResult l2_average(const BodyPtr& b, double R, const SphereScheme& scheme,
                     const fourier::QuadratureSpec& quad) {
    return average_of(b, R, scheme, quad, false);
}

AvgResult l2_average_surface(const BodyPtr& b, double R, const SphereScheme& scheme,
                             const fourier::QuadratureSpec& quad) {
    return average_of(b, R, scheme, quad, true);
}

}  // namespace ftdecay::sphere
