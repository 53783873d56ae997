#include "ftdecay/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "ftdecay/parallel.hpp"

namespace ftdecay::lattice {

namespace {

using geometry::BodyKind;

struct Scanner {
    const geometry::ConvexBody& b;
    const Mat& rotm;
    double t;

    bool member(const Vec& y) const {
        Vec x = mattvec(rotm, y);
        for (double& v : x) v /= t;
        return b.defining(x) <= 0.0;
    }

    // Integer count within [root_lo, root_hi] along one axis, with endpoints
    // re-verified by exact membership.
    int64_t axis_count(Vec y, int axis, double root_lo, double root_hi) const {
        int64_t lo = static_cast<int64_t>(std::ceil(root_lo - 1e-9));
        int64_t hi = static_cast<int64_t>(std::floor(root_hi + 1e-9));
        auto has = [&](int64_t n) {
            y[axis] = static_cast<double>(n);
            return member(y);
        };
        for (int k = 0; k < 4 && has(lo - 1); ++k) --lo;
        for (int k = 0; k < 4 && hi >= lo && !has(hi); ++k) --hi;
        for (int k = 0; k < 4 && has(hi + 1); ++k) ++hi;
        for (int k = 0; k < 4 && lo <= hi && !has(lo); ++k) ++lo;
        return hi >= lo ? hi - lo + 1 : 0;
    }

    // Roots of the convex slice g(s) = defining along `axis` at base point y.
    // Returns false if no negative value was found; rlo/rhi then hold the
    // minimizer estimate so callers can probe tangencies narrower than the
    // search resolution (a slice grazing the body in a single point).
    bool slice_roots(Vec y, int axis, double blo, double bhi, double& rlo, double& rhi) const {
        auto g = [&](double s) {
            y[axis] = s;
            Vec x = mattvec(rotm, y);
            for (double& v : x) v /= t;
            return b.defining(x);
        };
        double a = blo, c = bhi;
        for (int it = 0; it < 90; ++it) {
            double m1 = a + (c - a) / 3.0, m2 = c - (c - a) / 3.0;
            if (g(m1) <= g(m2)) c = m2;
            else a = m1;
        }
        double xm = 0.5 * (a + c);
        if (g(xm) > 0.0) {
            rlo = rhi = xm;
            return false;
        }
        double u = blo, v = xm;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (u + v);
            if (g(mid) <= 0.0) v = mid;
            else u = mid;
        }
        rlo = v;
        u = xm;
        v = bhi;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (u + v);
            if (g(mid) <= 0.0) u = mid;
            else v = mid;
        }
        rhi = u;
        return true;
    }
};

}  // namespace

int64_t count_points(const BodyPtr& b, double t, const Rotation& rot) {
    int d = b->d;
    if (!(t > 0.0)) throw Error("count_points: t must be positive");
    if (rot.dim() != d) throw Error("count_points: rotation dimension mismatch");
    if (d > 3) throw DimensionUnsupported("count_points: row scanning supports d <= 3");

    // Bounding box of t * rot(B): support along +-e_i is t * h_B(rot^T e_i).
    Vec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        hi[i] = t * b->support(mattvec(rot.m, e));
        e[i] = -1.0;
        lo[i] = -t * b->support(mattvec(rot.m, e));
    }
    Scanner sc{*b, rot.m, t};

    bool ball = b->kind == BodyKind::Ball;
    Vec ball_c;
    double ball_w = 0.0;
    if (ball) {
        ball_c = scaled(matvec(rot.m, b->center), t);
        ball_w = t * b->radius;
    }

    int64_t total = 0;
    int64_t x1_lo = static_cast<int64_t>(std::ceil(lo[0] - 1e-9));
    int64_t x1_hi = static_cast<int64_t>(std::floor(hi[0] + 1e-9));
    if (d == 2) {
        for (int64_t x1 = x1_lo; x1 <= x1_hi; ++x1) {
            Vec y{static_cast<double>(x1), 0.0};
            double rlo, rhi;
            if (ball) {
                double disc = ball_w * ball_w - (x1 - ball_c[0]) * (x1 - ball_c[0]);
                if (disc < 0.0) continue;
                double s = std::sqrt(disc);
                rlo = ball_c[1] - s;
                rhi = ball_c[1] + s;
            } else if (!sc.slice_roots(y, 1, lo[1] - 1.5, hi[1] + 1.5, rlo, rhi)) {
                y[1] = std::round(rlo);
                if (sc.member(y)) ++total;
                continue;
            }
            total += sc.axis_count(y, 1, rlo, rhi);
        }
        return total;
    }
    int64_t x2_lo = static_cast<int64_t>(std::ceil(lo[1] - 1e-9));
    int64_t x2_hi = static_cast<int64_t>(std::floor(hi[1] + 1e-9));
    for (int64_t x1 = x1_lo; x1 <= x1_hi; ++x1)
        for (int64_t x2 = x2_lo; x2 <= x2_hi; ++x2) {
            Vec y{static_cast<double>(x1), static_cast<double>(x2), 0.0};
            double rlo, rhi;
            if (ball) {
                double disc = ball_w * ball_w - (x1 - ball_c[0]) * (x1 - ball_c[0]) -
                              (x2 - ball_c[1]) * (x2 - ball_c[1]);
                if (disc < 0.0) continue;
                double s = std::sqrt(disc);
                rlo = ball_c[2] - s;
                rhi = ball_c[2] + s;
            } else if (!sc.slice_roots(y, 2, lo[2] - 1.5, hi[2] + 1.5, rlo, rhi)) {
                y[2] = std::round(rlo);
                if (sc.member(y)) ++total;
                continue;
            }
            total += sc.axis_count(y, 2, rlo, rhi);
        }
    return total;
}

LatticeSeries rotational_l2(const BodyPtr& b, double tmin, double tmax, int ppo, int nrot,
                            uint64_t seed, RotationEnsemble ensemble, int jobs) {
    if (nrot < 1) throw Error("rotational_l2: need at least one rotation");
    int d = b->d;
    LatticeSeries series;
    series.tgrid = decay::log_grid(tmin, tmax, ppo);

    rng::Stream st = rng::make_stream(seed, "lattice-rotations", 0);
    std::vector<Rotation> rots;
    rots.reserve(nrot);
    for (int r = 0; r < nrot; ++r) {
        if (ensemble == RotationEnsemble::Haar) {
            rots.push_back(geometry::random_rotation(d, st));
        } else {
            if (d != 3) throw Error("rotational_l2: axis-angle ensemble requires d = 3");
            Vec axis(3);
            double len = 0.0;
            do {
                len = 0.0;
                for (int k = 0; k < 3; ++k) {
                    axis[k] = st.gaussian();
                    len += axis[k] * axis[k];
                }
            } while (len < 1e-24);
            len = std::sqrt(len);
            const double half = 0.5;  // fixed angle 1.0 rad
            rots.push_back(geometry::rotation_from_quaternion(
                std::cos(half), std::sin(half) * axis[0] / len, std::sin(half) * axis[1] / len,
                std::sin(half) * axis[2] / len));
        }
    }

    double vol = b->volume();
    double area = b->surface_area();
    size_t nt = series.tgrid.size();
    series.samples.resize(nt * nrot);
    series.rms.resize(nt);

    detail::parallel_for(static_cast<int64_t>(nt), jobs, [&](int64_t i) {
        double t = series.tgrid[i];
        double ssum = 0.0;
        std::vector<double> bsum(std::min(10, nrot), 0.0);
        std::vector<int> bcnt(std::min(10, nrot), 0);
        for (int r = 0; r < nrot; ++r) {
            int64_t cnt = count_points(b, t, rots[r]);
            double disc = static_cast<double>(cnt) - std::pow(t, d) * vol;
            double envelope = 4.0 * d * area * std::pow(std::fmax(t, 1.0), d - 1) + 10.0;
            if (std::fabs(disc) > envelope)
                throw Error("rotational_l2: discrepancy violates the geometric envelope");
            series.samples[i * nrot + r] = {t, r, cnt, disc};
            ssum += disc * disc;
            bsum[r % bsum.size()] += disc * disc;
            ++bcnt[r % bcnt.size()];
        }
        decay::ScanPoint pt;
        pt.R = t;
        pt.value = std::sqrt(ssum / nrot);
        int nb = static_cast<int>(bsum.size());
        if (nb >= 2) {
            double amean = 0.0;
            std::vector<double> ak(nb);
            for (int k = 0; k < nb; ++k) {
                ak[k] = std::sqrt((ssum - bsum[k]) / std::max(1, nrot - bcnt[k]));
                amean += ak[k] / nb;
            }
            double ss = 0.0;
            for (int k = 0; k < nb; ++k) ss += (ak[k] - amean) * (ak[k] - amean);
            pt.se = std::sqrt(ss * (nb - 1.0) / nb);
        }
        pt.ok = pt.value > 1e-9;
        series.rms[i] = pt;
    });
    return series;
}

decay::FitResult fit(const LatticeSeries& s, decay::FitKind kind) {
    return decay::fit_points(s.rms, 1e-9, kind);
}

}  // namespace ftdecay::lattice
