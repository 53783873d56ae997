#include "ftdecay/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ftdecay::geometry {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;

double unit_ball_volume(int d) {
    return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double unit_sphere_area(int d) {
    return 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
}

double det_mat(const Mat& m) {
    int n = m.n;
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (n == 3)
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    // Gaussian elimination with partial pivoting for d >= 4.
    Mat a = m;
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(a(r, c)) > std::fabs(a(piv, c))) piv = r;
        if (std::fabs(a(piv, c)) < 1e-300) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (int r = c + 1; r < n; ++r) {
            double f = a(r, c) / a(c, c);
            for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

double pnorm(const Vec& y, double p) {
    if (p == 1.0) {
        double s = 0.0;
        for (double v : y) s += std::fabs(v);
        return s;
    }
    double m = 0.0;
    for (double v : y) m = std::fmax(m, std::fabs(v));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : y) s += std::pow(std::fabs(v) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double qnorm_dual(const Vec& y, double p) {
    if (p == 1.0) {
        double m = 0.0;
        for (double v : y) m = std::fmax(m, std::fabs(v));
        return m;
    }
    return pnorm(y, p / (p - 1.0));
}

}  // namespace

Rotation make_rotation(const Mat& m) {
    int n = m.n;
    if (n < 2) throw Error("rotation: dimension must be >= 2");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += m(k, i) * m(k, j);
            double want = i == j ? 1.0 : 0.0;
            if (std::fabs(s - want) > 1e-12) throw Error("rotation: columns not orthonormal");
        }
    if (std::fabs(det_mat(m) - 1.0) > 1e-12) throw Error("rotation: determinant must be +1");
    return Rotation{m};
}

Rotation rotation_2d(double angle) {
    Mat m = Mat::identity(2);
    double c = std::cos(angle), s = std::sin(angle);
    m(0, 0) = c; m(0, 1) = -s;
    m(1, 0) = s; m(1, 1) = c;
    return Rotation{m};
}

Rotation rotation_from_quaternion(double w, double x, double y, double z) {
    double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n; x /= n; y /= n; z /= n;
    Mat m = Mat::identity(3);
    m(0, 0) = 1 - 2 * (y * y + z * z); m(0, 1) = 2 * (x * y - z * w); m(0, 2) = 2 * (x * z + y * w);
    m(1, 0) = 2 * (x * y + z * w); m(1, 1) = 1 - 2 * (x * x + z * z); m(1, 2) = 2 * (y * z - x * w);
    m(2, 0) = 2 * (x * z - y * w); m(2, 1) = 2 * (y * z + x * w); m(2, 2) = 1 - 2 * (x * x + y * y);
    return Rotation{m};
}

Rotation random_rotation(int d, rng::Stream& stream) {
    if (d == 2) return rotation_2d(2.0 * kPi * stream.uniform());
    if (d == 3) {
        double w = stream.gaussian(), x = stream.gaussian();
        double y = stream.gaussian(), z = stream.gaussian();
        return rotation_from_quaternion(w, x, y, z);
    }
    throw DimensionUnsupported("random_rotation: d must be 2 or 3");
}

Rotation compose(const Rotation& a, const Rotation& b) { return Rotation{matmul(a.m, b.m)}; }

Rotation transpose(const Rotation& r) {
    Mat m = r.m;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) std::swap(m(i, j), m(j, i));
    return Rotation{m};
}

// ---------------------------------------------------------------------------
// ConvexBody methods

double ConvexBody::support(const Vec& omega) const {
    switch (kind) {
        case BodyKind::Ball:
            return dot(center, omega) + radius * norm2(omega);
        case BodyKind::Ellipsoid: {
            Vec qtw = mattvec(orientation, omega);
            for (int i = 0; i < d; ++i) qtw[i] *= semi_axes[i];
            return dot(center, omega) + norm2(qtw);
        }
        case BodyKind::AxisBox: {
            double s = dot(center, omega);
            for (int i = 0; i < d; ++i) s += half_widths[i] * std::fabs(omega[i]);
            return s;
        }
        case BodyKind::PBall: {
            Vec w = omega;
            return dot(center, omega) + radius * qnorm_dual(w, p);
        }
        case BodyKind::PolytopeH: {
            double best = -HUGE_VAL;
            for (const Vec& v : poly->vertices) best = std::fmax(best, dot(v, omega));
            return best;
        }
        case BodyKind::Rotated:
            return base->support(mattvec(rot.m, omega));
    }
    throw Error("support: unknown body kind");
}

double ConvexBody::defining(const Vec& x) const {
    switch (kind) {
        case BodyKind::Ball:
            return norm2(sub(x, center)) - radius;
        case BodyKind::Ellipsoid: {
            Vec u = mattvec(orientation, sub(x, center));
            for (int i = 0; i < d; ++i) u[i] /= semi_axes[i];
            return (norm2(u) - 1.0) * *std::min_element(semi_axes.begin(), semi_axes.end());
        }
        case BodyKind::AxisBox: {
            double m = -HUGE_VAL;
            for (int i = 0; i < d; ++i) m = std::fmax(m, std::fabs(x[i] - center[i]) - half_widths[i]);
            return m;
        }
        case BodyKind::PBall:
            return pnorm(sub(x, center), p) - radius;
        case BodyKind::PolytopeH: {
            double m = -HUGE_VAL;
            for (size_t i = 0; i < poly->normals.size(); ++i)
                m = std::fmax(m, dot(poly->normals[i], x) - poly->offsets[i]);
            return m;
        }
        case BodyKind::Rotated:
            return base->defining(mattvec(rot.m, x));
    }
    throw Error("defining: unknown body kind");
}

bool ConvexBody::contains(const Vec& x) const { return defining(x) <= 0.0; }

bool ConvexBody::is_smooth() const {
    return kind == BodyKind::Ball || kind == BodyKind::Ellipsoid ||
           (kind == BodyKind::PBall && p > 1.0 + 1e-12) ||
           (kind == BodyKind::Rotated && base->is_smooth());
}

double ConvexBody::radial_scale(const Vec& e) const {
    switch (kind) {
        case BodyKind::Ball:
            return radius / norm2(e);
        case BodyKind::Ellipsoid: {
            Vec u = mattvec(orientation, e);
            for (int i = 0; i < d; ++i) u[i] /= semi_axes[i];
            return 1.0 / norm2(u);
        }
        case BodyKind::PBall:
            return radius / pnorm(e, p);
        case BodyKind::Rotated:
            return base->radial_scale(mattvec(rot.m, e));
        default:
            throw Error("radial_scale: body is not smooth");
    }
}

Vec ConvexBody::gradient(const Vec& x) const {
    switch (kind) {
        case BodyKind::Ball:
            return normalized(sub(x, center));
        case BodyKind::Ellipsoid: {
            Vec u = mattvec(orientation, sub(x, center));
            for (int i = 0; i < d; ++i) u[i] /= semi_axes[i] * semi_axes[i];
            return matvec(orientation, u);
        }
        case BodyKind::PBall: {
            Vec y = sub(x, center);
            double np = pnorm(y, p);
            Vec g(d, 0.0);
            for (int i = 0; i < d; ++i) {
                double t = std::fabs(y[i]) / np;
                g[i] = (y[i] >= 0 ? 1.0 : -1.0) * std::pow(t, p - 1.0);
            }
            return g;
        }
        case BodyKind::Rotated:
            return matvec(rot.m, base->gradient(mattvec(rot.m, x)));
        default:
            throw Error("gradient: body is not smooth");
    }
}

Vec ConvexBody::normal_at(const Vec& x) const {
    if (std::fabs(defining(x)) > kBoundaryTol)
        throw Error("normal_at: point is not on the boundary within tolerance");
    switch (kind) {
        case BodyKind::Ball:
        case BodyKind::Ellipsoid:
            return normalized(gradient(x));
        case BodyKind::PBall: {
            if (p <= 1.0 + 1e-12) {
                for (int i = 0; i < d; ++i)
                    if (std::fabs(x[i] - center[i]) <= kBoundaryTol)
                        throw NonSmoothPoint("normal_at: cross-polytope ridge");
            }
            return normalized(gradient(x));
        }
        case BodyKind::AxisBox: {
            int active = -1;
            int count = 0;
            for (int i = 0; i < d; ++i) {
                if (std::fabs(std::fabs(x[i] - center[i]) - half_widths[i]) <= kBoundaryTol) {
                    ++count;
                    active = i;
                }
            }
            if (count == 0) throw Error("normal_at: point is not on a box facet");
            if (count > 1) throw NonSmoothPoint("normal_at: box ridge");
            Vec n(d, 0.0);
            n[active] = x[active] - center[active] >= 0 ? 1.0 : -1.0;
            return n;
        }
        case BodyKind::PolytopeH: {
            int active = -1;
            int count = 0;
            for (size_t i = 0; i < poly->normals.size(); ++i) {
                if (std::fabs(dot(poly->normals[i], x) - poly->offsets[i]) <= kBoundaryTol) {
                    ++count;
                    active = static_cast<int>(i);
                }
            }
            if (count == 0) throw Error("normal_at: point is not on a polytope facet");
            if (count > 1) throw NonSmoothPoint("normal_at: polytope ridge");
            return poly->normals[active];
        }
        case BodyKind::Rotated:
            return matvec(rot.m, base->normal_at(mattvec(rot.m, x)));
    }
    throw Error("normal_at: unknown body kind");
}

Vec ConvexBody::interior_point() const {
    switch (kind) {
        case BodyKind::PolytopeH:
            return poly->interior_point;
        case BodyKind::Rotated:
            return matvec(rot.m, base->interior_point());
        default:
            return center;
    }
}

// ---------------------------------------------------------------------------
// Smooth-boundary surface area by radial parametrization about the center.

namespace {

// d = 2: integrate |x'(alpha)| over the full angle with the trapezoid rule.
double smooth_area_2d(const ConvexBody& b) {
    const int n = 8192;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double al = 2.0 * kPi * (i + 0.5) / n;
        Vec e{std::cos(al), std::sin(al)};
        Vec ep{-e[1], e[0]};
        double rho = b.radial_scale(e);
        Vec x = b.center;
        axpy(rho, e, x);
        Vec nrm = normalized(b.gradient(x));
        double rp = -rho * dot(ep, nrm) / dot(e, nrm);
        total += std::sqrt(rho * rho + rp * rp);
    }
    return total * 2.0 * kPi / n;
}

// d = 3: per gnomonic cube face, dsigma = rho^2 (1+|u|^2)^{-3/2} / (omega.n) du.
double smooth_area_3d(const ConvexBody& b) {
    const int n = 256;
    double total = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        for (int sign = -1; sign <= 1; sign += 2) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                double u = -1.0 + 2.0 * (i + 0.5) / n;
                for (int j = 0; j < n; ++j) {
                    double v = -1.0 + 2.0 * (j + 0.5) / n;
                    Vec w(3, 0.0);
                    w[axis] = sign;
                    w[(axis + 1) % 3] = u;
                    w[(axis + 2) % 3] = v;
                    double s = 1.0 + u * u + v * v;
                    Vec omega = scaled(w, 1.0 / std::sqrt(s));
                    double rho = b.radial_scale(omega);
                    Vec x = b.center;
                    axpy(rho, omega, x);
                    Vec nrm = normalized(b.gradient(x));
                    acc += rho * rho / (dot(omega, nrm) * s * std::sqrt(s));
                }
            }
            total += acc * (2.0 / n) * (2.0 / n);
        }
    }
    return total;
}

double smooth_area(const ConvexBody& b) {
    if (b.d == 2) return smooth_area_2d(b);
    if (b.d == 3) return smooth_area_3d(b);
    throw DimensionUnsupported("surface area quadrature supports d <= 3");
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

BodyPtr make_ball(int d, double r, const Vec& center) {
    if (d < 2) throw Error("make_ball: d must be >= 2");
    if (!(r > 0.0)) throw Error("make_ball: radius must be positive");
    if (static_cast<int>(center.size()) != d) throw Error("make_ball: center dimension mismatch");
    auto b = std::make_shared<ConvexBody>();
    b->d = d;
    b->kind = BodyKind::Ball;
    b->radius = r;
    b->center = center;
    b->volume_ = std::pow(r, d) * unit_ball_volume(d);
    b->area_ = unit_sphere_area(d) * std::pow(r, d - 1);
    b->diameter_ = 2.0 * r;
    return b;
}

BodyPtr make_ball(int d, double r) { return make_ball(d, r, Vec(d, 0.0)); }

BodyPtr make_ellipsoid(const Vec& semi_axes, const Vec& center, const Mat& orientation) {
    int d = static_cast<int>(semi_axes.size());
    if (d < 2) throw Error("make_ellipsoid: d must be >= 2");
    for (double a : semi_axes)
        if (!(a > 0.0)) throw Error("make_ellipsoid: semi-axes must be positive");
    if (static_cast<int>(center.size()) != d || orientation.n != d)
        throw Error("make_ellipsoid: dimension mismatch");
    make_rotation(orientation);  // validates orthonormality
    auto b = std::make_shared<ConvexBody>();
    b->d = d;
    b->kind = BodyKind::Ellipsoid;
    b->semi_axes = semi_axes;
    b->center = center;
    b->orientation = orientation;
    double prod = 1.0;
    double amax = 0.0;
    for (double a : semi_axes) {
        prod *= a;
        amax = std::fmax(amax, a);
    }
    b->volume_ = unit_ball_volume(d) * prod;
    b->diameter_ = 2.0 * amax;
    b->area_ = smooth_area(*b);
    return b;
}

BodyPtr make_ellipsoid(const Vec& semi_axes) {
    int d = static_cast<int>(semi_axes.size());
    return make_ellipsoid(semi_axes, Vec(d, 0.0), Mat::identity(d));
}

BodyPtr make_axis_box(const Vec& half_widths, const Vec& center) {
    int d = static_cast<int>(half_widths.size());
    if (d < 2) throw Error("make_axis_box: d must be >= 2");
    for (double h : half_widths)
        if (!(h > 0.0)) throw Error("make_axis_box: half-widths must be positive");
    if (static_cast<int>(center.size()) != d) throw Error("make_axis_box: center dimension mismatch");
    auto b = std::make_shared<ConvexBody>();
    b->d = d;
    b->kind = BodyKind::AxisBox;
    b->half_widths = half_widths;
    b->center = center;
    double vol = 1.0, diam2 = 0.0;
    for (double h : half_widths) {
        vol *= 2.0 * h;
        diam2 += 4.0 * h * h;
    }
    b->volume_ = vol;
    double area = 0.0;
    for (int i = 0; i < d; ++i) area += 2.0 * vol / (2.0 * half_widths[i]);
    b->area_ = area;
    b->diameter_ = std::sqrt(diam2);
    return b;
}

BodyPtr make_axis_box(const Vec& half_widths) {
    return make_axis_box(half_widths, Vec(half_widths.size(), 0.0));
}

BodyPtr make_pball(int d, double p, double r, const Vec& center) {
    if (d < 2) throw Error("make_pball: d must be >= 2");
    if (!(p >= 1.0)) throw Error("make_pball: exponent must be >= 1 for convexity");
    if (!(r > 0.0)) throw Error("make_pball: radius must be positive");
    if (static_cast<int>(center.size()) != d) throw Error("make_pball: center dimension mismatch");
    auto b = std::make_shared<ConvexBody>();
    b->d = d;
    b->kind = BodyKind::PBall;
    b->p = p;
    b->radius = r;
    b->center = center;
    b->volume_ = std::pow(2.0 * std::tgamma(1.0 / p + 1.0), d) / std::tgamma(d / p + 1.0) *
                 std::pow(r, d);
    b->diameter_ = 2.0 * r * std::fmax(1.0, std::pow(d, 0.5 - 1.0 / p));
    if (p > 1.0 + 1e-12) {
        b->area_ = smooth_area(*b);
    } else {
        // Cross-polytope: 2^d congruent facets, each a regular simplex slice.
        // Facet of the l1 ball of radius r: measure r^{d-1} sqrt(d)/(d-1)!.
        b->area_ = std::pow(2.0, d) * std::pow(r, d - 1) * std::sqrt(static_cast<double>(d)) /
                   std::tgamma(static_cast<double>(d));
    }
    return b;
}

BodyPtr make_pball(int d, double p, double r) { return make_pball(d, p, r, Vec(d, 0.0)); }

// ---------------------------------------------------------------------------
// Polytope construction

namespace {

bool solve_small(const std::vector<Vec>& rows, const std::vector<double>& rhs, Vec& out) {
    int d = static_cast<int>(rows[0].size());
    Mat m;
    m.n = d;
    m.a.resize(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
    double det = det_mat(m);
    if (std::fabs(det) < 1e-12) return false;
    out.assign(d, 0.0);
    // Cramer's rule (d <= 3).
    for (int j = 0; j < d; ++j) {
        Mat mj = m;
        for (int i = 0; i < d; ++i) mj(i, j) = rhs[i];
        out[j] = det_mat(mj) / det;
    }
    return true;
}

void check_bounded(const std::vector<Vec>& normals, int d) {
    if (d == 2) {
        std::vector<double> angs;
        angs.reserve(normals.size());
        for (const Vec& n : normals) angs.push_back(std::atan2(n[1], n[0]));
        std::sort(angs.begin(), angs.end());
        double gap = 0.0;
        for (size_t i = 0; i + 1 < angs.size(); ++i) gap = std::fmax(gap, angs[i + 1] - angs[i]);
        gap = std::fmax(gap, angs.front() + 2.0 * kPi - angs.back());
        if (gap >= kPi - 1e-12)
            throw UnboundedBody("make_polytope_h: normals leave an open half-space (unbounded)");
        return;
    }
    // d = 3. The recession cone {y : n_i.y <= 0} must be {0}. If the normals do
    // not span R^3, any direction orthogonal to their span recedes. Otherwise a
    // nontrivial cone has an extreme ray lying on two constraint planes, so it
    // is a (signed) cross product of two normals.
    std::vector<Vec> basis;
    for (const Vec& n : normals) {
        Vec r = n;
        for (const Vec& b : basis) axpy(-dot(r, b), b, r);
        if (norm2(r) > 1e-9) basis.push_back(normalized(r));
    }
    if (basis.size() < 3)
        throw UnboundedBody("make_polytope_h: normals are rank-deficient (unbounded)");
    for (size_t i = 0; i < normals.size(); ++i)
        for (size_t j = i + 1; j < normals.size(); ++j) {
            Vec c = cross3(normals[i], normals[j]);
            double len = norm2(c);
            if (len < 1e-12) continue;
            for (int s = -1; s <= 1; s += 2) {
                Vec y = scaled(c, s / len);
                bool recedes = true;
                for (const Vec& n : normals)
                    if (dot(n, y) > 1e-12) {
                        recedes = false;
                        break;
                    }
                if (recedes)
                    throw UnboundedBody("make_polytope_h: recession direction found (unbounded)");
            }
        }
}

}  // namespace

BodyPtr make_polytope_h(const std::vector<Vec>& normals_in, const std::vector<double>& offsets) {
    if (normals_in.empty() || normals_in.size() != offsets.size())
        throw Error("make_polytope_h: facet lists are empty or mismatched");
    int d = static_cast<int>(normals_in[0].size());
    if (d < 2) throw Error("make_polytope_h: d must be >= 2");
    if (d > 3)
        throw DimensionUnsupported("make_polytope_h: exact face enumeration supports d <= 3");
    std::vector<Vec> normals = normals_in;
    std::vector<double> offs = offsets;
    for (size_t i = 0; i < normals.size(); ++i) {
        if (static_cast<int>(normals[i].size()) != d)
            throw Error("make_polytope_h: inconsistent normal dimensions");
        double len = norm2(normals[i]);
        if (len < 1e-12) throw Error("make_polytope_h: zero facet normal");
        if (std::fabs(len - 1.0) > 1e-12) {
            normals[i] = scaled(normals[i], 1.0 / len);
            offs[i] /= len;
        }
    }
    check_bounded(normals, d);

    auto data = std::make_shared<PolytopeData>();
    data->d = d;
    data->normals = normals;
    data->offsets = offs;

    // Vertex enumeration: every d-subset of facet planes.
    size_t m = normals.size();
    std::vector<int> idx(d);
    auto try_vertex = [&](const std::vector<int>& sel) {
        std::vector<Vec> rows;
        std::vector<double> rhs;
        for (int i : sel) {
            rows.push_back(normals[i]);
            rhs.push_back(offs[i]);
        }
        Vec v;
        if (!solve_small(rows, rhs, v)) return;
        for (size_t k = 0; k < m; ++k)
            if (dot(normals[k], v) > offs[k] + kBoundaryTol) return;
        for (const Vec& w : data->vertices)
            if (norm2(sub(w, v)) <= kBoundaryTol) return;
        data->vertices.push_back(v);
    };
    if (d == 2) {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j) try_vertex({static_cast<int>(i), static_cast<int>(j)});
    } else {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j)
                for (size_t k = j + 1; k < m; ++k)
                    try_vertex({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
    }
    if (data->vertices.size() < static_cast<size_t>(d) + 1)
        throw EmptyInterior("make_polytope_h: too few vertices (empty or lower-dimensional)");
    Vec z(d, 0.0);
    for (const Vec& v : data->vertices) axpy(1.0 / data->vertices.size(), v, z);
    data->interior_point = z;
    double slack = HUGE_VAL;
    for (size_t i = 0; i < m; ++i) slack = std::fmin(slack, offs[i] - dot(normals[i], z));
    if (slack <= 1e-12)
        throw EmptyInterior("make_polytope_h: interior is empty (zero Chebyshev radius)");

    double diam = 0.0;
    for (size_t i = 0; i < data->vertices.size(); ++i)
        for (size_t j = i + 1; j < data->vertices.size(); ++j)
            diam = std::fmax(diam, norm2(sub(data->vertices[i], data->vertices[j])));
    data->diameter = diam;

    // Face lattice. Level 0: vertices.
    data->levels.resize(d);
    for (size_t i = 0; i < data->vertices.size(); ++i) {
        PolyFace f;
        f.dim = 0;
        f.verts = {static_cast<int>(i)};
        f.centroid = data->vertices[i];
        f.measure = 1.0;
        f.diameter = 0.0;
        data->levels[0].push_back(std::move(f));
    }

    auto facet_vertices = [&](size_t fi) {
        std::vector<int> vs;
        for (size_t vi = 0; vi < data->vertices.size(); ++vi)
            if (std::fabs(dot(normals[fi], data->vertices[vi]) - offs[fi]) <= kBoundaryTol)
                vs.push_back(static_cast<int>(vi));
        return vs;
    };

    if (d == 2) {
        // Level 1: edges, one per non-redundant facet.
        for (size_t fi = 0; fi < m; ++fi) {
            std::vector<int> vs = facet_vertices(fi);
            if (vs.size() < 2) continue;  // redundant constraint
            if (vs.size() > 2)
                throw Error("make_polytope_h: more than two vertices on a d=2 facet");
            const Vec& a = data->vertices[vs[0]];
            const Vec& b = data->vertices[vs[1]];
            PolyFace f;
            f.dim = 1;
            f.verts = vs;
            f.centroid = scaled(add(a, b), 0.5);
            f.measure = norm2(sub(b, a));
            f.diameter = f.measure;
            f.basis = {normalized(sub(b, a))};
            f.sub = {{vs[0], normalized(sub(a, b))}, {vs[1], normalized(sub(b, a))}};
            data->body_sub.push_back({static_cast<int>(data->levels[1].size()), normals[fi]});
            data->levels[1].push_back(std::move(f));
        }
    } else {
        // Level 2: facet polygons; level 1: their edges.
        std::map<std::pair<int, int>, int> edge_ids;
        auto edge_id = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = edge_ids.find(key);
            if (it != edge_ids.end()) return it->second;
            const Vec& va = data->vertices[key.first];
            const Vec& vb = data->vertices[key.second];
            PolyFace f;
            f.dim = 1;
            f.verts = {key.first, key.second};
            f.centroid = scaled(add(va, vb), 0.5);
            f.measure = norm2(sub(vb, va));
            f.diameter = f.measure;
            f.basis = {normalized(sub(vb, va))};
            f.sub = {{key.first, normalized(sub(va, vb))}, {key.second, normalized(sub(vb, va))}};
            int id = static_cast<int>(data->levels[1].size());
            data->levels[1].push_back(std::move(f));
            edge_ids[key] = id;
            return id;
        };
        for (size_t fi = 0; fi < m; ++fi) {
            std::vector<int> vs = facet_vertices(fi);
            if (vs.size() < 3) continue;  // redundant constraint
            // Order the polygon by angle around its centroid in the facet plane.
            Vec c(d, 0.0);
            for (int vi : vs) axpy(1.0 / vs.size(), data->vertices[vi], c);
            Vec t1 = normalized(cross3(normals[fi], std::fabs(normals[fi][0]) < 0.9
                                                        ? Vec{1, 0, 0}
                                                        : Vec{0, 1, 0}));
            Vec t2 = cross3(normals[fi], t1);
            std::sort(vs.begin(), vs.end(), [&](int a, int b) {
                Vec da = sub(data->vertices[a], c), db = sub(data->vertices[b], c);
                return std::atan2(dot(da, t2), dot(da, t1)) < std::atan2(dot(db, t2), dot(db, t1));
            });
            PolyFace f;
            f.dim = 2;
            f.verts = vs;
            f.basis = {t1, t2};
            double area = 0.0;
            Vec centroid(d, 0.0);
            double dia = 0.0;
            int nv = static_cast<int>(vs.size());
            for (int k = 1; k + 1 < nv; ++k) {
                const Vec& p0 = data->vertices[vs[0]];
                const Vec& p1 = data->vertices[vs[k]];
                const Vec& p2 = data->vertices[vs[k + 1]];
                Vec cr = cross3(sub(p1, p0), sub(p2, p0));
                double tri = 0.5 * norm2(cr);
                area += tri;
                Vec tc(d, 0.0);
                axpy(1.0 / 3.0, p0, tc);
                axpy(1.0 / 3.0, p1, tc);
                axpy(1.0 / 3.0, p2, tc);
                axpy(tri, tc, centroid);
            }
            for (int a = 0; a < nv; ++a)
                for (int b = a + 1; b < nv; ++b)
                    dia = std::fmax(dia, norm2(sub(data->vertices[vs[a]], data->vertices[vs[b]])));
            if (area <= 1e-15) continue;  // degenerate facet
            f.measure = area;
            f.centroid = scaled(centroid, 1.0 / area);
            f.diameter = dia;
            for (int k = 0; k < nv; ++k) {
                int a = vs[k], b = vs[(k + 1) % nv];
                int eid = edge_id(a, b);
                Vec edir = normalized(sub(data->vertices[b], data->vertices[a]));
                Vec en = cross3(edir, normals[fi]);
                Vec mid = scaled(add(data->vertices[a], data->vertices[b]), 0.5);
                if (dot(en, sub(mid, f.centroid)) < 0) en = scaled(en, -1.0);
                f.sub.push_back({eid, en});
            }
            data->body_sub.push_back({static_cast<int>(data->levels[2].size()), normals[fi]});
            data->levels[2].push_back(std::move(f));
        }
    }
    if (data->body_sub.empty()) throw EmptyInterior("make_polytope_h: no active facets");

    auto b = std::make_shared<ConvexBody>();
    b->d = d;
    b->kind = BodyKind::PolytopeH;
    b->poly = data;
    double vol = 0.0, area = 0.0;
    for (const auto& [fid, n] : data->body_sub) {
        const PolyFace& f = data->levels[d - 1][fid];
        vol += f.measure * (dot(n, f.centroid) - dot(n, z)) / d;
        area += f.measure;
    }
    b->volume_ = vol;
    b->area_ = area;
    b->diameter_ = diam;
    return b;
}

// ---------------------------------------------------------------------------
// Rotation of bodies

BodyPtr rotate(const BodyPtr& body, const Rotation& r) {
    if (r.dim() != body->d) throw Error("rotate: dimension mismatch");
    make_rotation(r.m);
    bool ident = true;
    for (int i = 0; i < r.dim() && ident; ++i)
        for (int j = 0; j < r.dim(); ++j)
            if (std::fabs(r.m(i, j) - (i == j ? 1.0 : 0.0)) > 1e-15) {
                ident = false;
                break;
            }
    if (ident) return body;
    switch (body->kind) {
        case BodyKind::Ball:
            return make_ball(body->d, body->radius, matvec(r.m, body->center));
        case BodyKind::Ellipsoid:
            return make_ellipsoid(body->semi_axes, matvec(r.m, body->center),
                                  matmul(r.m, body->orientation));
        case BodyKind::PolytopeH: {
            std::vector<Vec> ns;
            ns.reserve(body->poly->normals.size());
            for (const Vec& n : body->poly->normals) ns.push_back(matvec(r.m, n));
            return make_polytope_h(ns, body->poly->offsets);
        }
        case BodyKind::AxisBox: {
            if (body->d <= 3) {
                std::vector<Vec> ns;
                std::vector<double> offs;
                for (int i = 0; i < body->d; ++i)
                    for (int s = -1; s <= 1; s += 2) {
                        Vec n(body->d, 0.0);
                        n[i] = s;
                        ns.push_back(matvec(r.m, n));
                        offs.push_back(body->half_widths[i] + s * body->center[i]);
                    }
                return make_polytope_h(ns, offs);
            }
            break;
        }
        default:
            break;
    }
    auto b = std::make_shared<ConvexBody>();
    b->d = body->d;
    b->kind = BodyKind::Rotated;
    if (body->kind == BodyKind::Rotated) {
        b->base = body->base;
        b->rot = compose(r, body->rot);
    } else {
        b->base = body;
        b->rot = r;
    }
    b->volume_ = body->volume_;
    b->area_ = body->area_;
    b->diameter_ = body->diameter_;
    return b;
}

// ---------------------------------------------------------------------------
// Sphere cells and boundary decomposition

bool ConeCell::contains_direction(const Vec& n_in) const {
    Vec n = frame ? mattvec(*frame, n_in) : n_in;
    int d = static_cast<int>(n.size());
    int dom = 0;
    for (int i = 1; i < d; ++i)
        if (std::fabs(n[i]) > std::fabs(n[dom])) dom = i;
    if (dom != axis) return false;
    int s = n[dom] > 0 ? 1 : (n[dom] < 0 ? -1 : 0);
    if (s != sign) return false;
    int k = 0;
    for (int i = 0; i < d; ++i) {
        if (i == axis) continue;
        double u = n[i] / (s * n[dom]);
        double lo = ulo[k], hi = uhi[k];
        bool in = u >= lo && (u < hi || (hi >= 1.0 - 1e-15 && u <= hi));
        if (!in) return false;
        ++k;
    }
    return true;
}

namespace {

// Direction for gnomonic coordinates u on the face (axis, sign).
Vec cell_direction(int d, int axis, int sign, const Vec& u) {
    Vec w(d, 0.0);
    w[axis] = sign;
    int k = 0;
    for (int i = 0; i < d; ++i) {
        if (i == axis) continue;
        w[i] = u[k++];
    }
    return normalized(w);
}

// Max angle between the box-center direction and any corner direction. The
// cosine of the angle to a fixed axis is quasi-concave on the gnomonic box
// (its superlevel sets are convex cones), so the max over the box is attained
// at a corner.
double cell_aperture(int d, int axis, int sign, const Vec& ulo, const Vec& uhi, Vec& out_axis) {
    int dm1 = d - 1;
    Vec umid(dm1);
    for (int i = 0; i < dm1; ++i) umid[i] = 0.5 * (ulo[i] + uhi[i]);
    out_axis = cell_direction(d, axis, sign, umid);
    double worst = 1.0;
    for (int mask = 0; mask < (1 << dm1); ++mask) {
        Vec u(dm1);
        for (int i = 0; i < dm1; ++i) u[i] = (mask >> i) & 1 ? uhi[i] : ulo[i];
        Vec w = cell_direction(d, axis, sign, u);
        worst = std::fmin(worst, dot(w, out_axis));
    }
    return std::acos(std::fmin(1.0, worst));
}

void subdivide_cell(int d, int axis, int sign, const Vec& ulo, const Vec& uhi,
                    std::vector<ConeCell>& out) {
    Vec cell_axis;
    double ap = cell_aperture(d, axis, sign, ulo, uhi, cell_axis);
    if (ap <= kPi / 8.0 + 1e-12) {
        ConeCell c;
        c.axis = axis;
        c.sign = sign;
        c.ulo = ulo;
        c.uhi = uhi;
        out.push_back(std::move(c));
        return;
    }
    int dm1 = d - 1;
    for (int mask = 0; mask < (1 << dm1); ++mask) {
        Vec lo(dm1), hi(dm1);
        for (int i = 0; i < dm1; ++i) {
            double mid = 0.5 * (ulo[i] + uhi[i]);
            if ((mask >> i) & 1) {
                lo[i] = mid;
                hi[i] = uhi[i];
            } else {
                lo[i] = ulo[i];
                hi[i] = mid;
            }
        }
        subdivide_cell(d, axis, sign, lo, hi, out);
    }
}

}  // namespace

std::vector<ConeCell> sphere_cells(int d) {
    std::vector<ConeCell> cells;
    Vec lo(d - 1, -1.0), hi(d - 1, 1.0);
    for (int axis = 0; axis < d; ++axis)
        for (int sign = -1; sign <= 1; sign += 2) subdivide_cell(d, axis, sign, lo, hi, cells);
    return cells;
}

std::vector<Vec> tangent_basis(const Vec& a) {
    int d = static_cast<int>(a.size());
    std::vector<Vec> basis;
    for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        axpy(-dot(e, a), a, e);
        for (const Vec& b : basis) axpy(-dot(e, b), b, e);
        double len = norm2(e);
        if (len > 1e-6) basis.push_back(scaled(e, 1.0 / len));
    }
    return basis;
}

namespace {

// Support-touching boundary point of a smooth body for outer normal mu.
Vec support_touch(const ConvexBody& b, const Vec& mu) {
    switch (b.kind) {
        case BodyKind::Ball: {
            Vec x = b.center;
            axpy(b.radius / norm2(mu), mu, x);
            return x;
        }
        case BodyKind::Ellipsoid: {
            Vec w = mattvec(b.orientation, mu);
            for (int i = 0; i < b.d; ++i) w[i] *= b.semi_axes[i];
            double len = norm2(w);
            for (int i = 0; i < b.d; ++i) w[i] *= b.semi_axes[i] / len;
            Vec x = b.center;
            Vec dirx = matvec(b.orientation, w);
            return add(x, dirx);
        }
        case BodyKind::PBall: {
            double q = b.p / (b.p - 1.0);
            double nq = pnorm(mu, q);
            Vec x = b.center;
            for (int i = 0; i < b.d; ++i) {
                double t = std::fabs(mu[i]) / nq;
                x[i] += b.radius * (mu[i] >= 0 ? 1.0 : -1.0) * std::pow(t, q - 1.0);
            }
            return x;
        }
        case BodyKind::Rotated: {
            Vec xb = support_touch(*b.base, mattvec(b.rot.m, mu));
            return matvec(b.rot.m, xb);
        }
        default:
            throw Error("support_touch: body is not smooth");
    }
}

BoundaryPatch smooth_patch_for_cell(const BodyPtr& body, const ConeCell& cell) {
    int d = body->d;
    Vec cell_axis;
    double ap = cell_aperture(d, cell.axis, cell.sign, cell.ulo, cell.uhi, cell_axis);
    BoundaryPatch patch;
    patch.body = body;
    patch.axis = cell_axis;
    patch.aperture = ap;
    patch.lipschitz = std::tan(ap);
    patch.base_offset = body->support(cell_axis);
    patch.tangent = tangent_basis(cell_axis);
    patch.cell = cell;

    // Domain box: tangent coordinates of the support-touch points of the cell's
    // corner and center normals, padded 25% (the Gauss preimage is contained in
    // a modest neighborhood of these; the pad keeps the cover conservative).
    int dm1 = d - 1;
    Vec lo(dm1, HUGE_VAL), hi(dm1, -HUGE_VAL);
    std::vector<Vec> probes;
    for (int mask = 0; mask < (1 << dm1); ++mask) {
        Vec u(dm1);
        for (int i = 0; i < dm1; ++i) u[i] = (mask >> i) & 1 ? cell.uhi[i] : cell.ulo[i];
        probes.push_back(u);
    }
    Vec um(dm1);
    for (int i = 0; i < dm1; ++i) um[i] = 0.5 * (cell.ulo[i] + cell.uhi[i]);
    probes.push_back(um);
    bool smooth_touch = body->is_smooth();
    for (const Vec& u : probes) {
        Vec mu = cell_direction(d, cell.axis, cell.sign, u);
        if (cell.frame) mu = matvec(*cell.frame, mu);
        if (!smooth_touch) continue;
        Vec x = support_touch(*body, mu);
        for (int k = 0; k < dm1; ++k) {
            double t = dot(x, patch.tangent[k]);
            lo[k] = std::fmin(lo[k], t);
            hi[k] = std::fmax(hi[k], t);
        }
    }
    if (!smooth_touch) {
        for (int k = 0; k < dm1; ++k) {
            lo[k] = -body->support(scaled(patch.tangent[k], -1.0));
            hi[k] = body->support(patch.tangent[k]);
        }
    }
    for (int k = 0; k < dm1; ++k) {
        double pad = 0.25 * std::fmax(hi[k] - lo[k], 0.05 * body->diameter());
        lo[k] -= pad;
        hi[k] += pad;
    }
    patch.dom_lo = lo;
    patch.dom_hi = hi;
    return patch;
}

}  // namespace

std::vector<BoundaryPatch> decompose_boundary(const BodyPtr& body) {
    int d = body->d;
    if (body->kind == BodyKind::Rotated) {
        std::vector<BoundaryPatch> base_patches = decompose_boundary(body->base);
        std::vector<BoundaryPatch> out;
        for (BoundaryPatch& bp : base_patches) {
            BoundaryPatch q = bp;
            q.body = body;
            q.axis = matvec(body->rot.m, bp.axis);
            for (Vec& t : q.tangent) t = matvec(body->rot.m, t);
            if (q.cell) {
                Mat f = body->rot.m;
                if (bp.cell->frame) f = matmul(body->rot.m, *bp.cell->frame);
                q.cell->frame = f;
            }
            out.push_back(std::move(q));
        }
        return out;
    }
    if (body->kind == BodyKind::PBall && body->p <= 1.0 + 1e-12) {
        // Cross-polytope: delegate to the exact polytope decomposition.
        std::vector<Vec> ns;
        std::vector<double> offs;
        double rd = std::sqrt(static_cast<double>(d));
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vec n(d);
            for (int i = 0; i < d; ++i) n[i] = ((mask >> i) & 1 ? 1.0 : -1.0) / rd;
            ns.push_back(n);
            offs.push_back(body->radius / rd + dot(n, body->center));
        }
        BodyPtr aspoly = make_polytope_h(ns, offs);
        std::vector<BoundaryPatch> patches = decompose_boundary(aspoly);
        for (BoundaryPatch& q : patches) q.body = body;
        return patches;
    }

    std::vector<ConeCell> cells = sphere_cells(d);
    std::vector<BoundaryPatch> out;

    if (body->is_smooth()) {
        out.reserve(cells.size());
        for (const ConeCell& c : cells) out.push_back(smooth_patch_for_cell(body, c));
        return out;
    }

    // Polytopes and boxes: group facets by the cell containing their normal.
    std::vector<Vec> fns;
    std::vector<std::vector<Vec>> fverts;
    if (body->kind == BodyKind::AxisBox) {
        for (int i = 0; i < d; ++i)
            for (int s = -1; s <= 1; s += 2) {
                Vec n(d, 0.0);
                n[i] = s;
                fns.push_back(n);
                std::vector<Vec> vs;
                int corners = 1 << d;
                for (int mask = 0; mask < corners; ++mask) {
                    Vec v = body->center;
                    bool on = true;
                    for (int j = 0; j < d; ++j) {
                        double sj = (mask >> j) & 1 ? 1.0 : -1.0;
                        v[j] += sj * body->half_widths[j];
                        if (j == i && sj != s) on = false;
                    }
                    if (on) vs.push_back(v);
                }
                fverts.push_back(std::move(vs));
            }
    } else if (body->kind == BodyKind::PolytopeH) {
        for (const auto& [fid, n] : body->poly->body_sub) {
            fns.push_back(n);
            const PolyFace& f = body->poly->levels[d - 1][fid];
            std::vector<Vec> vs;
            for (int vi : f.verts) vs.push_back(body->poly->vertices[vi]);
            fverts.push_back(std::move(vs));
        }
    } else {
        throw Error("decompose_boundary: unsupported body kind");
    }

    for (size_t ci = 0; ci < cells.size(); ++ci) {
        std::vector<int> group;
        for (size_t fi = 0; fi < fns.size(); ++fi)
            if (cells[ci].contains_direction(fns[fi])) group.push_back(static_cast<int>(fi));
        if (group.empty()) continue;
        BoundaryPatch patch;
        patch.body = body;
        patch.cell = cells[ci];
        if (group.size() == 1) {
            patch.axis = fns[group[0]];
            patch.aperture = 0.0;
            patch.lipschitz = 0.0;
        } else {
            Vec mean(d, 0.0);
            for (int fi : group) axpy(1.0, fns[fi], mean);
            patch.axis = normalized(mean);
            double worst = 1.0;
            for (int fi : group) worst = std::fmin(worst, dot(patch.axis, fns[fi]));
            patch.aperture = std::acos(std::fmin(1.0, worst));
            patch.lipschitz = std::tan(patch.aperture);
        }
        patch.base_offset = body->support(patch.axis);
        patch.tangent = tangent_basis(patch.axis);
        int dm1 = d - 1;
        Vec lo(dm1, HUGE_VAL), hi(dm1, -HUGE_VAL);
        for (int fi : group)
            for (const Vec& v : fverts[fi])
                for (int k = 0; k < dm1; ++k) {
                    double t = dot(v, patch.tangent[k]);
                    lo[k] = std::fmin(lo[k], t);
                    hi[k] = std::fmax(hi[k], t);
                }
        for (int k = 0; k < dm1; ++k) {
            double pad = 1e-9 + 0.01 * (hi[k] - lo[k]);
            lo[k] -= pad;
            hi[k] += pad;
        }
        patch.dom_lo = lo;
        patch.dom_hi = hi;
        out.push_back(std::move(patch));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Patch sampling and the secant / C^{3/2} checks

namespace {

// Lift a base-plane point to the upper boundary graph along the patch axis.
// Returns the boundary point, or nothing if the line misses the body or the
// landing normal is outside the patch cone.
std::optional<Vec> lift_to_patch(const BoundaryPatch& patch, const Vec& u, Vec* normal_out) {
    const ConvexBody& B = *patch.body;
    int d = B.d;
    Vec base(d, 0.0);
    for (size_t k = 0; k < patch.tangent.size(); ++k) axpy(u[k], patch.tangent[k], base);
    double t_hi = patch.base_offset + 1e-9;
    double t_lo = -B.support(scaled(patch.axis, -1.0)) - 1e-9;
    auto f = [&](double t) {
        Vec x = base;
        axpy(t, patch.axis, x);
        return B.defining(x);
    };
    // Convex in t: ternary search for the minimum, then bisect the upper root.
    double a = t_lo, b = t_hi;
    for (int it = 0; it < 120; ++it) {
        double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (f(m1) <= f(m2)) b = m2;
        else a = m1;
    }
    double tm = 0.5 * (a + b);
    if (f(tm) > 0.0) return std::nullopt;
    double roota = tm, rootb = t_hi;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (roota + rootb);
        if (f(mid) <= 0.0) roota = mid;
        else rootb = mid;
    }
    Vec x = base;
    axpy(roota, patch.axis, x);
    Vec n;
    try {
        n = B.normal_at(x);
    } catch (const NonSmoothPoint&) {
        return std::nullopt;
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!patch.on_patch_normal(n)) return std::nullopt;
    if (normal_out) *normal_out = n;
    return x;
}

struct PairSampler {
    const BoundaryPatch& patch;
    rng::Stream& st;
    int dm1;
    double box_diam;

    Vec draw_u() {
        Vec u(dm1);
        for (int k = 0; k < dm1; ++k) u[k] = st.uniform(patch.dom_lo[k], patch.dom_hi[k]);
        return u;
    }

    Vec offset_u(const Vec& u0) {
        double delta = box_diam * std::pow(10.0, st.uniform(-5.0, 0.0));
        Vec w(dm1);
        double len = 0.0;
        if (dm1 == 1) {
            w[0] = st.uniform() < 0.5 ? -1.0 : 1.0;
            len = 1.0;
        } else {
            for (int k = 0; k < dm1; ++k) {
                w[k] = st.gaussian();
                len += w[k] * w[k];
            }
            len = std::sqrt(len);
        }
        Vec u = u0;
        for (int k = 0; k < dm1; ++k) {
            u[k] += delta * w[k] / len;
            u[k] = std::clamp(u[k], patch.dom_lo[k], patch.dom_hi[k]);
        }
        return u;
    }

    std::optional<Vec> draw_point(Vec* normal_out, const Vec* near_u, Vec* u_out) {
        for (int att = 0; att < 64; ++att) {
            Vec u = near_u ? offset_u(*near_u) : draw_u();
            auto x = lift_to_patch(patch, u, normal_out);
            if (x) {
                if (u_out) *u_out = u;
                return x;
            }
        }
        return std::nullopt;
    }
};

}  // namespace

double check_secant_property(const BoundaryPatch& patch, int n_pairs, uint64_t seed) {
    if (n_pairs < 1) throw Error("check_secant_property: n_pairs must be >= 1");
    rng::Stream st = rng::make_stream(seed, "geometry-secant", 0);
    int dm1 = static_cast<int>(patch.tangent.size());
    double box_diam = norm2(sub(patch.dom_hi, patch.dom_lo));
    PairSampler sampler{patch, st, dm1, box_diam};

    // A degenerate patch (zero surface measure) never yields a point: probe first.
    bool alive = false;
    for (int probe = 0; probe < 200 && !alive; ++probe)
        alive = lift_to_patch(patch, sampler.draw_u(), nullptr).has_value();
    if (!alive) throw DegeneratePatch("check_secant_property: patch has no sampleable points");

    double worst = 0.0;
    int got = 0;
    for (int i = 0; i < n_pairs; ++i) {
        Vec ux;
        auto x = sampler.draw_point(nullptr, nullptr, &ux);
        if (!x) continue;
        auto y = i % 2 == 0 ? sampler.draw_point(nullptr, nullptr, nullptr)
                            : sampler.draw_point(nullptr, &ux, nullptr);
        if (!y) continue;
        Vec diff = sub(*x, *y);
        double len = norm2(diff);
        if (len < 1e-9) continue;
        worst = std::fmax(worst, std::fabs(dot(diff, patch.axis)) / len);
        ++got;
    }
    if (got == 0) throw DegeneratePatch("check_secant_property: no valid pairs");
    return worst;
}

double check_c32(const BodyPtr& body, const BoundaryPatch& patch, int n_pairs, uint64_t seed) {
    if (n_pairs < 1) throw Error("check_c32: n_pairs must be >= 1");
    rng::Stream st = rng::make_stream(seed, "geometry-c32", 0);
    int dm1 = static_cast<int>(patch.tangent.size());
    double box_diam = norm2(sub(patch.dom_hi, patch.dom_lo));
    PairSampler sampler{patch, st, dm1, box_diam};

    bool alive = false;
    for (int probe = 0; probe < 200 && !alive; ++probe)
        alive = lift_to_patch(patch, sampler.draw_u(), nullptr).has_value();
    if (!alive) throw DegeneratePatch("check_c32: patch has no sampleable points");

    double worst = 0.0;
    int got = 0;
    for (int i = 0; i < n_pairs; ++i) {
        Vec ux;
        auto pp = sampler.draw_point(nullptr, nullptr, &ux);
        if (!pp) continue;
        Vec nq;
        auto qq = i % 2 == 0 ? sampler.draw_point(&nq, nullptr, nullptr)
                             : sampler.draw_point(&nq, &ux, nullptr);
        if (!qq) continue;
        Vec diff = sub(*pp, *qq);
        double len = norm2(diff);
        if (len < 1e-9) continue;
        worst = std::fmax(worst, std::fabs(dot(diff, nq)) / std::pow(len, 1.5));
        ++got;
    }
    if (got == 0) throw DegeneratePatch("check_c32: no valid pairs");
    (void)body;
    return worst;
}

}  // namespace ftdecay::geometry
