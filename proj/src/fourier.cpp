#include "ftdecay/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ftdecay/specfun.hpp"

namespace ftdecay::fourier {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Cplx kI{0.0, 1.0};

using geometry::BodyKind;
using geometry::PolyFace;
using geometry::PolytopeData;

Cplx cis(double phase) { return Cplx{std::cos(phase), std::sin(phase)}; }

// l1 balls share the polytope machinery through their H-representation.
BodyPtr cross_polytope(const ConvexBody& b) {
    std::vector<Vec> ns;
    std::vector<double> offs;
    double rd = std::sqrt(static_cast<double>(b.d));
    for (int mask = 0; mask < (1 << b.d); ++mask) {
        Vec n(b.d);
        for (int i = 0; i < b.d; ++i) n[i] = ((mask >> i) & 1 ? 1.0 : -1.0) / rd;
        offs.push_back(b.radius / rd + dot(n, b.center));
        ns.push_back(std::move(n));
    }
    return geometry::make_polytope_h(ns, offs);
}

}  // namespace

// ---------------------------------------------------------------------------
// Closed forms

Cplx ft_closed_ball(const ConvexBody& b, const Vec& xi) {
    int d = b.d;
    double s;        // radial argument of the unit-ball transform
    double detfac;   // volume scaling of the affine map
    if (b.kind == BodyKind::Ball) {
        s = b.radius * norm2(xi);
        detfac = std::pow(b.radius, d);
        // expressed via the unit ball at s = r|xi|: chi-hat = r^d * F_1(r|xi|)
    } else if (b.kind == BodyKind::Ellipsoid) {
        Vec w = mattvec(b.orientation, xi);
        detfac = 1.0;
        for (int i = 0; i < d; ++i) {
            w[i] *= b.semi_axes[i];
            detfac *= b.semi_axes[i];
        }
        s = norm2(w);
    } else {
        throw Error("ft_closed_ball: body must be a ball or ellipsoid");
    }
    double unit_vol = std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    double f1;  // unit-ball transform at radial frequency s
    if (s < 1e-6) {
        f1 = unit_vol * (1.0 - s * s / (2.0 * (d + 2)));
    } else {
        f1 = std::pow(2.0 * kPi, d / 2.0) * std::pow(s, -d / 2.0) * specfun::bessel_j(d, s);
    }
    return cis(-dot(b.center, xi)) * (detfac * f1);
}

Cplx ft_closed_box(const ConvexBody& b, const Vec& xi) {
    if (b.kind != BodyKind::AxisBox) throw Error("ft_closed_box: body must be an axis box");
    double m = 1.0;
    for (int i = 0; i < b.d; ++i) m *= 2.0 * b.half_widths[i] * specfun::sinc(b.half_widths[i] * xi[i]);
    return cis(-dot(b.center, xi)) * m;
}

Cplx ft_closed_sphere_surface(const ConvexBody& b, const Vec& xi) {
    if (b.kind != BodyKind::Ball) throw Error("ft_closed_sphere_surface: body must be a ball");
    int d = b.d;
    double s = b.radius * norm2(xi);
    double area = b.surface_area();
    double f;
    if (s < 1e-6) {
        f = area * (1.0 - s * s / (2.0 * d));
    } else {
        f = std::pow(2.0 * kPi, d / 2.0) * std::pow(b.radius, d - 1) * std::pow(s, 1.0 - d / 2.0) *
            specfun::bessel_j(d - 2, s);
    }
    return cis(-dot(b.center, xi)) * f;
}

// ---------------------------------------------------------------------------
// Exact polytope recursion

namespace {

Cplx segment_quad(const Vec& a, const Vec& b, const Vec& xi) {
    const int n = 32;
    Cplx s{0.0, 0.0};
    Vec dir = sub(b, a);
    for (int i = 0; i < n; ++i) {
        Vec x = a;
        axpy((i + 0.5) / n, dir, x);
        s += cis(-dot(x, xi));
    }
    return s * (norm2(dir) / n);
}

Cplx triangle_quad(const Vec& A, const Vec& B, const Vec& C, const Vec& xi) {
    const int k = 32;
    Vec ab = sub(B, A), ac = sub(C, A);
    double area = 0.5 * norm2(cross3(ab, ac));
    Cplx s{0.0, 0.0};
    for (int i = 0; i < k; ++i)
        for (int j = 0; j + i < k; ++j) {
            Vec x = A;
            axpy((i + 1.0 / 3.0) / k, ab, x);
            axpy((j + 1.0 / 3.0) / k, ac, x);
            s += cis(-dot(x, xi));
            if (i + j < k - 1) {
                Vec y = A;
                axpy((i + 2.0 / 3.0) / k, ab, y);
                axpy((j + 2.0 / 3.0) / k, ac, y);
                s += cis(-dot(y, xi));
            }
        }
    return s * (area / (k * k));
}

struct FaceMemo {
    const PolytopeData& data;
    const Vec& xi;
    double xi_norm;
    double eps;
    std::vector<std::vector<std::optional<Cplx>>> memo;

    FaceMemo(const PolytopeData& dt, const Vec& x, double e)
        : data(dt), xi(x), xi_norm(norm2(x)), eps(e) {
        memo.resize(data.levels.size());
        for (size_t k = 0; k < data.levels.size(); ++k) memo[k].resize(data.levels[k].size());
    }

    Cplx face_integral(int dim, int id) {
        if (dim == 0) return cis(-dot(data.vertices[data.levels[0][id].verts[0]], xi));
        if (memo[dim][id]) return *memo[dim][id];
        const PolyFace& f = data.levels[dim][id];
        Vec xi_f(xi.size(), 0.0);
        for (const Vec& bv : f.basis) axpy(dot(xi, bv), bv, xi_f);
        double sf = norm2(xi_f);
        Cplx out;
        if (sf <= eps * xi_norm) {
            // Near-resonant face: the phase is constant along the face up to
            // O(eps |xi| diam); integrate it directly on a refined grid.
            if (dim == 1) {
                out = segment_quad(data.vertices[f.verts[0]], data.vertices[f.verts[1]], xi);
            } else {
                out = Cplx{0.0, 0.0};
                for (size_t m = 1; m + 1 < f.verts.size(); ++m)
                    out += triangle_quad(data.vertices[f.verts[0]], data.vertices[f.verts[m]],
                                         data.vertices[f.verts[m + 1]], xi);
            }
        } else {
            out = Cplx{0.0, 0.0};
            for (const auto& [gid, n] : f.sub)
                out += (kI * dot(xi_f, n) / (sf * sf)) * face_integral(dim - 1, gid);
        }
        memo[dim][id] = out;
        return out;
    }
};

Vec polytope_mass_centroid(const ConvexBody& b) {
    const PolytopeData& data = *b.poly;
    int d = data.d;
    Vec z = data.interior_point;
    Vec c(d, 0.0);
    double vol = 0.0;
    for (const auto& [fid, n] : data.body_sub) {
        const PolyFace& f = data.levels[d - 1][fid];
        double pyr = f.measure * (dot(n, f.centroid) - dot(n, z)) / d;
        Vec pc = z;
        Vec off = sub(f.centroid, z);
        axpy(d / (d + 1.0), off, pc);
        axpy(pyr, pc, c);
        vol += pyr;
    }
    return scaled(c, 1.0 / vol);
}

}  // namespace

Cplx ft_polytope_exact(const ConvexBody& b, const Vec& xi, double resonance_eps) {
    if (b.kind == BodyKind::PBall && b.p <= 1.0 + 1e-12)
        return ft_polytope_exact(*cross_polytope(b), xi, resonance_eps);
    if (b.kind != BodyKind::PolytopeH) throw Error("ft_polytope_exact: body must be a polytope");
    const PolytopeData& data = *b.poly;
    double s = norm2(xi);
    if (s * data.diameter < 1e-8)
        return b.volume() * cis(-dot(polytope_mass_centroid(b), xi));
    FaceMemo memo(data, xi, resonance_eps);
    Cplx out{0.0, 0.0};
    for (const auto& [fid, n] : data.body_sub)
        out += (kI * dot(xi, n) / (s * s)) * memo.face_integral(data.d - 1, fid);
    return out;
}

Cplx ft_polytope_surface_exact(const ConvexBody& b, const Vec& xi, double resonance_eps) {
    if (b.kind == BodyKind::PBall && b.p <= 1.0 + 1e-12)
        return ft_polytope_surface_exact(*cross_polytope(b), xi, resonance_eps);
    if (b.kind != BodyKind::PolytopeH)
        throw Error("ft_polytope_surface_exact: body must be a polytope");
    const PolytopeData& data = *b.poly;
    if (norm2(xi) * data.diameter < 1e-8) {
        Vec c(data.d, 0.0);
        double area = 0.0;
        for (const auto& [fid, n] : data.body_sub) {
            const PolyFace& f = data.levels[data.d - 1][fid];
            axpy(f.measure, f.centroid, c);
            area += f.measure;
        }
        return b.surface_area() * cis(-dot(scaled(c, 1.0 / area), xi));
    }
    FaceMemo memo(data, xi, resonance_eps);
    Cplx out{0.0, 0.0};
    for (const auto& [fid, n] : data.body_sub) out += memo.face_integral(data.d - 1, fid);
    return out;
}

// ---------------------------------------------------------------------------
// Boundary node sweeps

namespace {

using NodeFn = std::function<void(const Vec& x, const Vec& n, double w)>;

// Facet list (outward unit normal, vertex loop) for boxes and polytopes.
void facet_lists(const ConvexBody& b, std::vector<Vec>& fns, std::vector<std::vector<Vec>>& fverts) {
    if (b.kind == BodyKind::AxisBox) {
        int d = b.d;
        if (d > 3) throw DimensionUnsupported("boundary quadrature supports d <= 3");
        for (int i = 0; i < d; ++i)
            for (int s = -1; s <= 1; s += 2) {
                Vec n(d, 0.0);
                n[i] = s;
                fns.push_back(n);
                std::vector<Vec> vs;
                if (d == 2) {
                    int j = 1 - i;
                    Vec a = b.center, c = b.center;
                    a[i] += s * b.half_widths[i];
                    c[i] += s * b.half_widths[i];
                    a[j] -= b.half_widths[j];
                    c[j] += b.half_widths[j];
                    vs = {a, c};
                } else {
                    int j = (i + 1) % 3, k = (i + 2) % 3;
                    for (auto [sj, sk] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) {
                        Vec v = b.center;
                        v[i] += s * b.half_widths[i];
                        v[j] += sj * b.half_widths[j];
                        v[k] += sk * b.half_widths[k];
                        vs.push_back(v);
                    }
                }
                fverts.push_back(std::move(vs));
            }
    } else if (b.kind == BodyKind::PolytopeH) {
        const PolytopeData& data = *b.poly;
        for (const auto& [fid, n] : data.body_sub) {
            fns.push_back(n);
            const PolyFace& f = data.levels[data.d - 1][fid];
            std::vector<Vec> vs;
            for (int vi : f.verts) vs.push_back(data.vertices[vi]);
            fverts.push_back(std::move(vs));
        }
    } else {
        throw Error("facet_lists: body has no facets");
    }
}

double probe_rho_max(const ConvexBody& b) {
    Vec z = b.interior_point();
    double m = 0.0;
    const int g = 8;
    for (int axis = 0; axis < 3; ++axis)
        for (int sgn = -1; sgn <= 1; sgn += 2)
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    Vec w(3, 0.0);
                    w[axis] = sgn;
                    w[(axis + 1) % 3] = -1.0 + 2.0 * (i + 0.5) / g;
                    w[(axis + 2) % 3] = -1.0 + 2.0 * (j + 0.5) / g;
                    Vec e = normalized(w);
                    Vec x = z;
                    axpy(1.0, e, x);  // direction only; scale via support gap
                    double lo = 0.0, hi = b.diameter() + 1.0;
                    // rho(e) about z solves defining(z + rho e) = 0; bisect.
                    for (int it = 0; it < 60; ++it) {
                        double mid = 0.5 * (lo + hi);
                        Vec y = z;
                        axpy(mid, e, y);
                        if (b.defining(y) <= 0.0) lo = mid;
                        else hi = mid;
                    }
                    m = std::fmax(m, lo);
                }
    return m;
}

int64_t plan_nodes(const ConvexBody& b, double h) {
    switch (b.kind) {
        case BodyKind::Ball:
        case BodyKind::Ellipsoid:
        case BodyKind::PBall: {
            if (b.kind == BodyKind::PBall && b.p <= 1.0 + 1e-12)
                return plan_nodes(*cross_polytope(b), h);
            if (b.d == 2)
                return std::max<int64_t>(64, static_cast<int64_t>(std::ceil(b.surface_area() / h)));
            if (b.d == 3) {
                int64_t m = std::max<int64_t>(
                    16, static_cast<int64_t>(std::ceil(2.4 * probe_rho_max(b) / h)));
                return 6 * m * m;
            }
            throw DimensionUnsupported("boundary quadrature supports d <= 3");
        }
        case BodyKind::AxisBox:
        case BodyKind::PolytopeH: {
            std::vector<Vec> fns;
            std::vector<std::vector<Vec>> fverts;
            facet_lists(b, fns, fverts);
            int64_t total = 0;
            for (const auto& vs : fverts) {
                if (b.d == 2) {
                    double len = norm2(sub(vs[1], vs[0]));
                    total += std::max<int64_t>(1, static_cast<int64_t>(std::ceil(len / h)));
                } else {
                    for (size_t m = 1; m + 1 < vs.size(); ++m) {
                        double e = std::max({norm2(sub(vs[m], vs[0])), norm2(sub(vs[m + 1], vs[0])),
                                             norm2(sub(vs[m + 1], vs[m]))});
                        int64_t k = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(e / h)));
                        total += k * k;
                    }
                }
            }
            return total;
        }
        case BodyKind::Rotated:
            return plan_nodes(*b.base, h);
    }
    throw Error("plan_nodes: unknown body kind");
}

void sweep_boundary(const ConvexBody& b, double h, const NodeFn& fn) {
    switch (b.kind) {
        case BodyKind::Rotated: {
            const Mat& R = b.rot.m;
            sweep_boundary(*b.base, h, [&](const Vec& x, const Vec& n, double w) {
                fn(matvec(R, x), matvec(R, n), w);
            });
            return;
        }
        case BodyKind::Ball:
        case BodyKind::Ellipsoid:
        case BodyKind::PBall: {
            if (b.kind == BodyKind::PBall && b.p <= 1.0 + 1e-12) {
                sweep_boundary(*cross_polytope(b), h, fn);
                return;
            }
            Vec z = b.center;
            if (b.d == 2) {
                int64_t n = std::max<int64_t>(
                    64, static_cast<int64_t>(std::ceil(b.surface_area() / h)));
                for (int64_t i = 0; i < n; ++i) {
                    double al = 2.0 * kPi * (i + 0.5) / n;
                    Vec e{std::cos(al), std::sin(al)};
                    Vec ep{-e[1], e[0]};
                    double rho = b.radial_scale(e);
                    Vec x = z;
                    axpy(rho, e, x);
                    Vec nrm = normalized(b.gradient(x));
                    double rp = -rho * dot(ep, nrm) / dot(e, nrm);
                    fn(x, nrm, std::sqrt(rho * rho + rp * rp) * 2.0 * kPi / n);
                }
                return;
            }
            if (b.d != 3) throw DimensionUnsupported("boundary quadrature supports d <= 3");
            int64_t m = std::max<int64_t>(
                16, static_cast<int64_t>(std::ceil(2.4 * probe_rho_max(b) / h)));
            double du = 2.0 / m;
            for (int axis = 0; axis < 3; ++axis)
                for (int sgn = -1; sgn <= 1; sgn += 2)
                    for (int64_t i = 0; i < m; ++i) {
                        double u = -1.0 + du * (i + 0.5);
                        for (int64_t j = 0; j < m; ++j) {
                            double v = -1.0 + du * (j + 0.5);
                            Vec w(3, 0.0);
                            w[axis] = sgn;
                            w[(axis + 1) % 3] = u;
                            w[(axis + 2) % 3] = v;
                            double s = 1.0 + u * u + v * v;
                            Vec omega = scaled(w, 1.0 / std::sqrt(s));
                            double rho = b.radial_scale(omega);
                            Vec x = z;
                            axpy(rho, omega, x);
                            Vec nrm = normalized(b.gradient(x));
                            fn(x, nrm,
                               rho * rho * du * du / (dot(omega, nrm) * s * std::sqrt(s)));
                        }
                    }
            return;
        }
        case BodyKind::AxisBox:
        case BodyKind::PolytopeH: {
            std::vector<Vec> fns;
            std::vector<std::vector<Vec>> fverts;
            facet_lists(b, fns, fverts);
            for (size_t fi = 0; fi < fns.size(); ++fi) {
                const auto& vs = fverts[fi];
                if (b.d == 2) {
                    Vec dirv = sub(vs[1], vs[0]);
                    double len = norm2(dirv);
                    int64_t k = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(len / h)));
                    for (int64_t i = 0; i < k; ++i) {
                        Vec x = vs[0];
                        axpy((i + 0.5) / k, dirv, x);
                        fn(x, fns[fi], len / k);
                    }
                } else {
                    for (size_t t = 1; t + 1 < vs.size(); ++t) {
                        const Vec& A = vs[0];
                        Vec ab = sub(vs[t], A), ac = sub(vs[t + 1], A);
                        double area = 0.5 * norm2(cross3(ab, ac));
                        double e = std::max({norm2(ab), norm2(ac), norm2(sub(ac, ab))});
                        int64_t k = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(e / h)));
                        double wq = area / (k * k);
                        for (int64_t i = 0; i < k; ++i)
                            for (int64_t j = 0; j + i < k; ++j) {
                                Vec x = A;
                                axpy((i + 1.0 / 3.0) / k, ab, x);
                                axpy((j + 1.0 / 3.0) / k, ac, x);
                                fn(x, fns[fi], wq);
                                if (i + j < k - 1) {
                                    Vec y = A;
                                    axpy((i + 2.0 / 3.0) / k, ab, y);
                                    axpy((j + 2.0 / 3.0) / k, ac, y);
                                    fn(y, fns[fi], wq);
                                }
                            }
                    }
                }
            }
            return;
        }
    }
    throw Error("sweep_boundary: unknown body kind");
}

double effective_h(const QuadratureSpec& spec, double freq) {
    double h = spec.h;
    if (freq > 0) h = std::fmin(h, 2.0 * kPi / (spec.c * freq));
    return h;
}

void budget_check(const ConvexBody& b, double h, const QuadratureSpec& spec) {
    int64_t total = plan_nodes(b, h) + plan_nodes(b, h / 2.0);
    if (total > spec.max_nodes)
        throw QuadratureBudgetExceeded("boundary quadrature: node budget exceeded");
}

}  // namespace

FtValue ft_boundary_divergence(const BodyPtr& b, const Vec& xi, const QuadratureSpec& spec) {
    double s = norm2(xi);
    if (s < 1e-14) return {Cplx{b->volume(), 0.0}, Method::ClosedForm, 0.0};
    double h = effective_h(spec, s);
    budget_check(*b, h, spec);
    Cplx sums[2];
    for (int pass = 0; pass < 2; ++pass) {
        Cplx acc{0.0, 0.0};
        sweep_boundary(*b, pass == 0 ? h : h / 2.0, [&](const Vec& x, const Vec& n, double w) {
            acc += (dot(xi, n) * w) * cis(-dot(x, xi));
        });
        sums[pass] = acc * (kI / (s * s));
    }
    return {sums[1], Method::BoundaryQuadrature, std::abs(sums[1] - sums[0])};
}

FtValue ft_surface_measure(const BodyPtr& b, const Vec& xi, const QuadratureSpec& spec) {
    switch (b->kind) {
        case BodyKind::Ball:
            return {ft_closed_sphere_surface(*b, xi), Method::ClosedForm, 0.0};
        case BodyKind::PolytopeH:
            return {ft_polytope_surface_exact(*b, xi, spec.resonance_eps), Method::ExactRecursion,
                    0.0};
        case BodyKind::PBall:
            if (b->p <= 1.0 + 1e-12)
                return {ft_polytope_surface_exact(*b, xi, spec.resonance_eps),
                        Method::ExactRecursion, 0.0};
            break;
        case BodyKind::AxisBox: {
            std::vector<Vec> ns;
            std::vector<double> offs;
            if (b->d <= 3) {
                for (int i = 0; i < b->d; ++i)
                    for (int sgn = -1; sgn <= 1; sgn += 2) {
                        Vec n(b->d, 0.0);
                        n[i] = sgn;
                        ns.push_back(n);
                        offs.push_back(b->half_widths[i] + sgn * b->center[i]);
                    }
                BodyPtr asp = geometry::make_polytope_h(ns, offs);
                return {ft_polytope_surface_exact(*asp, xi, spec.resonance_eps),
                        Method::ExactRecursion, 0.0};
            }
            break;
        }
        case BodyKind::Rotated: {
            FtValue v = ft_surface_measure(b->base, mattvec(b->rot.m, xi), spec);
            return v;
        }
        default:
            break;
    }
    // Quadrature path (smooth non-closed boundaries).
    double s = norm2(xi);
    if (s < 1e-14) return {Cplx{b->surface_area(), 0.0}, Method::BoundaryQuadrature, 0.0};
    double h = effective_h(spec, s);
    budget_check(*b, h, spec);
    Cplx sums[2];
    for (int pass = 0; pass < 2; ++pass) {
        Cplx acc{0.0, 0.0};
        sweep_boundary(*b, pass == 0 ? h : h / 2.0,
                       [&](const Vec& x, const Vec&, double w) { acc += w * cis(-dot(x, xi)); });
        sums[pass] = acc;
    }
    return {sums[1], Method::BoundaryQuadrature, std::abs(sums[1] - sums[0])};
}

FtValue ft(const BodyPtr& b, const Vec& xi, const QuadratureSpec& spec) {
    switch (b->kind) {
        case BodyKind::Ball:
        case BodyKind::Ellipsoid:
            return {ft_closed_ball(*b, xi), Method::ClosedForm, 0.0};
        case BodyKind::AxisBox:
            return {ft_closed_box(*b, xi), Method::ClosedForm, 0.0};
        case BodyKind::PolytopeH:
            return {ft_polytope_exact(*b, xi, spec.resonance_eps), Method::ExactRecursion, 0.0};
        case BodyKind::PBall:
            if (b->p <= 1.0 + 1e-12)
                return {ft_polytope_exact(*b, xi, spec.resonance_eps), Method::ExactRecursion, 0.0};
            return ft_boundary_divergence(b, xi, spec);
        case BodyKind::Rotated:
            return ft(b->base, mattvec(b->rot.m, xi), spec);
    }
    throw Error("ft: unknown body kind");
}

BatchResult ft_batch(const BodyPtr& b, double R, const std::vector<Vec>& dirs,
                     const QuadratureSpec& spec, bool surface) {
    BatchResult out;
    out.values.resize(dirs.size());
    if (b->kind == BodyKind::Rotated) {
        std::vector<Vec> rdirs;
        rdirs.reserve(dirs.size());
        for (const Vec& w : dirs) rdirs.push_back(mattvec(b->rot.m, w));
        return ft_batch(b->base, R, rdirs, spec, surface);
    }
    bool quad_body = (b->kind == BodyKind::PBall && b->p > 1.0 + 1e-12) ||
                     (surface && b->kind == BodyKind::Ellipsoid);
    if (!quad_body) {
        double errmax = 0.0;
        for (size_t j = 0; j < dirs.size(); ++j) {
            Vec xi = scaled(dirs[j], R);
            FtValue v = surface ? ft_surface_measure(b, xi, spec) : ft(b, xi, spec);
            out.values[j] = v.value;
            errmax = std::fmax(errmax, v.err);
            out.method = v.method;
        }
        out.err = errmax;
        return out;
    }
    if (R < 1e-14) {
        double v0 = surface ? b->surface_area() : b->volume();
        std::fill(out.values.begin(), out.values.end(), Cplx{v0, 0.0});
        out.method = Method::BoundaryQuadrature;
        return out;
    }
    double h = effective_h(spec, R);
    budget_check(*b, h, spec);
    std::vector<Cplx> passes[2];
    for (int pass = 0; pass < 2; ++pass) {
        passes[pass].assign(dirs.size(), Cplx{0.0, 0.0});
        std::vector<Cplx>& acc = passes[pass];
        sweep_boundary(*b, pass == 0 ? h : h / 2.0, [&](const Vec& x, const Vec& n, double w) {
            for (size_t j = 0; j < dirs.size(); ++j) {
                double phase = -R * dot(x, dirs[j]);
                if (surface) {
                    acc[j] += w * cis(phase);
                } else {
                    acc[j] += (dot(dirs[j], n) * w) * cis(phase);
                }
            }
        });
        if (!surface)
            for (Cplx& v : acc) v *= kI / R;
    }
    double errmax = 0.0;
    for (size_t j = 0; j < dirs.size(); ++j)
        errmax = std::fmax(errmax, std::abs(passes[1][j] - passes[0][j]));
    out.values = std::move(passes[1]);
    out.err = errmax;
    out.method = Method::BoundaryQuadrature;
    return out;
}

FtValue ft_mc_oracle(const BodyPtr& b, const Vec& xi, int64_t n, uint64_t seed) {
    if (n < 2) throw Error("ft_mc_oracle: need at least 2 samples");
    int d = b->d;
    Vec lo(d), hi(d);
    double vbox = 1.0;
    for (int i = 0; i < d; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        hi[i] = b->support(e);
        e[i] = -1.0;
        lo[i] = -b->support(e);
        vbox *= hi[i] - lo[i];
    }
    rng::Stream st = rng::make_stream(seed, "fourier-mc-oracle", 0);
    Cplx sum{0.0, 0.0};
    double sum_sq = 0.0;  // E|f|^2 accumulator; f is the indicator times the phase
    Vec x(d);
    for (int64_t k = 0; k < n; ++k) {
        for (int i = 0; i < d; ++i) x[i] = st.uniform(lo[i], hi[i]);
        if (b->contains(x)) {
            sum += cis(-dot(x, xi));
            sum_sq += 1.0;
        }
    }
    Cplx mean = sum / static_cast<double>(n);
    double var = sum_sq / n - std::norm(mean);
    double se = vbox * std::sqrt(std::fmax(var, 0.0) / n);
    return {vbox * mean, Method::MonteCarlo, se};
}

}  // namespace ftdecay::fourier
