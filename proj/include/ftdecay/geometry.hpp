#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftdecay/errors.hpp"
#include "ftdecay/rng.hpp"
#include "ftdecay/vec.hpp"

namespace ftdecay::geometry {

struct Rotation {
    Mat m;  // d x d orthogonal, det +1
    int dim() const { return m.n; }
    static Rotation identity(int d) { return Rotation{Mat::identity(d)}; }
};

// Validates orthonormality (1e-12) and determinant +1 (1e-12).
Rotation make_rotation(const Mat& m);
Rotation rotation_2d(double angle);
Rotation rotation_from_quaternion(double w, double x, double y, double z);
// Haar-distributed rotation (d = 2 uniform angle, d = 3 uniform quaternion).
Rotation random_rotation(int d, rng::Stream& stream);
Rotation compose(const Rotation& a, const Rotation& b);  // applies b, then a
Rotation transpose(const Rotation& r);

enum class BodyKind { Ball, Ellipsoid, AxisBox, PBall, PolytopeH, Rotated };

// One face of a polytope's face lattice. Faces of dimension k carry an
// orthonormal basis of their affine hull and, per subface, the outward unit
// normal of that subface within the hull.
struct PolyFace {
    int dim = 0;
    std::vector<int> verts;
    Vec centroid;
    double measure = 0.0;  // k-dimensional volume; 1 for vertices
    double diameter = 0.0;
    std::vector<Vec> basis;
    std::vector<std::pair<int, Vec>> sub;  // (index into level dim-1, outward normal in hull)
};

struct PolytopeData {
    int d = 0;
    std::vector<Vec> normals;  // all constraints, unit rows (redundant ones kept for membership)
    std::vector<double> offsets;
    std::vector<Vec> vertices;
    std::vector<std::vector<PolyFace>> levels;  // levels[k] = faces of dimension k, k < d
    std::vector<std::pair<int, Vec>> body_sub;  // facets of the body itself
    Vec interior_point;
    double diameter = 0.0;
};

class ConvexBody;
using BodyPtr = std::shared_ptr<const ConvexBody>;

class ConvexBody {
  public:
    int d = 0;
    BodyKind kind = BodyKind::Ball;

    double radius = 0.0;  // Ball, PBall
    double p = 2.0;       // PBall exponent
    Vec center;           // Ball, Ellipsoid, AxisBox, PBall
    Vec semi_axes;        // Ellipsoid
    Mat orientation;      // Ellipsoid: columns are principal directions
    Vec half_widths;      // AxisBox
    std::shared_ptr<const PolytopeData> poly;  // PolytopeH
    BodyPtr base;         // Rotated
    Rotation rot = Rotation{Mat{}};  // Rotated: body = rot(base), rotation about the origin

    double volume() const { return volume_; }
    double surface_area() const { return area_; }

    // sup over the body of x . omega; omega need not be unit.
    double support(const Vec& omega) const;

    // Closed membership (boundary included).
    bool contains(const Vec& x) const;

    // Convex defining function, <= 0 inside, 0 on the boundary. Units are
    // length-like for every variant, so the 1e-9 boundary tolerance is uniform.
    double defining(const Vec& x) const;

    // Outward unit normal at a boundary point (residual within 1e-9).
    // NonSmoothPoint within 1e-9 of a polytope/box ridge.
    Vec normal_at(const Vec& x) const;

    // Smooth variants admit a radial parametrization about the center:
    // center + radial_scale(e) * e lies on the boundary for any e != 0.
    bool is_smooth() const;
    double radial_scale(const Vec& e) const;

    // Unnormalized outward gradient of the defining function (smooth variants).
    Vec gradient(const Vec& x) const;

    // Euclidean diameter upper bound (exact for polytopes).
    double diameter() const { return diameter_; }

    // Interior base point for radial parametrizations and row scans.
    Vec interior_point() const;

    double volume_ = 0.0;
    double area_ = 0.0;
    double diameter_ = 0.0;
};

BodyPtr make_ball(int d, double r, const Vec& center);
BodyPtr make_ball(int d, double r);
BodyPtr make_ellipsoid(const Vec& semi_axes, const Vec& center, const Mat& orientation);
BodyPtr make_ellipsoid(const Vec& semi_axes);
BodyPtr make_axis_box(const Vec& half_widths, const Vec& center);
BodyPtr make_axis_box(const Vec& half_widths);
BodyPtr make_pball(int d, double p, double r, const Vec& center);
BodyPtr make_pball(int d, double p, double r);
BodyPtr make_polytope_h(const std::vector<Vec>& normals, const std::vector<double>& offsets);

// Rotation about the origin. Returns an exactly transformed body where the
// variant is closed under rotation (ball, ellipsoid, polytope, box via its
// H-representation for d <= 3) and a generic rotated wrapper otherwise.
BodyPtr rotate(const BodyPtr& body, const Rotation& rot);

// Cell of the fixed partition of S^{d-1}: a gnomonic box on a cube face,
// bisected until the certified half-aperture is <= pi/8. `frame`, when present,
// rotates the cell (normals are pulled back through frame^T before the test).
struct ConeCell {
    int axis = 0;
    int sign = 1;
    Vec ulo, uhi;  // (d-1) gnomonic coordinates, box within [-1,1]^{d-1}
    std::optional<Mat> frame;
    bool contains_direction(const Vec& n) const;
};

// Fixed cover of S^{d-1} by cone cells; count depends only on d.
std::vector<ConeCell> sphere_cells(int d);

struct BoundaryPatch {
    BodyPtr body;
    Vec axis;               // normal-cone axis, unit
    double aperture = 0.0;  // certified half-aperture, < pi/4 for valid patches
    double lipschitz = 0.0; // K < 1 for valid patches
    double base_offset = 0.0;
    std::vector<Vec> tangent;  // d-1 orthonormal vectors spanning the base plane
    Vec dom_lo, dom_hi;        // graph domain box in tangent coordinates
    std::optional<ConeCell> cell;  // normal membership; absent = accept any normal

    bool on_patch_normal(const Vec& n) const {
        return !cell || cell->contains_direction(n);
    }
};

// Partition of the boundary pulled back through the Gauss map. Smooth bodies
// get one patch per sphere cell; polytope facets are grouped by the cell
// containing their normal (singleton groups keep K = 0).
std::vector<BoundaryPatch> decompose_boundary(const BodyPtr& body);

// Max over sampled point pairs of |(x-y).a| / |x-y|; passing means
// <= K/sqrt(1+K^2) < 1/sqrt(2). DegeneratePatch if no valid pair can be drawn.
double check_secant_property(const BoundaryPatch& patch, int n_pairs, uint64_t seed);

// Empirical C^{3/2} constant: sup |(P-Q).n(Q)| / |P-Q|^{3/2} over sampled pairs.
double check_c32(const BodyPtr& body, const BoundaryPatch& patch, int n_pairs, uint64_t seed);

// Orthonormal basis of the hyperplane orthogonal to unit vector a.
std::vector<Vec> tangent_basis(const Vec& a);

}  // namespace ftdecay::geometry
