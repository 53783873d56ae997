#pragma once

#include <cstdint>
#include <vector>

#include "ftdecay/decay.hpp"
#include "ftdecay/geometry.hpp"

namespace ftdecay::lattice {

using geometry::BodyPtr;
using geometry::Rotation;

enum class RotationEnsemble { Haar, AxisAngle };

// Number of integer lattice points inside the dilated rotated body t * rot(B),
// by exact row scanning (convex 1-d slices per integer column). d <= 3.
int64_t count_points(const BodyPtr& b, double t, const Rotation& rot);

struct LatticeSample {
    double t = 0.0;
    int rot_index = 0;
    int64_t count = 0;
    double discrepancy = 0.0;  // count - t^d |B|
};

struct LatticeSeries {
    std::vector<double> tgrid;
    std::vector<LatticeSample> samples;    // grid-major, rotation-minor order
    std::vector<decay::ScanPoint> rms;     // per t: RMS discrepancy over rotations
};

// RMS discrepancy over a rotation ensemble on a geometric t grid. The same
// rotations are reused across every t. The numerical floor for fits is 1e-9.
LatticeSeries rotational_l2(const BodyPtr& b, double tmin, double tmax, int ppo, int nrot,
                            uint64_t seed, RotationEnsemble ensemble = RotationEnsemble::Haar,
                            int jobs = 1);

// Power-law fit of the RMS series (floor 1e-9, absolute).
decay::FitResult fit(const LatticeSeries& s, decay::FitKind kind = decay::FitKind::Direct);

}  // namespace ftdecay::lattice
