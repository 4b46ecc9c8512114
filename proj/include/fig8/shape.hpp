// Shape-space projection of the planar three-body problem, syzygy
// detection and reduced syzygy sequences.
//
// The projection uses mass-weighted Jacobi coordinates followed by the
// Hopf map, which gives |w| = I/2 and w3 = 0 exactly on collinear
// configurations, with w3 > 0 for counterclockwise triangles.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fig8/dynamics.hpp"

namespace fig8 {

struct ShapePoint {
    double w1 = 0.0, w2 = 0.0, w3 = 0.0;

    double norm() const;
    ShapePoint normalized() const;
};

struct SyzygyEvent {
    double time = 0.0;
    int type = 0;           // index (1,2,3) of the middle mass
    int crossing_sign = 0;  // sign of dw3/dt at the crossing
    bool tangential = false;
};

struct SyzygySequence {
    std::vector<int> types;
    bool cyclic = false;

    std::string str() const;
};

// Time-sampled trajectory, dense enough that w3 changes sign at most
// once per step.
struct SampledTrajectory {
    std::vector<double> times;
    std::vector<Config> configs;
};

// Hopf map w of a centered configuration.
ShapePoint project(const Config& cfg, const Masses& m);

// Index of the middle mass of a collinear configuration.
// Throws std::invalid_argument when cfg is not collinear within tol, or
// when the middle position is ambiguous (binary collision).
int syzygy_type(const Config& cfg, const Masses& m, double tol = 1e-9);

// Locates all zeros of w3(t) by bisection on the linear interpolant of
// the samples (time tolerance 1e-10 * span).
std::vector<SyzygyEvent> extract_syzygies(const SampledTrajectory& traj, const Masses& m);

// Cancels adjacent equal pairs (wrapping when cyclic) until none remain.
SyzygySequence reduce_sequence(SyzygySequence seq);

struct Landmarks {
    ShapePoint E1, E2, E3;      // Euler collinear central configurations
    ShapePoint Lplus, Lminus;   // Lagrange equilateral points (poles)
    ShapePoint b12, b13, b23;   // binary collision rays
};

// Unit shape points of the named landmarks.  Euler points come from the
// collinear central-configuration quintic, solved by bisection.
Landmarks landmarks(const Masses& m);

// Distance ratio r_jb / r_aj of the Euler central configuration with
// masses ordered (a, j, b) on a line; exposed for testing.
double euler_ratio(double ma, double mj, double mb);

}  // namespace fig8
