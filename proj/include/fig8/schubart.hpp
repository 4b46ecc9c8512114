// Collinear sub-problem: quarter collision solution with the pair (2,3)
// pinned together at t=0, collision asymptotics of the cluster inertia,
// and the matched-ladder comparison of the collinear and planar minima
// at alpha = 1.
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "fig8/minimize.hpp"
#include "fig8/orbit.hpp"

namespace fig8 {

struct CollinearPath {
    std::vector<double> times;                 // graded, t0 = 0
    std::vector<std::array<double, 3>> nodes;  // real positions, centered
    bool collision_at_zero = true;

    int segments() const { return static_cast<int>(times.size()) - 1; }
};

// Embed into the plane (imaginary parts zero).
DiscretePath to_planar(const CollinearPath& path);

struct CollinearResult {
    CollinearPath path;
    double action = 0.0;
    double grad_norm = 0.0;
    SolveStatus status = SolveStatus::max_iters;
    int iterations = 0;
};

// Minimize the action over real-line paths with x2(0) = x3(0) pinned
// (binary collision, x1(0) by centering) and endpoint (-c, c, 0).
// Grid t_k = T0 (k/N)^grid_power resolves the collision cusp.
CollinearResult minimize_collinear(const Masses& m, double alpha, double T0, int n_segments,
                                   const SolveConfig& cfg = {}, double grid_power = 3.0);

struct MonotonicityReport {
    bool x1_increasing = false;
    bool x2_increasing = false;
    bool x3_decreasing = false;
    bool ordered = false;  // x1 < x3 < x2 on (0, T0)
};
MonotonicityReport check_monotone(const CollinearPath& path);

// Full period 4*T0 collinear collision orbit via the twist/reflection
// extensions; collisions at t=0 (pair 2,3) and t=2T0 (pair 1,3).
FullOrbit build_schubart(const CollinearPath& quarter, const Masses& m, double alpha);

// Moment of inertia of the (2,3) cluster about its own center of mass.
double cluster_inertia(const Config& x, const Masses& m);

struct SundmanFit {
    double exponent = 0.0;
    double kappa = 0.0;
    int points = 0;
};

// Log-log least squares of I_K(t) = (kappa t)^exponent over the window.
SundmanFit sundman_fit(const std::vector<double>& times, const std::vector<double>& inertia,
                       double t_lo, double t_hi);

// Predicted collision constant: the scale of the zero-energy two-body
// ejection of the (2,3) pair, I_K(t) ~ (kappa t)^{4/(2+alpha)}.
double collision_kappa(double m2, double m3, Alpha a);

// Samples (t, I_K(t)) on a geometric ladder in (t_lo, t_hi) by taking a
// well-resolved state of the quarter at t_anchor and integrating the
// equations of motion backward toward the collision.
std::vector<std::pair<double, double>> collision_inertia_samples(
    const CollinearPath& quarter, const Masses& m, double alpha, double t_lo, double t_hi,
    int points, double t_anchor_fraction = 0.05);

struct ConditionReport {
    std::vector<int> levels;
    std::vector<double> schubart_action;
    std::vector<double> omega_action;  // planar admissible-path minimum per level
    double schubart_extrap = 0.0, omega_extrap = 0.0;
    double schubart_order = 0.0, omega_order = 0.0;
    double schubart_contraction = 0.0, omega_contraction = 0.0;
    double gap = 0.0;          // schubart_extrap - omega_extrap
    double uncertainty = 0.0;  // last successive differences, summed
};

// Matched-grid comparison of the collinear quarter action against the
// unrestricted admissible-path infimum at alpha = 1.  Exploratory: the
// report states the extrapolated gap with its uncertainty and makes no
// further claim.
ConditionReport condition_test(const Masses& m, double T0, const std::vector<int>& levels,
                               const SolveConfig& cfg = {}, int n_starts = 4);

}  // namespace fig8
