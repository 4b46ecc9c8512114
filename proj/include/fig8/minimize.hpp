// Quasi-Newton minimization of the discrete action over the boundary
// chart, with multistart and continuation in alpha.
#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "fig8/path.hpp"

namespace fig8 {

struct ProblemSetup {
    Masses m;
    double alpha = 1.5;
    double T0 = 1.0;
    std::vector<double> grid;  // size N+1; defines the discretization

    int segments() const { return static_cast<int>(grid.size()) - 1; }
};

ProblemSetup make_setup(const Masses& m, double alpha, double T0, int n_segments);

struct SolveConfig {
    int max_iters = 20000;
    double grad_tol = 1e-8;
    double ls_shrink = 0.5;
    double ls_c1 = 1e-4;
    int memory = 10;
    std::uint64_t seed = 0;
    // Diagonal rescaling of the chart by the kinetic stiffness
    // sqrt(M (1/h_k + 1/h_{k+1})); essential on strongly graded grids
    // where 1/h spans many orders of magnitude.  grad_tol then applies
    // to the rescaled gradient.
    bool precondition = false;
};

enum class SolveStatus { converged, max_iters, collision_guard };

struct SolveResult {
    OmegaParams params;
    double action = 0.0;
    double grad_norm = 0.0;
    SolveStatus status = SolveStatus::max_iters;
    double min_pair_distance = 0.0;
    double min_pair_time = 0.0;
    int iterations = 0;
};

// Default initial guess: straight interpolation between the chart
// boundaries (theta = pi/2) plus a vertical lift that pushes the shape
// curve off the syzygy plane.
OmegaParams default_init(const ProblemSetup& setup);

// Minimize from a given start.  Trial steps whose quadrature-point
// distance would drop below 1e-10*sqrt(I) are rejected.  If the
// converged path lies below the syzygy plane it is conjugated.
SolveResult minimize(const OmegaParams& init, const ProblemSetup& setup,
                     const SolveConfig& cfg, std::ostream* log = nullptr);

// Seeded multistart around the default init; returns the converged
// result of least action (ties broken by smallest parameter norm).
// When `all` is given, every start's result is recorded in it.
SolveResult multistart(const ProblemSetup& setup, const SolveConfig& cfg, int n_starts,
                       std::vector<SolveResult>* all = nullptr);

// Warm-started chain of minimizations along a uniform alpha grid.
// min_dist_per_step, when given, records the minimizer's closest
// approach at each step.
SolveResult continue_alpha(const SolveResult& from, const ProblemSetup& setup_at_start,
                           double alpha_target, int steps, const SolveConfig& cfg,
                           std::vector<double>* min_dist_per_step = nullptr);

// Conjugate a chart point (reflection about the real axis).
OmegaParams conjugate(const OmegaParams& p);

// One-sided velocity at t=0 consistent with the discrete stationarity
// condition; its real parts vanish at a converged minimizer.
Velocity discrete_velocity_start(const DiscretePath& path, const Masses& m, Alpha a);

}  // namespace fig8
