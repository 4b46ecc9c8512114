// Discretized H^1 paths, the boundary chart for the admissible path
// space (type-2 syzygy start, E3 end), and the discrete action with its
// exact gradient.
//
// Discretization: piecewise-linear nodes, exact segment kinetic energy,
// 2-point Gauss quadrature of the potential on the linear interpolant.
// Segments whose quadrature points come closer than 1e-3*sqrt(I) are
// subdivided 8x for the potential quadrature.
#pragma once

#include <vector>

#include "fig8/dynamics.hpp"

namespace fig8 {

struct DiscretePath {
    std::vector<double> times;   // strictly increasing, t0 = 0
    std::vector<Config> nodes;   // times.size() entries, all centered

    int segments() const { return static_cast<int>(times.size()) - 1; }
    double duration() const { return times.back() - times.front(); }
};

// Unconstrained chart of the admissible boundary manifolds:
//   t = 0  : real collinear x1 < x2 < x3 with gaps e^u, e^v, centered;
//   t = T0 : (-c e^{i theta}, c e^{i theta}, 0) with c = e^{logc}
//            (the E3 central configuration when m1 = m2);
//   interior node k: x1, x2 free (4 reals), x3 fixed by centering.
struct OmegaParams {
    double u = 0.0, v = 0.0;
    double logc = 0.0, theta = 0.0;
    std::vector<double> interior;  // 4 * (N-1) reals

    int segments() const { return static_cast<int>(interior.size()) / 4 + 1; }
};

struct ActionEvaluation {
    double value = 0.0;
    std::vector<double> gradient;      // w.r.t. packed OmegaParams
    double min_pair_distance = 0.0;    // over all quadrature points
    double min_pair_time = 0.0;
};

// Evaluation against node coordinates (used internally and by the
// collinear and Kepler solvers).
struct NodeActionResult {
    double value = 0.0;
    std::vector<Config> node_grad;     // dA/d(re,im) packed as Complex
    double min_pair_distance = 0.0;
    double min_pair_time = 0.0;
};

std::vector<double> uniform_grid(double T0, int n_segments);
// t_k = T0 (k/N)^power; resolves power-law cusps at a pinned collision.
std::vector<double> graded_grid(double T0, int n_segments, double power = 3.0);

DiscretePath decode(const OmegaParams& p, const Masses& m, const std::vector<double>& grid);
DiscretePath decode(const OmegaParams& p, const Masses& m, double T0);

// Inverse of decode on paths with admissible boundary nodes.
OmegaParams encode(const DiscretePath& path, const Masses& m);

double action(const DiscretePath& path, const Masses& m, Alpha a);

NodeActionResult action_nodes(const DiscretePath& path, const Masses& m, Alpha a,
                              bool want_grad, bool allow_node_collision = false);

ActionEvaluation action_gradient(const OmegaParams& p, const Masses& m, Alpha a,
                                 const std::vector<double>& grid);

DiscretePath refine(const DiscretePath& path, int factor);

// Smallest pairwise distance over all potential quadrature points,
// with the time at which it occurs.
std::pair<double, double> min_pair_distance(const DiscretePath& path);

std::vector<double> pack(const OmegaParams& p);
OmegaParams unpack(const std::vector<double>& x);

}  // namespace fig8
