// Limited-memory quasi-Newton minimizer with Armijo backtracking.
// Derivative-only; shared by the planar, collinear and Kepler solvers.
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace fig8 {

struct LbfgsOptions {
    int max_iters = 20000;
    double grad_tol = 1e-8;   // infinity norm
    double ls_shrink = 0.5;
    double ls_c1 = 1e-4;
    int memory = 10;

    void validate() const;
};

enum class LbfgsStatus { converged, max_iters, line_search_failed };

struct LbfgsResult {
    std::vector<double> x;
    double f = 0.0;
    double grad_norm = 0.0;   // infinity norm
    LbfgsStatus status = LbfgsStatus::max_iters;
    int iterations = 0;
};

// objective(x, grad) returns f and fills grad (same size as x).
// acceptable(x), when given, vetoes trial points (collision guard);
// vetoed points are treated as line-search failures at that step size.
// on_iterate(iter, f, gnorm, x) is called after each accepted step.
LbfgsResult lbfgs_minimize(
    std::vector<double> x0,
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& objective,
    const LbfgsOptions& opts,
    const std::function<bool(const std::vector<double>&)>& acceptable = nullptr,
    const std::function<void(int, double, double, const std::vector<double>&)>& on_iterate =
        nullptr);

}  // namespace fig8
