#pragma once

#include <Eigen/Core>

#include <functional>

namespace roofforge {

struct LbfgsOptions {
    int memory = 10;
    double c1 = 1e-4;
    double c2 = 0.9;
    double tol_grad = 1e-12;    // infinity norm
    double tol_energy = 1e-16;  // absolute decrease per iteration
    int max_iters = 2000;
    double time_limit = 0.0;    // seconds; 0 disables
};

enum class LbfgsStatus { gradient, energy, max_iterations, time_limit };

const char* lbfgs_status_name(LbfgsStatus s);

struct LbfgsReport {
    LbfgsStatus status = LbfgsStatus::max_iterations;
    int iterations = 0;
    double f = 0.0;
    double grad_inf = 0.0;
    bool converged() const { return status == LbfgsStatus::gradient || status == LbfgsStatus::energy; }
};

/// Returns f(x) and writes the gradient into g (already sized).
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& g)>;
/// Called after every accepted step with the iteration number and objective value.
using IterationCallback = std::function<void(int iteration, const Eigen::VectorXd& x, double f)>;

/// Limited-memory BFGS with a strong-Wolfe line search (bracketing + cubic zoom).
/// x is updated in place to the best iterate found.
LbfgsReport minimize_lbfgs(const Objective& fg, Eigen::VectorXd& x, const LbfgsOptions& options,
                           const IterationCallback& on_iteration = {});

}  // namespace roofforge
