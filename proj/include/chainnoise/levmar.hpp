#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace chainnoise {

struct LmOptions {
    int max_iterations = 200;
    double cost_rel_tol = 1e-10;  // converged when an accepted step changes the cost less
    double lambda_init = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 0.25;
    double lambda_max = 1e14;
};

struct LmSummary {
    Eigen::VectorXd params;
    double cost = 0.0;          // sum of squared residuals
    double residual_rms = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<int> active_bounds;  // per parameter: -1 lower, +1 upper, 0 free
};

// Fills residuals (and the jacobian when requested) at parameter vector p.
using LmModel =
    std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& residuals,
                       Eigen::MatrixXd* jacobian)>;

// Damped Gauss-Newton with box projection: candidate steps are clamped to
// [lower, upper] before evaluation. Use +-inf for unbounded parameters.
LmSummary levenberg_marquardt_bounded(const LmModel& model, Eigen::VectorXd p0,
                                      const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper,
                                      const LmOptions& options = {});

}  // namespace chainnoise
