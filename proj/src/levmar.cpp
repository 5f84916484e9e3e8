#include "chainnoise/levmar.hpp"

#include <cmath>
#include <stdexcept>

namespace chainnoise {

namespace {

Eigen::VectorXd clamp_to_box(Eigen::VectorXd p, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] < lo[i]) p[i] = lo[i];
        if (p[i] > hi[i]) p[i] = hi[i];
    }
    return p;
}

}  // namespace

LmSummary levenberg_marquardt_bounded(const LmModel& model, Eigen::VectorXd p0,
                                      const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper,
                                      const LmOptions& options) {
    const Eigen::Index np = p0.size();
    if (lower.size() != np || upper.size() != np) {
        throw std::invalid_argument("bound vectors must match the parameter count");
    }
    for (Eigen::Index i = 0; i < np; ++i) {
        if (!(lower[i] <= upper[i])) {
            throw std::invalid_argument("lower bound exceeds upper bound");
        }
    }

    Eigen::VectorXd p = clamp_to_box(std::move(p0), lower, upper);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    model(p, r, &jac);
    double cost = r.squaredNorm();
    const Eigen::Index nres = r.size();

    double lambda = options.lambda_init;
    LmSummary out;
    out.iterations = 0;
    out.converged = (cost == 0.0);

    while (!out.converged && out.iterations < options.max_iterations) {
        ++out.iterations;

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool stepped = false;
        while (lambda <= options.lambda_max) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index i = 0; i < np; ++i) {
                const double d = jtj(i, i);
                a(i, i) += lambda * (d > 0.0 ? d : 1.0);
            }

            // Active-set refinement: coordinates clamped by the box are fixed
            // at that bound and the damped system is re-solved for the rest,
            // so bound-pinned parameters do not degrade the free directions.
            Eigen::VectorXd step = a.ldlt().solve(-jtr);
            std::vector<bool> fixed(static_cast<std::size_t>(np), false);
            std::vector<double> pin(static_cast<std::size_t>(np), 0.0);
            for (Eigen::Index pass = 0; pass < np; ++pass) {
                bool newly_fixed = false;
                for (Eigen::Index i = 0; i < np; ++i) {
                    if (fixed[static_cast<std::size_t>(i)]) continue;
                    const double target = p[i] + step[i];
                    if (target < lower[i]) {
                        fixed[static_cast<std::size_t>(i)] = true;
                        pin[static_cast<std::size_t>(i)] = lower[i];
                        newly_fixed = true;
                    } else if (target > upper[i]) {
                        fixed[static_cast<std::size_t>(i)] = true;
                        pin[static_cast<std::size_t>(i)] = upper[i];
                        newly_fixed = true;
                    }
                }
                if (!newly_fixed) break;
                Eigen::MatrixXd a_red = a;
                Eigen::VectorXd rhs = -jtr;
                for (Eigen::Index i = 0; i < np; ++i) {
                    if (!fixed[static_cast<std::size_t>(i)]) continue;
                    const double delta = pin[static_cast<std::size_t>(i)] - p[i];
                    rhs -= a.col(i) * delta;
                    a_red.row(i).setZero();
                    a_red.col(i).setZero();
                    a_red(i, i) = 1.0;
                    rhs[i] = delta;
                }
                step = a_red.ldlt().solve(rhs);
                for (Eigen::Index i = 0; i < np; ++i) {
                    if (fixed[static_cast<std::size_t>(i)]) {
                        step[i] = pin[static_cast<std::size_t>(i)] - p[i];
                    }
                }
            }
            const Eigen::VectorXd cand = clamp_to_box(p + step, lower, upper);

            Eigen::VectorXd r_cand;
            model(cand, r_cand, nullptr);
            const double cost_cand = r_cand.squaredNorm();
            if (cost_cand < cost) {
                const double rel_change = (cost - cost_cand) / (cost > 0.0 ? cost : 1.0);
                p = cand;
                cost = cost_cand;
                model(p, r, &jac);
                lambda = std::max(lambda * options.lambda_down, 1e-16);
                stepped = true;
                if (rel_change < options.cost_rel_tol || cost == 0.0) out.converged = true;
                break;
            }
            lambda *= options.lambda_up;
        }
        if (!stepped) {
            // Damping exhausted: no descent direction left at this precision.
            out.converged = true;
            break;
        }
    }

    out.params = p;
    out.cost = cost;
    out.residual_rms = (nres > 0) ? std::sqrt(cost / static_cast<double>(nres)) : 0.0;
    out.active_bounds.assign(static_cast<std::size_t>(np), 0);
    for (Eigen::Index i = 0; i < np; ++i) {
        const double span = std::isfinite(upper[i] - lower[i]) ? (upper[i] - lower[i]) : 1.0;
        const double eps = 1e-12 * std::max(1.0, std::fabs(span));
        if (std::isfinite(lower[i]) && p[i] - lower[i] <= eps) {
            out.active_bounds[static_cast<std::size_t>(i)] = -1;
        } else if (std::isfinite(upper[i]) && upper[i] - p[i] <= eps) {
            out.active_bounds[static_cast<std::size_t>(i)] = +1;
        }
    }
    return out;
}

}  // namespace chainnoise
