#include "riccati/verify.hpp"

#include <algorithm>
#include <limits>

#include "riccati/errors.hpp"

namespace riccati {

namespace {

// Three-point derivative at interior sample k (non-uniform spacing allowed).
CMatrix central_difference(const Trajectory& traj, std::size_t k) {
    const auto& x = traj.times;
    const auto& y = traj.values;
    const double h1 = x[k] - x[k - 1];
    const double h2 = x[k + 1] - x[k];
    return y[k - 1] * (-h2 / (h1 * (h1 + h2))) + y[k] * ((h2 - h1) / (h1 * h2)) +
           y[k + 1] * (h1 / (h2 * (h1 + h2)));
}

template <typename Residual>
std::vector<std::optional<double>> residuals(const Trajectory& traj, const CoefficientSet& cs,
                                             Residual&& residual) {
    if (traj.dim() != 0 && traj.dim() != cs.n())
        throw DimensionError("residual: trajectory and coefficient dimensions differ");
    std::vector<std::optional<double>> out(traj.size());
    for (std::size_t k = 1; k + 1 < traj.size(); ++k)
        out[k] = residual(traj.times[k], traj.values[k], central_difference(traj, k));
    return out;
}

void require_gauge(const Trajectory& traj, const CoefficientFunction& lambda) {
    if (traj.dim() != 0 && traj.dim() != lambda.dim())
        throw DimensionError("verify: trajectory and gauge dimensions differ");
}

} // namespace

std::vector<double> eigen_monitor(const Trajectory& traj, const CoefficientFunction& lambda,
                                  Execution exec) {
    require_gauge(traj, lambda);
    std::vector<double> out(traj.size());
    detail::for_each_index(traj.size(), exec, [&](std::size_t k) {
        const CMatrix L = lambda.eval(traj.times[k]);
        const CMatrix& Y = traj.values[k];
        out[k] = min_eigenvalue(Y + Y.adjoint() - L - L.adjoint());
    });
    return out;
}

BoundReport verify_hermitian_bound(const Trajectory& traj, const CoefficientFunction& lambda,
                                   double tol, Execution exec) {
    const auto gaps = eigen_monitor(traj, lambda, exec);
    BoundReport report;
    report.tol = tol;
    report.samples = gaps.size();
    if (gaps.empty()) {
        report.pass = true;
        return report;
    }
    const auto it = std::min_element(gaps.begin(), gaps.end());
    report.min_gap = *it;
    report.time_of_min = traj.times[static_cast<std::size_t>(it - gaps.begin())];
    report.pass = report.min_gap >= -tol;
    return report;
}

SandwichReport verify_sandwich(const Trajectory& traj, const Trajectory& traj_tilde, double tol,
                               Execution exec) {
    if (traj.times != traj_tilde.times)
        throw InvalidArgument("verify_sandwich: sample grids differ");
    if (traj.status != TrajectoryStatus::completed ||
        traj_tilde.status != TrajectoryStatus::completed)
        throw InvalidArgument("verify_sandwich: both trajectories must be completed");
    if (traj.dim() != traj_tilde.dim())
        throw DimensionError("verify_sandwich: dimensions differ");

    std::vector<double> lower(traj.size()), upper(traj.size());
    detail::for_each_index(traj.size(), exec, [&](std::size_t k) {
        lower[k] = min_eigenvalue(traj.values[k]);
        upper[k] = min_eigenvalue(traj_tilde.values[k] - traj.values[k]);
    });
    SandwichReport report;
    report.tol = tol;
    report.lower_min = std::numeric_limits<double>::infinity();
    report.upper_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (lower[k] < report.lower_min) {
            report.lower_min = lower[k];
            report.lower_time = traj.times[k];
        }
        if (upper[k] < report.upper_min) {
            report.upper_min = upper[k];
            report.upper_time = traj.times[k];
        }
    }
    report.lower_pass = report.lower_min >= -tol;
    report.upper_pass = report.upper_min >= -tol;
    report.pass = report.lower_pass && report.upper_pass;
    return report;
}

std::vector<std::optional<double>> residual_series(const Trajectory& traj,
                                                   const CoefficientSet& cs) {
    return residuals(traj, cs, [&](double t, const CMatrix& Y, const CMatrix& dY) {
        const CMatrix r =
            dY + Y * cs.P().eval(t) * Y + cs.Q().eval(t) * Y + Y * cs.R().eval(t) - cs.S().eval(t);
        const double ny = Y.norm();
        return r.norm() / (1.0 + ny * ny);
    });
}

std::vector<std::optional<double>> lyapunov_residual_series(const Trajectory& traj,
                                                            const CoefficientSet& cs) {
    return residuals(traj, cs, [&](double t, const CMatrix& Y, const CMatrix& dY) {
        const CMatrix R = cs.R().eval(t);
        const CMatrix r = dY + R.adjoint() * Y + Y * R - cs.S().eval(t);
        return r.norm() / (1.0 + Y.norm());
    });
}

double residual_check(const Trajectory& traj, const CoefficientSet& cs) {
    if (traj.size() < 3) throw InvalidArgument("residual_check: need at least 3 samples");
    double worst = 0.0;
    for (const auto& r : residual_series(traj, cs))
        if (r) worst = std::max(worst, *r);
    return worst;
}

} // namespace riccati
