#pragma once

#include <optional>
#include <vector>

#include "riccati/coefficients.hpp"
#include "riccati/execution.hpp"
#include "riccati/integrate.hpp"

namespace riccati {

/// min over samples of lambda_min(Y + Y* - Lambda - Lambda*).
struct BoundReport {
    double min_gap = 0.0;
    double time_of_min = 0.0;
    bool pass = false;
    double tol = 0.0;
    std::size_t samples = 0;
};

/// lambda(t_k) = least eigenvalue of Y(t_k) + Y*(t_k) - Lambda(t_k) - Lambda*(t_k).
std::vector<double> eigen_monitor(const Trajectory& traj, const CoefficientFunction& lambda,
                                  Execution exec = Execution::parallel);

/// pass iff every monitored value is >= -tol.
BoundReport verify_hermitian_bound(const Trajectory& traj, const CoefficientFunction& lambda,
                                   double tol = 1e-6, Execution exec = Execution::parallel);

struct SandwichReport {
    double lower_min = 0.0;  // min lambda_min(Y)
    double lower_time = 0.0;
    double upper_min = 0.0;  // min lambda_min(Y~ - Y)
    double upper_time = 0.0;
    bool lower_pass = false;
    bool upper_pass = false;
    bool pass = false;
    double tol = 0.0;
};

/// 0 <= Y <= Y~ at every shared sample, both sides with lambda_min >= -tol.
/// Throws InvalidArgument when the sample grids differ or either run did not complete.
SandwichReport verify_sandwich(const Trajectory& traj, const Trajectory& traj_tilde,
                               double tol = 1e-6, Execution exec = Execution::parallel);

/// ||D_k + Y P Y + Q Y + Y R - S||_F / (1 + ||Y||_F^2) per sample, with D_k the
/// central-difference derivative; end samples carry no value.
std::vector<std::optional<double>> residual_series(const Trajectory& traj,
                                                   const CoefficientSet& cs);

/// Same for the comparison equation: ||D_k + R* Y + Y R - S||_F / (1 + ||Y||_F).
std::vector<std::optional<double>> lyapunov_residual_series(const Trajectory& traj,
                                                            const CoefficientSet& cs);

/// Max of residual_series. Throws InvalidArgument for fewer than 3 samples.
double residual_check(const Trajectory& traj, const CoefficientSet& cs);

} // namespace riccati
