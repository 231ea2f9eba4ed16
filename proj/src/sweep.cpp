#include "riccati/sweep.hpp"

#include <algorithm>

namespace riccati {

std::vector<GuaranteeOutcome> guarantee_sweep(const std::vector<InstanceSpec>& specs,
                                              const IntegratorOptions& opts, Execution exec) {
    std::vector<GuaranteeOutcome> out(specs.size());
    detail::for_each_index(specs.size(), exec, [&](std::size_t k) {
        const Instance inst = generate(specs[k]);
        const GridSpec grid = GridSpec::over(inst.cs, inst.grid_points);
        const CriterionReport report =
            check_theorem_3_1(inst.cs, inst.lambda, inst.Y0, grid, {}, Execution::serial);
        const Trajectory traj = integrate_riccati_direct(inst.cs, inst.Y0, opts);
        GuaranteeOutcome& o = out[k];
        o.spec = specs[k];
        o.criterion_holds = report.holds;
        if (const auto* ii = report.find("II"))
            for (double v : ii->values) o.mu_residual = std::max(o.mu_residual, v);
        o.status = traj.status;
        o.bound = verify_hermitian_bound(traj, inst.lambda, 1e-6, Execution::serial);
    });
    return out;
}

std::vector<SandwichOutcome> sandwich_sweep(const std::vector<InstanceSpec>& specs,
                                            const IntegratorOptions& opts, double tol,
                                            Execution exec) {
    std::vector<SandwichOutcome> out(specs.size());
    detail::for_each_index(specs.size(), exec, [&](std::size_t k) {
        const Instance inst = generate(specs[k]);
        const Trajectory y = integrate_riccati_direct(inst.cs, inst.Y0, opts);
        const Trajectory tilde = integrate_lyapunov_comparison(inst.cs, inst.Y0, opts);
        SandwichOutcome& o = out[k];
        o.spec = specs[k];
        o.status = y.status;
        o.tilde_status = tilde.status;
        if (y.status == TrajectoryStatus::completed && tilde.status == TrajectoryStatus::completed)
            o.report = verify_sandwich(y, tilde, tol, Execution::serial);
    });
    return out;
}

} // namespace riccati
