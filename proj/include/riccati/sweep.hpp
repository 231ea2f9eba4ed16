#pragma once

#include <vector>

#include "riccati/criteria.hpp"
#include "riccati/execution.hpp"
#include "riccati/instances.hpp"
#include "riccati/integrate.hpp"
#include "riccati/verify.hpp"

namespace riccati {

/// One generated instance taken through check, direct integration and the bound.
struct GuaranteeOutcome {
    InstanceSpec spec;
    bool criterion_holds = false;
    double mu_residual = 0.0;  // worst condition II residual
    TrajectoryStatus status = TrajectoryStatus::completed;
    BoundReport bound;
};

/// Instances are independent; `exec` only decides whether they run concurrently.
/// Every inner kernel runs serially.
std::vector<GuaranteeOutcome> guarantee_sweep(const std::vector<InstanceSpec>& specs,
                                              const IntegratorOptions& opts = {},
                                              Execution exec = Execution::parallel);

struct SandwichOutcome {
    InstanceSpec spec;
    TrajectoryStatus status = TrajectoryStatus::completed;
    TrajectoryStatus tilde_status = TrajectoryStatus::completed;
    SandwichReport report;
};

/// Y from the Riccati equation, Y~ from the comparison equation with Y~(t0) = Y0.
std::vector<SandwichOutcome> sandwich_sweep(const std::vector<InstanceSpec>& specs,
                                            const IntegratorOptions& opts = {},
                                            double tol = 1e-6,
                                            Execution exec = Execution::parallel);

} // namespace riccati
