#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with a PI step-size controller
// (Hairer, Norsett & Wanner, DOPRI5 conventions). The integrator lands exactly on
// each requested output time instead of interpolating.

#include <cstddef>
#include <functional>
#include <span>

#include "riccati/matrix_core.hpp"

namespace riccati::detail {

using State = CMatrix;
using Rhs = std::function<void(double t, const State& y, State& dy)>;

enum class StepAction { proceed, state_changed, stop };

struct DopriSettings {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects the starting-step heuristic
    double h_min = 1e-12;
    double h_max = 0.0;   // 0 means the whole span
    std::size_t max_steps = 10'000'000;
};

enum class DopriEnd { reached_end, stopped, step_collapse };

struct DopriOutcome {
    DopriEnd end = DopriEnd::reached_end;
    double t_last = 0.0;  // last accepted time
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// on_step runs after every accepted step and may replace the state
/// (returning state_changed) or end the integration (stop). on_output runs at
/// every output time reached, after on_step.
DopriOutcome run_dopri(const Rhs& f, double t0, State y0, std::span<const double> output_times,
                       const DopriSettings& settings,
                       const std::function<StepAction(double, State&)>& on_step,
                       const std::function<void(std::size_t, double, const State&)>& on_output);

} // namespace riccati::detail
