#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "riccati/coefficients.hpp"
#include "riccati/matrix_core.hpp"

namespace riccati {

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::optional<double> h_init;  // unset: starting-step heuristic
    double h_min = 1e-12;
    double h_max = 1e300;
    /// ||Y||_F above this ends a direct integration with blow_up(norm_cap).
    double blowup_norm = 1e8;
    /// (Phi, Psi) <- (I, Psi Phi^{-1}) once cond(Phi) exceeds this.
    double recondition_threshold = 1e8;
    /// Uniform output samples on [t0, t_end]; ignored when sample_times is set.
    int num_samples = 101;
    std::vector<double> sample_times;
    std::size_t max_steps = 10'000'000;

    void validate() const;
    std::vector<double> resolve_samples(double t0, double t_end) const;
};

enum class Method { direct, radon, lyapunov };
enum class TrajectoryStatus { completed, blow_up, phi_singular };
enum class BlowupTrigger { none, norm_cap, step_collapse };

const char* to_string(Method m);
const char* to_string(TrajectoryStatus s);
const char* to_string(BlowupTrigger b);

struct Trajectory {
    Method method = Method::direct;
    std::vector<double> times;
    std::vector<CMatrix> values;
    TrajectoryStatus status = TrajectoryStatus::completed;
    BlowupTrigger trigger = BlowupTrigger::none;
    /// Last accepted time before the blow-up trigger fired.
    std::optional<double> t_escape;
    /// Radon: times where Phi was singular at a sample or det Phi crossed zero
    /// between accepted steps (bracket midpoint).
    std::vector<double> singular_times;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;

    Eigen::Index dim() const { return values.empty() ? 0 : values.front().rows(); }
    std::size_t size() const { return times.size(); }
};

/// Samples of the linear system Phi' = R Phi + P Psi, Psi' = S Phi - Q Psi.
/// Each sample belongs to a normalization segment; segments change at restarts.
struct LinearFlow {
    std::vector<double> times;
    std::vector<CMatrix> phi;
    std::vector<CMatrix> psi;
    std::vector<int> segment;
    std::vector<double> restarts;
    std::vector<double> crossings;  // det Phi crossings bracketed between accepted steps
};

/// Y' = S - Y P Y - Q Y - Y R by the embedded 5(4) pair with PI control.
Trajectory integrate_riccati_direct(const CoefficientSet& cs, const CMatrix& Y0,
                                    const IntegratorOptions& opts = {});

/// Integrates (Phi, Psi) from (I, Y0) and reconstructs Y = Psi Phi^{-1} where Phi
/// is invertible. The flow continues through singular Phi.
std::pair<LinearFlow, Trajectory> integrate_linear_system(const CoefficientSet& cs,
                                                          const CMatrix& Y0,
                                                          const IntegratorOptions& opts = {});

/// Y~' = S - R* Y~ - Y~ R, the linear comparison equation with A = R.
Trajectory integrate_lyapunov_comparison(const CoefficientSet& cs, const CMatrix& Ytilde0,
                                         const IntegratorOptions& opts = {});

struct LiouvilleResult {
    double max_relative_error = 0.0;  // max of the two forms below
    double det_form_error = 0.0;      // det Phi(t) vs det Phi(t1) exp(int tr(R + P Y))
    double modulus_form_error = 0.0;  // |det Phi|^2 vs ... exp(int tr(R + R* + P(Y + Y*)))
    std::size_t samples_checked = 0;
    std::size_t spans = 0;
};

/// Compares det Phi against the Liouville formula on every restart-free,
/// singularity-free span of samples, with composite Simpson quadrature.
/// Throws Error when no span exists.
LiouvilleResult liouville_check(const LinearFlow& flow, const CoefficientSet& cs,
                                const Trajectory& traj);

/// Max over shared sample times of ||A - B||_F / (1 + ||A||_F).
double max_discrepancy(const Trajectory& a, const Trajectory& b);

} // namespace riccati
