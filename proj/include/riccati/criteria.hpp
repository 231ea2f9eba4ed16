#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riccati/coefficients.hpp"
#include "riccati/execution.hpp"
#include "riccati/matrix_core.hpp"

namespace riccati {

/// Uniform grid on [t0, t_end].
struct GridSpec {
    double t0 = 0.0;
    double t_end = 1.0;
    int num_points = 1001;

    /// Throws InvalidArgument for num_points < 2 or t0 >= t_end.
    void validate() const;
    std::vector<double> points() const;
    double step() const { return (t_end - t0) / (num_points - 1); }

    static GridSpec over(const CoefficientSet& cs, int num_points = 1001) {
        return {cs.t0(), cs.t_end(), num_points};
    }
};

struct CriterionTolerance {
    PsdTolerance psd{};
    /// Relative residual band for scalar-multiple and skewness tests:
    /// ||residual||_F <= residual * (1 + ||M||_F).
    double residual = 1e-9;
    /// Eigenvalue floor below which P(t) is not treated as positive definite.
    double positive_definite = 1e-9;

    /// Every band set to `tol`.
    static CriterionTolerance uniform(double tol);
};

enum class WitnessKind {
    min_eigenvalue,  // pass needs value >= -threshold; worst = smallest
    residual,        // pass needs value <= threshold; worst = largest
};

/// Outcome of one hypothesis checked on every grid point.
struct ConditionRecord {
    std::string name;
    WitnessKind kind = WitnessKind::min_eigenvalue;
    bool passed = true;
    double worst_time = 0.0;
    double worst_value = 0.0;
    std::vector<double> times;
    std::vector<double> values;      // witness per grid point
    std::vector<double> thresholds;  // band applied per grid point
    std::vector<bool> point_passed;
};

enum class Criterion { theorem_3_1, corollary_3_1, corollary_3_2, theorem_1_1 };

const char* to_string(Criterion c);

struct CriterionReport {
    Criterion criterion = Criterion::theorem_3_1;
    bool holds = false;
    std::vector<ConditionRecord> conditions;
    std::optional<ScalarFunction> extracted_mu;
    std::optional<ScalarFunction> extracted_nu;
    std::optional<CoefficientFunction> gauge;  // Lambda_0 of the zero-gauge corollary
    GridSpec grid;
    std::vector<std::string> notes;

    const ConditionRecord* find(const std::string& name) const;
};

/// I: P(t) >= 0 at every grid point.
ConditionRecord check_condition_I(const CoefficientSet& cs, const GridSpec& grid,
                                  const CriterionTolerance& tol = {},
                                  Execution exec = Execution::parallel);

struct ConditionIIResult {
    ConditionRecord record;
    ScalarFunction mu;  // extracted tr(M)/n, sampled on the grid
};

/// II: M(t) = R - Q* - P (Lambda* - Lambda) is a scalar multiple of I.
ConditionIIResult check_condition_II(const CoefficientSet& cs, const CoefficientFunction& lambda,
                                     const GridSpec& grid, const CriterionTolerance& tol = {},
                                     Execution exec = Execution::parallel);

/// III: S_Lambda + S_Lambda* >= 0.
ConditionRecord check_condition_III(const CoefficientSet& cs, const CoefficientFunction& lambda,
                                    const GridSpec& grid, const CriterionTolerance& tol = {},
                                    Execution exec = Execution::parallel);

/// Conditions I-III, the initial clause Y0 + Y0* >= Lambda(t0) + Lambda(t0)*, and
/// "mu_real": the extracted mu must be real. A complex mu admits instances that
/// meet I-III yet violate the bound, so it is not accepted.
/// `holds` licenses Y(t) + Y*(t) >= Lambda(t) + Lambda*(t) on the whole grid span.
CriterionReport check_theorem_3_1(const CoefficientSet& cs, const CoefficientFunction& lambda,
                                  const CMatrix& Y0, const GridSpec& grid,
                                  const CriterionTolerance& tol = {},
                                  Execution exec = Execution::parallel);

/// P >= 0, S >= 0, R = Q*, Y0 >= 0: the comparison-theorem hypotheses.
CriterionReport check_theorem_1_1(const CoefficientSet& cs, const CMatrix& Y0,
                                  const GridSpec& grid, const CriterionTolerance& tol = {},
                                  Execution exec = Execution::parallel);

struct Lambda0Result {
    CoefficientFunction lambda0;  // sampled on the grid (cubic)
    ConditionRecord skewness;
};

/// Lambda_0 = P^{-1} [Q* - R + mu I] / 2 on the grid, with a skewness record.
/// Throws NotPositiveDefiniteError if P is not positive definite at a grid point.
Lambda0Result build_lambda0_corollary_3_1(const CoefficientSet& cs, const ScalarFunction& mu,
                                          const GridSpec& grid,
                                          const CriterionTolerance& tol = {},
                                          Execution exec = Execution::parallel);

/// Real mu (per grid point) minimizing ||Lambda_0 + Lambda_0*||_F; the imaginary
/// part of mu does not affect skewness and is set to zero.
ScalarFunction fit_mu_corollary_3_1(const CoefficientSet& cs, const GridSpec& grid,
                                    const CriterionTolerance& tol = {});

/// Lambda_0 construction followed by the gauged check; see CriterionReport::gauge.
CriterionReport check_corollary_3_1(const CoefficientSet& cs, const ScalarFunction& mu,
                                    const CMatrix& Y0, const GridSpec& grid,
                                    const CriterionTolerance& tol = {},
                                    Execution exec = Execution::parallel);

/// T_nu = (sqrt(P)^{-1} (Q* - R) sqrt(P) + nu I) / 2
CMatrix build_T_nu(const CoefficientSet& cs, const ScalarFunction& nu, double t,
                   const CriterionTolerance& tol = {});

/// Real nu (per grid point) that makes T_nu skew-Hermitian whenever any nu does.
ScalarFunction fit_nu_corollary_3_2(const CoefficientSet& cs, const GridSpec& grid,
                                    const CriterionTolerance& tol = {});

/// sqrt(P)(S + S*)sqrt(P) + 2 T_nu^2 + (conj(nu) - nu) T_nu
CMatrix corollary_3_2_matrix(const CoefficientSet& cs, const ScalarFunction& nu, double t,
                             const CriterionTolerance& tol = {});

/// T_nu skew-Hermitian, nu real ("nu_real", for the same reason as mu_real) and
/// the matrix above >= 0 at every grid point, plus the initial clause
/// sqrt(P(t0)) (Y0 + Y0*) sqrt(P(t0)) >= 0.
CriterionReport check_corollary_3_2(const CoefficientSet& cs, const ScalarFunction& nu,
                                    const CMatrix& Y0, const GridSpec& grid,
                                    const CriterionTolerance& tol = {},
                                    Execution exec = Execution::parallel);

struct FL {
    CMatrix F;  // [sqrt(P) Q - sqrt(P)'] sqrt(P)^{-1}
    CMatrix L;  // sqrt(P)^{-1} [R sqrt(P) - sqrt(P)']
};

FL compute_F_L(const CoefficientSet& cs, double t, const CriterionTolerance& tol = {});

/// D_nu = T_nu' + T_nu^2 + F T_nu + T_nu L - sqrt(P) S sqrt(P).
/// T_nu' is zero for all-constant data and otherwise a central difference of
/// build_T_nu with step `fd_step` (one-sided at the domain ends).
CMatrix compute_D_nu(const CoefficientSet& cs, const ScalarFunction& nu, double t,
                     double fd_step = 1e-4, const CriterionTolerance& tol = {});

} // namespace riccati
