#include "riccati/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riccati/errors.hpp"

namespace riccati {

namespace {

constexpr const char* kGridNote =
    "conditions verified pointwise on a finite uniform grid over [t0, t_end]; "
    "behavior between grid points and beyond t_end is not certified";

struct PointWitness {
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

PointWitness eigen_witness(const CMatrix& H, const PsdTolerance& tol) {
    const PsdVerdict v = check_psd(H, tol);
    return {v.min_eigenvalue, v.threshold, v.is_psd};
}

PointWitness residual_witness(double residual, double threshold) {
    return {residual, threshold, residual <= threshold};
}

double margin(WitnessKind kind, const PointWitness& w) {
    return kind == WitnessKind::min_eigenvalue ? w.value + w.threshold : w.threshold - w.value;
}

// Evaluates `at_point` on every grid point (serially or with OpenMP) and
// aggregates serially: the worst witness is the smallest margin, earliest time first.
template <typename AtPoint>
ConditionRecord run_condition(std::string name, WitnessKind kind,
                              const std::vector<double>& times, Execution exec,
                              AtPoint&& at_point) {
    std::vector<PointWitness> witnesses(times.size());
    detail::for_each_index(times.size(), exec,
                           [&](std::size_t i) { witnesses[i] = at_point(i, times[i]); });

    ConditionRecord rec;
    rec.name = std::move(name);
    rec.kind = kind;
    rec.times = times;
    rec.values.reserve(times.size());
    rec.thresholds.reserve(times.size());
    rec.point_passed.reserve(times.size());
    std::size_t worst = 0;
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        const auto& w = witnesses[i];
        rec.values.push_back(w.value);
        rec.thresholds.push_back(w.threshold);
        rec.point_passed.push_back(w.passed);
        rec.passed = rec.passed && w.passed;
        if (margin(kind, w) < margin(kind, witnesses[worst])) worst = i;
    }
    if (!witnesses.empty()) {
        rec.worst_time = times[worst];
        rec.worst_value = witnesses[worst].value;
    }
    return rec;
}

// With a non-real scalar gauge the Hermitian part picks up Im(mu) i(Z - Z*),
// which has no sign, and the lower bound can fail. Checked as |Im| <= band.
ConditionRecord imaginary_part_record(const char* name, const ScalarFunction& f,
                                      const GridSpec& grid, const CriterionTolerance& tol) {
    return run_condition(name, WitnessKind::residual, grid.points(), Execution::serial,
                         [&](std::size_t, double t) {
                             const Complex v = f.eval(t);
                             return residual_witness(std::abs(v.imag()),
                                                     tol.residual * (1.0 + std::abs(v)));
                         });
}

void require_gauge_dim(const CoefficientSet& cs, const CoefficientFunction& lambda) {
    if (lambda.dim() != cs.n())
        throw DimensionError("criterion: gauge dimension differs from coefficient dimension");
}

void require_initial_dim(const CoefficientSet& cs, const CMatrix& Y0) {
    require_square(Y0, "initial value");
    if (Y0.rows() != cs.n())
        throw DimensionError("criterion: initial value dimension differs from coefficients");
}

void require_grid(const CoefficientSet& cs, const GridSpec& grid) {
    grid.validate();
    const double slack = 1e-12 * std::max({1.0, std::abs(cs.t0()), std::abs(cs.t_end())});
    if (grid.t0 < cs.t0() - slack || grid.t_end > cs.t_end() + slack)
        throw DomainError("criterion: grid extends beyond the coefficient domain");
}

bool finalize(CriterionReport& report) {
    report.holds = std::all_of(report.conditions.begin(), report.conditions.end(),
                               [](const ConditionRecord& c) { return c.passed; });
    return report.holds;
}

CMatrix positive_definite_inverse(const CMatrix& P, double tol, const char* op, double t) {
    const double lmin = min_eigenvalue(P);
    if (!(lmin > tol)) {
        std::ostringstream os;
        os << op << ": P is not positive definite at t = " << t << " (min eigenvalue " << lmin
           << ")";
        throw NotPositiveDefiniteError(os.str(), lmin);
    }
    return hermitian_part(P).llt().solve(identity(P.rows()));
}

double real_inner(const CMatrix& X, const CMatrix& Y) {
    return (X.array().conjugate() * Y.array()).sum().real();
}

struct SqrtP {
    CMatrix root;
    CMatrix inverse;
};

SqrtP sqrt_of_P(const CoefficientSet& cs, double t, const CriterionTolerance& tol) {
    SqrtP s;
    s.root = principal_sqrt(cs.P().eval(t), tol.positive_definite);
    s.inverse = s.root.partialPivLu().inverse();
    return s;
}

} // namespace

void GridSpec::validate() const {
    if (num_points < 2) throw InvalidArgument("grid: num_points must be >= 2");
    if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t0 < t_end))
        throw InvalidArgument("grid: need finite t0 < t_end");
}

std::vector<double> GridSpec::points() const {
    validate();
    std::vector<double> pts(static_cast<std::size_t>(num_points));
    const double h = step();
    for (int k = 0; k < num_points; ++k) pts[static_cast<std::size_t>(k)] = t0 + h * k;
    pts.back() = t_end;
    return pts;
}

CriterionTolerance CriterionTolerance::uniform(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("tolerance must be positive");
    CriterionTolerance t;
    t.psd = {tol, tol, tol};
    t.residual = tol;
    t.positive_definite = tol;
    return t;
}

const char* to_string(Criterion c) {
    switch (c) {
    case Criterion::theorem_3_1: return "theorem_3_1";
    case Criterion::corollary_3_1: return "corollary_3_1";
    case Criterion::corollary_3_2: return "corollary_3_2";
    case Criterion::theorem_1_1: return "theorem_1_1";
    }
    return "unknown";
}

const ConditionRecord* CriterionReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

ConditionRecord check_condition_I(const CoefficientSet& cs, const GridSpec& grid,
                                  const CriterionTolerance& tol, Execution exec) {
    require_grid(cs, grid);
    return run_condition("I", WitnessKind::min_eigenvalue, grid.points(), exec,
                         [&](std::size_t, double t) { return eigen_witness(cs.P().eval(t), tol.psd); });
}

ConditionIIResult check_condition_II(const CoefficientSet& cs, const CoefficientFunction& lambda,
                                     const GridSpec& grid, const CriterionTolerance& tol,
                                     Execution exec) {
    require_grid(cs, grid);
    require_gauge_dim(cs, lambda);
    const auto times = grid.points();
    const auto n = static_cast<double>(cs.n());
    std::vector<Complex> mu(times.size());
    auto rec = run_condition("II", WitnessKind::residual, times, exec, [&](std::size_t i, double t) {
        const CMatrix L = lambda.eval(t);
        const CMatrix M = cs.R().eval(t) - cs.Q().eval(t).adjoint() -
                          cs.P().eval(t) * (L.adjoint() - L);
        const Complex m = M.trace() / n;
        mu[i] = m;
        const double residual = (M - m * identity(cs.n())).norm();
        return residual_witness(residual, tol.residual * (1.0 + M.norm()));
    });
    return {std::move(rec), ScalarFunction::sampled(times, std::move(mu), 3)};
}

ConditionRecord check_condition_III(const CoefficientSet& cs, const CoefficientFunction& lambda,
                                    const GridSpec& grid, const CriterionTolerance& tol,
                                    Execution exec) {
    require_grid(cs, grid);
    require_gauge_dim(cs, lambda);
    return run_condition("III", WitnessKind::min_eigenvalue, grid.points(), exec, [&](std::size_t, double t) {
        const CMatrix SL = eval_S_lambda(cs, lambda, t);
        return eigen_witness(SL + SL.adjoint(), tol.psd);
    });
}

CriterionReport check_theorem_3_1(const CoefficientSet& cs, const CoefficientFunction& lambda,
                                  const CMatrix& Y0, const GridSpec& grid,
                                  const CriterionTolerance& tol, Execution exec) {
    require_initial_dim(cs, Y0);
    CriterionReport report;
    report.criterion = Criterion::theorem_3_1;
    report.grid = grid;
    report.conditions.push_back(check_condition_I(cs, grid, tol, exec));
    auto second = check_condition_II(cs, lambda, grid, tol, exec);
    report.conditions.push_back(std::move(second.record));
    report.conditions.push_back(imaginary_part_record("mu_real", second.mu, grid, tol));
    report.extracted_mu = std::move(second.mu);
    report.conditions.push_back(check_condition_III(cs, lambda, grid, tol, exec));
    const CMatrix L0 = lambda.eval(grid.t0);
    report.conditions.push_back(run_condition(
        "initial", WitnessKind::min_eigenvalue, {grid.t0}, Execution::serial, [&](std::size_t, double) {
            return eigen_witness(Y0 + Y0.adjoint() - L0 - L0.adjoint(), tol.psd);
        }));
    report.notes.emplace_back(kGridNote);
    if (finalize(report))
        report.notes.emplace_back(
            "hypotheses hold: every solution with this initial value satisfies "
            "Y + Y* >= Lambda + Lambda* and exists on the whole grid span");
    return report;
}

CriterionReport check_theorem_1_1(const CoefficientSet& cs, const CMatrix& Y0,
                                  const GridSpec& grid, const CriterionTolerance& tol,
                                  Execution exec) {
    require_initial_dim(cs, Y0);
    require_grid(cs, grid);
    const auto times = grid.points();
    CriterionReport report;
    report.criterion = Criterion::theorem_1_1;
    report.grid = grid;
    report.conditions.push_back(check_condition_I(cs, grid, tol, exec));
    report.conditions.push_back(
        run_condition("S_nonnegative", WitnessKind::min_eigenvalue, times, exec,
                      [&](std::size_t, double t) { return eigen_witness(cs.S().eval(t), tol.psd); }));
    report.conditions.push_back(
        run_condition("R_equals_Q_adjoint", WitnessKind::residual, times, exec, [&](std::size_t, double t) {
            const CMatrix R = cs.R().eval(t);
            const double residual = (R - cs.Q().eval(t).adjoint()).norm();
            return residual_witness(residual, tol.residual * (1.0 + R.norm()));
        }));
    report.conditions.push_back(run_condition("initial", WitnessKind::min_eigenvalue, {grid.t0},
                                              Execution::serial, [&](std::size_t, double) {
                                                  return eigen_witness(Y0, tol.psd);
                                              }));
    report.notes.emplace_back(kGridNote);
    report.notes.emplace_back(
        "comparison equation Y~' + A* Y~ + Y~ A - S = 0 is taken with A = R");
    finalize(report);
    return report;
}

ScalarFunction fit_mu_corollary_3_1(const CoefficientSet& cs, const GridSpec& grid,
                                    const CriterionTolerance& tol) {
    require_grid(cs, grid);
    const auto times = grid.points();
    std::vector<Complex> mu(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const CMatrix Pinv = positive_definite_inverse(cs.P().eval(t), tol.positive_definite,
                                                       "fit_mu_corollary_3_1", t);
        const CMatrix A = Pinv * (cs.Q().eval(t).adjoint() - cs.R().eval(t));
        const double re = -real_inner(Pinv, A + A.adjoint()) / (2.0 * real_inner(Pinv, Pinv));
        mu[i] = {re, 0.0};
    }
    return ScalarFunction::sampled(times, std::move(mu), 3);
}

Lambda0Result build_lambda0_corollary_3_1(const CoefficientSet& cs, const ScalarFunction& mu,
                                          const GridSpec& grid, const CriterionTolerance& tol,
                                          Execution exec) {
    require_grid(cs, grid);
    const auto times = grid.points();
    std::vector<CMatrix> values(times.size());
    detail::for_each_index(times.size(), exec, [&](std::size_t i) {
        const double t = times[i];
        const CMatrix Pinv = positive_definite_inverse(cs.P().eval(t), tol.positive_definite,
                                                       "build_lambda0_corollary_3_1", t);
        values[i] = Pinv *
                    (cs.Q().eval(t).adjoint() - cs.R().eval(t) + mu.eval(t) * identity(cs.n())) *
                    0.5;
    });
    auto skew = run_condition("lambda0_skew", WitnessKind::residual, times, exec, [&](std::size_t i, double) {
        const CMatrix& L = values[i];
        return residual_witness(skewness_defect(L), tol.residual * (1.0 + L.norm()));
    });
    return {CoefficientFunction::sampled(times, std::move(values), 3), std::move(skew)};
}

CriterionReport check_corollary_3_1(const CoefficientSet& cs, const ScalarFunction& mu,
                                    const CMatrix& Y0, const GridSpec& grid,
                                    const CriterionTolerance& tol, Execution exec) {
    auto built = build_lambda0_corollary_3_1(cs, mu, grid, tol, exec);
    CriterionReport report = check_theorem_3_1(cs, built.lambda0, Y0, grid, tol, exec);
    report.criterion = Criterion::corollary_3_1;
    report.conditions.insert(report.conditions.begin(), std::move(built.skewness));
    report.gauge = std::move(built.lambda0);
    report.notes.erase(report.notes.begin() + 1, report.notes.end());
    report.notes.emplace_back(
        "Lambda_0' is a finite difference of Lambda_0 sampled on the grid");
    if (finalize(report))
        report.notes.emplace_back(
            "Lambda_0 + Lambda_0* = 0, so the guarantee reads Y(t) + Y*(t) >= 0");
    return report;
}

CMatrix build_T_nu(const CoefficientSet& cs, const ScalarFunction& nu, double t,
                   const CriterionTolerance& tol) {
    const SqrtP s = sqrt_of_P(cs, t, tol);
    const CMatrix M = s.inverse * (cs.Q().eval(t).adjoint() - cs.R().eval(t)) * s.root;
    return (M + nu.eval(t) * identity(cs.n())) * 0.5;
}

ScalarFunction fit_nu_corollary_3_2(const CoefficientSet& cs, const GridSpec& grid,
                                    const CriterionTolerance& tol) {
    require_grid(cs, grid);
    const auto times = grid.points();
    std::vector<Complex> nu(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const SqrtP s = sqrt_of_P(cs, times[i], tol);
        const CMatrix M =
            s.inverse * (cs.Q().eval(times[i]).adjoint() - cs.R().eval(times[i])) * s.root;
        nu[i] = {-M.trace().real() / static_cast<double>(cs.n()), 0.0};
    }
    return ScalarFunction::sampled(times, std::move(nu), 3);
}

CMatrix corollary_3_2_matrix(const CoefficientSet& cs, const ScalarFunction& nu, double t,
                             const CriterionTolerance& tol) {
    const SqrtP s = sqrt_of_P(cs, t, tol);
    const CMatrix S = cs.S().eval(t);
    const CMatrix T = build_T_nu(cs, nu, t, tol);
    const Complex v = nu.eval(t);
    return s.root * (S + S.adjoint()) * s.root + 2.0 * T * T + (std::conj(v) - v) * T;
}

CriterionReport check_corollary_3_2(const CoefficientSet& cs, const ScalarFunction& nu,
                                    const CMatrix& Y0, const GridSpec& grid,
                                    const CriterionTolerance& tol, Execution exec) {
    require_initial_dim(cs, Y0);
    require_grid(cs, grid);
    const auto times = grid.points();
    CriterionReport report;
    report.criterion = Criterion::corollary_3_2;
    report.grid = grid;
    report.conditions.push_back(check_condition_I(cs, grid, tol, exec));
    report.conditions.push_back(
        run_condition("T_nu_skew", WitnessKind::residual, times, exec, [&](std::size_t, double t) {
            const CMatrix T = build_T_nu(cs, nu, t, tol);
            return residual_witness(skewness_defect(T), tol.residual * (1.0 + T.norm()));
        }));
    report.conditions.push_back(imaginary_part_record("nu_real", nu, grid, tol));
    report.conditions.push_back(run_condition(
        "condition_3_22", WitnessKind::min_eigenvalue, times, exec,
        [&](std::size_t, double t) { return eigen_witness(corollary_3_2_matrix(cs, nu, t, tol), tol.psd); }));
    const SqrtP s0 = sqrt_of_P(cs, grid.t0, tol);
    report.conditions.push_back(run_condition(
        "initial", WitnessKind::min_eigenvalue, {grid.t0}, Execution::serial, [&](std::size_t, double) {
            return eigen_witness(s0.root * (Y0 + Y0.adjoint()) * s0.root, tol.psd);
        }));
    report.notes.emplace_back(kGridNote);
    report.notes.emplace_back(
        "initial and concluding inequalities read sqrt(P) at the same time point on both sides");
    if (finalize(report))
        report.notes.emplace_back(
            "hypotheses hold: sqrt(P)(Y + Y*)sqrt(P) >= 0 along every solution with this "
            "initial value");
    return report;
}

FL compute_F_L(const CoefficientSet& cs, double t, const CriterionTolerance& tol) {
    const SqrtP s = sqrt_of_P(cs, t, tol);
    const CMatrix dS = sqrt_derivative(cs.P().eval(t), cs.P().derivative(t), tol.positive_definite);
    return {(s.root * cs.Q().eval(t) - dS) * s.inverse,
            s.inverse * (cs.R().eval(t) * s.root - dS)};
}

CMatrix compute_D_nu(const CoefficientSet& cs, const ScalarFunction& nu, double t,
                     double fd_step, const CriterionTolerance& tol) {
    const CMatrix T = build_T_nu(cs, nu, t, tol);
    CMatrix dT = CMatrix::Zero(cs.n(), cs.n());
    if (!(cs.all_constant() && nu.kind() == FunctionKind::constant)) {
        if (!(fd_step > 0.0)) throw InvalidArgument("compute_D_nu: fd_step must be positive");
        const double lo = std::max(cs.t0(), nu.domain_begin());
        const double hi = std::min(cs.t_end(), nu.domain_end());
        const double a = std::max(lo, t - fd_step);
        const double b = std::min(hi, t + fd_step);
        if (!(b > a)) throw DomainError("compute_D_nu: no room for a finite difference");
        dT = (build_T_nu(cs, nu, b, tol) - build_T_nu(cs, nu, a, tol)) / (b - a);
    }
    const FL fl = compute_F_L(cs, t, tol);
    const SqrtP s = sqrt_of_P(cs, t, tol);
    return dT + T * T + fl.F * T + T * fl.L - s.root * cs.S().eval(t) * s.root;
}

} // namespace riccati
