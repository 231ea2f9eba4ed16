#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "riccati/matrix_core.hpp"

namespace riccati {

enum class FunctionKind { constant, polynomial, sampled };

const char* to_string(FunctionKind kind);

/**
 * A function of time with values in V (a square complex matrix or a complex
 * scalar), stored in one of three representations:
 *
 *  - constant:   a single value, derivative zero;
 *  - polynomial: t -> sum_k C_k (t - origin)^k, degree <= 8, exact derivative;
 *  - sampled:    strictly increasing grid with values, interpolated linearly
 *                (order 1) or by local cubic Lagrange (order 3). Derivatives are
 *                central differences at grid nodes (one-sided at the ends),
 *                linearly interpolated in between: O(h^2) interior, O(h) at ends.
 *
 * Constant and polynomial functions are defined on the whole line unless a
 * domain is imposed with with_domain(); sampled functions live on their grid.
 * Instances are immutable.
 */
template <typename V>
class TimeFunction {
public:
    static constexpr int kMaxDegree = 8;

    static TimeFunction constant(V value);
    static TimeFunction polynomial(double origin, std::vector<V> coefficients);
    static TimeFunction sampled(std::vector<double> times, std::vector<V> values, int order = 3);

    /// Restricts the domain. The new domain must lie inside the current one.
    TimeFunction with_domain(double begin, double end) const;

    FunctionKind kind() const { return kind_; }
    /// Matrix dimension n (1 for scalar functions).
    Eigen::Index dim() const { return dim_; }
    double domain_begin() const { return begin_; }
    double domain_end() const { return end_; }
    bool covers(double begin, double end) const;

    V eval(double t) const;
    V derivative(double t) const;

    // Representation access, used by serialization.
    const V& constant_value() const { return values_.front(); }
    double origin() const { return origin_; }
    const std::vector<V>& coefficients() const { return values_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<V>& values() const { return values_; }
    int order() const { return order_; }

private:
    TimeFunction() = default;
    double locate(double t) const;  // clamps t into the domain or throws DomainError
    V sampled_eval(double t) const;
    V sampled_derivative(double t) const;

    FunctionKind kind_ = FunctionKind::constant;
    Eigen::Index dim_ = 1;
    double begin_ = -std::numeric_limits<double>::infinity();
    double end_ = std::numeric_limits<double>::infinity();
    double origin_ = 0.0;
    int order_ = 1;
    std::vector<double> times_;
    std::vector<V> values_;           // constant: 1 entry; polynomial: coefficients; sampled: samples
    std::vector<V> node_derivatives_;  // sampled only
};

using CoefficientFunction = TimeFunction<CMatrix>;
using ScalarFunction = TimeFunction<Complex>;

extern template class TimeFunction<CMatrix>;
extern template class TimeFunction<Complex>;

CoefficientFunction zero_function(Eigen::Index n);

/// The data (P, Q, R, S) of Y' + Y P Y + Q Y + Y R - S = 0 on [t0, t_end].
class CoefficientSet {
public:
    /// Validates: common dimension, t0 < t_end, every function defined on
    /// [t0, t_end], P Hermitian (checked on 17 uniform points).
    static CoefficientSet make(double t0, double t_end, CoefficientFunction P,
                               CoefficientFunction Q, CoefficientFunction R,
                               CoefficientFunction S);

    Eigen::Index n() const { return n_; }
    double t0() const { return t0_; }
    double t_end() const { return t_end_; }
    const CoefficientFunction& P() const { return P_; }
    const CoefficientFunction& Q() const { return Q_; }
    const CoefficientFunction& R() const { return R_; }
    const CoefficientFunction& S() const { return S_; }

    /// True when every coefficient has constant kind.
    bool all_constant() const;

private:
    CoefficientSet(Eigen::Index n, double t0, double t_end, CoefficientFunction P,
                   CoefficientFunction Q, CoefficientFunction R, CoefficientFunction S);

    Eigen::Index n_;
    double t0_;
    double t_end_;
    CoefficientFunction P_, Q_, R_, S_;
};

/// S - Lambda' - Lambda P Lambda - Q Lambda - Lambda R
CMatrix eval_S_lambda(const CoefficientSet& cs, const CoefficientFunction& lambda, double t);
/// Q + Lambda P
CMatrix eval_Q_lambda(const CoefficientSet& cs, const CoefficientFunction& lambda, double t);
/// R + P Lambda
CMatrix eval_R_lambda(const CoefficientSet& cs, const CoefficientFunction& lambda, double t);

} // namespace riccati
