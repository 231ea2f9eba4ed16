#include "riccati/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "riccati/errors.hpp"

namespace riccati {

namespace {

// Value-type adapters so one template covers matrices and scalars.
Eigen::Index dimension_of(const CMatrix& m) { return m.rows(); }
Eigen::Index dimension_of(const Complex&) { return 1; }

void validate_value(const CMatrix& m, const char* what) { require_square(m, what); }
void validate_value(const Complex& z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NonFiniteError(std::string(what) + ": non-finite scalar");
}

CMatrix zero_like(const CMatrix& m) { return CMatrix::Zero(m.rows(), m.cols()); }
Complex zero_like(const Complex&) { return {0.0, 0.0}; }

template <typename V>
Eigen::Index common_dimension(const std::vector<V>& values, const char* what) {
    if (values.empty()) throw InvalidArgument(std::string(what) + ": no values");
    const Eigen::Index n = dimension_of(values.front());
    for (const auto& v : values) {
        validate_value(v, what);
        if (dimension_of(v) != n)
            throw DimensionError(std::string(what) + ": values of differing dimension");
    }
    return n;
}

double domain_slack(double begin, double end) {
    double scale = 1.0;
    if (std::isfinite(begin)) scale = std::max(scale, std::abs(begin));
    if (std::isfinite(end)) scale = std::max(scale, std::abs(end));
    return 1e-12 * scale;
}

} // namespace

const char* to_string(FunctionKind kind) {
    switch (kind) {
    case FunctionKind::constant: return "constant";
    case FunctionKind::polynomial: return "polynomial";
    case FunctionKind::sampled: return "sampled";
    }
    return "unknown";
}

template <typename V>
TimeFunction<V> TimeFunction<V>::constant(V value) {
    TimeFunction f;
    f.kind_ = FunctionKind::constant;
    f.values_.push_back(std::move(value));
    f.dim_ = common_dimension(f.values_, "constant function");
    return f;
}

template <typename V>
TimeFunction<V> TimeFunction<V>::polynomial(double origin, std::vector<V> coefficients) {
    if (coefficients.size() > static_cast<std::size_t>(kMaxDegree) + 1) {
        std::ostringstream os;
        os << "polynomial function: degree " << coefficients.size() - 1 << " exceeds "
           << kMaxDegree;
        throw InvalidArgument(os.str());
    }
    if (!std::isfinite(origin)) throw NonFiniteError("polynomial function: non-finite origin");
    TimeFunction f;
    f.kind_ = FunctionKind::polynomial;
    f.origin_ = origin;
    f.values_ = std::move(coefficients);
    f.dim_ = common_dimension(f.values_, "polynomial function");
    return f;
}

template <typename V>
TimeFunction<V> TimeFunction<V>::sampled(std::vector<double> times, std::vector<V> values,
                                         int order) {
    if (times.size() < 2) throw InvalidArgument("sampled function: need at least 2 grid points");
    if (times.size() != values.size())
        throw InvalidArgument("sampled function: times and values differ in length");
    if (order != 1 && order != 3)
        throw InvalidArgument("sampled function: interpolation order must be 1 or 3");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k])) throw NonFiniteError("sampled function: non-finite time");
        if (k > 0 && !(times[k] > times[k - 1]))
            throw InvalidArgument("sampled function: times must be strictly increasing");
    }
    TimeFunction f;
    f.kind_ = FunctionKind::sampled;
    f.order_ = order;
    f.dim_ = common_dimension(values, "sampled function");
    f.begin_ = times.front();
    f.end_ = times.back();
    f.times_ = std::move(times);
    f.values_ = std::move(values);

    const auto& x = f.times_;
    const auto& y = f.values_;
    const std::size_t m = x.size();
    f.node_derivatives_.reserve(m);
    f.node_derivatives_.push_back((y[1] - y[0]) / (x[1] - x[0]));
    for (std::size_t k = 1; k + 1 < m; ++k) {
        // three-point formula on a non-uniform grid
        const double h1 = x[k] - x[k - 1];
        const double h2 = x[k + 1] - x[k];
        f.node_derivatives_.push_back(y[k - 1] * (-h2 / (h1 * (h1 + h2))) +
                                      y[k] * ((h2 - h1) / (h1 * h2)) +
                                      y[k + 1] * (h1 / (h2 * (h1 + h2))));
    }
    f.node_derivatives_.push_back((y[m - 1] - y[m - 2]) / (x[m - 1] - x[m - 2]));
    return f;
}

template <typename V>
TimeFunction<V> TimeFunction<V>::with_domain(double begin, double end) const {
    if (!(begin < end)) throw InvalidArgument("with_domain: empty domain");
    if (!covers(begin, end)) throw DomainError("with_domain: outside the current domain");
    TimeFunction f = *this;
    f.begin_ = begin;
    f.end_ = end;
    return f;
}

template <typename V>
bool TimeFunction<V>::covers(double begin, double end) const {
    const double slack = domain_slack(begin_, end_);
    return begin >= begin_ - slack && end <= end_ + slack;
}

template <typename V>
double TimeFunction<V>::locate(double t) const {
    const double slack = domain_slack(begin_, end_);
    if (!(t >= begin_ - slack && t <= end_ + slack)) {
        std::ostringstream os;
        os << "t = " << t << " outside domain [" << begin_ << ", " << end_ << "]";
        throw DomainError(os.str());
    }
    return std::clamp(t, begin_, end_);
}

template <typename V>
V TimeFunction<V>::eval(double t) const {
    t = locate(t);
    switch (kind_) {
    case FunctionKind::constant: return values_.front();
    case FunctionKind::polynomial: {
        const double s = t - origin_;
        V acc = values_.back();
        for (auto it = values_.rbegin() + 1; it != values_.rend(); ++it) acc = acc * s + *it;
        return acc;
    }
    case FunctionKind::sampled: return sampled_eval(t);
    }
    return values_.front();
}

template <typename V>
V TimeFunction<V>::derivative(double t) const {
    t = locate(t);
    switch (kind_) {
    case FunctionKind::constant: return zero_like(values_.front());
    case FunctionKind::polynomial: {
        if (values_.size() == 1) return zero_like(values_.front());
        const double s = t - origin_;
        const std::size_t d = values_.size() - 1;
        V acc = values_[d] * static_cast<double>(d);
        for (std::size_t k = d - 1; k >= 1; --k) acc = acc * s + values_[k] * static_cast<double>(k);
        return acc;
    }
    case FunctionKind::sampled: return sampled_derivative(t);
    }
    return zero_like(values_.front());
}

template <typename V>
V TimeFunction<V>::sampled_eval(double t) const {
    const auto& x = times_;
    const std::size_t m = x.size();
    const auto upper = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = upper == x.begin() ? 0 : static_cast<std::size_t>(upper - x.begin()) - 1;
    i = std::min(i, m - 2);  // interval [x_i, x_{i+1}]
    if (t == x[i]) return values_[i];
    if (t == x[i + 1]) return values_[i + 1];
    if (order_ == 1 || m == 2) {
        const double w = (t - x[i]) / (x[i + 1] - x[i]);
        return values_[i] * (1.0 - w) + values_[i + 1] * w;
    }
    // Local Lagrange interpolation through up to four nodes around the interval.
    const std::size_t count = std::min<std::size_t>(4, m);
    std::size_t first = i == 0 ? 0 : i - 1;
    if (first + count > m) first = m - count;
    V acc = zero_like(values_.front());
    for (std::size_t a = first; a < first + count; ++a) {
        double w = 1.0;
        for (std::size_t b = first; b < first + count; ++b)
            if (b != a) w *= (t - x[b]) / (x[a] - x[b]);
        acc = acc + values_[a] * w;
    }
    return acc;
}

template <typename V>
V TimeFunction<V>::sampled_derivative(double t) const {
    const auto& x = times_;
    const std::size_t m = x.size();
    const auto upper = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = upper == x.begin() ? 0 : static_cast<std::size_t>(upper - x.begin()) - 1;
    i = std::min(i, m - 2);
    if (t == x[i]) return node_derivatives_[i];
    if (t == x[i + 1]) return node_derivatives_[i + 1];
    const double w = (t - x[i]) / (x[i + 1] - x[i]);
    return node_derivatives_[i] * (1.0 - w) + node_derivatives_[i + 1] * w;
}

template class TimeFunction<CMatrix>;
template class TimeFunction<Complex>;

CoefficientFunction zero_function(Eigen::Index n) {
    return CoefficientFunction::constant(CMatrix::Zero(n, n));
}

CoefficientSet::CoefficientSet(Eigen::Index n, double t0, double t_end, CoefficientFunction P,
                               CoefficientFunction Q, CoefficientFunction R,
                               CoefficientFunction S)
    : n_(n), t0_(t0), t_end_(t_end), P_(std::move(P)), Q_(std::move(Q)), R_(std::move(R)),
      S_(std::move(S)) {}

CoefficientSet CoefficientSet::make(double t0, double t_end, CoefficientFunction P,
                                    CoefficientFunction Q, CoefficientFunction R,
                                    CoefficientFunction S) {
    if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t0 < t_end))
        throw InvalidArgument("coefficient set: need finite t0 < t_end");
    const Eigen::Index n = P.dim();
    const std::pair<const char*, const CoefficientFunction*> named[] = {
        {"P", &P}, {"Q", &Q}, {"R", &R}, {"S", &S}};
    for (const auto& [name, f] : named) {
        if (f->dim() != n) {
            std::ostringstream os;
            os << "coefficient set: " << name << " has dimension " << f->dim() << ", expected "
               << n;
            throw DimensionError(os.str());
        }
        if (!f->covers(t0, t_end)) {
            std::ostringstream os;
            os << "coefficient set: " << name << " is not defined on [" << t0 << ", " << t_end
               << "]";
            throw DomainError(os.str());
        }
    }
    constexpr int kChecks = 17;
    for (int k = 0; k < kChecks; ++k) {
        const double t = t0 + (t_end - t0) * k / (kChecks - 1);
        const CMatrix p = P.eval(t);
        if (hermiticity_defect(p) > 1e-9 * std::max(1.0, p.norm())) {
            std::ostringstream os;
            os << "coefficient set: P is not Hermitian at t = " << t;
            throw StructureError(os.str());
        }
    }
    return CoefficientSet(n, t0, t_end, std::move(P), std::move(Q), std::move(R), std::move(S));
}

bool CoefficientSet::all_constant() const {
    return P_.kind() == FunctionKind::constant && Q_.kind() == FunctionKind::constant &&
           R_.kind() == FunctionKind::constant && S_.kind() == FunctionKind::constant;
}

namespace {
void require_gauge(const CoefficientSet& cs, const CoefficientFunction& lambda, const char* op) {
    if (lambda.dim() != cs.n()) {
        std::ostringstream os;
        os << op << ": gauge has dimension " << lambda.dim() << ", coefficients have " << cs.n();
        throw DimensionError(os.str());
    }
}
} // namespace

CMatrix eval_S_lambda(const CoefficientSet& cs, const CoefficientFunction& lambda, double t) {
    require_gauge(cs, lambda, "eval_S_lambda");
    const CMatrix L = lambda.eval(t);
    const CMatrix P = cs.P().eval(t);
    return cs.S().eval(t) - lambda.derivative(t) - L * P * L - cs.Q().eval(t) * L -
           L * cs.R().eval(t);
}

CMatrix eval_Q_lambda(const CoefficientSet& cs, const CoefficientFunction& lambda, double t) {
    require_gauge(cs, lambda, "eval_Q_lambda");
    return cs.Q().eval(t) + lambda.eval(t) * cs.P().eval(t);
}

CMatrix eval_R_lambda(const CoefficientSet& cs, const CoefficientFunction& lambda, double t) {
    require_gauge(cs, lambda, "eval_R_lambda");
    return cs.R().eval(t) + cs.P().eval(t) * lambda.eval(t);
}

} // namespace riccati
