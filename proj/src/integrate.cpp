#include "riccati/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "dopri.hpp"
#include "riccati/errors.hpp"

namespace riccati {

namespace {

// Phi counts as singular when sigma_min(Phi) / sigma_max([Phi; Psi]) drops below this.
constexpr double kSingularRatio = 1e-12;
// Rescale (Phi, Psi) once their norm exceeds this, to stay clear of overflow.
constexpr double kFlowNormCap = 1e100;

detail::DopriSettings to_settings(const IntegratorOptions& o) {
    detail::DopriSettings s;
    s.rtol = o.rtol;
    s.atol = o.atol;
    s.h_init = o.h_init.value_or(0.0);
    s.h_min = o.h_min;
    s.h_max = o.h_max;
    s.max_steps = o.max_steps;
    return s;
}

void require_initial(const CoefficientSet& cs, const CMatrix& Y0) {
    require_square(Y0, "initial value");
    if (Y0.rows() != cs.n()) {
        std::ostringstream os;
        os << "initial value has dimension " << Y0.rows() << ", coefficients have " << cs.n();
        throw DimensionError(os.str());
    }
}

struct Sigma {
    double min;
    double max;
};

Sigma singular_range(const CMatrix& M) {
    Eigen::JacobiSVD<CMatrix> svd(M);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

// det(Phi) divided by the product of column norms of [Phi; Psi]; |value| <= 1.
Complex normalized_det(const CMatrix& block, Eigen::Index n) {
    Complex d = block.topRows(n).determinant();
    for (Eigen::Index j = 0; j < n; ++j) d /= block.col(j).norm();
    return d;
}

// Integral over [a, b] of the quadratic interpolating (x[i], f[i]) at three nodes,
// by 3-point Gauss-Legendre (exact for quadratics).
template <typename T>
T quadratic_integral(const double (&x)[3], const T (&f)[3], double a, double b) {
    static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T sum{};
    for (int q = 0; q < 3; ++q) {
        const double t = mid + half * nodes[q];
        T value{};
        for (int i = 0; i < 3; ++i) {
            double w = 1.0;
            for (int j = 0; j < 3; ++j)
                if (j != i) w *= (t - x[j]) / (x[i] - x[j]);
            value += f[i] * w;
        }
        sum += value * weights[q];
    }
    return sum * half;
}

// Running integral of samples g over times x: composite Simpson on node pairs,
// the odd nodes filled from the same interpolating quadratic.
template <typename T>
std::vector<T> cumulative_simpson(const std::vector<double>& x, const std::vector<T>& g) {
    const std::size_t m = x.size();
    std::vector<T> out(m, T{});
    if (m < 2) return out;
    if (m == 2) {
        out[1] = 0.5 * (g[0] + g[1]) * (x[1] - x[0]);
        return out;
    }
    for (std::size_t k = 0; k + 1 < m; k += 2) {
        const std::size_t base = (k + 2 < m) ? k : k - 1;  // last lone interval borrows a node
        const double xs[3] = {x[base], x[base + 1], x[base + 2]};
        const T fs[3] = {g[base], g[base + 1], g[base + 2]};
        out[k + 1] = out[k] + quadratic_integral(xs, fs, x[k], x[k + 1]);
        if (k + 2 < m) out[k + 2] = out[k] + quadratic_integral(xs, fs, x[k], x[k + 2]);
    }
    return out;
}

} // namespace

void IntegratorOptions::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidArgument("options: rtol, atol must be > 0");
    if (!(h_min > 0.0) || !(h_max >= h_min))
        throw InvalidArgument("options: need 0 < h_min <= h_max");
    if (h_init && !(*h_init >= h_min && *h_init <= h_max))
        throw InvalidArgument("options: need h_min <= h_init <= h_max");
    if (!(blowup_norm > 0.0)) throw InvalidArgument("options: blowup_norm must be > 0");
    if (!(recondition_threshold > 1.0))
        throw InvalidArgument("options: recondition_threshold must be > 1");
    if (sample_times.empty() && num_samples < 2)
        throw InvalidArgument("options: num_samples must be >= 2");
}

std::vector<double> IntegratorOptions::resolve_samples(double t0, double t_end) const {
    validate();
    std::vector<double> out;
    if (!sample_times.empty()) {
        out = sample_times;
        if (out.front() != t0) out.insert(out.begin(), t0);
        for (std::size_t k = 1; k < out.size(); ++k)
            if (!(out[k] > out[k - 1]))
                throw InvalidArgument("options: sample times must be strictly increasing");
        if (out.front() < t0 || out.back() > t_end)
            throw InvalidArgument("options: sample times outside [t0, t_end]");
        return out;
    }
    out.resize(static_cast<std::size_t>(num_samples));
    const double h = (t_end - t0) / (num_samples - 1);
    for (int k = 0; k < num_samples; ++k) out[static_cast<std::size_t>(k)] = t0 + h * k;
    out.back() = t_end;
    return out;
}

const char* to_string(Method m) {
    switch (m) {
    case Method::direct: return "direct";
    case Method::radon: return "radon";
    case Method::lyapunov: return "lyapunov";
    }
    return "unknown";
}

const char* to_string(TrajectoryStatus s) {
    switch (s) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::blow_up: return "blow_up";
    case TrajectoryStatus::phi_singular: return "phi_singular";
    }
    return "unknown";
}

const char* to_string(BlowupTrigger b) {
    switch (b) {
    case BlowupTrigger::none: return "none";
    case BlowupTrigger::norm_cap: return "norm_cap";
    case BlowupTrigger::step_collapse: return "step_collapse";
    }
    return "unknown";
}

Trajectory integrate_riccati_direct(const CoefficientSet& cs, const CMatrix& Y0,
                                    const IntegratorOptions& opts) {
    require_initial(cs, Y0);
    const auto samples = opts.resolve_samples(cs.t0(), cs.t_end());
    Trajectory traj;
    traj.method = Method::direct;

    const detail::Rhs rhs = [&cs](double t, const CMatrix& Y, CMatrix& dY) {
        const CMatrix P = cs.P().eval(t);
        dY.noalias() = cs.S().eval(t);
        dY.noalias() -= Y * P * Y;
        dY.noalias() -= cs.Q().eval(t) * Y;
        dY.noalias() -= Y * cs.R().eval(t);
    };
    bool capped = false;
    const auto outcome = detail::run_dopri(
        rhs, cs.t0(), Y0, samples, to_settings(opts),
        [&](double, CMatrix& Y) {
            if (Y.norm() > opts.blowup_norm) {
                capped = true;
                return detail::StepAction::stop;
            }
            return detail::StepAction::proceed;
        },
        [&](std::size_t, double t, const CMatrix& Y) {
            traj.times.push_back(t);
            traj.values.push_back(Y);
        });
    traj.steps_accepted = outcome.accepted;
    traj.steps_rejected = outcome.rejected;
    if (outcome.end != detail::DopriEnd::reached_end) {
        traj.status = TrajectoryStatus::blow_up;
        traj.trigger = capped ? BlowupTrigger::norm_cap : BlowupTrigger::step_collapse;
        traj.t_escape = outcome.t_last;
    }
    return traj;
}

std::pair<LinearFlow, Trajectory> integrate_linear_system(const CoefficientSet& cs,
                                                          const CMatrix& Y0,
                                                          const IntegratorOptions& opts) {
    require_initial(cs, Y0);
    const auto samples = opts.resolve_samples(cs.t0(), cs.t_end());
    const Eigen::Index n = cs.n();

    LinearFlow flow;
    Trajectory traj;
    traj.method = Method::radon;

    CMatrix block(2 * n, n);
    block.topRows(n) = identity(n);
    block.bottomRows(n) = Y0;

    const detail::Rhs rhs = [&cs, n](double t, const CMatrix& B, CMatrix& dB) {
        const auto Phi = B.topRows(n);
        const auto Psi = B.bottomRows(n);
        dB.topRows(n).noalias() = cs.R().eval(t) * Phi;
        dB.topRows(n).noalias() += cs.P().eval(t) * Psi;
        dB.bottomRows(n).noalias() = cs.S().eval(t) * Phi;
        dB.bottomRows(n).noalias() -= cs.Q().eval(t) * Psi;
    };

    int segment = 0;
    double prev_t = cs.t0();
    Complex prev_det = normalized_det(block, n);
    const auto on_step = [&](double t, CMatrix& B) {
        const Complex d = normalized_det(B, n);
        // A real determinant changing sign shows up as a phase jump of pi; a
        // complex one passing near zero swings its phase quickly.
        if (std::abs(d) < kSingularRatio || std::abs(std::arg(d / prev_det)) > std::numbers::pi / 2)
            flow.crossings.push_back(0.5 * (prev_t + t));
        prev_t = t;
        prev_det = d;

        const Sigma phi = singular_range(B.topRows(n));
        const double block_norm = B.norm();
        const bool invertible = phi.min > kSingularRatio * block_norm;
        if (invertible && phi.max > opts.recondition_threshold * phi.min) {
            const CMatrix Y = B.bottomRows(n) * B.topRows(n).partialPivLu().inverse();
            B.topRows(n) = identity(n);
            B.bottomRows(n) = Y;
            flow.restarts.push_back(t);
            ++segment;
            prev_det = normalized_det(B, n);
            return detail::StepAction::state_changed;
        }
        if (block_norm > kFlowNormCap) {
            B /= block_norm;
            flow.restarts.push_back(t);
            ++segment;
            return detail::StepAction::state_changed;
        }
        return detail::StepAction::proceed;
    };

    const auto on_output = [&](std::size_t, double t, const CMatrix& B) {
        flow.times.push_back(t);
        flow.phi.push_back(B.topRows(n));
        flow.psi.push_back(B.bottomRows(n));
        flow.segment.push_back(segment);
        const Sigma phi = singular_range(B.topRows(n));
        if (phi.min > kSingularRatio * B.norm()) {
            traj.times.push_back(t);
            traj.values.push_back(B.bottomRows(n) * B.topRows(n).partialPivLu().inverse());
        } else {
            traj.singular_times.push_back(t);
        }
    };

    const auto outcome =
        detail::run_dopri(rhs, cs.t0(), block, samples, to_settings(opts), on_step, on_output);
    traj.steps_accepted = outcome.accepted;
    traj.steps_rejected = outcome.rejected;
    if (outcome.end == detail::DopriEnd::step_collapse)
        throw Error("integrate_linear_system: step size collapsed on the linear flow");

    traj.singular_times.insert(traj.singular_times.end(), flow.crossings.begin(),
                               flow.crossings.end());
    std::sort(traj.singular_times.begin(), traj.singular_times.end());
    if (!traj.singular_times.empty()) traj.status = TrajectoryStatus::phi_singular;
    return {std::move(flow), std::move(traj)};
}

Trajectory integrate_lyapunov_comparison(const CoefficientSet& cs, const CMatrix& Ytilde0,
                                         const IntegratorOptions& opts) {
    require_initial(cs, Ytilde0);
    const auto samples = opts.resolve_samples(cs.t0(), cs.t_end());
    Trajectory traj;
    traj.method = Method::lyapunov;
    const detail::Rhs rhs = [&cs](double t, const CMatrix& Y, CMatrix& dY) {
        const CMatrix R = cs.R().eval(t);
        dY.noalias() = cs.S().eval(t);
        dY.noalias() -= R.adjoint() * Y;
        dY.noalias() -= Y * R;
    };
    const auto outcome = detail::run_dopri(
        rhs, cs.t0(), Ytilde0, samples, to_settings(opts),
        [](double, CMatrix&) { return detail::StepAction::proceed; },
        [&](std::size_t, double t, const CMatrix& Y) {
            traj.times.push_back(t);
            traj.values.push_back(Y);
        });
    traj.steps_accepted = outcome.accepted;
    traj.steps_rejected = outcome.rejected;
    if (outcome.end != detail::DopriEnd::reached_end)
        throw Error("integrate_lyapunov_comparison: step size collapsed");
    return traj;
}

LiouvilleResult liouville_check(const LinearFlow& flow, const CoefficientSet& cs,
                                const Trajectory& traj) {
    // Map flow samples to reconstructed Y samples (traj times are a subset).
    std::vector<const CMatrix*> y_at(flow.times.size(), nullptr);
    for (std::size_t i = 0, j = 0; i < flow.times.size() && j < traj.times.size(); ++i) {
        if (traj.times[j] == flow.times[i]) y_at[i] = &traj.values[j++];
    }

    LiouvilleResult result;
    std::size_t i = 0;
    while (i < flow.times.size()) {
        if (!y_at[i]) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < flow.times.size() && y_at[j] && flow.segment[j] == flow.segment[i] &&
               std::none_of(flow.crossings.begin(), flow.crossings.end(), [&](double c) {
                   return c > flow.times[j - 1] && c < flow.times[j];
               }))
            ++j;

        ++result.spans;
        std::vector<double> x(flow.times.begin() + static_cast<long>(i),
                              flow.times.begin() + static_cast<long>(j));
        std::vector<Complex> trace_rate;
        std::vector<double> modulus_rate;
        for (std::size_t k = i; k < j; ++k) {
            const double t = flow.times[k];
            const CMatrix R = cs.R().eval(t);
            const CMatrix P = cs.P().eval(t);
            const CMatrix& Y = *y_at[k];
            trace_rate.push_back((R + P * Y).trace());
            modulus_rate.push_back((R + R.adjoint() + P * (Y + Y.adjoint())).trace().real());
        }
        const auto exponent = cumulative_simpson(x, trace_rate);
        const auto log_modulus = cumulative_simpson(x, modulus_rate);
        const Complex det0 = flow.phi[i].determinant();
        for (std::size_t k = i; k < j; ++k) {
            const Complex det = flow.phi[k].determinant();
            const Complex predicted = det0 * std::exp(exponent[k - i]);
            result.det_form_error =
                std::max(result.det_form_error, std::abs(det - predicted) / std::abs(predicted));
            const double mod_pred = std::norm(det0) * std::exp(log_modulus[k - i]);
            result.modulus_form_error =
                std::max(result.modulus_form_error, std::abs(std::norm(det) - mod_pred) / mod_pred);
            ++result.samples_checked;
        }
        i = j;
    }
    if (result.spans == 0) throw Error("liouville_check: no singularity-free span available");
    result.max_relative_error = std::max(result.det_form_error, result.modulus_form_error);
    return result;
}

double max_discrepancy(const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    std::size_t shared = 0;
    for (std::size_t i = 0, j = 0; i < a.times.size() && j < b.times.size();) {
        if (a.times[i] < b.times[j]) {
            ++i;
        } else if (b.times[j] < a.times[i]) {
            ++j;
        } else {
            require_same_dimension(a.values[i], b.values[j], "max_discrepancy");
            worst = std::max(worst,
                             (a.values[i] - b.values[j]).norm() / (1.0 + a.values[i].norm()));
            ++shared;
            ++i;
            ++j;
        }
    }
    if (shared == 0) throw InvalidArgument("max_discrepancy: trajectories share no sample time");
    return worst;
}

} // namespace riccati
