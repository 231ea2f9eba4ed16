#include "dopri.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riccati/errors.hpp"

namespace riccati::detail {

namespace {

// Butcher tableau of the Dormand-Prince 5(4) pair.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kSafe = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kFacMin = 0.2;   // largest shrink: h / 5
constexpr double kFacMax = 10.0;  // largest growth: 10 h

// RMS of |e_ij| / (atol + rtol max(|y_ij|, |ynew_ij|)).
double error_norm(const State& err, const State& y, const State& ynew, double rtol,
                  double atol) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < err.cols(); ++j)
        for (Eigen::Index i = 0; i < err.rows(); ++i) {
            const double sk = atol + rtol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
            const double r = std::abs(err(i, j)) / sk;
            sum += r * r;
        }
    const double value = std::sqrt(sum / static_cast<double>(err.size()));
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
}

double rms_scaled(const State& v, const State& y, double rtol, double atol) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double r = std::abs(v(i, j)) / (atol + rtol * std::abs(y(i, j)));
            sum += r * r;
        }
    return std::sqrt(sum / static_cast<double>(v.size()));
}

// Starting step from the heuristic of Hairer-Norsett-Wanner (hinit).
double initial_step(const Rhs& f, double t0, const State& y0, const State& f0, double h_max,
                    const DopriSettings& s) {
    const double dnf = rms_scaled(f0, y0, s.rtol, s.atol);
    const double dny = rms_scaled(y0, y0, s.rtol, s.atol);
    double h = (dnf <= 1e-5 || dny <= 1e-5) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, h_max);
    const State y1 = y0 + h * f0;
    State f1(y0.rows(), y0.cols());
    f(t0 + h, y1, f1);
    const double der2 = rms_scaled(f1 - f0, y0, s.rtol, s.atol) / h;
    const double der12 = std::max(std::abs(der2), dnf);
    const double h1 =
        der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, h_max});
}

} // namespace

DopriOutcome run_dopri(const Rhs& f, double t0, State y0, std::span<const double> output_times,
                       const DopriSettings& s,
                       const std::function<StepAction(double, State&)>& on_step,
                       const std::function<void(std::size_t, double, const State&)>& on_output) {
    if (output_times.empty()) throw InvalidArgument("integrator: no output times");
    if (!(s.rtol > 0.0) || !(s.atol > 0.0))
        throw InvalidArgument("integrator: rtol and atol must be positive");
    const double t_final = output_times.back();
    if (!(t_final >= t0)) throw InvalidArgument("integrator: output times precede t0");
    for (std::size_t k = 0; k < output_times.size(); ++k)
        if (output_times[k] < t0 || (k > 0 && output_times[k] <= output_times[k - 1]))
            throw InvalidArgument("integrator: output times must increase from t0");

    DopriOutcome out;
    out.t_last = t0;
    double t = t0;
    State y = std::move(y0);
    std::size_t next = 0;
    while (next < output_times.size() && output_times[next] == t0) on_output(next++, t, y);
    if (next == output_times.size()) return out;

    const double span = t_final - t0;
    const double h_max = s.h_max > 0.0 ? std::min(s.h_max, span) : span;
    State k1(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1;
    f(t, y, k1);
    double h = s.h_init > 0.0 ? std::min(s.h_init, h_max) : initial_step(f, t, y, k1, h_max, s);
    double facold = 1e-4;
    bool last_rejected = false;

    while (next < output_times.size()) {
        if (out.accepted + out.rejected >= s.max_steps)
            throw Error("integrator: step budget exhausted");
        if (h < s.h_min) {
            out.end = DopriEnd::step_collapse;
            return out;
        }
        const double target = output_times[next];
        double h_try = h;
        bool lands = false;
        if (t + 1.01 * h_try >= target) {
            h_try = target - t;
            lands = true;
        }

        State ytmp = y + h_try * a21 * k1;
        f(t + c2 * h_try, ytmp, k2);
        ytmp = y + h_try * (a31 * k1 + a32 * k2);
        f(t + c3 * h_try, ytmp, k3);
        ytmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h_try, ytmp, k4);
        ytmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h_try, ytmp, k5);
        ytmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        const double t_new = lands ? target : t + h_try;
        f(t_new, ytmp, k6);
        State ynew = y + h_try * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t_new, ynew, k7);
        const State err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = ynew.allFinite() ? error_norm(err, y, ynew, s.rtol, s.atol)
                                           : std::numeric_limits<double>::infinity();

        const double fac11 = std::isfinite(en) ? std::pow(en, kExpo1) : 1.0 / kFacMin;
        if (en <= 1.0) {
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
            double h_new = h_try / fac;
            if (last_rejected) h_new = std::min(h_new, h_try);
            facold = std::max(en, 1e-4);
            ++out.accepted;
            last_rejected = false;

            t = t_new;
            y = std::move(ynew);
            std::swap(k1, k7);
            out.t_last = t;
            const StepAction action = on_step(t, y);
            if (action == StepAction::stop) {
                out.end = DopriEnd::stopped;
                return out;
            }
            if (action == StepAction::state_changed) f(t, y, k1);
            if (lands) on_output(next++, t, y);
            // A step shortened to land on an output time says little about the
            // next one; keep the longer proposal.
            h = lands ? std::max(h_new, h) : h_new;
            h = std::min(h, h_max);
        } else {
            h = h_try / std::min(1.0 / kFacMin, fac11 / kSafe);
            ++out.rejected;
            last_rejected = true;
        }
    }
    out.end = DopriEnd::reached_end;
    return out;
}

} // namespace riccati::detail
