#include <doctest.h>

#include <cmath>

#include "riccati/criteria.hpp"
#include "riccati/errors.hpp"
#include "riccati/instances.hpp"
#include "riccati/verify.hpp"
#include "support.hpp"

using namespace riccati;
using testing::constant;
using testing::scalar;

namespace {

// Samples of t -> f(t) I_n on a uniform grid.
Trajectory sampled(int n, double t_end, int points, double (*f)(double)) {
    Trajectory traj;
    for (int k = 0; k < points; ++k) {
        const double t = t_end * k / (points - 1);
        traj.times.push_back(t);
        traj.values.push_back(f(t) * identity(n));
    }
    return traj;
}

double neg_tan(double t) { return -std::tan(t); }
double zero(double) { return 0.0; }
double linear(double t) { return t; }

CoefficientSet tanh_set(double t_end) {
    return CoefficientSet::make(0.0, t_end, scalar(1), scalar(0), scalar(0), scalar(1));
}

} // namespace

TEST_CASE("hermitian bound oracles") {
    auto report = verify_hermitian_bound(sampled(1, 1.0, 101, std::tanh), zero_function(1));
    CHECK(report.pass);
    CHECK(report.min_gap == doctest::Approx(0.0));
    CHECK(report.time_of_min == 0.0);

    report = verify_hermitian_bound(sampled(2, 1.0, 11, zero), zero_function(2));
    CHECK(report.pass);
    CHECK(report.min_gap == 0.0);

    report = verify_hermitian_bound(sampled(1, 1.0, 101, neg_tan), zero_function(1));
    CHECK_FALSE(report.pass);
    CHECK(report.min_gap == doctest::Approx(-2.0 * std::tan(1.0)));
    CHECK(report.time_of_min == 1.0);
}

TEST_CASE("eigen monitor") {
    const auto traj = sampled(2, 1.0, 21, std::tanh);
    const auto mon = eigen_monitor(traj, zero_function(2));
    for (std::size_t k = 0; k < traj.size(); ++k)
        CHECK(mon[k] == doctest::Approx(2.0 * std::tanh(traj.times[k])));
    for (std::size_t k = 1; k < mon.size(); ++k) CHECK(mon[k] > mon[k - 1]);
    CHECK_THROWS_AS(eigen_monitor(traj, zero_function(3)), DimensionError);
}

TEST_CASE("sandwich oracles") {
    auto y = sampled(1, 3.0, 61, std::tanh);
    auto tilde = sampled(1, 3.0, 61, linear);
    auto report = verify_sandwich(y, tilde);
    CHECK(report.lower_pass);
    CHECK(report.upper_pass);

    report = verify_sandwich(tilde, tilde);
    CHECK(report.pass);
    CHECK(report.upper_min == 0.0);

    tilde.times.pop_back();
    tilde.values.pop_back();
    CHECK_THROWS_AS(verify_sandwich(y, tilde), InvalidArgument);
}

TEST_CASE("sandwich on random comparison instances") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 3);
        spec.target = Target::theorem_1_1;
        const Instance inst = generate(spec);
        const auto y = integrate_riccati_direct(inst.cs, inst.Y0);
        const auto tilde = integrate_lyapunov_comparison(inst.cs, inst.Y0);
        CHECK(verify_sandwich(y, tilde).pass);
    }
}

TEST_CASE("residual oracles") {
    const CMatrix Z = CMatrix::Zero(2, 2);
    const auto eq = CoefficientSet::make(0.0, 1.0, constant(identity(2)), constant(Z), constant(Z), constant(Z));
    CHECK(residual_check(sampled(2, 1.0, 11, zero), eq) <= 1e-12);

    const auto traj = sampled(1, 1.0, 1001, std::tanh);
    CHECK(residual_check(traj, tanh_set(1.0)) <= 1e-5);

    auto corrupted = traj;
    corrupted.values[500](0, 0) += 1e-2;
    CHECK(residual_check(corrupted, tanh_set(1.0)) > 1.0);

    const auto series = residual_series(traj, tanh_set(1.0));
    CHECK_FALSE(series.front().has_value());
    CHECK_FALSE(series.back().has_value());

    auto two = traj;
    two.times.resize(2);
    two.values.resize(2);
    CHECK_THROWS_AS(residual_check(two, tanh_set(1.0)), InvalidArgument);
}

TEST_CASE("lyapunov residual") {
    const CMatrix Z = CMatrix::Zero(2, 2);
    const auto cs = CoefficientSet::make(0.0, 1.0, constant(Z), constant(Z), constant(Z), constant(identity(2)));
    for (const auto& r : lyapunov_residual_series(sampled(2, 1.0, 21, linear), cs))
        if (r) CHECK(*r < 1e-12);
}

TEST_CASE("guarantee holds along generated trajectories") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 4);
        const Instance inst = generate(spec);
        const auto traj = integrate_riccati_direct(inst.cs, inst.Y0);
        REQUIRE(traj.status == TrajectoryStatus::completed);
        CHECK(verify_hermitian_bound(traj, inst.lambda).pass);
        const auto [flow, radon] = integrate_linear_system(inst.cs, inst.Y0);
        CHECK(radon.singular_times.empty());
    }
}

TEST_CASE("strict initial gap stays positive") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 3);
        const Instance inst = generate(spec);
        const CMatrix L0 = inst.lambda.eval(inst.cs.t0());
        const double delta = min_eigenvalue(inst.Y0 + inst.Y0.adjoint() - L0 - L0.adjoint());
        if (delta < 1e-3) continue;
        const auto mon = eigen_monitor(integrate_riccati_direct(inst.cs, inst.Y0), inst.lambda);
        for (double v : mon) CHECK(v > 0.0);
    }
}

TEST_CASE("complex gauge counterexamples") {
    // The literal conditions (I, II, III, initial) hold, yet the bound fails on
    // some trajectories; the checker refuses these through mu_real.
    int violated = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 4);
        spec.complex_gauge = true;
        const Instance inst = generate(spec);
        const auto report = check_theorem_3_1(inst.cs, inst.lambda, inst.Y0, GridSpec::over(inst.cs, 201));
        for (const char* name : {"I", "II", "III", "initial"}) CHECK(report.find(name)->passed);
        CHECK_FALSE(report.holds);
        const auto traj = integrate_riccati_direct(inst.cs, inst.Y0);
        if (traj.status != TrajectoryStatus::completed || !verify_hermitian_bound(traj, inst.lambda).pass)
            ++violated;
    }
    CHECK(violated > 0);
}
