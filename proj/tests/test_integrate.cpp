#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riccati/errors.hpp"
#include "riccati/instances.hpp"
#include "riccati/integrate.hpp"
#include "support.hpp"

using namespace riccati;
using testing::constant;
using testing::diag;
using testing::Gen;
using testing::scalar;

namespace {

CoefficientSet scalar_set(double p, double q, double r, double s, double t_end) {
    return CoefficientSet::make(0.0, t_end, scalar(p), scalar(q), scalar(r), scalar(s));
}

const CMatrix kZero1 = CMatrix::Zero(1, 1);

double value_at(const Trajectory& traj, double t) {
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (std::abs(traj.times[k] - t) < 1e-12) return traj.values[k](0, 0).real();
    FAIL("no sample at t");
    return 0.0;
}

} // namespace

TEST_CASE("direct: tanh endpoint") {
    const auto traj = integrate_riccati_direct(scalar_set(1, 0, 0, 1, 1.0), kZero1);
    CHECK(traj.status == TrajectoryStatus::completed);
    CHECK(traj.times.back() == 1.0);
    CHECK(std::abs(traj.values.back()(0, 0) - std::tanh(1.0)) <= 1e-8);
}

TEST_CASE("direct: escape time of the -tan family") {
    for (double c : {0.25, 1.0, 4.0}) {
        const double escape = std::numbers::pi / (2.0 * std::sqrt(c));
        const auto traj = integrate_riccati_direct(scalar_set(1, 0, 0, -c, escape + 0.5), kZero1);
        CHECK(traj.status == TrajectoryStatus::blow_up);
        CHECK(traj.trigger == BlowupTrigger::norm_cap);
        REQUIRE(traj.t_escape.has_value());
        CHECK(*traj.t_escape <= escape);
        CHECK(*traj.t_escape >= escape - 1e-3);
    }
}

TEST_CASE("direct: equilibrium") {
    for (Eigen::Index n = 1; n <= 3; ++n) {
        const CMatrix Z = CMatrix::Zero(n, n);
        Gen g(31);
        const auto cs = CoefficientSet::make(0.0, 2.0, constant(g.psd(n)), constant(Z), constant(Z), constant(Z));
        const auto traj = integrate_riccati_direct(cs, Z);
        CHECK(traj.status == TrajectoryStatus::completed);
        for (const auto& Y : traj.values) CHECK(Y.norm() == 0.0);
    }
}

TEST_CASE("direct: tightening tolerances shrinks the endpoint error") {
    const auto cs = scalar_set(1, 0, 0, 1, 1.0);
    auto error = [&](double rtol) {
        IntegratorOptions opts;
        opts.rtol = rtol;
        opts.atol = rtol;
        opts.num_samples = 2;
        return std::abs(integrate_riccati_direct(cs, kZero1, opts).values.back()(0, 0) - std::tanh(1.0));
    };
    CHECK(error(1e-3) > error(1e-6));
    CHECK(error(1e-6) > error(1e-9));
    CHECK(error(1e-9) <= 1e-8);
}

TEST_CASE("direct: Hermitian data keep Y Hermitian") {
    Gen g(32);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = g.integer(1, 4);
        const CMatrix Q = g.matrix(n);
        const auto cs = CoefficientSet::make(0.0, 2.0, constant(g.psd(n)), constant(Q),
                                             constant(Q.adjoint()), constant(g.hermitian(n)));
        const auto traj = integrate_riccati_direct(cs, g.psd(n));
        for (const auto& Y : traj.values)
            CHECK((Y - Y.adjoint()).norm() <= 1e-8 * (1.0 + Y.norm()));
    }
}

TEST_CASE("direct: explicit samples and option validation") {
    IntegratorOptions opts;
    opts.sample_times = {0.0, 0.25, 1.0};
    const auto traj = integrate_riccati_direct(scalar_set(1, 0, 0, 1, 1.0), kZero1, opts);
    CHECK(traj.times == opts.sample_times);

    IntegratorOptions bad;
    bad.rtol = -1.0;
    CHECK_THROWS_AS(integrate_riccati_direct(scalar_set(1, 0, 0, 1, 1.0), kZero1, bad), InvalidArgument);
    CHECK_THROWS_AS(integrate_riccati_direct(scalar_set(1, 0, 0, 1, 1.0), CMatrix::Zero(2, 2)),
                    DimensionError);
}

TEST_CASE("radon: cosh/sinh flow") {
    const auto [flow, traj] = integrate_linear_system(scalar_set(1, 0, 0, 1, 2.0), kZero1);
    CHECK(traj.status == TrajectoryStatus::completed);
    CHECK(std::abs(value_at(traj, 1.0) - std::tanh(1.0)) <= 1e-8);
    CHECK(flow.restarts.empty());
    for (std::size_t k = 0; k < flow.times.size(); ++k) {
        const double t = flow.times[k];
        CHECK(std::abs(flow.phi[k](0, 0) - std::cosh(t)) <= 1e-8 * std::cosh(t));
        CHECK(std::abs(flow.psi[k](0, 0) - std::sinh(t)) <= 1e-8 * std::cosh(t));
    }
}

TEST_CASE("radon: continues through the -tan singularity") {
    IntegratorOptions opts;
    opts.num_samples = 301;
    const auto [flow, traj] = integrate_linear_system(scalar_set(1, 0, 0, -1, 3.0), kZero1, opts);
    CHECK(traj.status == TrajectoryStatus::phi_singular);
    REQUIRE_FALSE(traj.singular_times.empty());
    CHECK(std::abs(traj.singular_times.front() - std::numbers::pi / 2) < 0.02);
    std::size_t after = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (t > std::numbers::pi / 2 + 0.05 && t < std::numbers::pi - 0.05) {
            ++after;
            CHECK(std::isfinite(traj.values[k](0, 0).real()));
            CHECK(std::abs(traj.values[k](0, 0) + std::tan(t)) <= 1e-6 * (1.0 + std::abs(std::tan(t))));
        }
    }
    CHECK(after > 50);
}

TEST_CASE("radon: decoupled flow with P = 0") {
    Gen g(33);
    const CMatrix Z = CMatrix::Zero(2, 2);
    const CMatrix S = g.matrix(2);
    const auto cs = CoefficientSet::make(0.0, 1.0, constant(Z), constant(Z), constant(Z), constant(S));
    const auto [flow, traj] = integrate_linear_system(cs, Z);
    for (std::size_t k = 0; k < flow.times.size(); ++k) {
        CHECK((flow.phi[k] - identity(2)).norm() < 1e-12);
        CHECK((traj.values[k] - flow.times[k] * S).norm() < 1e-10);
    }
}

TEST_CASE("radon: restarts are transparent") {
    const auto cs = CoefficientSet::make(0.0, 4.0, constant(identity(2)), constant(CMatrix::Zero(2, 2)),
                                         constant(diag({2.0, -2.0})), constant(diag({0.1, 0.1})));
    IntegratorOptions low;
    low.recondition_threshold = 10.0;
    const auto [flow_low, traj_low] = integrate_linear_system(cs, CMatrix::Zero(2, 2), low);
    const auto [flow, traj] = integrate_linear_system(cs, CMatrix::Zero(2, 2));
    CHECK_FALSE(flow_low.restarts.empty());
    CHECK(max_discrepancy(traj, traj_low) <= 1e-7);
    CHECK(max_discrepancy(integrate_riccati_direct(cs, CMatrix::Zero(2, 2)), traj_low) <= 1e-7);
}

TEST_CASE("lyapunov comparison oracles") {
    const CMatrix Z = CMatrix::Zero(2, 2);
    const auto cs = CoefficientSet::make(0.0, 1.0, constant(identity(2)), constant(Z), constant(Z),
                                         constant(identity(2)));
    const auto lin = integrate_lyapunov_comparison(cs, Z);
    for (std::size_t k = 0; k < lin.size(); ++k)
        CHECK((lin.values[k] - lin.times[k] * identity(2)).norm() < 1e-10);

    const auto decay = integrate_lyapunov_comparison(scalar_set(0, 0, 1, 0, 1.0), CMatrix::Ones(1, 1));
    CHECK(std::abs(decay.values.back()(0, 0) - std::exp(-2.0)) <= 1e-9);
}

TEST_CASE("liouville: closed-form determinants") {
    const auto cs = scalar_set(1, 0, 0, 1, 2.0);
    const auto [flow, traj] = integrate_linear_system(cs, kZero1);
    const auto res = liouville_check(flow, cs, traj);
    CHECK(res.max_relative_error <= 1e-6);
    CHECK(res.spans == 1);

    const CMatrix Z = CMatrix::Zero(2, 2);
    const auto cs2 = CoefficientSet::make(0.0, 1.0, constant(Z), constant(Z), constant(diag({1, 2})), constant(Z));
    const auto [flow2, traj2] = integrate_linear_system(cs2, Z);
    for (std::size_t k = 0; k < flow2.times.size(); ++k)
        CHECK(std::abs(flow2.phi[k].determinant() - std::exp(3.0 * flow2.times[k])) <=
              1e-8 * std::exp(3.0 * flow2.times[k]));
    CHECK(liouville_check(flow2, cs2, traj2).max_relative_error <= 1e-8);
}

TEST_CASE("liouville: random spans") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 3);
        spec.horizon = 2.0;
        const Instance inst = generate(spec);
        const auto [flow, traj] = integrate_linear_system(inst.cs, inst.Y0);
        const auto res = liouville_check(flow, inst.cs, traj);
        CHECK(res.max_relative_error <= 1e-6);
        CHECK(res.modulus_form_error <= 1e-6);
    }
}

TEST_CASE("cross-method agreement on generated instances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 4);
        const Instance inst = generate(spec);
        const auto direct = integrate_riccati_direct(inst.cs, inst.Y0);
        const auto [flow, radon] = integrate_linear_system(inst.cs, inst.Y0);
        REQUIRE(direct.status == TrajectoryStatus::completed);
        CHECK(radon.status == TrajectoryStatus::completed);
        CHECK(max_discrepancy(direct, radon) <= 1e-6);
    }
}

TEST_CASE("max_discrepancy needs shared samples") {
    Trajectory a, b;
    a.times = {0.0};
    a.values = {kZero1};
    b.times = {1.0};
    b.values = {kZero1};
    CHECK_THROWS(max_discrepancy(a, b));
}
