#include <doctest.h>

#include "riccati/criteria.hpp"
#include "riccati/instances.hpp"
#include "riccati/sweep.hpp"
#include "riccati/verify.hpp"

using namespace riccati;

// The parallel kernels write per-index slots and reduce serially, so results
// must match the serial reference bit for bit.

TEST_CASE("criteria: serial and parallel agree") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 4);
        spec.target = seed % 2 ? Target::satisfying : Target::violating_III;
        const Instance inst = generate(spec);
        const GridSpec grid = GridSpec::over(inst.cs, 257);
        const auto a = check_theorem_3_1(inst.cs, inst.lambda, inst.Y0, grid, {}, Execution::serial);
        const auto b = check_theorem_3_1(inst.cs, inst.lambda, inst.Y0, grid, {}, Execution::parallel);
        CHECK(a.holds == b.holds);
        REQUIRE(a.conditions.size() == b.conditions.size());
        for (std::size_t k = 0; k < a.conditions.size(); ++k) {
            CHECK(a.conditions[k].values == b.conditions[k].values);
            CHECK(a.conditions[k].worst_time == b.conditions[k].worst_time);
        }
    }
}

TEST_CASE("verify: serial and parallel agree") {
    InstanceSpec spec;
    spec.n = 3;
    const Instance inst = generate(spec);
    IntegratorOptions opts;
    opts.num_samples = 501;
    const auto traj = integrate_riccati_direct(inst.cs, inst.Y0, opts);
    CHECK(eigen_monitor(traj, inst.lambda, Execution::serial) ==
          eigen_monitor(traj, inst.lambda, Execution::parallel));
}

TEST_CASE("sweeps: serial and parallel agree") {
    std::vector<InstanceSpec> specs;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<Eigen::Index>(seed % 3);
        specs.push_back(spec);
    }
    const auto a = guarantee_sweep(specs, {}, Execution::serial);
    const auto b = guarantee_sweep(specs, {}, Execution::parallel);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        CHECK(a[k].criterion_holds == b[k].criterion_holds);
        CHECK(a[k].bound.min_gap == b[k].bound.min_gap);
    }
}

TEST_CASE("parallel loops rethrow the lowest failing index") {
    std::vector<int> hits(100, 0);
    CHECK_THROWS_WITH(detail::for_each_index(hits.size(), Execution::parallel,
                                             [&](std::size_t i) {
                                                 hits[i] = 1;
                                                 if (i == 37 || i == 80) throw std::runtime_error(std::to_string(i));
                                             }),
                      "37");
}
