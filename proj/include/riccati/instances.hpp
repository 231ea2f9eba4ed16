#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riccati/coefficients.hpp"

namespace riccati {

/// A coefficient set together with gauge data and an initial value.
struct Instance {
    std::string name;
    CoefficientSet cs;
    CoefficientFunction lambda;         // zero when the instance carries no gauge
    std::optional<ScalarFunction> mu;   // as constructed, if known
    std::optional<ScalarFunction> nu;
    CMatrix Y0;
    int grid_points = 1001;
};

enum class Target { satisfying, violating_III, blowup, theorem_1_1, corollary_3_2 };
enum class Variation { constant, polynomial };

const char* to_string(Target t);
/// Throws InvalidArgument on an unknown name.
Target parse_target(const std::string& name);

struct InstanceSpec {
    Eigen::Index n = 2;
    std::uint64_t seed = 0;
    double t0 = 0.0;
    double horizon = 5.0;
    Variation variation = Variation::polynomial;
    /// Every random draw is rescaled so its Frobenius norm is at most this.
    double scale = 1.0;
    Target target = Target::satisfying;
    /// c in S = -c I for target blowup.
    double blowup_rate = 1.0;
    /// Draw mu / nu complex instead of real. Such instances meet the literal
    /// conditions but the checkers reject them (see check_theorem_3_1).
    bool complex_gauge = false;
};

/// P = A*A, arbitrary Q, polynomial Lambda, constant mu; R and S are derived so
/// that conditions I-III and the initial clause hold by construction.
Instance gen_satisfying(const InstanceSpec& spec);

/// As gen_satisfying, but S_Lambda + S_Lambda* has a negative eigenvalue.
Instance gen_violating_III(const InstanceSpec& spec);

/// P = I, Q = R = 0, S = -c I, Y0 = 0: escapes at t0 + pi / (2 sqrt(c)).
/// The horizon is pi / (2 sqrt(c)) + 0.5.
Instance gen_blowup(const InstanceSpec& spec);

/// P = A*A, S = B*B, random Q, R = Q*, Y0 = C*C.
Instance gen_theorem_1_1(const InstanceSpec& spec);

/// Constant data with P > 0 and R chosen so T_nu is a prescribed random
/// skew-Hermitian matrix for a random complex nu (stored in Instance::nu);
/// S makes the corollary matrix a random Gram matrix.
Instance gen_corollary_3_2(const InstanceSpec& spec);

/// Dispatches on spec.target.
Instance generate(const InstanceSpec& spec);

struct CatalogEntry {
    std::string name;
    Instance instance;
    std::function<CMatrix(double)> exact;  // closed-form Y(t)
    std::string descriptor;
};

/// tanh, blowup (-tan), linear, care_constant, cosh_sinh.
std::vector<CatalogEntry> canonical_catalog();

/// Throws InvalidArgument for an unknown name.
CatalogEntry catalog_entry(const std::string& name);

} // namespace riccati
