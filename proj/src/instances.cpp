#include "riccati/instances.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "riccati/errors.hpp"

namespace riccati {

namespace {

using Poly = std::vector<CMatrix>;  // coefficients of (t - t0)^k

// Portable draws: raw 64-bit Mersenne Twister output mapped by bit arithmetic,
// so a seed yields the same instance under every standard library.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    Complex complex_unit() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

    /// Random complex matrix with Frobenius norm in [scale / 4, scale].
    CMatrix matrix(Eigen::Index n, double scale) {
        CMatrix M(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) M(i, j) = complex_unit();
        const double norm = M.norm();
        const double target = scale * uniform(0.25, 1.0);
        return norm > 0.0 ? CMatrix(M * (target / norm)) : M;
    }

private:
    std::mt19937_64 engine_;
};

Poly add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()));
    const Eigen::Index n = a.front().rows();
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = CMatrix::Zero(n, n);
        if (k < a.size()) out[k] += a[k];
        if (k < b.size()) out[k] += b[k];
    }
    return out;
}

Poly scaled(const Poly& a, Complex s) {
    Poly out = a;
    for (auto& c : out) c *= s;
    return out;
}

Poly mul(const Poly& a, const Poly& b) {
    const Eigen::Index n = a.front().rows();
    Poly out(a.size() + b.size() - 1, CMatrix::Zero(n, n));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly adjoint(const Poly& a) {
    Poly out;
    out.reserve(a.size());
    for (const auto& c : a) out.push_back(c.adjoint());
    return out;
}

Poly derivative(const Poly& a) {
    if (a.size() == 1) return {CMatrix::Zero(a.front().rows(), a.front().cols())};
    Poly out;
    for (std::size_t k = 1; k < a.size(); ++k) out.push_back(a[k] * static_cast<double>(k));
    return out;
}

// Trailing exactly-zero coefficients are dropped; degree 0 becomes a constant.
CoefficientFunction to_function(Poly p, double t0) {
    while (p.size() > 1 && p.back().isZero(0.0)) p.pop_back();
    if (p.size() == 1) return CoefficientFunction::constant(std::move(p.front()));
    return CoefficientFunction::polynomial(t0, std::move(p));
}

// Linear-in-time draw M0 + M1 (t - t0); M1 is scaled so the drift over the
// horizon is comparable to M0.
Poly linear_draw(Draw& draw, const InstanceSpec& spec, double scale) {
    Poly p{draw.matrix(spec.n, scale)};
    if (spec.variation == Variation::polynomial)
        p.push_back(draw.matrix(spec.n, scale / spec.horizon));
    return p;
}

CMatrix gram(Draw& draw, Eigen::Index n, double scale) {
    const CMatrix C = draw.matrix(n, std::sqrt(scale));
    return C.adjoint() * C;
}

void validate(const InstanceSpec& spec) {
    if (spec.n < 1 || spec.n > kMaxDimension) {
        std::ostringstream os;
        os << "instance spec: n = " << spec.n << " outside [1, " << kMaxDimension << "]";
        throw InvalidArgument(os.str());
    }
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon))
        throw InvalidArgument("instance spec: horizon must be positive");
    if (!(spec.scale > 0.0) || !std::isfinite(spec.scale))
        throw InvalidArgument("instance spec: scale must be positive");
    if (!std::isfinite(spec.t0)) throw InvalidArgument("instance spec: t0 must be finite");
}

std::string instance_name(const InstanceSpec& spec) {
    std::ostringstream os;
    os << to_string(spec.target) << "-n" << spec.n << "-seed" << spec.seed;
    return os.str();
}

// Shared construction of gen_satisfying / gen_violating_III. With `violate`,
// W = S_Lambda + S_Lambda* is shifted to have a negative eigenvalue.
Instance gauged_instance(const InstanceSpec& spec, bool violate) {
    validate(spec);
    Draw draw(spec.seed);
    const Eigen::Index n = spec.n;
    const double t0 = spec.t0;

    const Poly A = linear_draw(draw, spec, std::sqrt(spec.scale));
    const Poly P = mul(adjoint(A), A);
    const Poly Q = linear_draw(draw, spec, spec.scale);
    const Poly L = linear_draw(draw, spec, spec.scale);
    Complex mu = draw.complex_unit() * (spec.scale / std::sqrt(2.0));
    if (!spec.complex_gauge) mu = mu.real();

    // II: R = Q* + P (L* - L) + mu I
    const Poly R = add(add(adjoint(Q), mul(P, add(adjoint(L), scaled(L, -1.0)))),
                       Poly{mu * identity(n)});
    // III: S = W / 2 + L' + L P L + Q L + L R  gives  S_L + S_L* = W.
    CMatrix W = gram(draw, n, spec.scale);
    if (violate) W -= (spectral_norm(W) + 0.5 * spec.scale) * identity(n);
    const Poly S = add(add(add(add(Poly{W * 0.5}, derivative(L)), mul(mul(L, P), L)), mul(Q, L)),
                       mul(L, R));
    const CMatrix H0 = gram(draw, n, spec.scale);

    Instance inst{instance_name(spec),
                  CoefficientSet::make(t0, t0 + spec.horizon, to_function(P, t0),
                                       to_function(Q, t0), to_function(R, t0),
                                       to_function(S, t0)),
                  to_function(L, t0),
                  ScalarFunction::constant(mu),
                  std::nullopt,
                  L.front() + H0};
    return inst;
}

} // namespace

const char* to_string(Target t) {
    switch (t) {
    case Target::satisfying: return "satisfying";
    case Target::violating_III: return "violating_III";
    case Target::blowup: return "blowup";
    case Target::theorem_1_1: return "theorem_1_1";
    case Target::corollary_3_2: return "corollary_3_2";
    }
    return "unknown";
}

Target parse_target(const std::string& name) {
    for (Target t : {Target::satisfying, Target::violating_III, Target::blowup,
                     Target::theorem_1_1, Target::corollary_3_2})
        if (name == to_string(t)) return t;
    throw InvalidArgument("unknown target '" + name + "'");
}

Instance gen_satisfying(const InstanceSpec& spec) { return gauged_instance(spec, false); }

Instance gen_violating_III(const InstanceSpec& spec) { return gauged_instance(spec, true); }

Instance gen_blowup(const InstanceSpec& spec) {
    validate(spec);
    if (!(spec.blowup_rate > 0.0)) throw InvalidArgument("instance spec: blowup_rate must be > 0");
    const Eigen::Index n = spec.n;
    const double c = spec.blowup_rate;
    const double t_end = spec.t0 + std::numbers::pi / (2.0 * std::sqrt(c)) + 0.5;
    const CMatrix zero = CMatrix::Zero(n, n);
    return Instance{instance_name(spec),
                    CoefficientSet::make(spec.t0, t_end, CoefficientFunction::constant(identity(n)),
                                         CoefficientFunction::constant(zero),
                                         CoefficientFunction::constant(zero),
                                         CoefficientFunction::constant(-c * identity(n))),
                    zero_function(n),
                    ScalarFunction::constant({0.0, 0.0}),
                    std::nullopt,
                    zero};
}

Instance gen_theorem_1_1(const InstanceSpec& spec) {
    validate(spec);
    Draw draw(spec.seed);
    const double t0 = spec.t0;
    const Poly A = linear_draw(draw, spec, std::sqrt(spec.scale));
    const Poly B = linear_draw(draw, spec, std::sqrt(spec.scale));
    const Poly Q = linear_draw(draw, spec, spec.scale);
    const CMatrix Y0 = gram(draw, spec.n, spec.scale);
    return Instance{instance_name(spec),
                    CoefficientSet::make(t0, t0 + spec.horizon, to_function(mul(adjoint(A), A), t0),
                                         to_function(Q, t0), to_function(adjoint(Q), t0),
                                         to_function(mul(adjoint(B), B), t0)),
                    zero_function(spec.n),
                    ScalarFunction::constant({0.0, 0.0}),
                    std::nullopt,
                    Y0};
}

Instance gen_corollary_3_2(const InstanceSpec& spec) {
    validate(spec);
    Draw draw(spec.seed);
    const Eigen::Index n = spec.n;
    const CMatrix P = gram(draw, n, spec.scale) + 0.5 * spec.scale * identity(n);
    const CMatrix root = principal_sqrt(P);
    const CMatrix G = draw.matrix(n, spec.scale);
    const CMatrix K = (G - G.adjoint()) * 0.5;
    Complex nu = draw.complex_unit() * spec.scale;
    if (!spec.complex_gauge) nu = nu.real();
    const CMatrix Q = draw.matrix(n, spec.scale);
    // T_nu = (root^{-1}(Q* - R) root + nu I) / 2 = K
    const CMatrix R =
        Q.adjoint() - root * (2.0 * K - nu * identity(n)) * root.partialPivLu().inverse();
    // root (S + S*) root = W - 2K^2 - (conj(nu) - nu) K with W >= 0, so the
    // corollary matrix equals W.
    const CMatrix H = -2.0 * K * K - (std::conj(nu) - nu) * K;
    const CMatrix W = gram(draw, n, spec.scale);
    const CMatrix inv_root = root.partialPivLu().inverse();
    const CMatrix B = draw.matrix(n, spec.scale);
    const CMatrix S = 0.5 * inv_root * (H + W) * inv_root + 0.5 * (B - B.adjoint());
    const CMatrix Y0 = gram(draw, n, spec.scale);
    return Instance{instance_name(spec),
                    CoefficientSet::make(spec.t0, spec.t0 + spec.horizon,
                                         CoefficientFunction::constant(P),
                                         CoefficientFunction::constant(Q),
                                         CoefficientFunction::constant(R),
                                         CoefficientFunction::constant(S)),
                    zero_function(n),
                    std::nullopt,
                    ScalarFunction::constant(nu),
                    Y0};
}

Instance generate(const InstanceSpec& spec) {
    switch (spec.target) {
    case Target::satisfying: return gen_satisfying(spec);
    case Target::violating_III: return gen_violating_III(spec);
    case Target::blowup: return gen_blowup(spec);
    case Target::theorem_1_1: return gen_theorem_1_1(spec);
    case Target::corollary_3_2: return gen_corollary_3_2(spec);
    }
    throw InvalidArgument("generate: unknown target");
}

namespace {

CatalogEntry scalar_entry(std::string name, double p, double s, double t_end,
                          std::function<double(double)> exact, std::string descriptor) {
    const auto c = [](double v) { return CoefficientFunction::constant(CMatrix::Constant(1, 1, v)); };
    Instance inst{name,
                  CoefficientSet::make(0.0, t_end, c(p), c(0.0), c(0.0), c(s)),
                  zero_function(1),
                  ScalarFunction::constant({0.0, 0.0}),
                  std::nullopt,
                  CMatrix::Zero(1, 1)};
    return {std::move(name), std::move(inst),
            [exact = std::move(exact)](double t) { return CMatrix::Constant(1, 1, exact(t)); },
            std::move(descriptor)};
}

} // namespace

std::vector<CatalogEntry> canonical_catalog() {
    std::vector<CatalogEntry> out;
    out.push_back(scalar_entry("tanh", 1.0, 1.0, 1.0, [](double t) { return std::tanh(t); },
                               "y' = 1 - y^2, y(0) = 0: y = tanh t"));
    out.push_back(scalar_entry("blowup", 1.0, -1.0, 3.0, [](double t) { return -std::tan(t); },
                               "y' = -1 - y^2, y(0) = 0: y = -tan t, escape at pi/2"));
    out.push_back(scalar_entry("cosh_sinh", 1.0, 1.0, 2.0, [](double t) { return std::tanh(t); },
                               "Phi = cosh t, Psi = sinh t, y = tanh t"));

    const CMatrix I2 = identity(2);
    const CMatrix Z2 = CMatrix::Zero(2, 2);
    const auto c = [](const CMatrix& m) { return CoefficientFunction::constant(m); };
    out.push_back({"linear",
                   Instance{"linear", CoefficientSet::make(0.0, 1.0, c(Z2), c(Z2), c(Z2), c(I2)),
                            zero_function(2), ScalarFunction::constant({0.0, 0.0}), std::nullopt,
                            Z2},
                   [I2](double t) { return CMatrix(t * I2); },
                   "P = 0, S = I: Y = t I"});
    out.push_back({"care_constant",
                   Instance{"care_constant",
                            CoefficientSet::make(0.0, 10.0, c(I2), c(Z2), c(Z2), c(I2)),
                            zero_function(2), ScalarFunction::constant({0.0, 0.0}), std::nullopt,
                            Z2},
                   [I2](double t) { return CMatrix(std::tanh(t) * I2); },
                   "Y' = I - Y^2, Y(0) = 0: Y = tanh(t) I, converging to the CARE solution I"});
    return out;
}

CatalogEntry catalog_entry(const std::string& name) {
    for (auto& e : canonical_catalog())
        if (e.name == name) return e;
    throw InvalidArgument("unknown catalog entry '" + name + "'");
}

} // namespace riccati
