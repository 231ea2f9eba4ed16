#pragma once

#include <cstdint>
#include <random>

#include "riccati/coefficients.hpp"
#include "riccati/matrix_core.hpp"

namespace testing {

using riccati::CMatrix;
using riccati::Complex;

// Seeded generator for random complex matrices.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Complex complex() { return {uniform(), uniform()}; }

    CMatrix matrix(Eigen::Index n) { return matrix(n, n); }
    CMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
        CMatrix m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex();
        return m;
    }
    CMatrix hermitian(Eigen::Index n) {
        const CMatrix g = matrix(n);
        return (g + g.adjoint()) * 0.5;
    }
    CMatrix skew(Eigen::Index n) {
        const CMatrix g = matrix(n);
        return (g - g.adjoint()) * 0.5;
    }
    CMatrix psd(Eigen::Index n) {
        const CMatrix g = matrix(n);
        return g.adjoint() * g;
    }
    // Positive definite with least eigenvalue at least `floor`.
    CMatrix pd(Eigen::Index n, double floor = 0.5) {
        return psd(n) + floor * riccati::identity(n);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline riccati::CoefficientFunction constant(const CMatrix& m) {
    return riccati::CoefficientFunction::constant(m);
}

inline riccati::CoefficientFunction scalar(double v) {
    return constant(CMatrix::Constant(1, 1, v));
}

inline CMatrix diag(std::initializer_list<Complex> d) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (Complex v : d) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace testing
