#pragma once

#include <complex>

#include <Eigen/Dense>

namespace riccati {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Eigen::Index kMaxDimension = 64;

/// Throws DimensionError unless M is square with 1 <= n <= kMaxDimension,
/// NonFiniteError if any entry is NaN/Inf. `what` names the operand in messages.
void require_square(const CMatrix& M, const char* what);
void require_same_dimension(const CMatrix& A, const CMatrix& B, const char* what);

/// Tolerance policy for "H >= 0".
///
/// H counts as PSD when its Hermitian defect ||H - H*||_F is at most
/// herm * ||H||_F and lambda_min(hermitian_part(H)) >= -(abs + rel * ||H||_2).
struct PsdTolerance {
    double abs = 1e-9;
    double rel = 1e-9;
    double herm = 1e-9;

    /// Absolute band on the eigenvalue, scaled by the matrix at hand.
    double eigen_threshold(const CMatrix& H) const;
};

struct PsdVerdict {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    double hermiticity_defect = 0.0;
    double threshold = 0.0;  // eigenvalue band actually applied
};

CMatrix hermitian_part(const CMatrix& M);

/// ||M - M*||_F
double hermiticity_defect(const CMatrix& M);
/// ||M + M*||_F
double skewness_defect(const CMatrix& M);

/// Least eigenvalue of hermitian_part(H). Throws EigenSolverError on failure.
double min_eigenvalue(const CMatrix& H);

/// Largest singular value.
double spectral_norm(const CMatrix& M);

PsdVerdict check_psd(const CMatrix& H, const PsdTolerance& tol = {});

/// sum_{j,k} a_jk b_kj, i.e. tr(AB) without forming AB.
Complex trace_product(const CMatrix& A, const CMatrix& B);

/// Principal square root of a Hermitian positive definite matrix through its
/// eigendecomposition. Rejects P whose Hermitian defect exceeds tol * ||P||_F
/// or whose least eigenvalue is <= tol.
CMatrix principal_sqrt(const CMatrix& P, double tol = 1e-9);

/// Derivative of t -> sqrt(P(t)) given P and P'. Solves X sqrt(P) + sqrt(P) X = P'
/// entrywise in the eigenbasis: X~_ij = P'~_ij / (s_i + s_j).
CMatrix sqrt_derivative(const CMatrix& P, const CMatrix& Pdot, double tol = 1e-9);

CMatrix identity(Eigen::Index n);

} // namespace riccati
