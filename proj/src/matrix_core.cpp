#include "riccati/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "riccati/errors.hpp"

namespace riccati {

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const CMatrix& H, bool vectors) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(
        hermitian_part(H), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigenSolverError("Hermitian eigensolver failed to converge");
    return solver;
}

// Shared eigen-structure checks of principal_sqrt and sqrt_derivative.
Eigen::SelfAdjointEigenSolver<CMatrix> positive_definite_eigen(const CMatrix& P, double tol,
                                                               const char* op) {
    require_square(P, op);
    const double scale = P.norm();
    if (hermiticity_defect(P) > tol * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << op << ": matrix is not Hermitian (defect " << hermiticity_defect(P) << ")";
        throw StructureError(os.str());
    }
    auto solver = hermitian_eigen(P, true);
    const double lmin = solver.eigenvalues()(0);
    if (!(lmin > tol)) {
        std::ostringstream os;
        os << op << ": matrix is not positive definite (min eigenvalue " << lmin << ")";
        throw NotPositiveDefiniteError(os.str(), lmin);
    }
    return solver;
}

} // namespace

void require_square(const CMatrix& M, const char* what) {
    if (M.rows() != M.cols()) {
        std::ostringstream os;
        os << what << ": expected a square matrix, got " << M.rows() << "x" << M.cols();
        throw DimensionError(os.str());
    }
    if (M.rows() < 1 || M.rows() > kMaxDimension) {
        std::ostringstream os;
        os << what << ": dimension " << M.rows() << " outside supported range [1, "
           << kMaxDimension << "]";
        throw DimensionError(os.str());
    }
    if (!M.allFinite()) throw NonFiniteError(std::string(what) + ": non-finite entry");
}

void require_same_dimension(const CMatrix& A, const CMatrix& B, const char* what) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << A.rows() << "x" << A.cols() << " vs "
           << B.rows() << "x" << B.cols() << ")";
        throw DimensionError(os.str());
    }
}

double PsdTolerance::eigen_threshold(const CMatrix& H) const {
    return abs + rel * spectral_norm(H);
}

CMatrix hermitian_part(const CMatrix& M) {
    if (M.rows() != M.cols()) throw DimensionError("hermitian_part: non-square input");
    return (M + M.adjoint()) * 0.5;
}

double hermiticity_defect(const CMatrix& M) { return (M - M.adjoint()).norm(); }

double skewness_defect(const CMatrix& M) { return (M + M.adjoint()).norm(); }

double min_eigenvalue(const CMatrix& H) {
    require_square(H, "min_eigenvalue");
    return hermitian_eigen(H, false).eigenvalues()(0);
}

double spectral_norm(const CMatrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(0);
}

PsdVerdict check_psd(const CMatrix& H, const PsdTolerance& tol) {
    require_square(H, "check_psd");
    PsdVerdict v;
    v.hermiticity_defect = hermiticity_defect(H);
    v.min_eigenvalue = min_eigenvalue(H);
    v.threshold = tol.eigen_threshold(H);
    v.is_psd = v.hermiticity_defect <= tol.herm * H.norm() && v.min_eigenvalue >= -v.threshold;
    return v;
}

Complex trace_product(const CMatrix& A, const CMatrix& B) {
    if (A.rows() != B.cols() || A.cols() != B.rows())
        throw DimensionError("trace_product: dimension mismatch");
    Complex sum{0.0, 0.0};
    for (Eigen::Index j = 0; j < A.rows(); ++j)
        for (Eigen::Index k = 0; k < A.cols(); ++k) sum += A(j, k) * B(k, j);
    return sum;
}

CMatrix principal_sqrt(const CMatrix& P, double tol) {
    const auto solver = positive_definite_eigen(P, tol, "principal_sqrt");
    const CMatrix& V = solver.eigenvectors();
    const Eigen::VectorXd s = solver.eigenvalues().cwiseSqrt();
    return V * s.cast<Complex>().asDiagonal() * V.adjoint();
}

CMatrix sqrt_derivative(const CMatrix& P, const CMatrix& Pdot, double tol) {
    require_square(Pdot, "sqrt_derivative");
    require_same_dimension(P, Pdot, "sqrt_derivative");
    const auto solver = positive_definite_eigen(P, tol, "sqrt_derivative");
    const CMatrix& V = solver.eigenvectors();
    const Eigen::VectorXd s = solver.eigenvalues().cwiseSqrt();
    CMatrix X = V.adjoint() * Pdot * V;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) /= (s(i) + s(j));
    return V * X * V.adjoint();
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

} // namespace riccati
