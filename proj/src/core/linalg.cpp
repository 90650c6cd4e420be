#include "mlwave/linalg.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

namespace mlwave {

CMatrix hermitian_part(const CMatrix& x) { return (x + x.adjoint()) * 0.5; }

double hermitian_defect(const CMatrix& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  if (x.size() == 0) return 0.0;
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const CMatrix& x, double tol, const char* what) {
  if (x.rows() != x.cols())
    throw ContractViolation(fmt::format("{} must be square (got {}x{})", what, x.rows(), x.cols()));
  const double scale = x.size() == 0 ? 1.0 : std::max(1.0, x.cwiseAbs().maxCoeff());
  const double defect = hermitian_defect(x);
  if (defect > tol * scale)
    throw ContractViolation(fmt::format("{} is not Hermitian (|X - X^H| = {:.3e})", what, defect));
}

RVector hermitian_eigenvalues(const CMatrix& x) {
  if (x.size() == 0) return RVector();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double max_eigenvalue(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  return hermitian_eigenvalues(x).maxCoeff();
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji; for Hermitian B that is sum_ij A_ij conj(B_ij).
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace mlwave
