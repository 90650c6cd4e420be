#pragma once

#include "mlwave/common.hpp"

namespace mlwave {

/// (X + X^H) / 2.
CMatrix hermitian_part(const CMatrix& x);

/// Largest elementwise |X - X^H|.
double hermitian_defect(const CMatrix& x);

/// Throws ContractViolation when x is not square or |X - X^H| exceeds tol * max(1, |X|max).
void require_hermitian(const CMatrix& x, double tol, const char* what);

/// Eigenvalues in ascending order.
RVector hermitian_eigenvalues(const CMatrix& x);

double max_eigenvalue(const CMatrix& x);

/// Re Tr(A B) for Hermitian A, B without forming the product.
double trace_product(const CMatrix& a, const CMatrix& b);

}  // namespace mlwave
