#pragma once

#include <cstddef>
#include <vector>

#include "corrlift/linalg.hpp"
#include "corrlift/poly.hpp"

namespace corrlift {

/// Sylvester matrix of coefficient vectors a (length L1+1) and b (length
/// L2+1): the first L1 columns are down-shifts of b, the last L2 columns
/// down-shifts of a.
ComplexMatrix sylvester_build(const Signal& a, const Signal& b);

/// Sylvester matrix of a = -(x1, 0), b = (x2, 0). Its kernel holds the pairs
/// with equal cross-convolutions x2 * y1 = x1 * y2.
ComplexMatrix sylvester_build_padded(const Signal& x1, const Signal& x2);

/// N - rank(S) for the padded pair; 1 + deg gcd(X1, X2).
std::size_t gcd_degree(const Signal& x1, const Signal& x2, double tol = 1e-8);

/// W = S^* S.
HermitianMatrix dual_certificate(const Signal& x1, const Signal& x2);

struct LambdaDecomposition {
  std::vector<cplx> lambda;  // (lam11, lam22, lam12, lam21), length 4N-4
  double max_deviation = 0.0;  // max |adjoint(lambda) - W| / max |W|
};

/// Coefficients lambda with adjoint(lambda) = S^* S, built from the
/// correlations of the pair. Throws NumericalError if the reconstruction
/// deviates by more than 1e-10 relative.
LambdaDecomposition lambda_decomposition(const Signal& x1, const Signal& x2);

struct TangentRank {
  std::size_t rank = 0;
  bool injective = false;
};

/// Real rank of h -> A(x h^* + h x^*) on C^N; injective iff rank is 2N-1
/// (h = i c x always lies in the kernel).
TangentRank tangent_injectivity(const Signal& x1, const Signal& x2, double tol = 1e-8);

/// The real 2(4N-4) x 2N matrix of the tangent map, stored with zero
/// imaginary parts.
ComplexMatrix tangent_matrix(const Signal& x1, const Signal& x2);

struct CertificateReport {
  double null_residual = 0.0;  // ||W x|| / (||W||_F ||x||)
  double min_eig = 0.0;        // smallest eigenvalue of W divided by ||W||_F
  std::size_t rank = 0;
  std::size_t dim = 0;
  bool in_range = false;
  double lambda_deviation = 0.0;
  std::size_t tangent_rank = 0;
  bool injective = false;
  std::vector<cplx> lambda;
};

/// Runs every certificate check for the pair. Failures are reported in the
/// fields rather than thrown.
CertificateReport certify(const Signal& x1, const Signal& x2, double rank_tol = 1e-8);

}  // namespace corrlift
