#include "corrlift/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrlift/sensing.hpp"

namespace corrlift {

namespace {

constexpr double kLambdaTol = 1e-10;

void require_full_degree(const Signal& x1, const Signal& x2, const char* who) {
  if (!x1.full_degree() || !x2.full_degree())
    throw std::invalid_argument(std::string(who) + ": signals need nonzero first and last coefficients");
}

cplx at_or_zero(const std::vector<cplx>& v, std::ptrdiff_t i) {
  return (i < 0 || i >= static_cast<std::ptrdiff_t>(v.size())) ? cplx{} : v[static_cast<std::size_t>(i)];
}

}  // namespace

ComplexMatrix sylvester_build(const Signal& a, const Signal& b) {
  const std::size_t l1 = a.size() - 1;
  const std::size_t l2 = b.size() - 1;
  const std::size_t n = l1 + l2;
  ComplexMatrix s(n, n);
  for (std::size_t j = 0; j < l1; ++j)
    for (std::size_t k = 0; k <= l2; ++k) s(j + k, j) = b[k];
  for (std::size_t j = 0; j < l2; ++j)
    for (std::size_t k = 0; k <= l1; ++k) s(j + k, l1 + j) = a[k];
  return s;
}

ComplexMatrix sylvester_build_padded(const Signal& x1, const Signal& x2) {
  require_full_degree(x1, x2, "sylvester_build_padded");
  const Signal a = x1.resized(x1.size() + 1).scaled(-1.0);
  const Signal b = x2.resized(x2.size() + 1);
  return sylvester_build(a, b);
}

std::size_t gcd_degree(const Signal& x1, const Signal& x2, double tol) {
  const ComplexMatrix s = sylvester_build_padded(x1, x2);
  return s.rows() - numeric_rank(s, tol);
}

HermitianMatrix dual_certificate(const Signal& x1, const Signal& x2) {
  const ComplexMatrix s = sylvester_build_padded(x1, x2);
  return HermitianMatrix(s.adjoint() * s);
}

LambdaDecomposition lambda_decomposition(const Signal& x1, const Signal& x2) {
  require_full_degree(x1, x2, "lambda_decomposition");
  const std::ptrdiff_t l1 = static_cast<std::ptrdiff_t>(x1.size());
  const std::ptrdiff_t l2 = static_cast<std::ptrdiff_t>(x2.size());
  const std::ptrdiff_t top = l1 + l2 - 2;
  const Measurements a = measure(x1, x2);

  // Diagonal blocks: windowed (or zero-padded) reversed autocorrelation of the
  // other signal; covers L1 <= L2 and L1 > L2 alike.
  std::vector<cplx> lam;
  for (std::ptrdiff_t k = 0; k < 2 * l1 - 1; ++k) lam.push_back(0.5 * at_or_zero(a.a22, top - k));
  for (std::ptrdiff_t k = 0; k < 2 * l2 - 1; ++k) lam.push_back(0.5 * at_or_zero(a.a11, top - k));
  for (std::ptrdiff_t k = 0; k <= top; ++k) lam.push_back(-0.5 * a.a21[static_cast<std::size_t>(top - k)]);
  for (std::ptrdiff_t k = 0; k <= top; ++k) lam.push_back(-0.5 * a.a12[static_cast<std::size_t>(top - k)]);

  const HermitianMatrix w = dual_certificate(x1, x2);
  const HermitianMatrix rebuilt = adjoint(build_sensing(x1.size(), x2.size()), lam);
  const double scale = w.matrix().max_abs();
  const double dev = (rebuilt.matrix() - w.matrix()).max_abs() / (scale > 0.0 ? scale : 1.0);
  if (dev > kLambdaTol) throw NumericalError("lambda_decomposition: adjoint(lambda) does not reproduce S^*S", dev);
  return {std::move(lam), dev};
}

ComplexMatrix tangent_matrix(const Signal& x1, const Signal& x2) {
  const std::vector<cplx> x = stack(x1, x2);
  const std::size_t n = x.size();
  const SensingSet s = build_sensing(x1.size(), x2.size());
  const std::size_t m = s.count();
  ComplexMatrix t(2 * m, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t part = 0; part < 2; ++part) {
      const cplx u = part == 0 ? cplx(1.0) : cplx(0.0, 1.0);
      ComplexMatrix h(n, n);
      for (std::size_t r = 0; r < n; ++r) {
        h(r, j) += x[r] * std::conj(u);
        h(j, r) += u * std::conj(x[r]);
      }
      const std::vector<cplx> b = forward(s, HermitianMatrix(h)).stacked();
      for (std::size_t i = 0; i < m; ++i) {
        t(i, 2 * j + part) = b[i].real();
        t(m + i, 2 * j + part) = b[i].imag();
      }
    }
  }
  return t;
}

TangentRank tangent_injectivity(const Signal& x1, const Signal& x2, double tol) {
  require_full_degree(x1, x2, "tangent_injectivity");
  const std::size_t rank = numeric_rank(tangent_matrix(x1, x2), tol);
  const std::size_t n = x1.size() + x2.size();
  return {rank, rank == 2 * n - 1};
}

CertificateReport certify(const Signal& x1, const Signal& x2, double rank_tol) {
  CertificateReport rep;
  const HermitianMatrix w = dual_certificate(x1, x2);
  const std::vector<cplx> x = stack(x1, x2);
  const double wn = w.frobenius_norm();
  rep.dim = x.size();
  rep.null_residual = norm2(w.matrix().apply(x)) / (wn * norm2(x));
  rep.min_eig = herm_eig(w).values.front() / wn;
  rep.rank = numeric_rank(w.matrix(), rank_tol);
  try {
    LambdaDecomposition ld = lambda_decomposition(x1, x2);
    rep.in_range = true;
    rep.lambda_deviation = ld.max_deviation;
    rep.lambda = std::move(ld.lambda);
  } catch (const NumericalError& e) {
    rep.in_range = false;
    rep.lambda_deviation = e.residual();
  }
  const TangentRank tr = tangent_injectivity(x1, x2, rank_tol);
  rep.tangent_rank = tr.rank;
  rep.injective = tr.injective;
  return rep;
}

}  // namespace corrlift
