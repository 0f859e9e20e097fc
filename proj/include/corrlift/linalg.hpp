#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corrlift {

using cplx = std::complex<double>;

/// Raised when an iterative numerical kernel fails to converge.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<cplx>& entries() const noexcept { return data_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  std::vector<cplx> column(std::size_t c) const;
  std::vector<cplx> apply(const std::vector<cplx>& v) const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Square matrix kept on the Hermitian manifold. Construction from a general
/// square matrix symmetrizes it as (A + A*)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim) : m_(dim, dim) {}
  explicit HermitianMatrix(const ComplexMatrix& a);

  static HermitianMatrix zeros(std::size_t dim) { return HermitianMatrix(dim); }
  static HermitianMatrix outer(const std::vector<cplx>& x);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double frobenius_norm() const { return m_.frobenius_norm(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  ComplexMatrix m_;
};

/// Real Frobenius inner product Re tr(A* B); for Hermitian arguments this
/// equals tr(A B).
double frobenius_inner(const HermitianMatrix& a, const HermitianMatrix& b);

struct EigDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i pairs with values[i]

  HermitianMatrix reconstruct() const;
};

/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
/// Eigenvectors are phase-normalized so that their first largest-magnitude
/// entry is real positive.
EigDecomposition herm_eig(const HermitianMatrix& a);

/// Frobenius-nearest positive semidefinite matrix (eigenvalue clipping).
HermitianMatrix psd_project(const HermitianMatrix& a);

struct EigPair {
  double value = 0.0;
  std::vector<cplx> vector;
};

/// Dominant-in-magnitude eigenpair by power iteration.
EigPair top_eigpair(const HermitianMatrix& a, double tol = 1e-10, std::size_t max_iter = 10000);

/// Singular values in descending order, via one-sided (Hestenes) Jacobi.
std::vector<double> singular_values(const ComplexMatrix& a);

/// Number of singular values above tol times the largest one.
std::size_t numeric_rank(const ComplexMatrix& a, double tol = 1e-8);

using HermitianMap = std::function<HermitianMatrix(const HermitianMatrix&)>;

/// Power-iteration estimate of the largest eigenvalue of a self-adjoint PSD
/// real-linear map on dim x dim Hermitian matrices.
double operator_norm(const HermitianMap& apply, std::size_t dim, std::size_t iters = 100);

double norm2(const std::vector<cplx>& v);
cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b);  // sum conj(a_k) b_k

}  // namespace corrlift
