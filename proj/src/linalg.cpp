#include "corrlift/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace corrlift {

namespace {

constexpr double kJacobiOffTol = 1e-14;
constexpr std::size_t kJacobiMaxSweeps = 100;

// Parameters of the unitary U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] that
// annihilates the (p, q) entry of a Hermitian 2x2 block [[app, b], [b*, aqq]].
struct Rotation {
  double c;
  double s;
  cplx phase;  // e^{-i phi}
};

Rotation jacobi_rotation(double app, double aqq, cplx b) {
  const double mag = std::abs(b);
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  return {c, t * c, std::conj(b) / mag};
}

// M <- M U on columns p, q.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const cplx mp = m(k, p);
    const cplx mq = m(k, q);
    m(k, p) = r.c * mp - r.s * r.phase * mq;
    m(k, q) = r.s * mp + r.c * r.phase * mq;
  }
}

// M <- U* M on rows p, q.
void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const cplx ph = std::conj(r.phase);
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const cplx mp = m(p, k);
    const cplx mq = m(q, k);
    m(p, k) = r.c * mp - r.s * ph * mq;
    m(q, k) = r.s * mp + r.c * ph * mq;
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) acc += std::norm(a(r, c));
  return std::sqrt(acc);
}

bool lex_less(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("ComplexMatrix: entry count mismatch");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

std::vector<cplx> ComplexMatrix::column(std::size_t c) const {
  std::vector<cplx> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("ComplexMatrix::apply: dimension mismatch");
  std::vector<cplx> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& z : data_) acc += std::norm(z);
  return std::sqrt(acc);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("ComplexMatrix +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("ComplexMatrix -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("ComplexMatrix *: shape mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx ark = a(r, k);
      if (ark == cplx{}) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) : m_(a.rows(), a.cols()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r) {
    m_(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const cplx v = 0.5 * (a(r, c) + std::conj(a(c, r)));
      m_(r, c) = v;
      m_(c, r) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::outer(const std::vector<cplx>& x) {
  HermitianMatrix h(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) {
    h.m_(r, r) = std::norm(x[r]);
    for (std::size_t c = r + 1; c < x.size(); ++c) {
      h.m_(r, c) = x[r] * std::conj(x[c]);
      h.m_(c, r) = std::conj(h.m_(r, c));
    }
  }
  return h;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double frobenius_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto& ea = a.matrix().entries();
  const auto& eb = b.matrix().entries();
  if (ea.size() != eb.size()) throw std::invalid_argument("frobenius_inner: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i) acc += (std::conj(ea[i]) * eb[i]).real();
  return acc;
}

HermitianMatrix EigDecomposition::reconstruct() const {
  const std::size_t n = values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = values[k];
    if (lam == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const cplx vr = lam * vectors(r, k);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(vectors(c, k));
    }
  }
  return HermitianMatrix(out);
}

EigDecomposition herm_eig(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = a.frobenius_norm();

  bool converged = scale == 0.0;
  double off = 0.0;
  for (std::size_t sweep = 0; !converged && sweep < kJacobiMaxSweeps; ++sweep) {
    off = off_diagonal_norm(a);
    if (off <= kJacobiOffTol * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) == 0.0) continue;
        const Rotation rot = jacobi_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
        rotate_columns(a, p, q, rot);
        rotate_rows(a, p, q, rot);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, rot);
      }
    }
  }
  if (!converged) {
    off = off_diagonal_norm(a);
    if (off > kJacobiOffTol * scale)
      throw NumericalError("herm_eig: Jacobi sweeps did not converge", off / scale);
  }

  std::vector<std::vector<cplx>> cols(n);
  for (std::size_t k = 0; k < n; ++k) {
    cols[k] = v.column(k);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(cols[k][i]) > std::abs(cols[k][arg])) arg = i;
    if (n > 0 && std::abs(cols[k][arg]) > 0.0) {
      const cplx ph = std::conj(cols[k][arg]) / std::abs(cols[k][arg]);
      for (auto& z : cols[k]) z *= ph;
      cols[k][arg] = std::abs(cols[k][arg]);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double li = a(i, i).real();
    const double lj = a(j, j).real();
    if (li != lj) return li < lj;
    return lex_less(cols[i], cols[j]);
  });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = cols[order[k]][r];
  }
  return out;
}

HermitianMatrix psd_project(const HermitianMatrix& a) {
  EigDecomposition e = herm_eig(a);
  for (auto& lam : e.values) lam = std::max(lam, 0.0);
  return e.reconstruct();
}

EigPair top_eigpair(const HermitianMatrix& a, double tol, std::size_t max_iter) {
  const std::size_t n = a.dim();
  if (n == 0) throw std::invalid_argument("top_eigpair: empty matrix");
  const double scale = a.frobenius_norm();

  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = cplx(1.0 + 0.1 * double(k), 0.05 * double(k % 3));
  double nv = norm2(v);
  for (auto& z : v) z /= nv;
  if (scale == 0.0) return {0.0, v};

  double residual = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::vector<cplx> w = a.matrix().apply(v);
    const double lam = dot(v, w).real();
    double r2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) r2 += std::norm(w[k] - lam * v[k]);
    residual = std::sqrt(r2);
    if (residual <= tol * scale) return {lam, v};
    const double nw = norm2(w);
    if (nw == 0.0) throw NumericalError("top_eigpair: iterate annihilated", residual);
    for (std::size_t k = 0; k < n; ++k) v[k] = w[k] / nw;
  }
  throw NumericalError("top_eigpair: power iteration did not converge", residual / scale);
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  ComplexMatrix u = a;
  const std::size_t n = u.cols();
  const std::size_t m = u.rows();
  auto col_dot = [&](std::size_t p, std::size_t q) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += std::conj(u(k, p)) * u(k, q);
    return acc;
  };
  auto col_norm2 = [&](std::size_t p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += std::norm(u(k, p));
    return acc;
  };

  bool converged = false;
  for (std::size_t sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = col_norm2(p);
        const double beta = col_norm2(q);
        const cplx gamma = col_dot(p, q);
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) == 0.0) continue;
        converged = false;
        rotate_columns(u, p, q, jacobi_rotation(alpha, beta, gamma));
      }
    }
  }
  std::vector<double> sv(n);
  for (std::size_t p = 0; p < n; ++p) sv[p] = std::sqrt(col_norm2(p));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::size_t numeric_rank(const ComplexMatrix& a, double tol) {
  const std::vector<double> sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = tol * sv.front();
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cut; }));
}

double operator_norm(const HermitianMap& apply, std::size_t dim, std::size_t iters) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  ComplexMatrix start(dim, dim);
  for (auto r = 0u; r < dim; ++r)
    for (auto c = 0u; c < dim; ++c) start(r, c) = cplx(g(rng), g(rng));
  HermitianMatrix x(start);
  double nx = x.frobenius_norm();
  if (nx == 0.0) return 0.0;
  x *= 1.0 / nx;
  double estimate = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    HermitianMatrix y = apply(x);
    const double ny = y.frobenius_norm();
    estimate = ny;
    if (ny == 0.0) break;
    x = y * (1.0 / ny);
  }
  return estimate;
}

double norm2(const std::vector<cplx>& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace corrlift
