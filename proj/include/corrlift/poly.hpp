#pragma once

#include <cstddef>
#include <initializer_list>
#include <random>
#include <vector>

#include "corrlift/linalg.hpp"

namespace corrlift {

/// Finite complex sequence c_0..c_{L-1}; c_k is the coefficient of z^{-k} in
/// the unilateral z-transform, i.e. of w^k with w = z^{-1}.
class Signal {
 public:
  Signal() : c_(1) {}
  Signal(std::initializer_list<cplx> coeffs);
  explicit Signal(std::vector<cplx> coeffs);

  static Signal zeros(std::size_t length) { return Signal(std::vector<cplx>(length)); }

  std::size_t size() const noexcept { return c_.size(); }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  const cplx& operator[](std::size_t k) const { return c_[k]; }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }

  bool is_zero() const noexcept;
  /// Index of the first nonzero coefficient (F). Requires a nonzero signal.
  std::size_t first_nonzero() const;
  /// Index of the last nonzero coefficient (D). Requires a nonzero signal.
  std::size_t last_nonzero() const;
  /// Membership in C^L_{0,0}: first and last coefficient nonzero.
  bool full_degree() const noexcept;
  double norm() const noexcept { return norm2(c_); }

  Signal scaled(cplx s) const;
  /// Zero-pads (or truncates trailing entries) to the given length.
  Signal resized(std::size_t length) const;
  /// Drops trailing zero coefficients, keeping at least one entry.
  Signal trimmed() const;

  friend Signal operator+(const Signal& a, const Signal& b);
  friend Signal operator-(const Signal& a, const Signal& b);
  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<cplx> c_;
};

/// Root-domain representation: x = z^{-F} * unit * prod_k (1 - zeta_k z^{-1}),
/// followed by trailing_zeros vanishing coefficients. unit is x_F.
struct RootSet {
  cplx unit{1.0};
  std::vector<cplx> zeros;
  std::size_t origin_power = 0;
  std::size_t trailing_zeros = 0;
};

/// A distinct zero location with its multiplicity.
struct RootCluster {
  cplx center;
  std::size_t multiplicity = 1;
};

Signal convolve(const Signal& x1, const Signal& x2);
Signal conj_time_reverse(const Signal& x);
Signal correlate(const Signal& xi, const Signal& xj);
/// Coefficients of X*(z) = z^{1-L} conj(X(1/conj z)) at the signal's own length.
Signal involution(const Signal& x);

/// Zeros of a dense polynomial p(w) = sum_k a_k w^k with a_n != 0, by
/// Aberth-Ehrlich simultaneous iteration.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& a);

RootSet roots(const Signal& x, double tol = 1e-10);
Signal from_roots(const RootSet& r);

/// Merges zeros closer than rel_tol * max|zeta| into clusters, sorted by
/// (Re, Im) of the center.
std::vector<RootCluster> cluster_roots(const std::vector<cplx>& zeros, double rel_tol = 1e-6);

/// Quotient and remainder of polynomial long division in w.
struct Division {
  Signal quotient;
  Signal remainder;
};
Division divide(const Signal& num, const Signal& den);

/// Monic (highest power of z^{-1} has coefficient 1) greatest common divisor
/// via a normalized Euclidean remainder sequence.
Signal poly_gcd(const Signal& x1, const Signal& x2, double tol = 1e-8);

struct SelfReciprocalSplit {
  Signal g;  // greatest self-reciprocal divisor, canonically scaled
  Signal r;  // rest factor: convolve(g, r) == x
};
SelfReciprocalSplit gsd(const Signal& x, double tol = 1e-8);

bool is_self_reciprocal(const Signal& x, double tol = 1e-10);

struct SelfInversive {
  bool value = false;
  double alpha = 0.0;  // in [0, 2 pi): X* = e^{i alpha} X
};
SelfInversive is_self_inversive(const Signal& x, double tol = 1e-10);

/// H = i * R * S for the rest factor R of x; s is padded symmetrically to
/// length deg(G) + 1 so that X H* + X* H = 0.
Signal anti_solution(const Signal& x, const Signal& s, double tol = 1e-8);

Signal random_self_reciprocal(std::size_t degree, std::mt19937_64& rng);

}  // namespace corrlift
