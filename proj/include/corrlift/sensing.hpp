#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "corrlift/linalg.hpp"
#include "corrlift/poly.hpp"

namespace corrlift {

/// N x N down-shift: ones on the first subdiagonal.
ComplexMatrix downshift(std::size_t n);
/// N x L embedding: identity block stacked on a zero block.
ComplexMatrix embedding(std::size_t n, std::size_t l);
/// The lj x li rectangular shift T^{(k)} with tr(T^{(k)} x_i x_j^*) equal to
/// correlate(x_i, x_j)[k]; k in [0, li + lj - 2].
ComplexMatrix rect_shift(std::size_t lj, std::size_t li, std::size_t k);

/// Which correlation a sensing matrix measures.
enum class Block { k11, k22, k12, k21 };

struct SensingMatrix {
  Block block;
  std::size_t k;
  ComplexMatrix a;
};

/// The lifted correlation measurement apparatus for signal lengths (l1, l2).
/// In reduced mode the a21 family is omitted (3N-3 measurements).
class SensingSet {
 public:
  SensingSet(std::size_t l1, std::size_t l2, bool reduced = false);

  std::size_t l1() const noexcept { return l1_; }
  std::size_t l2() const noexcept { return l2_; }
  std::size_t n() const noexcept { return l1_ + l2_; }
  bool reduced() const noexcept { return reduced_; }
  std::size_t count() const noexcept { return matrices_.size(); }
  const std::vector<SensingMatrix>& matrices() const noexcept { return matrices_; }

 private:
  std::size_t l1_;
  std::size_t l2_;
  bool reduced_;
  std::vector<SensingMatrix> matrices_;
};

SensingSet build_sensing(std::size_t l1, std::size_t l2, bool reduced = false);

/// Correlation measurements. a21 is empty in reduced mode.
struct Measurements {
  std::vector<cplx> a11;
  std::vector<cplx> a22;
  std::vector<cplx> a12;
  std::vector<cplx> a21;

  bool reduced() const noexcept { return a21.empty(); }
  /// (a11, a22, a12, a21) concatenated.
  std::vector<cplx> stacked() const;
  static Measurements from_stacked(std::size_t l1, std::size_t l2, const std::vector<cplx>& b, bool reduced);
  double norm() const { return norm2(stacked()); }
};

/// Stacked vector x = (x1; x2) and the lifted rank-one matrix x x^*.
std::vector<cplx> stack(const Signal& x1, const Signal& x2);
HermitianMatrix lift(const Signal& x1, const Signal& x2);

/// tr(A_m X) for every sensing matrix, computed on the bands of X.
Measurements forward(const SensingSet& s, const HermitianMatrix& x);
/// Same map through dense trace products; reference for testing.
Measurements forward_dense(const SensingSet& s, const HermitianMatrix& x);

/// sum_m lam_m A_m + conj(lam_m) A_m^*, so that
/// tr(adjoint(lam) X) = 2 Re sum_m lam_m forward(X)_m for Hermitian X.
HermitianMatrix adjoint(const SensingSet& s, const std::vector<cplx>& lam);

struct HermitianPair {
  HermitianMatrix re;  // (A + A^*) / 2
  HermitianMatrix im;  // (A - A^*) / (2i)
};
std::vector<HermitianPair> hermitian_split(const SensingSet& s);

/// Direct correlations of the two signals.
Measurements measure(const Signal& x1, const Signal& x2, bool reduced = false);

struct NoiseModel {
  double sigma = 0.0;  // per complex component standard deviation
  std::uint64_t seed = 0;
};

/// Circular complex Gaussian noise on a11, a22, a12; a21 receives the
/// conjugate time reversal of the a12 noise.
Measurements add_noise(const Measurements& m, double sigma, std::mt19937_64& rng);
Measurements add_noise(const Measurements& m, const NoiseModel& model);

/// Number of measurement components that carry noise.
std::size_t noise_bearing_count(const Measurements& m);
/// ||y||^2 / (M_b sigma^2); +infinity for sigma == 0.
double rsnr(const Measurements& y, const NoiseModel& model);

}  // namespace corrlift
