#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corrlift/sensing.hpp"
#include "test_support.hpp"

using namespace corrlift;
using corrlift::testing::random_full_signal;
using corrlift::testing::random_hermitian;
using corrlift::testing::random_vector;
using corrlift::testing::rel_diff;

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& a, std::size_t p) {
  ComplexMatrix out = ComplexMatrix::identity(a.rows());
  for (std::size_t i = 0; i < p; ++i) out = out * a;
  return out;
}

cplx trace(const ComplexMatrix& a) {
  cplx t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// (T^{(k)})^T = Pi_{N,li}^T T_N^{k-lj+1} Pi_{N,lj}, with T^{-l} = (T^l)^T.
ComplexMatrix rect_shift_reference(std::size_t lj, std::size_t li, std::size_t k) {
  const std::size_t n = li + lj;
  const long p = static_cast<long>(k) - static_cast<long>(lj) + 1;
  const ComplexMatrix t = downshift(n);
  const ComplexMatrix tp = p >= 0 ? matrix_power(t, static_cast<std::size_t>(p))
                                  : matrix_power(t, static_cast<std::size_t>(-p)).transpose();
  return (embedding(n, li).transpose() * tp * embedding(n, lj)).transpose();
}

}  // namespace

TEST(Downshift, Examples) {
  EXPECT_EQ(downshift(2), ComplexMatrix(2, 2, {0, 0, 1, 0}));
  const auto e1 = downshift(4).apply({1, 0, 0, 0});
  EXPECT_EQ(e1, (std::vector<cplx>{0, 1, 0, 0}));
  EXPECT_EQ(matrix_power(downshift(4), 4), ComplexMatrix(4, 4));
  EXPECT_THROW(downshift(0), std::invalid_argument);
}

TEST(Embedding, Examples) {
  EXPECT_EQ(embedding(3, 2), ComplexMatrix(3, 2, {1, 0, 0, 1, 0, 0}));
  const ComplexMatrix p = embedding(5, 3);
  EXPECT_EQ(p.transpose() * p, ComplexMatrix::identity(3));
  EXPECT_EQ(p.apply({1, 2, 3}), (std::vector<cplx>{1, 2, 3, 0, 0}));
  EXPECT_THROW(embedding(2, 3), std::invalid_argument);
}

TEST(RectShift, MatchesShiftEmbeddingProduct) {
  for (std::size_t lj = 1; lj <= 5; ++lj)
    for (std::size_t li = 1; li <= 5; ++li)
      for (std::size_t k = 0; k + 1 < li + lj; ++k) EXPECT_EQ(rect_shift(lj, li, k), rect_shift_reference(lj, li, k));
}

TEST(RectShift, TraceGivesCorrelation) {
  std::mt19937_64 rng(1);
  for (std::size_t li = 1; li <= 4; ++li) {
    for (std::size_t lj = 1; lj <= 4; ++lj) {
      const Signal xi = random_full_signal(li, rng), xj = random_full_signal(lj, rng);
      const Signal a = correlate(xi, xj);
      // x_i x_j^* is li x lj.
      ComplexMatrix outer(li, lj);
      for (std::size_t r = 0; r < li; ++r)
        for (std::size_t c = 0; c < lj; ++c) outer(r, c) = xi[r] * std::conj(xj[c]);
      for (std::size_t k = 0; k + 1 < li + lj; ++k)
        EXPECT_NEAR(std::abs(trace(rect_shift(lj, li, k) * outer) - a[k]), 0.0, 1e-13);
    }
  }
}

TEST(RectShift, SmallCasesAndBandMass) {
  EXPECT_EQ(rect_shift(1, 1, 0), ComplexMatrix::identity(1));
  for (std::size_t lj = 1; lj <= 4; ++lj) {
    for (std::size_t li = 1; li <= 4; ++li) {
      double mass = 0;
      for (std::size_t k = 0; k + 1 < li + lj; ++k) {
        const ComplexMatrix t = rect_shift(lj, li, k);
        for (const auto& z : t.entries()) mass += z.real();
      }
      EXPECT_EQ(mass, static_cast<double>(li * lj));
    }
  }
  EXPECT_THROW(rect_shift(2, 2, 3), std::invalid_argument);
}

TEST(BuildSensing, Counts) {
  for (std::size_t l1 = 1; l1 <= 8; ++l1) {
    for (std::size_t l2 = 1; l2 <= 8; ++l2) {
      const std::size_t n = l1 + l2;
      EXPECT_EQ(build_sensing(l1, l2).count(), 4 * n - 4);
      EXPECT_EQ(build_sensing(l1, l2, true).count(), 3 * n - 3);
    }
  }
  EXPECT_EQ(build_sensing(2, 2).count(), 12u);
  EXPECT_THROW(build_sensing(0, 2), std::invalid_argument);
}

TEST(BuildSensing, BlockPlacement) {
  const std::size_t l1 = 2, l2 = 3;
  const SensingSet s(l1, l2);
  for (const auto& sm : s.matrices()) {
    for (std::size_t r = 0; r < s.n(); ++r) {
      for (std::size_t c = 0; c < s.n(); ++c) {
        if (sm.a(r, c) == cplx{}) continue;
        const bool top = r < l1, left = c < l1;
        switch (sm.block) {
          case Block::k11: EXPECT_TRUE(top && left); break;
          case Block::k22: EXPECT_TRUE(!top && !left); break;
          case Block::k12: EXPECT_TRUE(!top && left); break;
          case Block::k21: EXPECT_TRUE(top && !left); break;
        }
      }
    }
  }
}

TEST(BuildSensing, OffDiagonalTransposeRelation) {
  for (std::size_t l1 = 1; l1 <= 4; ++l1) {
    for (std::size_t l2 = 1; l2 <= 4; ++l2) {
      const SensingSet s(l1, l2);
      const std::size_t n = l1 + l2;
      std::vector<const ComplexMatrix*> a12, a21;
      for (const auto& sm : s.matrices()) {
        if (sm.block == Block::k12) a12.push_back(&sm.a);
        if (sm.block == Block::k21) a21.push_back(&sm.a);
      }
      ASSERT_EQ(a12.size(), n - 1);
      for (std::size_t k = 0; k + 1 < n; ++k) EXPECT_EQ(a21[k]->transpose(), *a12[n - 2 - k]);
    }
  }
}

TEST(Forward, LiftGivesCorrelations) {
  std::mt19937_64 rng(2);
  for (std::size_t l1 = 1; l1 <= 4; ++l1) {
    for (std::size_t l2 = 1; l2 <= 4; ++l2) {
      const Signal x1 = random_full_signal(l1, rng), x2 = random_full_signal(l2, rng);
      const SensingSet s(l1, l2);
      const Measurements f = forward(s, lift(x1, x2));
      EXPECT_LE(rel_diff(f.a11, correlate(x1, x1).coeffs()), 1e-14);
      EXPECT_LE(rel_diff(f.a22, correlate(x2, x2).coeffs()), 1e-14);
      EXPECT_LE(rel_diff(f.a12, correlate(x1, x2).coeffs()), 1e-14);
      EXPECT_LE(rel_diff(f.a21, correlate(x2, x1).coeffs()), 1e-14);
      EXPECT_LE(rel_diff(f.stacked(), measure(x1, x2).stacked()), 1e-12);
    }
  }
}

TEST(Forward, MatchesDenseTraceAndIsLinear) {
  std::mt19937_64 rng(3);
  for (bool reduced : {false, true}) {
    const SensingSet s(3, 4, reduced);
    for (int t = 0; t < 10; ++t) {
      const HermitianMatrix x = random_hermitian(7, rng), y = random_hermitian(7, rng);
      EXPECT_LE(rel_diff(forward(s, x).stacked(), forward_dense(s, x).stacked()), 1e-13);
      std::vector<cplx> sum = forward(s, x).stacked();
      const std::vector<cplx> fy = forward(s, y).stacked();
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += fy[i];
      EXPECT_LE(rel_diff(forward(s, x + y).stacked(), sum), 1e-13);
    }
    EXPECT_EQ(norm2(forward(s, HermitianMatrix(7)).stacked()), 0.0);
  }
  EXPECT_THROW(forward(SensingSet(2, 2), HermitianMatrix(3)), std::invalid_argument);
}

TEST(Adjoint, OneHotAndZero) {
  const SensingSet s(2, 3);
  for (std::size_t m = 0; m < s.count(); ++m) {
    std::vector<cplx> lam(s.count());
    lam[m] = 1.0;
    const ComplexMatrix& a = s.matrices()[m].a;
    EXPECT_EQ(adjoint(s, lam).matrix(), a + a.adjoint());
  }
  EXPECT_EQ(adjoint(s, std::vector<cplx>(s.count())).frobenius_norm(), 0.0);
  EXPECT_THROW(adjoint(s, std::vector<cplx>(3)), std::invalid_argument);
}

TEST(Adjoint, PairingIdentity) {
  std::mt19937_64 rng(4);
  for (bool reduced : {false, true}) {
    const SensingSet s(3, 2, reduced);
    for (int t = 0; t < 20; ++t) {
      const HermitianMatrix x = random_hermitian(5, rng);
      const std::vector<cplx> lam = random_vector(s.count(), rng);
      const std::vector<cplx> b = forward(s, x).stacked();
      cplx pair = 0;
      for (std::size_t m = 0; m < b.size(); ++m) pair += lam[m] * b[m];
      const double lhs = frobenius_inner(adjoint(s, lam), x);
      EXPECT_NEAR(lhs, 2.0 * pair.real(), 1e-12 * (1 + std::abs(lhs)));
    }
  }
}

TEST(HermitianSplit, ComponentsMatchForward) {
  std::mt19937_64 rng(5);
  const SensingSet s(2, 3);
  const auto split = hermitian_split(s);
  ASSERT_EQ(split.size(), s.count());
  const Signal x1 = random_full_signal(2, rng), x2 = random_full_signal(3, rng);
  const HermitianMatrix x = lift(x1, x2);
  const std::vector<cplx> b = forward(s, x).stacked();
  for (std::size_t m = 0; m < b.size(); ++m) {
    EXPECT_NEAR(frobenius_inner(split[m].re, x), b[m].real(), 1e-13);
    EXPECT_NEAR(frobenius_inner(split[m].im, x), b[m].imag(), 1e-13);
    const ComplexMatrix& a = s.matrices()[m].a;
    if (a == a.adjoint()) EXPECT_EQ(split[m].im.frobenius_norm(), 0.0);
  }
}

TEST(Measure, HandExample) {
  const Measurements m = measure({1, 1}, {1, -1});
  EXPECT_EQ(m.a11, (std::vector<cplx>{1, 2, 1}));
  EXPECT_EQ(m.a22, (std::vector<cplx>{-1, 2, -1}));
  EXPECT_EQ(m.a12, (std::vector<cplx>{-1, 0, 1}));
  EXPECT_EQ(Signal(m.a21), conj_time_reverse(Signal(m.a12)));
}

TEST(Measure, ReducedModeDropsCrossReverse) {
  std::mt19937_64 rng(6);
  const Signal x1 = random_full_signal(3, rng), x2 = random_full_signal(2, rng);
  const Measurements m = measure(x1, x2, true);
  EXPECT_TRUE(m.reduced());
  EXPECT_EQ(m.stacked().size(), 3u * 5 - 3);
  EXPECT_LE(rel_diff(forward(SensingSet(3, 2, true), lift(x1, x2)).stacked(), m.stacked()), 1e-13);
  const Measurements back = Measurements::from_stacked(3, 2, m.stacked(), true);
  EXPECT_EQ(back.stacked(), m.stacked());
  EXPECT_THROW(Measurements::from_stacked(3, 2, m.stacked(), false), std::invalid_argument);
}

TEST(AddNoise, ZeroSigmaIsIdentity) {
  const Measurements m = measure({1, 2}, {3, cplx(0, 1)});
  std::mt19937_64 rng(7);
  EXPECT_EQ(add_noise(m, 0.0, rng).stacked(), m.stacked());
  EXPECT_THROW(add_noise(m, -1.0, rng), std::invalid_argument);
  EXPECT_THROW(add_noise(m, NAN, rng), std::invalid_argument);
}

TEST(AddNoise, CrossSymmetryPreserved) {
  std::mt19937_64 rng(8);
  const Measurements m = measure(random_full_signal(3, rng), random_full_signal(4, rng));
  const Measurements y = add_noise(m, {0.3, 99});
  EXPECT_EQ(Signal(y.a21), conj_time_reverse(Signal(y.a12)));
  EXPECT_EQ(y.stacked(), add_noise(m, {0.3, 99}).stacked());
}

TEST(AddNoise, EmpiricalVariance) {
  const Measurements zero = Measurements::from_stacked(3, 3, std::vector<cplx>(20), false);
  std::mt19937_64 rng(9);
  const double sigma = 0.7;
  double re = 0, im = 0, total = 0;
  std::size_t count = 0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    const Measurements y = add_noise(zero, sigma, rng);
    for (const auto& z : y.a11) re += z.real() * z.real(), im += z.imag() * z.imag(), ++count;
    const double ny = y.norm();
    total += ny * ny;
  }
  EXPECT_NEAR(re / count, sigma * sigma / 2, 0.05 * sigma * sigma / 2);
  EXPECT_NEAR(im / count, sigma * sigma / 2, 0.05 * sigma * sigma / 2);
  EXPECT_NEAR(total / draws / (noise_bearing_count(zero) * sigma * sigma), 1.0, 0.05);
}

TEST(Rsnr, Formula) {
  std::mt19937_64 rng(10);
  const Measurements y = measure(random_full_signal(2, rng), random_full_signal(3, rng));
  EXPECT_EQ(noise_bearing_count(y), 4u * 5 - 4);
  const double r1 = rsnr(y, {0.1, 0});
  EXPECT_NEAR(rsnr(y, {0.2, 0}), r1 / 4, 1e-12 * r1);
  Measurements y2 = y;
  for (auto* seg : {&y2.a11, &y2.a22, &y2.a12, &y2.a21})
    for (auto& z : *seg) z *= 2.0;
  EXPECT_NEAR(rsnr(y2, {0.1, 0}), 4 * r1, 1e-12 * r1);
  EXPECT_TRUE(std::isinf(rsnr(y, {0.0, 0})));
  const double ny = y.norm();
  EXPECT_NEAR(r1, ny * ny / (16 * 0.01), 1e-12 * r1);
}
