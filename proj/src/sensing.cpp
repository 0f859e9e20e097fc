#include "corrlift/sensing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace corrlift {

namespace {

struct BlockGeometry {
  std::size_t row_offset;
  std::size_t col_offset;
  std::size_t lj;  // rows of the shift block
  std::size_t li;  // columns of the shift block
};

// A_{1,1}: top-left T_{L1,L1}; A_{2,2}: bottom-right T_{L2,L2};
// A_{1,2}: bottom-left T_{L2,L1}; A_{2,1}: top-right T_{L1,L2}.
BlockGeometry geometry(Block b, std::size_t l1, std::size_t l2) {
  switch (b) {
    case Block::k11: return {0, 0, l1, l1};
    case Block::k22: return {l1, l1, l2, l2};
    case Block::k12: return {l1, 0, l2, l1};
    case Block::k21: return {0, l1, l1, l2};
  }
  return {};
}

std::size_t band_length(const BlockGeometry& g) { return g.li + g.lj - 1; }

// sum over the k-th band: tr(A X) = sum_c X(co + c, ro + lj - 1 - k + c).
cplx band_trace(const HermitianMatrix& x, const BlockGeometry& g, std::size_t k) {
  cplx acc = 0.0;
  for (std::size_t c = 0; c < g.li; ++c) {
    const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(g.lj) - 1 - static_cast<std::ptrdiff_t>(k) +
                             static_cast<std::ptrdiff_t>(c);
    if (r < 0 || r >= static_cast<std::ptrdiff_t>(g.lj)) continue;
    acc += x(g.col_offset + c, g.row_offset + static_cast<std::size_t>(r));
  }
  return acc;
}

std::vector<cplx>* segment(Measurements& m, Block b) {
  switch (b) {
    case Block::k11: return &m.a11;
    case Block::k22: return &m.a22;
    case Block::k12: return &m.a12;
    case Block::k21: return &m.a21;
  }
  return nullptr;
}

std::vector<Block> blocks(bool reduced) {
  if (reduced) return {Block::k11, Block::k22, Block::k12};
  return {Block::k11, Block::k22, Block::k12, Block::k21};
}

}  // namespace

ComplexMatrix downshift(std::size_t n) {
  if (n == 0) throw std::invalid_argument("downshift: n must be positive");
  ComplexMatrix t(n, n);
  for (std::size_t r = 1; r < n; ++r) t(r, r - 1) = 1.0;
  return t;
}

ComplexMatrix embedding(std::size_t n, std::size_t l) {
  if (l > n) throw std::invalid_argument("embedding: l exceeds n");
  ComplexMatrix p(n, l);
  for (std::size_t r = 0; r < l; ++r) p(r, r) = 1.0;
  return p;
}

ComplexMatrix rect_shift(std::size_t lj, std::size_t li, std::size_t k) {
  if (li == 0 || lj == 0 || k > li + lj - 2) throw std::invalid_argument("rect_shift: index out of range");
  ComplexMatrix t(lj, li);
  for (std::size_t c = 0; c < li; ++c) {
    const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(lj) - 1 - static_cast<std::ptrdiff_t>(k) +
                             static_cast<std::ptrdiff_t>(c);
    if (r >= 0 && r < static_cast<std::ptrdiff_t>(lj)) t(static_cast<std::size_t>(r), c) = 1.0;
  }
  return t;
}

SensingSet::SensingSet(std::size_t l1, std::size_t l2, bool reduced) : l1_(l1), l2_(l2), reduced_(reduced) {
  if (l1 == 0 || l2 == 0) throw std::invalid_argument("SensingSet: lengths must be positive");
  const std::size_t n = l1 + l2;
  for (Block b : blocks(reduced)) {
    const BlockGeometry g = geometry(b, l1, l2);
    for (std::size_t k = 0; k < band_length(g); ++k) {
      ComplexMatrix a(n, n);
      const ComplexMatrix t = rect_shift(g.lj, g.li, k);
      for (std::size_t r = 0; r < g.lj; ++r)
        for (std::size_t c = 0; c < g.li; ++c) a(g.row_offset + r, g.col_offset + c) = t(r, c);
      matrices_.push_back({b, k, std::move(a)});
    }
  }
}

SensingSet build_sensing(std::size_t l1, std::size_t l2, bool reduced) { return SensingSet(l1, l2, reduced); }

std::vector<cplx> Measurements::stacked() const {
  std::vector<cplx> b;
  b.reserve(a11.size() + a22.size() + a12.size() + a21.size());
  b.insert(b.end(), a11.begin(), a11.end());
  b.insert(b.end(), a22.begin(), a22.end());
  b.insert(b.end(), a12.begin(), a12.end());
  b.insert(b.end(), a21.begin(), a21.end());
  return b;
}

Measurements Measurements::from_stacked(std::size_t l1, std::size_t l2, const std::vector<cplx>& b, bool reduced) {
  const std::size_t n = l1 + l2;
  const std::size_t expected = reduced ? 3 * n - 3 : 4 * n - 4;
  if (b.size() != expected) throw std::invalid_argument("Measurements::from_stacked: length mismatch");
  Measurements m;
  auto it = b.begin();
  auto take = [&](std::size_t len) {
    std::vector<cplx> out(it, it + static_cast<std::ptrdiff_t>(len));
    it += static_cast<std::ptrdiff_t>(len);
    return out;
  };
  m.a11 = take(2 * l1 - 1);
  m.a22 = take(2 * l2 - 1);
  m.a12 = take(n - 1);
  if (!reduced) m.a21 = take(n - 1);
  return m;
}

std::vector<cplx> stack(const Signal& x1, const Signal& x2) {
  std::vector<cplx> x(x1.begin(), x1.end());
  x.insert(x.end(), x2.begin(), x2.end());
  return x;
}

HermitianMatrix lift(const Signal& x1, const Signal& x2) { return HermitianMatrix::outer(stack(x1, x2)); }

Measurements forward(const SensingSet& s, const HermitianMatrix& x) {
  if (x.dim() != s.n()) throw std::invalid_argument("forward: dimension mismatch");
  Measurements m;
  for (Block b : blocks(s.reduced())) {
    const BlockGeometry g = geometry(b, s.l1(), s.l2());
    auto* seg = segment(m, b);
    seg->resize(band_length(g));
    for (std::size_t k = 0; k < seg->size(); ++k) (*seg)[k] = band_trace(x, g, k);
  }
  return m;
}

Measurements forward_dense(const SensingSet& s, const HermitianMatrix& x) {
  if (x.dim() != s.n()) throw std::invalid_argument("forward_dense: dimension mismatch");
  Measurements m;
  for (const auto& sm : s.matrices()) {
    const ComplexMatrix prod = sm.a * x.matrix();
    cplx tr = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) tr += prod(i, i);
    segment(m, sm.block)->push_back(tr);
  }
  return m;
}

HermitianMatrix adjoint(const SensingSet& s, const std::vector<cplx>& lam) {
  if (lam.size() != s.count()) throw std::invalid_argument("adjoint: length mismatch");
  const std::size_t n = s.n();
  ComplexMatrix acc(n, n);
  std::size_t m = 0;
  for (Block b : blocks(s.reduced())) {
    const BlockGeometry g = geometry(b, s.l1(), s.l2());
    for (std::size_t k = 0; k < band_length(g); ++k, ++m) {
      if (lam[m] == cplx{}) continue;
      for (std::size_t c = 0; c < g.li; ++c) {
        const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(g.lj) - 1 - static_cast<std::ptrdiff_t>(k) +
                                 static_cast<std::ptrdiff_t>(c);
        if (r < 0 || r >= static_cast<std::ptrdiff_t>(g.lj)) continue;
        const std::size_t row = g.row_offset + static_cast<std::size_t>(r);
        const std::size_t col = g.col_offset + c;
        acc(row, col) += lam[m];
        acc(col, row) += std::conj(lam[m]);
      }
    }
  }
  // acc = M + M^* exactly; the constructor only re-reads it.
  return HermitianMatrix(acc);
}

std::vector<HermitianPair> hermitian_split(const SensingSet& s) {
  std::vector<HermitianPair> out;
  out.reserve(s.count());
  for (const auto& sm : s.matrices()) {
    const ComplexMatrix ad = sm.a.adjoint();
    out.push_back({HermitianMatrix((sm.a + ad) * cplx(0.5)), HermitianMatrix((sm.a - ad) * cplx(0.0, -0.5))});
  }
  return out;
}

Measurements measure(const Signal& x1, const Signal& x2, bool reduced) {
  Measurements m;
  m.a11 = correlate(x1, x1).coeffs();
  m.a22 = correlate(x2, x2).coeffs();
  m.a12 = correlate(x1, x2).coeffs();
  if (!reduced) m.a21 = correlate(x2, x1).coeffs();
  return m;
}

Measurements add_noise(const Measurements& m, double sigma, std::mt19937_64& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("add_noise: sigma must be finite and >= 0");
  Measurements out = m;
  if (sigma == 0.0) return out;
  std::normal_distribution<double> g(0.0, sigma / std::sqrt(2.0));
  auto perturb = [&](std::vector<cplx>& v) {
    std::vector<cplx> n(v.size());
    for (auto& z : n) z = cplx(g(rng), g(rng));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += n[k];
    return n;
  };
  perturb(out.a11);
  perturb(out.a22);
  const std::vector<cplx> n12 = perturb(out.a12);
  if (!out.a21.empty())
    for (std::size_t k = 0; k < out.a21.size(); ++k) out.a21[k] += std::conj(n12[n12.size() - 1 - k]);
  return out;
}

Measurements add_noise(const Measurements& m, const NoiseModel& model) {
  std::mt19937_64 rng(model.seed);
  return add_noise(m, model.sigma, rng);
}

std::size_t noise_bearing_count(const Measurements& m) {
  return m.a11.size() + m.a22.size() + m.a12.size() + m.a21.size();
}

double rsnr(const Measurements& y, const NoiseModel& model) {
  if (model.sigma == 0.0) return std::numeric_limits<double>::infinity();
  const double ny = y.norm();
  return ny * ny / (static_cast<double>(noise_bearing_count(y)) * model.sigma * model.sigma);
}

}  // namespace corrlift
