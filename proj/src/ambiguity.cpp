#include "corrlift/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace corrlift {

namespace {

constexpr double kReconvolutionTol = 1e-7;

// Advances a mixed-radix counter (digit i in [0, limit[i]]), last digit
// fastest; returns false after the final state.
bool next_assignment(std::vector<std::size_t>& digits, const std::vector<std::size_t>& limit) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < limit[i]) {
      ++digits[i];
      return true;
    }
    digits[i] = 0;
  }
  return false;
}

double relative_gap(const Signal& a, const Signal& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

double min_separation(const std::vector<RootCluster>& clusters) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (std::size_t j = i + 1; j < clusters.size(); ++j)
      best = std::min(best, std::abs(clusters[i].center - clusters[j].center));
  return best;
}

double max_modulus(const std::vector<RootCluster>& clusters) {
  double m = 0.0;
  for (const auto& c : clusters) m = std::max(m, std::abs(c.center));
  return m;
}

}  // namespace

Signal canonical_phase(const Signal& x) {
  if (x.is_zero()) return x;
  const cplx lead = x[x.first_nonzero()];
  return x.scaled(std::conj(lead) / std::abs(lead));
}

ConvolutionAmbiguities enumerate_convolution_ambiguities(const Signal& x1, const Signal& x2, double cluster_tol) {
  if (!x1.full_degree() || !x2.full_degree())
    throw std::invalid_argument("enumerate_convolution_ambiguities: signals need nonzero first and last coefficients");
  const std::size_t l1 = x1.size();
  const std::size_t l2 = x2.size();
  const std::size_t d = l1 + l2 - 2;
  if (d > kMaxAmbiguityZeros)
    throw std::invalid_argument("enumerate_convolution_ambiguities: " + std::to_string(d) +
                                " zeros exceed the enumeration limit of " + std::to_string(kMaxAmbiguityZeros));

  const Signal y = convolve(x1, x2);
  const RootSet rs = roots(y);
  ConvolutionAmbiguities out;
  out.clusters = cluster_roots(rs.zeros, cluster_tol);
  const double thresh = cluster_tol * max_modulus(out.clusters);
  out.unstable_clustering = min_separation(out.clusters) <= 10.0 * thresh;

  const std::size_t lo = d + 1 > l2 ? d + 1 - l2 : 0;
  const std::size_t hi = l1 - 1;
  std::vector<std::size_t> limit;
  for (const auto& c : out.clusters) limit.push_back(c.multiplicity);
  std::vector<std::size_t> digits(limit.size(), 0);
  do {
    std::size_t left = 0;
    for (auto v : digits) left += v;
    if (left < lo || left > hi) continue;
    RootSet r1{rs.unit, {}, 0, 0};
    RootSet r2{1.0, {}, 0, 0};
    for (std::size_t i = 0; i < digits.size(); ++i) {
      r1.zeros.insert(r1.zeros.end(), digits[i], out.clusters[i].center);
      r2.zeros.insert(r2.zeros.end(), limit[i] - digits[i], out.clusters[i].center);
    }
    AmbiguityClass cls{from_roots(r1).resized(l1), from_roots(r2).resized(l2), digits};
    const double gap = relative_gap(convolve(cls.x1_rep, cls.x2_rep), y);
    if (gap > kReconvolutionTol)
      throw NumericalError("enumerate_convolution_ambiguities: representative does not reconvolve", gap);
    out.classes.push_back(std::move(cls));
  } while (next_assignment(digits, limit));
  return out;
}

AmbiguityBounds count_bounds(const Signal& x1, const Signal& x2) {
  const std::uint64_t d1 = x1.last_nonzero() - x1.first_nonzero();
  const std::uint64_t d2 = x2.last_nonzero() - x2.first_nonzero();
  const std::uint64_t d = d1 + d2;
  if (d >= 64) throw std::invalid_argument("count_bounds: degree too large for the upper bound");
  const std::uint64_t lower = std::min<std::uint64_t>({d + 1, x1.size(), x2.size()});
  return {lower, std::uint64_t{1} << d};
}

AutocorrAmbiguities enumerate_autocorr_ambiguities(const Signal& x, double cluster_tol) {
  if (!x.full_degree())
    throw std::invalid_argument("enumerate_autocorr_ambiguities: signal needs nonzero first and last coefficients");
  const std::size_t n = x.size();
  if (n - 1 > kMaxAutocorrDegree)
    throw std::invalid_argument("enumerate_autocorr_ambiguities: degree " + std::to_string(n - 1) +
                                " exceeds the enumeration limit of " + std::to_string(kMaxAutocorrDegree));

  const Signal a = correlate(x, x);
  AutocorrAmbiguities out;
  if (n == 1) {
    out.signals.push_back(canonical_phase(x));
    return out;
  }
  const std::vector<RootCluster> clusters = cluster_roots(roots(a).zeros, cluster_tol);
  const double thresh = cluster_tol * std::max(1.0, max_modulus(clusters));

  std::vector<cplx> fixed;
  std::vector<RootCluster> inside;
  for (const auto& c : clusters) {
    const double mod = std::abs(c.center);
    if (std::abs(mod - 1.0) <= thresh) {
      if (c.multiplicity % 2 != 0) out.odd_unit_circle = true;
      fixed.insert(fixed.end(), c.multiplicity / 2, c.center);
    } else if (mod < 1.0) {
      inside.push_back(c);
    }
  }

  const double target = std::sqrt(std::max(a[n - 1].real(), 0.0));
  std::vector<std::size_t> limit;
  for (const auto& c : inside) limit.push_back(c.multiplicity);
  std::vector<std::size_t> digits(limit.size(), 0);
  do {
    RootSet rs{1.0, fixed, 0, 0};
    for (std::size_t i = 0; i < inside.size(); ++i) {
      const cplx z = inside[i].center;
      rs.zeros.insert(rs.zeros.end(), limit[i] - digits[i], z);
      rs.zeros.insert(rs.zeros.end(), digits[i], 1.0 / std::conj(z));
    }
    if (rs.zeros.size() != n - 1)
      throw NumericalError("enumerate_autocorr_ambiguities: zeros do not pair into conjugate-inverse couples",
                           static_cast<double>(rs.zeros.size()));
    Signal cand = from_roots(rs);
    cand = canonical_phase(cand.scaled(target / cand.norm()));
    const double gap = relative_gap(correlate(cand, cand), a);
    if (gap > kReconvolutionTol)
      throw NumericalError("enumerate_autocorr_ambiguities: candidate autocorrelation mismatch", gap);
    out.signals.push_back(std::move(cand));
  } while (next_assignment(digits, limit));
  return out;
}

bool are_equivalent(const std::pair<Signal, Signal>& p, const std::pair<Signal, Signal>& q, double tol) {
  if (p.first.size() != q.first.size() || p.second.size() != q.second.size()) return false;
  std::size_t idx = 0;
  for (std::size_t k = 1; k < p.first.size(); ++k)
    if (std::abs(p.first[k]) > std::abs(p.first[idx])) idx = k;
  if (p.first[idx] == cplx{}) return false;
  const cplx lam = q.first[idx] / p.first[idx];
  if (lam == cplx{}) return false;
  return relative_gap(q.first, p.first.scaled(lam)) <= tol && relative_gap(q.second, p.second.scaled(1.0 / lam)) <= tol;
}

}  // namespace corrlift
