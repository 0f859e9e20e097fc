#include "corrlift/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace corrlift {

namespace {

constexpr double kAberthStep = 1e-13;
constexpr std::size_t kAberthMaxIter = 200;

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Horner evaluation of p and p' at z.
std::pair<cplx, cplx> horner(const std::vector<cplx>& a, cplx z) {
  cplx p = a.back();
  cplx dp = 0.0;
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
  return {p, dp};
}

double backward_error(const std::vector<cplx>& a, cplx z) {
  double scale = 0.0;
  double zk = 1.0;
  for (const auto& c : a) {
    scale += std::abs(c) * zk;
    zk *= std::abs(z);
  }
  return scale == 0.0 ? 0.0 : std::abs(horner(a, z).first) / scale;
}

// Multiple zeros come out of Aberth as a lopsided cluster. Snap each tight
// cluster to a Newton root of the (m-1)-th derivative, where an m-fold zero
// is simple.
std::vector<cplx> polish_clusters(const std::vector<cplx>& a, std::vector<cplx> z) {
  const std::size_t n = z.size();
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> members{i};
    const double thresh = 1e-6 * std::max(1.0, std::abs(z[i]));
    for (std::size_t j = i + 1; j < n; ++j)
      if (!done[j] && std::abs(z[j] - z[i]) <= thresh) members.push_back(j);
    for (auto m : members) done[m] = true;
    const std::size_t m = members.size();
    if (m < 2) continue;
    std::vector<cplx> d = a;
    for (std::size_t order = 0; order + 1 < m; ++order) {
      std::vector<cplx> next(d.size() - 1);
      for (std::size_t k = 1; k < d.size(); ++k) next[k - 1] = static_cast<double>(k) * d[k];
      d = std::move(next);
    }
    cplx c = 0.0;
    for (auto k : members) c += z[k];
    c /= static_cast<double>(m);
    for (int it = 0; it < 20; ++it) {
      const auto [p, dp] = horner(d, c);
      if (dp == cplx{}) break;
      const cplx step = p / dp;
      if (!finite(step)) break;
      c -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(c))) break;
    }
    for (auto k : members) z[k] = c;
  }
  return z;
}

std::vector<cplx> trim_trailing(std::vector<cplx> v) {
  while (v.size() > 1 && v.back() == cplx{}) v.pop_back();
  return v;
}

}  // namespace

Signal::Signal(std::initializer_list<cplx> coeffs) : Signal(std::vector<cplx>(coeffs)) {}

Signal::Signal(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("Signal: length must be at least 1");
  if (!std::all_of(c_.begin(), c_.end(), finite)) throw std::invalid_argument("Signal: non-finite coefficient");
}

bool Signal::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](const cplx& z) { return z == cplx{}; });
}

std::size_t Signal::first_nonzero() const {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != cplx{}) return k;
  throw std::invalid_argument("Signal::first_nonzero: zero signal");
}

std::size_t Signal::last_nonzero() const {
  for (std::size_t k = c_.size(); k-- > 0;)
    if (c_[k] != cplx{}) return k;
  throw std::invalid_argument("Signal::last_nonzero: zero signal");
}

bool Signal::full_degree() const noexcept { return c_.front() != cplx{} && c_.back() != cplx{}; }

Signal Signal::scaled(cplx s) const {
  std::vector<cplx> out = c_;
  for (auto& z : out) z *= s;
  return Signal(std::move(out));
}

Signal Signal::resized(std::size_t length) const {
  std::vector<cplx> out = c_;
  out.resize(std::max<std::size_t>(length, 1));
  return Signal(std::move(out));
}

Signal Signal::trimmed() const { return Signal(trim_trailing(c_)); }

Signal operator+(const Signal& a, const Signal& b) {
  std::vector<cplx> out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return Signal(std::move(out));
}

Signal operator-(const Signal& a, const Signal& b) { return a + b.scaled(-1.0); }

Signal convolve(const Signal& x1, const Signal& x2) {
  std::vector<cplx> out(x1.size() + x2.size() - 1);
  for (std::size_t l = 0; l < x1.size(); ++l)
    for (std::size_t m = 0; m < x2.size(); ++m) out[l + m] += x1[l] * x2[m];
  return Signal(std::move(out));
}

Signal conj_time_reverse(const Signal& x) {
  std::vector<cplx> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = std::conj(x[x.size() - 1 - k]);
  return Signal(std::move(out));
}

Signal correlate(const Signal& xi, const Signal& xj) { return convolve(xi, conj_time_reverse(xj)); }

Signal involution(const Signal& x) { return conj_time_reverse(x); }

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  const std::vector<cplx> a = trim_trailing(coeffs);
  const std::size_t n = a.size() - 1;
  if (n == 0) return {};
  if (n == 1) return {-a[0] / a[1]};

  // Start on a circle whose radius is the geometric mean of the root moduli.
  const double radius =
      a[0] == cplx{} ? 1.0 : std::pow(std::abs(a[0]) / std::abs(a[n]), 1.0 / static_cast<double>(n));
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius * (1.0 + 0.01 * static_cast<double>(k) / static_cast<double>(n)), ang);
  }

  bool converged = false;
  for (std::size_t it = 0; it < kAberthMaxIter && !converged; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto [p, dp] = horner(a, z[k]);
      if (p == cplx{}) continue;
      cplx repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      cplx step;
      if (dp == cplx{}) {
        step = std::polar(1e-3 * std::max(1.0, std::abs(z[k])), 0.7);
      } else {
        const cplx ratio = p / dp;
        step = ratio / (1.0 - ratio * repulsion);
      }
      if (!finite(step)) continue;
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    converged = worst <= kAberthStep;
  }

  double worst_residual = 0.0;
  for (const auto& r : z) worst_residual = std::max(worst_residual, backward_error(a, r));
  // Clustered (multiple) zeros stall the update size near sqrt(eps) while the
  // backward error is already at rounding level.
  if (!converged && worst_residual > 1e-10)
    throw NumericalError("polynomial_roots: Aberth iteration did not converge", worst_residual);
  return z;
}

RootSet roots(const Signal& x, double tol) {
  if (x.is_zero()) throw std::invalid_argument("roots: zero signal");
  const std::size_t f = x.first_nonzero();
  const std::size_t d = x.last_nonzero();
  std::vector<cplx> a(x.begin() + static_cast<std::ptrdiff_t>(f), x.begin() + static_cast<std::ptrdiff_t>(d) + 1);
  RootSet out;
  out.unit = x[f];
  out.origin_power = f;
  out.trailing_zeros = x.size() - 1 - d;
  const std::vector<cplx> raw = polynomial_roots(a);
  auto deviation = [&](const std::vector<cplx>& w) {
    out.zeros.clear();
    for (const auto& r : w) out.zeros.push_back(1.0 / r);
    return (from_roots(out) - x).norm() / x.norm();
  };
  const std::vector<cplx> polished = polish_clusters(a, raw);
  double dev = deviation(polished);
  if (const double raw_dev = deviation(raw); raw_dev <= dev) dev = raw_dev;
  else deviation(polished);
  if (dev > std::max(tol, 1e-8))
    throw NumericalError("roots: reconstruction from zeros deviates from input", dev);
  return out;
}

Signal from_roots(const RootSet& r) {
  std::vector<cplx> p{r.unit};
  for (const auto& zeta : r.zeros) {
    if (zeta == cplx{}) throw std::invalid_argument("from_roots: zero at the origin is not representable");
    std::vector<cplx> next(p.size() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) {
      next[k] += p[k];
      next[k + 1] -= zeta * p[k];
    }
    p = std::move(next);
  }
  std::vector<cplx> out(r.origin_power);
  out.insert(out.end(), p.begin(), p.end());
  out.resize(out.size() + r.trailing_zeros);
  return Signal(std::move(out));
}

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& zeros, double rel_tol) {
  const std::size_t n = zeros.size();
  double scale = 0.0;
  for (const auto& z : zeros) scale = std::max(scale, std::abs(z));
  const double thresh = rel_tol * std::max(scale, 1e-300);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(zeros[i] - zeros[j]) <= thresh) parent[find(i)] = find(j);

  std::vector<RootCluster> out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == n) {
      slot[root] = out.size();
      out.push_back({zeros[i], 1});
    } else {
      auto& c = out[slot[root]];
      c.center = (c.center * static_cast<double>(c.multiplicity) + zeros[i]) / static_cast<double>(c.multiplicity + 1);
      ++c.multiplicity;
    }
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return out;
}

Division divide(const Signal& num, const Signal& den) {
  const std::vector<cplx> d = trim_trailing(den.coeffs());
  if (d.back() == cplx{}) throw std::invalid_argument("divide: zero divisor");
  std::vector<cplx> rem = trim_trailing(num.coeffs());
  const std::size_t m = d.size() - 1;
  if (rem.size() <= m) return {Signal{0.0}, Signal(rem)};
  const std::size_t qlen = rem.size() - m;
  std::vector<cplx> q(qlen);
  for (std::size_t k = qlen; k-- > 0;) {
    const cplx coef = rem[k + m] / d[m];
    q[k] = coef;
    for (std::size_t j = 0; j < m; ++j) rem[k + j] -= coef * d[j];
    rem[k + m] = 0.0;
  }
  rem.resize(std::max<std::size_t>(m, 1));
  return {Signal(std::move(q)), Signal(std::move(rem))};
}

Signal poly_gcd(const Signal& x1, const Signal& x2, double tol) {
  if (x1.is_zero() && x2.is_zero()) throw std::invalid_argument("poly_gcd: both inputs are zero");
  auto monic = [](const Signal& p) {
    const Signal t = p.trimmed();
    return t.scaled(1.0 / t[t.size() - 1]);
  };
  if (x1.is_zero()) return monic(x2);
  if (x2.is_zero()) return monic(x1);

  Signal a = x1.trimmed();
  Signal b = x2.trimmed();
  if (a.size() < b.size()) std::swap(a, b);
  a = a.scaled(1.0 / a.norm());
  b = b.scaled(1.0 / b.norm());
  while (b.size() > 1) {
    Signal r = divide(a, b).remainder;
    // Remainder coefficients below the tolerance carry no information.
    std::vector<cplx> rc = r.coeffs();
    while (rc.size() > 1 && std::abs(rc.back()) <= tol) rc.pop_back();
    r = Signal(rc);
    if (r.norm() <= tol) return monic(b);
    a = b;
    b = r.scaled(1.0 / r.norm());
  }
  return Signal{1.0};
}

SelfInversive is_self_inversive(const Signal& x, double tol) {
  const double nx = x.norm();
  if (nx == 0.0) return {};
  const Signal xs = involution(x);
  const cplx c = dot(x.coeffs(), xs.coeffs());
  if (std::abs(c) == 0.0) return {};
  const cplx ph = c / std::abs(c);
  if ((xs - x.scaled(ph)).norm() > tol * nx) return {};
  double alpha = std::arg(ph);
  if (alpha < 0.0) alpha += 2.0 * std::numbers::pi;
  if (alpha >= 2.0 * std::numbers::pi - 1e-12) alpha = 0.0;
  return {true, alpha};
}

bool is_self_reciprocal(const Signal& x, double tol) {
  return (x - conj_time_reverse(x)).norm() <= tol * x.norm();
}

SelfReciprocalSplit gsd(const Signal& x, double tol) {
  if (x.is_zero()) throw std::invalid_argument("gsd: zero signal");
  Signal g = poly_gcd(x, involution(x), tol);

  // A common divisor of X and X* is self-inversive; rotate it onto the
  // self-reciprocal representative.
  const cplx c = dot(g.coeffs(), involution(g).coeffs());
  if (std::abs(c) > 0.0) g = g.scaled(std::polar(1.0, 0.5 * std::arg(c)));
  const std::size_t deg = g.size() - 1;
  double key = g[deg / 2].real();
  if (std::abs(key) <= 1e-12 * g.norm()) key = g[0].real();
  if (key < 0.0) g = g.scaled(-1.0);
  g = Signal(g.coeffs());

  const Signal xt = x.trimmed();
  Signal r = divide(xt, g).quotient;
  if (x.size() > deg) r = r.resized(x.size() - deg);
  const double dev = (convolve(g, r).resized(x.size()) - x).norm() / x.norm();
  if (dev > tol) throw NumericalError("gsd: deconvolution by the self-reciprocal divisor failed", dev);
  return {g, r};
}

Signal anti_solution(const Signal& x, const Signal& s, double tol) {
  if (!x.full_degree()) throw std::invalid_argument("anti_solution: x must have nonzero first and last coefficient");
  if (!is_self_reciprocal(s, 1e-10)) throw std::invalid_argument("anti_solution: s is not self-reciprocal");
  const SelfReciprocalSplit split = gsd(x, tol);
  const std::size_t width = split.g.size();
  if (s.size() > width || (width - s.size()) % 2 != 0)
    throw std::invalid_argument("anti_solution: s has length " + std::to_string(s.size()) +
                                ", incompatible with divisor length " + std::to_string(width));
  const std::size_t pad = (width - s.size()) / 2;
  std::vector<cplx> sp(pad);
  sp.insert(sp.end(), s.begin(), s.end());
  sp.resize(width);
  return convolve(split.r, Signal(std::move(sp))).scaled(cplx(0.0, 1.0));
}

Signal random_self_reciprocal(std::size_t degree, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(degree + 1);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  std::vector<cplx> s(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) s[k] = 0.5 * (v[k] + std::conj(v[degree - k]));
  return Signal(std::move(s));
}

}  // namespace corrlift
