#include "corrlift/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace corrlift {

namespace {

constexpr std::size_t kDivergencePatience = 10;
constexpr double kTieGap = 1e-12;

std::vector<cplx> residual_vector(const SensingSet& s, const Measurements& b, const HermitianMatrix& x) {
  std::vector<cplx> r = forward(s, x).stacked();
  const std::vector<cplx> bb = b.stacked();
  if (r.size() != bb.size()) throw std::invalid_argument("solver: measurement length does not match sensing set");
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= bb[i];
  return r;
}

double squared_norm(const std::vector<cplx>& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

double top_gap(const EigDecomposition& e) {
  const std::size_t n = e.values.size();
  if (n < 2) return 0.0;
  const double l1 = e.values[n - 1];
  if (l1 <= 0.0) return 1.0;
  return std::max(e.values[n - 2], 0.0) / l1;
}

}  // namespace

double objective(const SensingSet& s, const Measurements& b, const HermitianMatrix& x) {
  return squared_norm(residual_vector(s, b, x));
}

HermitianMatrix gradient(const SensingSet& s, const Measurements& b, const HermitianMatrix& x) {
  std::vector<cplx> r = residual_vector(s, b, x);
  // adjoint(conj r) = sum_m 2 (Re r_m A_{R,m} + Im r_m A_{I,m}).
  for (auto& z : r) z = std::conj(z);
  return adjoint(s, r);
}

SolverResult solve(const SensingSet& s, const Measurements& b, const SolverOptions& opts) {
  if (opts.max_iters == 0 || !(opts.rel_tol > 0.0) || !(opts.step_safety > 0.0) || opts.step_safety > 1.0)
    throw std::invalid_argument("solve: invalid solver options");
  const std::size_t n = s.n();
  SolverResult res;
  res.x_mat = HermitianMatrix::zeros(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  const double lipschitz = operator_norm(
      [&](const HermitianMatrix& x) {
        std::vector<cplx> ax = forward(s, x).stacked();
        for (auto& z : ax) z = std::conj(z);
        return adjoint(s, ax);
      },
      n);
  const double step = opts.step_safety / lipschitz;
  const double slack = 1e-24 * bnorm * bnorm;

  HermitianMatrix x = res.x_mat;
  HermitianMatrix y = x;
  double fx = objective(s, b, x);
  double t = 1.0;
  std::size_t increases = 0;
  std::size_t since_restart = 0;
  std::vector<double> trace;
  std::deque<double> history;

  auto prox_step = [&](const HermitianMatrix& from) { return psd_project(from - step * gradient(s, b, from)); };

  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    HermitianMatrix xn = prox_step(y);
    double fn = objective(s, b, xn);
    const bool forced = opts.restart_every && since_restart >= *opts.restart_every;
    // Gradient-mapping test: momentum points uphill.
    const bool uphill = frobenius_inner(y - xn, xn - x) > 0.0;
    if (uphill) {
      t = 1.0;
      since_restart = 0;
      ++res.restarts;
    }
    if (fn > fx + 1e-10 * fx + slack || forced) {
      // Drop the momentum and take a plain projected gradient step.
      if (!uphill) ++res.restarts;
      t = 1.0;
      since_restart = 0;
      xn = prox_step(x);
      fn = objective(s, b, xn);
      if (fn > fx + 1e-10 * fx + slack) {
        trace.push_back(fn);
        if (++increases >= kDivergencePatience)
          throw DivergenceError("solve: objective increased after " + std::to_string(kDivergencePatience) +
                                    " consecutive restarted steps",
                                trace);
      } else {
        increases = 0;
      }
    } else {
      increases = 0;
    }
    ++since_restart;

    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = xn + ((t - 1.0) / tn) * (xn - x);
    x = std::move(xn);
    fx = fn;
    t = tn;
    res.iters = it;
    if (std::sqrt(fx) / bnorm <= opts.rel_tol) {
      res.converged = true;
      break;
    }
    if (opts.stall_window) {
      history.push_back(fx);
      if (history.size() > opts.stall_window) {
        const double past = history.front();
        history.pop_front();
        if (past - fx <= opts.stall_tol * fx) {
          res.stalled = true;
          break;
        }
      }
    }
  }

  res.x_mat = std::move(x);
  res.residual = std::sqrt(fx) / bnorm;
  res.rank1_gap = top_gap(herm_eig(res.x_mat));
  return res;
}

Rank1Estimate extract_rank1(const HermitianMatrix& x_mat) {
  const std::size_t n = x_mat.dim();
  const EigDecomposition e = herm_eig(x_mat);
  Rank1Estimate out{Signal::zeros(n), false, false};
  const double l1 = n ? e.values[n - 1] : 0.0;
  if (!(l1 > 0.0)) {
    out.degenerate = true;
    return out;
  }
  if (n >= 2 && l1 - e.values[n - 2] < kTieGap * l1) out.tied = true;
  std::vector<cplx> v = e.vectors.column(n - 1);
  for (auto& z : v) z *= std::sqrt(l1);
  out.x = Signal(std::move(v));
  return out;
}

Rank1Estimate extract_rank1(const SolverResult& r) { return extract_rank1(r.x_mat); }

AlignedError aligned_mse(const Signal& x_true, const Signal& x_est) {
  if (x_true.size() != x_est.size()) throw std::invalid_argument("aligned_mse: length mismatch");
  const double nt = x_true.norm();
  if (nt == 0.0) throw std::invalid_argument("aligned_mse: zero reference signal");
  const double ne = x_est.norm();
  const cplx c = dot(x_est.coeffs(), x_true.coeffs());
  const double mse = std::max(0.0, (nt * nt + ne * ne - 2.0 * std::abs(c)) / (nt * nt));
  return {mse, std::abs(c) > 0.0 ? std::arg(c) : 0.0};
}

Recovery recover(std::size_t l1, std::size_t l2, const Measurements& b, const SolverOptions& opts) {
  const SensingSet s = build_sensing(l1, l2, b.reduced());
  if (b.stacked().size() != s.count()) throw std::invalid_argument("recover: measurements do not match lengths");
  const SolverResult res = solve(s, b, opts);
  const Rank1Estimate est = extract_rank1(res);
  std::vector<cplx> x1(est.x.begin(), est.x.begin() + static_cast<std::ptrdiff_t>(l1));
  std::vector<cplx> x2(est.x.begin() + static_cast<std::ptrdiff_t>(l1), est.x.end());
  RecoveryDiagnostics diag{res.iters, res.residual, res.rank1_gap, res.converged,
                           est.tied || est.degenerate || res.rank1_gap > kNonUniqueGap};
  return {Signal(std::move(x1)), Signal(std::move(x2)), diag};
}

}  // namespace corrlift
