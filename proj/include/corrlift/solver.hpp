#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrlift/linalg.hpp"
#include "corrlift/poly.hpp"
#include "corrlift/sensing.hpp"

namespace corrlift {

struct SolverOptions {
  std::size_t max_iters = 100000;
  double rel_tol = 1e-10;     // on ||A(X) - b|| / ||b||
  double step_safety = 0.95;  // step = step_safety / ||A^* A||
  std::optional<std::size_t> restart_every;
  /// Stop once the objective decreased by less than stall_tol (relative)
  /// over the last stall_window iterations; 0 disables the test.
  std::size_t stall_window = 500;
  double stall_tol = 1e-9;
};

struct SolverResult {
  HermitianMatrix x_mat;
  std::size_t iters = 0;
  double residual = 0.0;   // ||A(X) - b|| / ||b||
  double rank1_gap = 0.0;  // lambda_2 / lambda_1 of x_mat
  bool converged = false;  // rel_tol reached before max_iters
  bool stalled = false;    // objective plateaued above rel_tol
  std::size_t restarts = 0;
};

/// Thrown when the objective keeps increasing after momentum restarts.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// f(X) = ||A(X) - b||^2.
double objective(const SensingSet& s, const Measurements& b, const HermitianMatrix& x);
/// Gradient of f with respect to the real inner product tr(G H) on Hermitian
/// matrices: sum_m Re(r_m) A_{R,m} + Im(r_m) A_{I,m}, times 2.
HermitianMatrix gradient(const SensingSet& s, const Measurements& b, const HermitianMatrix& x);

/// Accelerated projected gradient for min_{X >= 0} ||A(X) - b||^2 starting
/// from X = 0, with function-value momentum restarts.
SolverResult solve(const SensingSet& s, const Measurements& b, const SolverOptions& opts = {});

struct Rank1Estimate {
  Signal x;
  bool degenerate = false;  // lambda_1 <= 0
  bool tied = false;        // lambda_1 has multiplicity > 1
};

/// sqrt(lambda_1) v_1 from the top eigenpair of x_mat.
Rank1Estimate extract_rank1(const HermitianMatrix& x_mat);
Rank1Estimate extract_rank1(const SolverResult& r);

struct AlignedError {
  double mse = 0.0;
  double phase = 0.0;  // x_true ~ e^{i phase} x_est
};

/// min_phi ||x - e^{i phi} x_est||^2 / ||x||^2 in closed form.
AlignedError aligned_mse(const Signal& x_true, const Signal& x_est);

struct RecoveryDiagnostics {
  std::size_t iters = 0;
  double residual = 0.0;
  double rank1_gap = 0.0;
  bool converged = false;
  bool non_unique = false;  // large rank1_gap or tied top eigenvalue
};

struct Recovery {
  Signal x1;
  Signal x2;
  RecoveryDiagnostics diagnostics;
};

inline constexpr double kNonUniqueGap = 1e-3;

Recovery recover(std::size_t l1, std::size_t l2, const Measurements& b, const SolverOptions& opts = {});

}  // namespace corrlift
