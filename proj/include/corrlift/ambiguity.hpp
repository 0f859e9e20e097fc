#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "corrlift/poly.hpp"

namespace corrlift {

/// Left-scaled representative of a convolution equivalence class: both units
/// sit on x1_rep, x2_rep has unit 1.
struct AmbiguityClass {
  Signal x1_rep;
  Signal x2_rep;
  /// Number of zeros of each root cluster assigned to the left factor.
  std::vector<std::size_t> assignment;
};

struct ConvolutionAmbiguities {
  std::vector<RootCluster> clusters;  // zeros of X1 X2
  std::vector<AmbiguityClass> classes;
  bool unstable_clustering = false;
};

inline constexpr std::size_t kMaxAmbiguityZeros = 16;

/// Every split of the zeros of X1 X2 into factors of lengths <= (L1, L2),
/// one representative per distinct multiset split.
ConvolutionAmbiguities enumerate_convolution_ambiguities(const Signal& x1, const Signal& x2,
                                                         double cluster_tol = 1e-6);

struct AmbiguityBounds {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
};

/// min{D+1, L1, L2} and 2^D with D = deg(X1 X2).
AmbiguityBounds count_bounds(const Signal& x1, const Signal& x2);

struct AutocorrAmbiguities {
  std::vector<Signal> signals;
  /// A unit-circle zero of the autocorrelation has odd multiplicity.
  bool odd_unit_circle = false;
};

inline constexpr std::size_t kMaxAutocorrDegree = 12;

/// All signals sharing the autocorrelation of x, obtained by swapping zeros
/// within conjugate-inverse pairs. Each output is rotated so that its first
/// nonzero coefficient is real positive.
AutocorrAmbiguities enumerate_autocorr_ambiguities(const Signal& x, double cluster_tol = 1e-6);

/// q1 = lambda p1 and q2 = p2 / lambda for some lambda != 0.
bool are_equivalent(const std::pair<Signal, Signal>& p, const std::pair<Signal, Signal>& q, double tol = 1e-8);

/// Rotates x so its first nonzero coefficient is real positive.
Signal canonical_phase(const Signal& x);

}  // namespace corrlift
