#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "corrlift/poly.hpp"
#include "corrlift/solver.hpp"
#include "corrlift/sylvester.hpp"

namespace corrlift {

struct ExperimentConfig {
  std::size_t l1 = 3;
  std::size_t l2 = 3;
  std::vector<double> snr_db_list{10.0, 20.0, 30.0, 40.0};  // +inf means noiseless
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  bool reduced = false;
  SolverOptions solver;
  std::string out_path;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  double rsnr_db = 0.0;
  double sigma = 0.0;
  double mse = 0.0;
  double mse_per_dim_db = 0.0;
  std::size_t iters = 0;
  double residual = 0.0;
  double rank1_gap = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
};

inline constexpr const char* kCsvHeader =
    "trial,l1,l2,rsnr_db,sigma,mse,mse_per_dim_db,iters,residual,rank1_gap,seed,failed";

/// Complex standard Gaussian entries, redrawn until |c_0| and |c_{L-1}| are
/// both at least 0.1.
Signal gen_signal(std::size_t length, std::mt19937_64& rng);

/// Per-trial generator seed derived from (seed, snr index, trial index).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t snr_index, std::size_t trial_index);

/// Runs one trial; never throws on solver failure (the record is flagged).
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t snr_index, std::size_t trial_index);
/// Rows in (snr, trial) order.
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);
void write_csv(std::ostream& os, const std::vector<TrialRecord>& rows);
std::string format_double(double v);
/// Comma list that parse_signal reads back exactly.
std::string format_signal(const Signal& x);

/// Median MSE per rSNR value, in the order of cfg.snr_db_list.
std::vector<double> median_mse(const ExperimentConfig& cfg, const std::vector<TrialRecord>& rows);

/// Parses "1+2i, -0.5, 3i, -i" style lists.
cplx parse_complex(const std::string& text);
Signal parse_signal(const std::string& text);

struct ZeroRow {
  std::string which;  // x1, x2 or product
  cplx zero;
  std::size_t multiplicity = 1;
};
std::vector<ZeroRow> zero_table(const Signal& x1, const Signal* x2, double cluster_tol = 1e-6);
void write_zero_table(std::ostream& os, const std::vector<ZeroRow>& rows);

/// Flat key=value rendering of a certificate report and its inverse.
std::string render_certificate(const CertificateReport& rep);
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::string render_ambiguities(const Signal& x1, const Signal& x2, double cluster_tol = 1e-6);

}  // namespace corrlift
