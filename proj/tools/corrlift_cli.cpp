#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corrlift/experiment.hpp"

using namespace corrlift;

namespace {

// Config errors exit 2; numerical trouble is reported but does not change the status.
constexpr int kConfigError = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("--snr-db: empty entry");
    item = item.substr(b, e - b + 1);
    if (item == "inf" || item == "+inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("--snr-db: bad value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--snr-db: empty list");
  return out;
}

std::pair<Signal, Signal> two_signals(const std::vector<std::string>& given, const char* cmd) {
  if (given.size() != 2) throw ConfigError(std::string(cmd) + ": needs --signal twice (x1 and x2)");
  return {parse_signal(given[0]), parse_signal(given[1])};
}

// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  write(f);
}

void print_medians(const ExperimentConfig& cfg, const std::vector<TrialRecord>& rows) {
  const auto med = median_mse(cfg, rows);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.failed;
  std::fprintf(stderr, "L1=%zu L2=%zu trials=%zu failed=%zu\n", cfg.l1, cfg.l2, cfg.trials, failed);
  for (std::size_t i = 0; i < med.size(); ++i)
    std::fprintf(stderr, "  rsnr_db=%s median_mse=%.4g median_mse_per_dim_db=%.2f\n",
                 format_double(cfg.snr_db_list[i]).c_str(), med[i],
                 10 * std::log10(med[i] / static_cast<double>(cfg.l1 + cfg.l2)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal-pair recovery from auto- and cross-correlations"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string snr_text = "10,20,30,40";
  std::vector<std::string> signals;
  double tol = -1;  // per-subcommand default when negative
  std::size_t compare_l1 = 0;

  auto common_solver = [&](CLI::App* sub) {
    sub->add_option("--max-iters", cfg.solver.max_iters, "solver iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "solver relative stopping tolerance");
    sub->add_flag("--reduced", cfg.reduced, "drop the redundant reversed cross-correlation (3N-3 measurements)");
    sub->add_option("--seed", cfg.seed, "base seed");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo rSNR sweep, CSV rows per trial");
  sweep->add_option("--l1", cfg.l1, "length of x1")->check(CLI::PositiveNumber);
  sweep->add_option("--l2", cfg.l2, "length of x2")->check(CLI::PositiveNumber);
  sweep->add_option("--snr-db", snr_text, "comma list of rSNR values in dB, inf for noiseless");
  sweep->add_option("--trials", cfg.trials, "trials per rSNR value")->check(CLI::PositiveNumber);
  sweep->add_option("--out", cfg.out_path, "CSV path (stdout if omitted)");
  sweep->add_option("--compare-l1", compare_l1, "also run the split (l1', N - l1') and summarize both");
  common_solver(sweep);

  CLI::App* recover_cmd = app.add_subcommand("recover", "recover one pair from its (optionally noisy) correlations");
  recover_cmd->add_option("--signal", signals, "x1 then x2, comma-separated complex literals");
  recover_cmd->add_option("--l1", cfg.l1, "length of random x1 when --signal is absent")->check(CLI::PositiveNumber);
  recover_cmd->add_option("--l2", cfg.l2, "length of random x2 when --signal is absent")->check(CLI::PositiveNumber);
  recover_cmd->add_option("--snr-db", snr_text, "single rSNR value in dB, inf for noiseless");
  common_solver(recover_cmd);

  std::string out_path;
  CLI::App* zeros = app.add_subcommand("zeros", "zero locations of x1, x2 and their product as CSV");
  zeros->add_option("--signal", signals, "x1 [then x2]")->required();
  zeros->add_option("--tol", tol, "relative clustering tolerance");
  zeros->add_option("--out", out_path, "CSV path (stdout if omitted)");

  CLI::App* certify_cmd = app.add_subcommand("certify", "dual certificate checks as key=value lines");
  certify_cmd->add_option("--signal", signals, "x1 then x2")->required();
  certify_cmd->add_option("--tol", tol, "relative rank tolerance");

  CLI::App* ambig = app.add_subcommand("ambiguities", "convolution ambiguity classes and count bounds");
  ambig->add_option("--signal", signals, "x1 then x2")->required();
  ambig->add_option("--tol", tol, "relative clustering tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (tol >= 0 && (sweep->parsed() || recover_cmd->parsed())) cfg.solver.rel_tol = tol;
    if (tol == 0 || (tol > 0 && !std::isfinite(tol))) throw ConfigError("--tol must be positive and finite");

    if (sweep->parsed()) {
      cfg.snr_db_list = parse_snr_list(snr_text);
      validate(cfg);
      const auto rows = run_sweep(cfg);
      emit(cfg.out_path, [&](std::ostream& os) { write_csv(os, rows); });
      print_medians(cfg, rows);
      if (compare_l1 > 0) {
        const std::size_t n = cfg.l1 + cfg.l2;
        if (compare_l1 >= n) throw ConfigError("--compare-l1 must be below l1 + l2");
        ExperimentConfig other = cfg;
        other.l1 = compare_l1;
        other.l2 = n - compare_l1;
        print_medians(other, run_sweep(other));
      }
      return 0;
    }

    if (recover_cmd->parsed()) {
      const auto snr = parse_snr_list(snr_text);
      if (snr.size() != 1) throw ConfigError("recover: --snr-db takes one value");
      std::mt19937_64 rng(cfg.seed);
      Signal x1{1}, x2{1};
      if (signals.empty()) {
        x1 = gen_signal(cfg.l1, rng);
        x2 = gen_signal(cfg.l2, rng);
      } else {
        std::tie(x1, x2) = two_signals(signals, "recover");
      }
      Measurements b = measure(x1, x2, cfg.reduced);
      double sigma = 0;
      if (std::isfinite(snr[0])) {
        const double ny = b.norm();
        sigma = std::sqrt(ny * ny / (static_cast<double>(noise_bearing_count(b)) * std::pow(10.0, snr[0] / 10)));
        b = add_noise(b, sigma, rng);
      }
      const Recovery r = recover(x1.size(), x2.size(), b, cfg.solver);
      const double mse = aligned_mse(Signal(stack(x1, x2)), Signal(stack(r.x1, r.x2))).mse;
      std::cout << "x1=" << format_signal(x1) << "\nx2=" << format_signal(x2) << "\nsigma=" << format_double(sigma)
                << "\nx1_hat=" << format_signal(r.x1) << "\nx2_hat=" << format_signal(r.x2) << "\nmse=" << format_double(mse)
                << "\niters=" << r.diagnostics.iters << "\nresidual=" << format_double(r.diagnostics.residual)
                << "\nrank1_gap=" << format_double(r.diagnostics.rank1_gap)
                << "\nconverged=" << (r.diagnostics.converged ? "true" : "false")
                << "\nnon_unique=" << (r.diagnostics.non_unique ? "true" : "false") << '\n';
      return 0;
    }

    if (zeros->parsed()) {
      if (signals.empty() || signals.size() > 2) throw ConfigError("zeros: give --signal once or twice");
      const Signal x1 = parse_signal(signals[0]);
      const Signal x2 = signals.size() == 2 ? parse_signal(signals[1]) : Signal{1};
      const auto rows = zero_table(x1, signals.size() == 2 ? &x2 : nullptr, tol > 0 ? tol : 1e-6);
      emit(out_path, [&](std::ostream& os) { write_zero_table(os, rows); });
      return 0;
    }

    if (certify_cmd->parsed()) {
      const auto [x1, x2] = two_signals(signals, "certify");
      std::cout << render_certificate(certify(x1, x2, tol > 0 ? tol : 1e-8));
      return 0;
    }

    if (ambig->parsed()) {
      const auto [x1, x2] = two_signals(signals, "ambiguities");
      std::cout << render_ambiguities(x1, x2, tol > 0 ? tol : 1e-6);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cout << "numerical_failure=" << e.what() << "\nresidual=" << format_double(e.residual()) << '\n';
    return 0;
  }
  return 0;
}
