#include "corrlift/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "corrlift/ambiguity.hpp"
#include "corrlift/sensing.hpp"

namespace corrlift {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse complex literal '" + whole + "'");
  }
  if (used != s.size()) throw std::invalid_argument("cannot parse complex literal '" + whole + "'");
  return v;
}

std::string format_complex(cplx z) {
  // Adding +0.0 turns a signed zero into a plain one.
  std::string im = format_double(z.imag() + 0.0);
  if (im.front() != '-') im = "+" + im;
  return format_double(z.real() + 0.0) + im + "i";
}

}  // namespace

Signal gen_signal(std::size_t length, std::mt19937_64& rng) {
  if (length == 0) throw std::invalid_argument("gen_signal: length must be positive");
  // Unit variance per complex entry: real and imaginary parts each 1/2.
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<cplx> c(length);
  do {
    for (auto& z : c) z = cplx(g(rng), g(rng));
  } while (std::abs(c.front()) < 0.1 || std::abs(c.back()) < 0.1);
  return Signal(std::move(c));
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t snr_index, std::size_t trial_index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(snr_index) + 1));
  h = splitmix64(h ^ ((static_cast<std::uint64_t>(trial_index) + 1) << 1));
  return h;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.l1 == 0 || cfg.l2 == 0) throw std::invalid_argument("signal lengths must be positive");
  if (cfg.trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (cfg.snr_db_list.empty()) throw std::invalid_argument("at least one rSNR value is required");
  for (double v : cfg.snr_db_list)
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("rSNR values must be finite or +inf");
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t snr_index, std::size_t trial_index) {
  TrialRecord rec;
  rec.trial = trial_index;
  rec.l1 = cfg.l1;
  rec.l2 = cfg.l2;
  rec.rsnr_db = cfg.snr_db_list.at(snr_index);
  rec.seed = trial_seed(cfg.seed, snr_index, trial_index);

  std::mt19937_64 rng(rec.seed);
  const Signal x1 = gen_signal(cfg.l1, rng);
  const Signal x2 = gen_signal(cfg.l2, rng);
  Measurements b = measure(x1, x2, cfg.reduced);
  if (std::isfinite(rec.rsnr_db)) {
    const double snr = std::pow(10.0, rec.rsnr_db / 10.0);
    const double ny = b.norm();
    rec.sigma = std::sqrt(ny * ny / (static_cast<double>(noise_bearing_count(b)) * snr));
    b = add_noise(b, rec.sigma, rng);
  }

  const Signal truth(stack(x1, x2));
  const double dim = static_cast<double>(cfg.l1 + cfg.l2);
  try {
    const Recovery r = recover(cfg.l1, cfg.l2, b, cfg.solver);
    rec.mse = aligned_mse(truth, Signal(stack(r.x1, r.x2))).mse;
    rec.iters = r.diagnostics.iters;
    rec.residual = r.diagnostics.residual;
    rec.rank1_gap = r.diagnostics.rank1_gap;
  } catch (const std::exception&) {
    // Scored as the zero estimate.
    rec.failed = true;
    rec.mse = 1.0;
  }
  rec.mse_per_dim_db = 10.0 * std::log10(rec.mse / dim);
  return rec;
}

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<TrialRecord> rows;
  rows.reserve(cfg.snr_db_list.size() * cfg.trials);
  for (std::size_t si = 0; si < cfg.snr_db_list.size(); ++si)
    for (std::size_t t = 0; t < cfg.trials; ++t) rows.push_back(run_trial(cfg, si, t));
  return rows;
}

std::string format_signal(const Signal& x) {
  std::string out;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k) out += ",";
    out += format_complex(x[k]);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.trial << ',' << r.l1 << ',' << r.l2 << ',' << format_double(r.rsnr_db) << ','
       << format_double(r.sigma) << ',' << format_double(r.mse) << ',' << format_double(r.mse_per_dim_db) << ','
       << r.iters << ',' << format_double(r.residual) << ',' << format_double(r.rank1_gap) << ',' << r.seed << ','
       << (r.failed ? 1 : 0) << '\n';
  }
}

std::vector<double> median_mse(const ExperimentConfig& cfg, const std::vector<TrialRecord>& rows) {
  std::vector<double> out;
  for (std::size_t si = 0; si < cfg.snr_db_list.size(); ++si) {
    std::vector<double> v;
    for (std::size_t t = 0; t < cfg.trials && si * cfg.trials + t < rows.size(); ++t)
      v.push_back(rows[si * cfg.trials + t].mse);
    if (v.empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    out.push_back(v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]));
  }
  return out;
}

cplx parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  const char last = s.back();
  if (last != 'i' && last != 'j') return {parse_real(s, text), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : trim(body.substr(0, split));
  std::string im = trim(split == std::string::npos ? body : body.substr(split));
  double imv = 0.0;
  if (im.empty() || im == "+") imv = 1.0;
  else if (im == "-") imv = -1.0;
  else imv = parse_real(im, text);
  return {re.empty() ? 0.0 : parse_real(re, text), imv};
}

Signal parse_signal(const std::string& text) {
  std::vector<cplx> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) c.push_back(parse_complex(item));
  if (c.empty()) throw std::invalid_argument("empty signal");
  return Signal(std::move(c));
}

std::vector<ZeroRow> zero_table(const Signal& x1, const Signal* x2, double cluster_tol) {
  std::vector<ZeroRow> rows;
  auto emit = [&](const char* which, const Signal& x) {
    for (const auto& c : cluster_roots(roots(x).zeros, cluster_tol)) rows.push_back({which, c.center, c.multiplicity});
  };
  emit("x1", x1);
  if (x2) {
    emit("x2", *x2);
    emit("product", convolve(x1, *x2));
  }
  return rows;
}

void write_zero_table(std::ostream& os, const std::vector<ZeroRow>& rows) {
  os << "which,re,im,multiplicity\n";
  for (const auto& r : rows)
    os << r.which << ',' << format_double(r.zero.real() + 0.0) << ',' << format_double(r.zero.imag() + 0.0) << ','
       << r.multiplicity << '\n';
}

std::string render_certificate(const CertificateReport& rep) {
  std::ostringstream os;
  os << "dim=" << rep.dim << '\n'
     << "null_residual=" << format_double(rep.null_residual) << '\n'
     << "min_eig=" << format_double(rep.min_eig) << '\n'
     << "rank=" << rep.rank << '\n'
     << "in_range=" << (rep.in_range ? "true" : "false") << '\n'
     << "lambda_deviation=" << format_double(rep.lambda_deviation) << '\n'
     << "tangent_rank=" << rep.tangent_rank << '\n'
     << "injective=" << (rep.injective ? "true" : "false") << '\n';
  os << "lambda=";
  for (std::size_t k = 0; k < rep.lambda.size(); ++k) os << (k ? "," : "") << format_complex(rep.lambda[k]);
  os << '\n';
  return os.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

std::string render_ambiguities(const Signal& x1, const Signal& x2, double cluster_tol) {
  const AmbiguityBounds bounds = count_bounds(x1, x2);
  const ConvolutionAmbiguities amb = enumerate_convolution_ambiguities(x1, x2, cluster_tol);
  const Signal y = convolve(x1, x2);
  std::ostringstream os;
  os << "lower_bound=" << bounds.lower << '\n' << "upper_bound=" << bounds.upper << '\n';
  os << "classes=" << amb.classes.size() << '\n';
  os << "unstable_clustering=" << (amb.unstable_clustering ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < amb.classes.size(); ++i) {
    const auto& c = amb.classes[i];
    const double err = (convolve(c.x1_rep, c.x2_rep) - y).norm() / y.norm();
    os << "class" << i << ".x1=" << format_signal(c.x1_rep) << '\n'
       << "class" << i << ".x2=" << format_signal(c.x2_rep) << '\n'
       << "class" << i << ".reconvolution_error=" << format_double(err) << '\n';
  }
  return os.str();
}

}  // namespace corrlift
