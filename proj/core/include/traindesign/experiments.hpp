#ifndef TRAINDESIGN_EXPERIMENTS_HPP
#define TRAINDESIGN_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "traindesign/rng.hpp"
#include "traindesign/types.hpp"

namespace traindesign {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One Monte Carlo study. Defaults come from default_config(experiment);
// file and command-line overrides are applied on top and validated.
struct ExperimentConfig {
  std::string experiment;  // nmse | lopt | eq | zf | outage
  int n_t = 4;
  int n_r = 2;
  int b = 6;               // training length
  cplx rho_rt = 0.9;       // transmit channel correlation
  cplx rho_rr = 0.9;       // receive channel correlation
  cplx rho_sq = 0.9;       // temporal training-noise correlation
  cplx rho_sr = 0.9;       // spatial noise correlation
  double snr_db = 15.0;    // data-phase lambda_x / sigma^2
  double mu = 0.01;        // block-to-block channel innovation scale
  double alpha = 0.99;     // confidence level of the guaranteed designs
  double gamma = 1.0;      // accuracy weight for the outage study
  double ar_noise = 0.9;   // temporal AR coefficient of data-phase noise
  std::vector<double> gamma_grid_db;  // x-axis for nmse/lopt/eq/zf
  std::vector<double> power_grid_db;  // x-axis for outage
  int trials = 2000;
  int blocks = 1;          // channel evolution steps per trial (eq/zf)
  int data_symbols = 50;   // data vectors per block (zf)
  int threads = 1;
  std::string estimator = "mvu";  // lopt flavor: mvu | mmse
  std::uint64_t seed = 1;
  std::vector<std::string> schemes;  // subset filter; empty = all
};

ExperimentConfig default_config(const std::string& experiment);

// `key = value` lines; `#` starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Correlation values accept "0.9" or magnitude@degrees like "0.9@180".
cplx parse_correlation(const std::string& value);

void apply_overrides(ExperimentConfig& cfg,
                     const std::map<std::string, std::string>& kv);
void validate_config(const ExperimentConfig& cfg);

// Scheme tags an experiment emits, in output order.
std::vector<std::string> scheme_names(const ExperimentConfig& cfg);

struct CurveRow {
  double x;            // gamma (dB) or training power (dB)
  std::string scheme;
  double metric_mean;
  double metric_stderr;  // sample std / sqrt(trials)
  double energy;         // equalized tr(P P^H) at this point
  int trials;
  std::uint64_t seed;
};

// Raw per-trial metric values behind one curve point, kept for paired
// significance tests between schemes.
struct SampleSet {
  double x;
  std::string scheme;
  std::vector<double> values;
};

struct ExperimentResult {
  std::vector<CurveRow> rows;
  std::vector<SampleSet> samples;
};

ExperimentResult run_nmse_vs_gamma(const ExperimentConfig& cfg);
ExperimentResult run_l_optimality(const ExperimentConfig& cfg);
ExperimentResult run_equalization(const ExperimentConfig& cfg);
ExperimentResult run_zf(const ExperimentConfig& cfg);
ExperimentResult run_outage(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Gray-mapped unit-energy QPSK vectors, zero-forcing precoded with the
// pseudoinverse of Hhat, sent through H with spatially colored AWGN, and
// detected entrywise by the nearest constellation point. Returns the bit
// error count. bits.size() must be a multiple of 2 * n_R.
int qpsk_roundtrip(const std::vector<int>& bits, const CMatrix& H,
                   const CMatrix& Hhat, double lambda_x, double sigma2,
                   const CMatrix& S_R, StreamRng& rng);

// Header `x,scheme,metric_mean,metric_stderr,energy,trials,seed`; numeric
// fields rendered with 17 significant digits so parsing is bit-exact.
void emit_csv(const std::vector<CurveRow>& rows, const std::string& path);
std::vector<CurveRow> parse_csv(const std::string& path);

}  // namespace traindesign

#endif
