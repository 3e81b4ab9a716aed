#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "covertlab/warden.hpp"

namespace covertlab {

enum class ExperimentKind {
  sqrt_awgn,         // sparse keyed scheme, fixed amplitude, q = tau/sqrt(n)
  exponent_awgn,     // total power driven along c * n^s
  sqrt_bsc,          // low-weight codebook over a BSC pair
  timing,            // one active slot among T, warden watches all of them
  noise_uncertainty  // warden's noise level wanders inside [s2/rho, s2*rho]
};

const char* experiment_name(ExperimentKind kind);

/// Flat key = value experiment description. Parse fills defaults, validate
/// rejects bad or out-of-place fields with the offending field name.
struct SweepConfig {
  ExperimentKind experiment = ExperimentKind::sqrt_awgn;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t trials = 10000;
  std::uint64_t master_seed = 1;
  std::vector<std::string> detectors;  // empty -> experiment default set

  // sqrt_awgn / exponent_awgn / timing
  double tau = 1.0;
  double a = 1.0;
  double sigma_b2 = 1.0;
  double sigma_w2 = 1.0;
  std::string ecc = "repetition_auto";  // or "repetition:<m>" or "ml:<k>"

  // exponent_awgn: total power = power_coeff * n^s through a^2 = (c/tau) n^(s-1/2)
  double s = 0.7;
  double power_coeff = 0.3;

  // sqrt_bsc
  double p_b = 0.05;
  double p_w = 0.2;
  double tau_c = 1.0;  // q_c = tau_c / sqrt(n)
  bool keyless = true;  // the codebook is public; requires p_w > p_b
  std::uint32_t k_cap = 8;

  // timing
  std::vector<std::uint64_t> t_grid{1, 4, 16, 64};

  // noise_uncertainty
  double sigma2 = 1.0;     // center of the warden's noise band
  double rho = 2.0;        // band is [sigma2/rho, sigma2*rho]
  double p_ratio = 0.2;    // per-use power P = p_ratio * sigma2
  double k_fraction = 0.01;  // message bits k = floor(k_fraction * n)

  static SweepConfig parse(std::istream& in);
  static SweepConfig parse_file(const std::string& path);
  void validate() const;  // throws ConfigError naming the field
};

/// One grid point of one experiment, plus every detector's report on it.
struct SweepRow {
  std::string experiment;
  std::uint64_t n = 0;        // channel uses the warden observes
  double total_power = 0.0;   // mean realized emitted power (BSC: mean weight)
  double bits_k = 0.0;        // mean per-trial message bits
  double bob_err = 0.0;
  double bob_ci = 0.0;        // Wilson 95% halfwidth
  std::vector<DetectorReport> detector_reports;
  double pinsker = 0.0;       // analytic floor on any detector's error sum
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t numeric_failures = 0;  // diagnostics, not in the main CSV
  double wall_seconds = 0.0;           // diagnostics, not in the main CSV
};

std::vector<SweepRow> run_sqrt_sweep(const SweepConfig& config, unsigned jobs = 1);
std::vector<SweepRow> run_exponent_sweep(const SweepConfig& config, unsigned jobs = 1);
std::vector<SweepRow> run_bsc_sweep(const SweepConfig& config, unsigned jobs = 1);
std::vector<SweepRow> run_timing_experiment(const SweepConfig& config, unsigned jobs = 1);
std::vector<SweepRow> run_noise_uncertainty(const SweepConfig& config, unsigned jobs = 1);

/// Dispatch on config.experiment.
std::vector<SweepRow> run_experiment(const SweepConfig& config, unsigned jobs = 1);

/// Main results table: header
/// experiment,n,total_power,bits_k,bob_err,bob_ci,detector,det_sum_err,det_ci,pinsker_floor,seed,wall_s
/// one line per (row, detector), 6 significant digits, deterministic order.
/// The wall_s column is pinned to 0 so reruns are byte-identical; measured
/// times go to the diagnostics file instead.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv_file(const std::vector<SweepRow>& rows, const std::string& path);

/// Timing and failure-count appendix (not byte-stable across machines).
void emit_diag_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace covertlab
