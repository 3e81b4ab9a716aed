// Command line front end: `run` executes an experiment config and writes the
// results table, `detect` applies a single detector statistic to a transcript
// file, `demo` walks one covert round trip with a verbose trace.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covertlab/channels.hpp"
#include "covertlab/covert_awgn.hpp"
#include "covertlab/errors.hpp"
#include "covertlab/experiments.hpp"
#include "covertlab/rng.hpp"
#include "covertlab/stats.hpp"
#include "covertlab/warden.hpp"

namespace {

using namespace covertlab;

struct Transcript {
  bool is_awgn = false;
  std::uint64_t n = 0;
  std::vector<double> samples;     // awgn
  std::vector<std::uint8_t> bits;  // bsc
};

// Text format: first line "awgn n=<n>" or "bsc n=<n>", then n whitespace
// separated samples (reals for awgn, 0/1 for bsc).
Transcript load_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transcript file: " + path);
  std::string header;
  if (!std::getline(in, header))
    throw InvalidInput("transcript file is empty: " + path);

  Transcript t;
  std::istringstream hs(header);
  std::string kind, n_field;
  hs >> kind >> n_field;
  if (kind == "awgn")
    t.is_awgn = true;
  else if (kind == "bsc")
    t.is_awgn = false;
  else
    throw InvalidInput("transcript header must start with 'awgn' or 'bsc', "
                       "got '" + header + "'");
  if (n_field.rfind("n=", 0) != 0)
    throw InvalidInput("transcript header needs 'n=<count>', got '" + header +
                       "'");
  try {
    t.n = std::stoull(n_field.substr(2));
  } catch (const std::exception&) {
    throw InvalidInput("bad sample count in transcript header: '" + header +
                       "'");
  }

  if (t.is_awgn) {
    t.samples.reserve(t.n);
    double v = 0.0;
    while (in >> v) t.samples.push_back(v);
    if (t.samples.size() != t.n)
      throw InvalidInput("transcript declares n=" + std::to_string(t.n) +
                         " but contains " + std::to_string(t.samples.size()) +
                         " samples");
  } else {
    t.bits.reserve(t.n);
    int v = 0;
    while (in >> v) {
      if (v != 0 && v != 1)
        throw InvalidInput("bsc transcript entries must be 0 or 1");
      t.bits.push_back(static_cast<std::uint8_t>(v));
    }
    if (t.bits.size() != t.n)
      throw InvalidInput("transcript declares n=" + std::to_string(t.n) +
                         " but contains " + std::to_string(t.bits.size()) +
                         " bits");
  }
  return t;
}

int cmd_run(const std::string& config_path, std::int64_t seed_override,
            std::int64_t trials_override, const std::string& out_dir,
            unsigned jobs) {
  SweepConfig config = SweepConfig::parse_file(config_path);
  if (seed_override >= 0)
    config.master_seed = static_cast<std::uint64_t>(seed_override);
  if (trials_override >= 0)
    config.trials = static_cast<std::uint64_t>(trials_override);
  config.validate();

  const std::string name = experiment_name(config.experiment);
  std::printf("running %s: %zu grid point(s), %" PRIu64
              " trials per hypothesis, seed %" PRIu64 ", jobs %u\n",
              name.c_str(), config.n_grid.size(), config.trials,
              config.master_seed, jobs);

  const std::vector<SweepRow> rows = run_experiment(config, jobs);

  std::filesystem::create_directories(out_dir);
  const std::string results_path =
      (std::filesystem::path(out_dir) / (name + ".csv")).string();
  const std::string diag_path =
      (std::filesystem::path(out_dir) / (name + "_diag.csv")).string();
  emit_csv_file(rows, results_path);
  emit_diag_csv(rows, diag_path);

  for (const SweepRow& row : rows) {
    std::printf("  n=%-9" PRIu64 " bits=%-8.4g bob_err=%-8.4g", row.n,
                row.bits_k, row.bob_err);
    for (const DetectorReport& rep : row.detector_reports)
      std::printf(" %s=%.4g", rep.detector_name.c_str(), rep.sum_error);
    std::printf(" floor=%.4g  (%.1fs)\n", row.pinsker, row.wall_seconds);
  }
  std::printf("wrote %s and %s\n", results_path.c_str(), diag_path.c_str());
  return 0;
}

int cmd_detect(const std::string& path, std::string detector, double q,
               double a, double sigma_w2, double threshold,
               bool have_threshold) {
  const Transcript t = load_transcript(path);
  if (detector.empty()) detector = t.is_awgn ? "radiometer" : "count";

  double stat = 0.0;
  if (detector == "radiometer") {
    if (!t.is_awgn)
      throw InvalidInput("the radiometer reads awgn transcripts");
    stat = radiometer_stat(t.samples);
  } else if (detector == "lrt") {
    if (!t.is_awgn)
      throw InvalidInput("the lrt detector reads awgn transcripts");
    const AwgnLrt lrt(q, a, sigma_w2);
    stat = lrt.stat(t.samples);
  } else if (detector == "count") {
    if (t.is_awgn)
      throw InvalidInput("the count detector reads bsc transcripts");
    stat = static_cast<double>(count_stat(t.bits));
  } else {
    throw InvalidInput("unknown detector '" + detector +
                       "' (choose radiometer, lrt or count)");
  }

  std::printf("transcript: %s, n=%" PRIu64 "\n", t.is_awgn ? "awgn" : "bsc",
              t.n);
  std::printf("detector:   %s\n", detector.c_str());
  if (detector == "lrt")
    std::printf("model:      q=%g a=%g sigma_w2=%g\n", q, a, sigma_w2);
  std::printf("stat:       %.10g\n", stat);
  if (have_threshold) {
    // For all three statistics, larger values point at a transmission.
    std::printf("threshold:  %.10g\n", threshold);
    std::printf("decision:   %s\n",
                stat > threshold ? "signal present" : "all quiet");
  }
  return 0;
}

int cmd_demo(std::uint64_t seed) {
  const std::uint64_t n = 2000;
  const double tau = 1.0, a = 1.0, sigma_b2 = 1.0, sigma_w2 = 1.0;
  std::printf("covert round trip, n=%" PRIu64 " uses, seed %" PRIu64 "\n\n",
              n, seed);

  SchemeParams params = SchemeParams::sqrt_law(n, tau, a, Repetition{1});
  std::printf("[scheme]   slot probability q = tau/sqrt(n) = %.4f -> about "
              "%.0f of %" PRIu64 " uses carry energy\n",
              params.q, params.q * static_cast<double>(n), n);

  RandomStream rng = make_rng(seed, "demo");
  SecretKey key = gen_key(params, rng);
  const std::uint64_t slot_count = key.slots.size();
  std::printf("[key]      %" PRIu64 " secret slots drawn (first few:", slot_count);
  for (std::size_t i = 0; i < key.slots.size() && i < 5; ++i)
    std::printf(" %u", key.slots[i]);
  std::printf(" ...), one pad bit per slot\n");

  const RepetitionPlan plan = plan_auto_repetition(slot_count, a, sigma_b2);
  params.ecc = Repetition{plan.m};
  std::printf("[plan]     %" PRIu64 " message bits, each spread over %u slots "
              "(union-bound aim: block error <= 0.1)\n",
              plan.k, plan.m);

  std::vector<std::uint8_t> message(plan.k);
  for (auto& b : message) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  std::printf("[message]  ");
  for (std::uint8_t b : message) std::printf("%d", b);
  std::printf("\n");

  const std::vector<double> x = encode(message, key, params);
  double power = 0.0;
  for (double v : x) power += v * v;
  std::printf("[encode]   coded bits xor pad -> +-%.1f on the slots; total "
              "power %.1f (vs n*sigma2 = %.0f ambient)\n",
              a, power, static_cast<double>(n) * sigma_w2);

  RandomStream bob_noise = rng.derive("bob_channel");
  const std::vector<double> y_bob =
      awgn_apply(x, AwgnParams{sigma_b2}, bob_noise);
  const std::vector<std::uint8_t> decoded = decode(y_bob, key, params);
  const bool ok = decoded == message;
  std::printf("[receiver] soft-combines each bit's slots: %s\n",
              ok ? "message recovered exactly" : "DECODE ERROR");

  RandomStream warden_noise = rng.derive("warden_channel");
  const std::vector<double> y_warden =
      awgn_apply(x, AwgnParams{sigma_w2}, warden_noise);
  std::vector<double> quiet(n, 0.0);
  RandomStream quiet_noise = rng.derive("quiet_channel");
  const std::vector<double> y_quiet =
      awgn_apply(quiet, AwgnParams{sigma_w2}, quiet_noise);

  const AwgnLrt lrt(params.q, a, sigma_w2);
  std::printf("\n[adversary] statistic        during tx     all quiet\n");
  std::printf("            radiometer      %9.4f     %9.4f   (mean power)\n",
              radiometer_stat(y_warden), radiometer_stat(y_quiet));
  std::printf("            lrt             %9.4f     %9.4f   (log "
              "likelihood ratio)\n",
              lrt.stat(y_warden), lrt.stat(y_quiet));

  const double kl = kl_divergence_numeric(
      MixtureSpec::sparse_bam(params.q, a, sigma_w2),
      MixtureSpec::gaussian(0.0, sigma_w2));
  std::printf("\n[floor]    per-sample divergence %.3g nats -> any detector's "
              "pfa + pmd >= %.3f at this n\n",
              kl, pinsker_floor(n, kl));
  std::printf("           (energy rides on ~sqrt(n) of n uses, so the "
              "transcript stays statistically close to noise)\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covert communication experiments: covert schemes, adversary "
               "detectors, Monte Carlo sweeps"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir = ".";
  std::int64_t seed_override = -1, trials_override = -1;
  unsigned jobs = 1;
  CLI::App* run = app.add_subcommand(
      "run", "execute an experiment config and write the results CSV");
  run->add_option("config", config_path, "experiment config file (key = value)")
      ->required();
  run->add_option("--seed", seed_override, "override the master seed");
  run->add_option("--trials", trials_override,
                  "override trials per hypothesis");
  run->add_option("--out", out_dir, "output directory (default .)");
  run->add_option("--jobs", jobs,
                  "worker threads; affects wall time only, never results");

  // detect
  std::string transcript_path, detector;
  double q = 0.01, a = 1.0, sigma_w2 = 1.0, threshold = 0.0;
  CLI::App* detect = app.add_subcommand(
      "detect", "apply one detector statistic to a transcript file");
  detect->add_option("transcript", transcript_path,
                     "transcript file: 'awgn n=<n>' or 'bsc n=<n>' header, "
                     "then samples")
      ->required();
  detect->add_option("--detector", detector,
                     "radiometer | lrt | count (default by transcript kind)");
  detect->add_option("--q", q, "lrt model: slot probability");
  detect->add_option("--a", a, "lrt model: slot amplitude");
  detect->add_option("--sigma-w2", sigma_w2, "lrt model: noise power");
  CLI::Option* thr =
      detect->add_option("--threshold", threshold,
                         "also decide: signal present iff stat > threshold");

  // demo
  std::uint64_t demo_seed = 4242;
  CLI::App* demo = app.add_subcommand(
      "demo", "one verbose covert encode/channel/decode round trip");
  demo->add_option("--seed", demo_seed, "demo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed_override, trials_override, out_dir,
                     jobs);
    if (detect->parsed())
      return cmd_detect(transcript_path, detector, q, a, sigma_w2, threshold,
                        thr->count() > 0);
    if (demo->parsed()) return cmd_demo(demo_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error (" << e.field << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
