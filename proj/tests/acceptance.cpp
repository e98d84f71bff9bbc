// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Acceptance suite. Each check prints one PASS/FAIL line; the process
// exits non-zero if any check fails. Thresholds are fixed here, not
// configurable.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "mmtss/gradcheck.hpp"
#include "mmtss/mask.hpp"
#include "mmtss/metrics.hpp"
#include "mmtss/mixture.hpp"
#include "mmtss/pipeline.hpp"
#include "mmtss/prng.hpp"
#include "mmtss/spatial_features.hpp"
#include "mmtss/stft.hpp"
#include "mmtss/wav_io.hpp"
#include "support.hpp"

using namespace mmtss;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %-34s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

MultiChannelWaveform random_multichannel(uint64_t seed, int channels, double seconds) {
  MultiChannelWaveform wave;
  wave.sample_rate = 16000;
  const auto len = static_cast<Eigen::Index>(seconds * 16000);
  wave.samples.resize(channels, len);
  for (int u = 0; u < channels; ++u) {
    wave.samples.row(u) =
        testing::random_vector(seed + static_cast<uint64_t>(u), len, 0.5).transpose();
  }
  return wave;
}

// --- 1) STFT/iSTFT reconstruction plus featurization RTF ------------------

void check_stft_reconstruction_and_rtf() {
  const StftConfig cfg;
  Prng rng(101);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double seconds = rng.uniform(2.0, 10.0);
    const auto wave = random_multichannel(200 + static_cast<uint64_t>(trial) * 16, 9, seconds);
    const auto rebuilt = istft(stft(wave, cfg), cfg);

    const Eigen::Index lo = cfg.window_length - cfg.hop;
    const Eigen::Index hi =
        std::min(wave.length() - cfg.window_length + cfg.hop, rebuilt.length());
    double err = 0.0, ref = 0.0;
    for (Eigen::Index u = 0; u < 9; ++u) {
      err += (rebuilt.samples.block(u, lo, 1, hi - lo) -
              wave.samples.block(u, lo, 1, hi - lo))
                 .squaredNorm();
      ref += wave.samples.block(u, lo, 1, hi - lo).squaredNorm();
    }
    worst_rel = std::max(worst_rel, std::sqrt(err / ref));
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "interior rel L2 error %.2e (bar 1e-6)", worst_rel);
  report("stft-istft-reconstruction", worst_rel <= 1e-6, detail);

  // RTF of the full featurization of 10 s of 9-channel audio
  const auto wave = random_multichannel(300, 9, 10.0);
  const auto geom = default_array_geometry(16000);
  FeaturizeOptions options;
  double best_rtf = 1e9;
  for (int rep = 0; rep < 3; ++rep) {
    const auto timing = measure_rtf(
        [&]() { featurize_mixture(wave, 63.0, std::nullopt, geom, options); }, 10.0);
    best_rtf = std::min(best_rtf, timing.rtf);
  }
  std::snprintf(detail, sizeof(detail), "RTF %.4f (bar 0.05)", best_rtf);
  report("featurization-rtf", best_rtf < 0.05, detail);
}

// --- 2) DF plane-wave oracle ----------------------------------------------

void check_df_plane_wave() {
  const auto geom = default_array_geometry(16000);
  const StftConfig cfg;
  Prng rng(401);
  double worst_true = 5.0, worst_away = -5.0;
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = rng.uniform(10.0, 170.0);
    const auto pw =
        testing::make_plane_wave(geom, theta, 0.6, cfg.fft_size, 500 + static_cast<uint64_t>(trial));
    const auto spec = stft(pw.wave, cfg);
    const auto ipd = compute_ipd(spec, geom);
    const auto df_true = compute_df(ipd, compute_tpd(geom, theta, cfg.freq_bins()));
    const double away = theta <= 90.0 ? theta + 90.0 : theta - 90.0;
    const auto df_away = compute_df(ipd, compute_tpd(geom, away, cfg.freq_bins()));

    double mean_true = 0.0, mean_away = 0.0;
    for (int bin : pw.active_bins) {
      mean_true += df_true.planes[0].col(bin).mean();
      mean_away += df_away.planes[0].col(bin).mean();
    }
    mean_true /= static_cast<double>(pw.active_bins.size());
    mean_away /= static_cast<double>(pw.active_bins.size());
    worst_true = std::min(worst_true, mean_true);
    worst_away = std::max(worst_away, mean_away);
    ok = ok && mean_true >= 0.95 * 5.0 && mean_away <= 0.5 * 5.0;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "min DF(theta)=%.3f (bar 4.75), max DF(theta+/-90)=%.3f (bar 2.5)", worst_true,
                worst_away);
  report("df-plane-wave-oracle", ok, detail);
}

// --- 3) RIR physical checks -----------------------------------------------

void check_rir_physics() {
  Prng rng(601);
  double worst_delay_err = 0.0;
  double worst_t60_rel = 0.0;
  bool ok_delay = true, ok_t60 = true;
  for (int trial = 0; trial < 10; ++trial) {
    RoomSpec room;
    room.size = {rng.uniform(4.0, 10.0), rng.uniform(4.0, 8.0), rng.uniform(2.5, 6.0)};
    room.t60 = rng.uniform(0.2, 0.7);
    Eigen::Vector3d src(rng.uniform(0.4, room.size.x() - 0.4),
                        rng.uniform(0.4, room.size.y() - 0.4),
                        rng.uniform(0.4, room.size.z() - 0.4));
    Eigen::Vector3d mic(rng.uniform(0.4, room.size.x() - 0.4),
                        rng.uniform(0.4, room.size.y() - 0.4),
                        rng.uniform(0.4, room.size.z() - 0.4));
    if ((src - mic).norm() < 1.0) {
      mic.x() = mic.x() > room.size.x() / 2 ? mic.x() - 1.2 : mic.x() + 1.2;
    }

    const auto rir = simulate_rir(room, src, mic, 16000, order_for_decay(room, 40.0),
                                  default_rir_length(room, 16000) + 8000);

    const size_t arrival = testing::first_arrival_index(rir);
    const double geometric = (src - mic).norm() / room.sound_speed * 16000.0;
    const double delay_err = std::abs(static_cast<double>(arrival) - geometric);
    worst_delay_err = std::max(worst_delay_err, delay_err);
    ok_delay = ok_delay && delay_err <= 0.5;

    const double est = testing::schroeder_t60(rir, 16000);
    const double rel = std::abs(est - room.t60) / room.t60;
    worst_t60_rel = std::max(worst_t60_rel, rel);
    ok_t60 = ok_t60 && rel <= 0.25;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "worst |arrival - geometric| %.3f samples (bar 0.5)",
                worst_delay_err);
  report("rir-direct-path-delay", ok_delay, detail);
  std::snprintf(detail, sizeof(detail), "worst relative error %.3f (bar 0.25)", worst_t60_rel);
  report("rir-schroeder-t60", ok_t60, detail);
}

// --- 4 & 5) mixture sanity and the oracle bound over one shared set -------

struct SharedSet {
  std::filesystem::path dir;
  std::vector<std::string> ids;
};

SharedSet build_two_speaker_set(const std::filesystem::path& root, int count) {
  SimulationManifest m;
  m.base_seed = 20260810;
  m.count = count;
  m.speaker_count_weights = {0.0, 1.0, 0.0};  // all two-speaker
  m.sources = testing::write_speech_corpus(root / "speech", 12, 3.0, 16000, 7000);
  m.noises = testing::write_noise_corpus(root / "noise", 3, 3.5, 16000, 7100);
  m.t60 = {0.15, 0.5};

  SharedSet set;
  set.dir = root / "mix2";
  std::filesystem::create_directories(set.dir);
  for (int i = 0; i < count; ++i) {
    const auto dir = set.dir / example_id(static_cast<uint64_t>(i));
    write_example(dir, simulate_mixture(m, static_cast<uint64_t>(i)));
    set.ids.push_back(example_id(static_cast<uint64_t>(i)));
  }
  write_dataset_index(set.dir, m, set.ids);
  return set;
}

void check_mixture_and_oracle(const SharedSet& set) {
  const StftConfig cfg;
  const int margin = cfg.window_length - cfg.hop;

  double mix_sum = 0.0, oracle_sum = 0.0;
  int n = 0;
  for (const auto& id : set.ids) {
    const auto meta = read_example_metadata(set.dir / id);
    const auto mixture = read_wav(set.dir / id / "mixture.wav");
    const auto target = read_wav(set.dir / id / "source_0.wav");

    // mixture scored against the reverberant target reference
    const ScoreRecord mix_score =
        score_estimate(id, mixture.samples.row(0).transpose(),
                       target.samples.row(0).transpose(), margin, meta);
    mix_sum += mix_score.si_sdr_db;

    const auto oracle = oracle_separate_example(set.dir / id, cfg);
    oracle_sum += oracle.record.si_sdr_db;
    ++n;
  }
  const double mix_mean = mix_sum / n;
  const double oracle_mean = oracle_sum / n;

  char detail[160];
  std::snprintf(detail, sizeof(detail), "mean mixture SI-SDR %+.2f dB over %d examples "
                                        "(bar [-3, +3])",
                mix_mean, n);
  report("mixture-si-sdr-bracket", mix_mean >= -3.0 && mix_mean <= 3.0, detail);

  std::snprintf(detail, sizeof(detail),
                "oracle %+.2f dB vs mixture %+.2f dB: improvement %.2f dB (bar > 5)",
                oracle_mean, mix_mean, oracle_mean - mix_mean);
  report("oracle-irm-improvement", oracle_mean - mix_mean > 5.0, detail);
}

void check_noise_free_single_speaker(const std::filesystem::path& root) {
  SimulationManifest m;
  m.base_seed = 424242;
  m.count = 5;
  m.speaker_count_weights = {1.0, 0.0, 0.0};
  m.sources = testing::write_speech_corpus(root / "speech1", 6, 2.5, 16000, 8000);
  m.snr_db = std::nullopt;  // noise free
  m.t60 = {0.15, 0.4};

  const auto dir = root / "mix1";
  const StftConfig cfg;
  double worst = 1e9;
  for (int i = 0; i < m.count; ++i) {
    const auto ex_dir = dir / example_id(static_cast<uint64_t>(i));
    write_example(ex_dir, simulate_mixture(m, static_cast<uint64_t>(i)));
    const auto oracle = oracle_separate_example(ex_dir, cfg);
    worst = std::min(worst, oracle.record.si_sdr_db);
  }
  report("oracle-noise-free-1spk", worst >= 40.0,
         "worst SI-SDR " + std::to_string(worst) + " dB (bar 40)");
}

// --- 6 & 7) factorized attention and the rule gate -------------------------

void check_fusion() {
  FusionCheckOptions options;
  options.instances = 100;
  const auto result = run_fusion_checks(options);
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "grad max rel err %.3e (bar 1e-5); simplex err %.3e (bar 1e-12); "
                "hand example err %.3e (bar 1e-9)",
                result.max_grad_rel_error, result.max_simplex_error,
                result.hand_example_error);
  report("factorized-attention", result.passed && result.max_grad_rel_error <= 1e-5 &&
                                     result.max_simplex_error <= 1e-12 &&
                                     result.hand_example_error <= 1e-9,
         detail);

  const RuleAttentionParams init;
  const double at_b = rule_attention_weight(init.b, init);
  const double at_zero = rule_attention_weight(0.0, init);
  const double expected = 2.0 * (1.0 / (1.0 + std::exp(-5.0)) - 0.5);
  bool range_ok = true;
  Prng rng(701);
  for (int i = 0; i < 2000; ++i) {
    const double v = rule_attention_weight(rng.uniform(0.0, 180.0), init);
    if (v < 0.0 || v >= 1.0) range_ok = false;
  }
  std::snprintf(detail, sizeof(detail),
                "att(b)=%g (exact 0); att(0)=%.9f vs %.9f; range [0,1) %s", at_b, at_zero,
                expected, range_ok ? "ok" : "violated");
  report("rule-gate", at_b == 0.0 && std::abs(at_zero - expected) <= 1e-6 && range_ok, detail);
}

// --- 8) CLI determinism across thread counts -------------------------------

std::string slurp(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (f == nullptr) return "<missing:" + path.string() + ">";
  std::string out;
  char buf[65536];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, got);
  std::fclose(f);
  return out;
}

void check_cli_determinism(const std::filesystem::path& root) {
  SimulationManifest m;
  m.base_seed = 31415;
  m.count = 4;
  m.sources = testing::write_speech_corpus(root / "speech_cli", 6, 1.0, 16000, 9000);
  m.noises = testing::write_noise_corpus(root / "noise_cli", 2, 1.2, 16000, 9100);
  m.t60 = {0.15, 0.3};
  save_manifest(root / "manifest.json", m);

  const std::string base = std::string(MMTSS_CLI_PATH) + " simulate --manifest " +
                           (root / "manifest.json").string();
  const int rc1 = std::system(
      (base + " --out " + (root / "t1").string() + " --threads 1 >/dev/null 2>&1").c_str());
  const int rc2 = std::system(
      (base + " --out " + (root / "t4").string() + " --threads 4 >/dev/null 2>&1").c_str());

  bool identical = rc1 == 0 && rc2 == 0;
  size_t compared = 0;
  if (identical) {
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root / "t1")) {
      if (!entry.is_regular_file()) continue;
      const auto rel = std::filesystem::relative(entry.path(), root / "t1");
      if (slurp(entry.path()) != slurp(root / "t4" / rel)) {
        identical = false;
        break;
      }
      ++compared;
    }
  }
  report("cli-simulate-determinism", identical && compared > 0,
         "compared " + std::to_string(compared) + " files across --threads 1 vs 4");
}

// --- 9) SI-SDR properties ---------------------------------------------------

void check_si_sdr_properties() {
  const Eigen::VectorXd ref = testing::random_vector(801, 16000);
  const Eigen::VectorXd est = ref + 0.05 * testing::random_vector(802, 16000);
  const double base = si_sdr(est, ref);
  double worst_scale = 0.0;
  Prng rng(803);
  for (int i = 0; i < 50; ++i) {
    const double alpha = std::exp(rng.uniform(-4.0, 4.0)) * (i % 2 == 0 ? 1.0 : -1.0);
    worst_scale = std::max(worst_scale, std::abs(si_sdr(alpha * est, ref) - base));
  }

  // orthogonal construction: exact energy-ratio score
  Eigen::VectorXd x = ref.array() - ref.mean();
  Eigen::VectorXd noise = testing::random_vector(804, 16000);
  noise.array() -= noise.mean();
  noise -= (noise.dot(x) / x.squaredNorm()) * x;
  double worst_orth = 0.0;
  for (double ratio : {0.1, 1.0, 7.5}) {
    const Eigen::VectorXd n = noise * std::sqrt(ratio * x.squaredNorm() / noise.squaredNorm());
    const double expected = 10.0 * std::log10(1.0 / ratio);
    worst_orth = std::max(worst_orth, std::abs(si_sdr(x + n, x) - expected));
  }

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "scale drift %.2e dB (bar 1e-9); orthogonal error %.2e dB (bar 1e-6)",
                worst_scale, worst_orth);
  report("si-sdr-properties", worst_scale <= 1e-9 && worst_orth <= 1e-6, detail);
}

}  // namespace

int main() {
  const auto root = testing::make_temp_dir("acceptance");
  std::printf("acceptance work directory: %s\n", root.string().c_str());

  check_stft_reconstruction_and_rtf();
  check_df_plane_wave();
  check_rir_physics();

  const auto set = build_two_speaker_set(root, 100);
  check_mixture_and_oracle(set);
  check_noise_free_single_speaker(root);

  check_fusion();
  check_cli_determinism(root);
  check_si_sdr_properties();

  std::filesystem::remove_all(root);
  if (g_failures > 0) {
    std::printf("%d acceptance check(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance checks passed\n");
  return 0;
}
