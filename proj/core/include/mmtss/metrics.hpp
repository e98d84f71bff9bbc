// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_METRICS_HPP_
#define MMTSS_METRICS_HPP_

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mmtss {

// Scores are capped at +60 dB where the error term is numerically zero.
inline constexpr double kScoreCapDb = 60.0;

// Scale-invariant SDR: both signals are zero-meaned, the estimate is
// decomposed against the projection onto the reference, and the ratio of
// target to error energy is reported in dB.
double si_sdr(const Eigen::VectorXd& est, const Eigen::VectorXd& ref);

// Plain SDR without the 512-tap projection of the BSS-eval family:
// 10*log10(|x|^2 / |x_hat - x|^2) after zero-meaning. A simplified,
// clearly-labeled substitute; scale errors hurt this score.
double sdr_simple(const Eigen::VectorXd& est, const Eigen::VectorXd& ref);

struct ScoreRecord {
  std::string id;
  double si_sdr_db = 0.0;
  double sdr_db = 0.0;
  int speaker_count = 0;
  std::optional<double> angle_difference_deg;  // empty for 1spk scenes
  std::optional<double> rtf;
};

struct BucketStats {
  int count = 0;
  double mean_si_sdr_db = 0.0;
  double mean_sdr_db = 0.0;
};

// Means per speaker count {1,2,3} and per angle-difference bucket
// {<15, [15,45), [45,90), >=90} degrees, plus the overall average.
// 1-speaker records never enter the angle buckets; empty buckets are
// absent from the maps.
struct BucketReport {
  std::map<int, BucketStats> by_speaker_count;
  std::map<std::string, BucketStats> by_angle;  // keys: <15, 15-45, 45-90, >=90
  BucketStats overall;
  std::optional<double> mean_rtf;

  std::string to_json() const;
  std::string to_table() const;  // aligned plain text
};

BucketReport bucket_report(const std::vector<ScoreRecord>& records);

// Angle bucket key for one record, or nullopt for 1spk records.
std::optional<std::string> angle_bucket(const ScoreRecord& record);

struct RtfResult {
  double seconds = 0.0;
  double rtf = 0.0;
};

// Wall-clock seconds of `process` divided by the audio duration.
RtfResult measure_rtf(const std::function<void()>& process, double audio_seconds);

}  // namespace mmtss

#endif  // MMTSS_METRICS_HPP_
