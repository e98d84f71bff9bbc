// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/metrics.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {

void check_pair(const Eigen::VectorXd& est, const Eigen::VectorXd& ref) {
  if (est.size() != ref.size()) throw ValidationError("score: length mismatch");
  if (est.size() == 0) throw ValidationError("score: empty signals");
  if (ref.isZero(0.0)) throw ValidationError("score: reference is identically zero");
  if (!est.allFinite() || !ref.allFinite()) throw ValidationError("score: non-finite input");
}

double ratio_db(double signal_energy, double error_energy) {
  if (error_energy <= 0.0) return kScoreCapDb;
  return std::min(10.0 * std::log10(signal_energy / error_energy), kScoreCapDb);
}

// Kahan-compensated accumulator so aggregation stays order-independent
// at double precision.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct BucketAccumulator {
  CompensatedSum si, sdr;
  int count = 0;
  void add(const ScoreRecord& r) {
    si.add(r.si_sdr_db);
    sdr.add(r.sdr_db);
    ++count;
  }
  BucketStats stats() const {
    BucketStats s;
    s.count = count;
    if (count > 0) {
      s.mean_si_sdr_db = si.sum / count;
      s.mean_sdr_db = sdr.sum / count;
    }
    return s;
  }
};

}  // namespace

double si_sdr(const Eigen::VectorXd& est, const Eigen::VectorXd& ref) {
  check_pair(est, ref);
  const Eigen::VectorXd x = ref.array() - ref.mean();
  const Eigen::VectorXd x_hat = est.array() - est.mean();
  const double ref_energy = x.squaredNorm();
  if (ref_energy <= 0.0) throw ValidationError("si_sdr: zero-mean reference is zero");
  const double scale = x_hat.dot(x) / ref_energy;
  const Eigen::VectorXd target = scale * x;
  const Eigen::VectorXd error = x_hat - target;
  return ratio_db(target.squaredNorm(), error.squaredNorm());
}

double sdr_simple(const Eigen::VectorXd& est, const Eigen::VectorXd& ref) {
  check_pair(est, ref);
  const Eigen::VectorXd x = ref.array() - ref.mean();
  const Eigen::VectorXd x_hat = est.array() - est.mean();
  return ratio_db(x.squaredNorm(), (x_hat - x).squaredNorm());
}

std::optional<std::string> angle_bucket(const ScoreRecord& record) {
  if (record.speaker_count <= 1 || !record.angle_difference_deg) return std::nullopt;
  const double ad = *record.angle_difference_deg;
  if (ad < 15.0) return "<15";
  if (ad < 45.0) return "15-45";
  if (ad < 90.0) return "45-90";
  return ">=90";
}

BucketReport bucket_report(const std::vector<ScoreRecord>& records) {
  if (records.empty()) throw ValidationError("bucket_report: no records");

  std::map<int, BucketAccumulator> by_count;
  std::map<std::string, BucketAccumulator> by_angle;
  BucketAccumulator overall;
  CompensatedSum rtf_sum;
  int rtf_count = 0;

  for (const auto& r : records) {
    overall.add(r);
    by_count[r.speaker_count].add(r);
    if (const auto bucket = angle_bucket(r)) by_angle[*bucket].add(r);
    if (r.rtf) {
      rtf_sum.add(*r.rtf);
      ++rtf_count;
    }
  }

  BucketReport report;
  for (const auto& [count, acc] : by_count) report.by_speaker_count[count] = acc.stats();
  for (const auto& [key, acc] : by_angle) report.by_angle[key] = acc.stats();
  report.overall = overall.stats();
  if (rtf_count > 0) report.mean_rtf = rtf_sum.sum / rtf_count;
  return report;
}

std::string BucketReport::to_json() const {
  nlohmann::json j;
  auto stats_json = [](const BucketStats& s) {
    return nlohmann::json{{"count", s.count},
                          {"mean_si_sdr_db", s.mean_si_sdr_db},
                          {"mean_sdr_db", s.mean_sdr_db}};
  };
  for (const auto& [count, s] : by_speaker_count) {
    j["speakers"][std::to_string(count) + "spk"] = stats_json(s);
  }
  for (const auto& [key, s] : by_angle) j["angle"][key] = stats_json(s);
  j["overall"] = stats_json(overall);
  if (mean_rtf) j["mean_rtf"] = *mean_rtf;
  return j.dump(2);
}

std::string BucketReport::to_table() const {
  std::string out;
  char line[160];

  auto row = [&](const char* name, const BucketStats& s) {
    std::snprintf(line, sizeof(line), "%-10s %8d %12.2f %12.2f\n", name, s.count,
                  s.mean_si_sdr_db, s.mean_sdr_db);
    out += line;
  };

  std::snprintf(line, sizeof(line), "%-10s %8s %12s %12s\n", "bucket", "count",
                "SI-SDR (dB)", "SDR (dB)");
  out += line;
  for (const auto& [count, s] : by_speaker_count) {
    row((std::to_string(count) + "spk").c_str(), s);
  }
  for (const char* key : {"<15", "15-45", "45-90", ">=90"}) {
    const auto it = by_angle.find(key);
    if (it != by_angle.end()) row(key, it->second);
  }
  row("average", overall);
  if (mean_rtf) {
    std::snprintf(line, sizeof(line), "%-10s %33.4f\n", "RTF", *mean_rtf);
    out += line;
  }
  return out;
}

RtfResult measure_rtf(const std::function<void()>& process, double audio_seconds) {
  if (audio_seconds <= 0.0) throw ValidationError("rtf: audio duration must be positive");
  const auto start = std::chrono::steady_clock::now();
  process();
  const auto stop = std::chrono::steady_clock::now();
  RtfResult result;
  result.seconds = std::chrono::duration<double>(stop - start).count();
  result.rtf = result.seconds / audio_seconds;
  return result;
}

}  // namespace mmtss
