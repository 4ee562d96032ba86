#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "congestion/harness.hpp"
#include "congestion/utility.hpp"

namespace congestion {

/// I/O failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Numbers are written with six decimals.
std::string format_number(double value);

/// `episode,mean_G,std_G`; std_G is empty off-checkpoint. A positive
/// smoothing window replaces mean_G by its trailing moving average.
void write_learning_curve_csv(const MetricsSeries& series, const std::filesystem::path& file,
                              int smoothing_window = 0);

/// `resource_id,mean_count,std_count`
void write_histogram_csv(std::span<const HistogramBin> bins, const std::filesystem::path& file);

/// `entity_id,count` rows followed by one `max_G,<value>` record.
void write_oracle_csv(std::span<const std::string> ids, std::span<const int> counts, double max_g,
                      const std::filesystem::path& file);

/// `agents,reward`
void write_abstract_curve_csv(std::span<const CurvePoint> curve, const std::filesystem::path& file);

/// Mean G line with standard-deviation error bars at checkpoints.
void write_learning_curve_svg(const MetricsSeries& series, const std::filesystem::path& file,
                              const std::string& title, int smoothing_window = 0);

struct CurveRow {
  int episode = 0;
  double mean_g = 0.0;
  std::optional<double> std_g;
};
std::vector<CurveRow> read_learning_curve_csv(const std::filesystem::path& file);

struct OracleRecord {
  std::vector<std::string> ids;
  std::vector<int> counts;
  double max_g = 0.0;
};
OracleRecord read_oracle_csv(const std::filesystem::path& file);

struct MetricsFiles {
  std::filesystem::path curve;
  std::filesystem::path histogram;
  std::optional<std::filesystem::path> plot;
};

/// Writes `<stem>_curve.csv`, `<stem>_hist.csv` and optionally
/// `<stem>_curve.svg` into `dir`, creating it if needed.
MetricsFiles write_metrics(const MetricsSeries& series, const std::filesystem::path& dir,
                           const std::string& stem, int smoothing_window = 0, bool plot = false);

}  // namespace congestion
