#ifndef USAT_DELAY_HPP_
#define USAT_DELAY_HPP_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "usat/repr.hpp"

namespace usat {

// Recorded loop delays in milliseconds. Non-empty, every value finite and > 0.
class DelaySamples {
 public:
  explicit DelaySamples(std::vector<double> values_ms, std::string source = {});
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const std::string& source() const { return source_; }

 private:
  std::vector<double> values_;
  std::string source_;
};

// Evenly spaced bins over [lo, hi]. Bin i covers [lo + i*w, lo + (i+1)*w);
// the last bin is closed on the right so the maximum is counted.
struct DelayHistogram {
  std::size_t n_bins = 0;
  double lo = 0.0;
  double hi = 0.0;
  double bin_width = 0.0;
  std::vector<std::uint64_t> counts;
  std::vector<double> rel_prob;  // counts[i] / total
  std::uint64_t total = 0;

  double left_edge(std::size_t i) const { return lo + static_cast<double>(i) * bin_width; }
  double right_edge(std::size_t i) const {
    return i + 1 == n_bins ? hi : lo + static_cast<double>(i + 1) * bin_width;
  }
  friend bool operator==(const DelayHistogram&, const DelayHistogram&) = default;
};

struct HistogramBin {
  std::size_t index = 0;
  double left = 0.0;
  double right = 0.0;
  std::uint64_t count = 0;
  double rel_prob = 0.0;
};

struct DelaySummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  std::uint64_t total = 0;
  HistogramBin mode_bin;  // highest rel_prob, lowest index on ties
  HistogramBin first_bin;
  HistogramBin last_bin;
};

// When every sample is equal the histogram degenerates to one bin holding
// all samples, whatever n_bins asks for. Throws InvalidArgument for n_bins 0.
DelayHistogram bin_delays(const DelaySamples& samples, std::size_t n_bins);

DelaySummary summarize(const DelayHistogram& hist, const DelaySamples& samples);

EmpiricalDistribution to_empirical(const DelaySamples& samples);

// Delay log reader. Accepts one delay per line with an optional "delay_ms"
// header, or two whitespace-separated columns (timestamp, delay_ms) where the
// second column is used. Blank lines are skipped. Throws IoError naming the
// offending line, EmptySamples when nothing was read.
DelaySamples read_delay_log(std::istream& in, const std::string& source);
DelaySamples read_delay_log_file(const std::string& path);

}  // namespace usat

#endif  // USAT_DELAY_HPP_
