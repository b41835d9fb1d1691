#include "usat/delay.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "usat/error.hpp"

namespace usat {

DelaySamples::DelaySamples(std::vector<double> values_ms, std::string source)
    : values_(std::move(values_ms)), source_(std::move(source)) {
  if (values_.empty()) throw EmptySamples("no delay samples");
  for (double v : values_) {
    if (!std::isfinite(v) || !(v > 0.0))
      throw InvalidArgument("delay samples must be finite and positive");
  }
}

DelayHistogram bin_delays(const DelaySamples& samples, std::size_t n_bins) {
  if (n_bins == 0) throw InvalidArgument("bin count must be at least 1");
  const auto values = samples.values();
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());

  DelayHistogram h;
  h.lo = *min_it;
  h.hi = *max_it;
  h.n_bins = h.hi > h.lo ? n_bins : 1;
  h.bin_width = (h.hi - h.lo) / static_cast<double>(h.n_bins);
  h.counts.assign(h.n_bins, 0);
  h.total = values.size();

  const std::size_t last = h.n_bins - 1;
  for (double v : values) {
    std::size_t i = 0;
    if (h.bin_width > 0.0) {
      const double guess = std::floor((v - h.lo) / h.bin_width);
      i = std::min(static_cast<std::size_t>(std::max(guess, 0.0)), last);
      // The division can land one bin off; settle against the edges the
      // histogram reports.
      while (i > 0 && v < h.left_edge(i)) --i;
      while (i < last && v >= h.left_edge(i + 1)) ++i;
    }
    ++h.counts[i];
  }
  h.rel_prob.resize(h.n_bins);
  for (std::size_t i = 0; i < h.n_bins; ++i)
    h.rel_prob[i] = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
  return h;
}

namespace {

HistogramBin bin_at(const DelayHistogram& h, std::size_t i) {
  return HistogramBin{i, h.left_edge(i), h.right_edge(i), h.counts[i], h.rel_prob[i]};
}

}  // namespace

DelaySummary summarize(const DelayHistogram& hist, const DelaySamples& samples) {
  std::vector<double> sorted(samples.values().begin(), samples.values().end());
  std::sort(sorted.begin(), sorted.end());
  DelaySummary s;
  s.total = hist.total;
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  // Compare counts, not ratios; max_element keeps the first maximum.
  const auto mode = std::max_element(hist.counts.begin(), hist.counts.end());
  s.mode_bin = bin_at(hist, static_cast<std::size_t>(mode - hist.counts.begin()));
  s.first_bin = bin_at(hist, 0);
  s.last_bin = bin_at(hist, hist.n_bins - 1);
  return s;
}

EmpiricalDistribution to_empirical(const DelaySamples& samples) {
  return EmpiricalDistribution({samples.values().begin(), samples.values().end()},
                               samples.source());
}

namespace {

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

DelaySamples read_delay_log(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;

    const bool header = !seen_data && values.empty() &&
                        ((tokens.size() == 1 && tokens[0] == "delay_ms") ||
                         (tokens.size() == 2 && tokens[1] == "delay_ms"));
    seen_data = true;
    if (header) continue;
    if (tokens.size() > 2)
      throw IoError(source + ":" + std::to_string(line_no) + ": expected 1 or 2 columns");
    const std::string& field = tokens.back();
    double v = 0.0;
    if (!parse_double(field, v) || !std::isfinite(v) || !(v > 0.0))
      throw IoError(source + ":" + std::to_string(line_no) + ": invalid delay '" + field + "'");
    values.push_back(v);
  }
  if (values.empty()) throw EmptySamples(source + ": no delay samples");
  return DelaySamples(std::move(values), source);
}

DelaySamples read_delay_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_delay_log(in, path);
}

}  // namespace usat
