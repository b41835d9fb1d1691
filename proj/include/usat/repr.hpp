#ifndef USAT_REPR_HPP_
#define USAT_REPR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace usat {

// Closed real interval [lo, hi] with lo <= hi.
class Interval {
 public:
  Interval(double lo, double hi);
  static Interval point(double v) { return Interval(v, v); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

// Sorted, non-empty sample set with a free-text provenance note.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples,
                                 std::string provenance = {});

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const std::string& provenance() const { return provenance_; }
  double min() const { return samples_.front(); }
  double max() const { return samples_.back(); }
  double mean() const;
  // Fraction of samples <= x.
  double cdf(double x) const;

  friend bool operator==(const EmpiricalDistribution&,
                         const EmpiricalDistribution&) = default;

 private:
  std::vector<double> samples_;
  std::string provenance_;
};

struct PointValue {
  double value;
  friend bool operator==(const PointValue&, const PointValue&) = default;
};

struct IntervalRepr {
  Interval bounds;
  friend bool operator==(const IntervalRepr&, const IntervalRepr&) = default;
};

struct UniformDist {
  Interval bounds;
  friend bool operator==(const UniformDist&, const UniformDist&) = default;
};

class NormalDist {
 public:
  NormalDist(double mean, double stddev);
  double mean() const { return mean_; }
  double stddev() const { return stddev_; }
  friend bool operator==(const NormalDist&, const NormalDist&) = default;

 private:
  double mean_;
  double stddev_;
};

class TriangularDist {
 public:
  TriangularDist(double lo, double mode, double hi);
  double lo() const { return lo_; }
  double mode() const { return mode_; }
  double hi() const { return hi_; }
  friend bool operator==(const TriangularDist&, const TriangularDist&) = default;

 private:
  double lo_;
  double mode_;
  double hi_;
};

// Pair of empirical CDFs bounding an imprecisely known distribution. The
// lower CDF never exceeds the upper CDF. Storage and bounds only.
class PBox {
 public:
  PBox(EmpiricalDistribution lower_cdf, EmpiricalDistribution upper_cdf);
  const EmpiricalDistribution& lower_cdf() const { return lower_; }
  const EmpiricalDistribution& upper_cdf() const { return upper_; }
  friend bool operator==(const PBox&, const PBox&) = default;

 private:
  EmpiricalDistribution lower_;
  EmpiricalDistribution upper_;
};

// Names a representation this toolkit does not compute with (Dempster-Shafer,
// possibility, fuzzy). Metadata only.
struct ExternalTag {
  std::string name;
  friend bool operator==(const ExternalTag&, const ExternalTag&) = default;
};

using UncertaintyRepr =
    std::variant<PointValue, IntervalRepr, UniformDist, NormalDist,
                 TriangularDist, EmpiricalDistribution, PBox, ExternalTag>;

// Stable lowercase name of the alternative ("point", "interval", ...).
std::string repr_type_name(const UncertaintyRepr& repr);

// True for the alternatives that describe a probability distribution
// (uniform, normal, triangular, empirical, pbox).
bool is_probabilistic(const UncertaintyRepr& repr);

// Half-width multiplier applied to Normal in support_bounds and sampling.
inline constexpr double kDefaultNormalCutoff = 4.0;

// Throws Unsupported for ExternalTag.
Interval support_bounds(const UncertaintyRepr& repr,
                        double normal_cutoff = kDefaultNormalCutoff);

// Draws n values. Generator: std::mt19937_64 seeded with `seed`; a uniform
// variate is the top 53 bits of one draw scaled by 2^-53. Normal uses
// Box-Muller with rejection outside mean +/- cutoff*stddev, triangular uses
// the inverse CDF, empirical picks floor(u * size) with replacement.
// Throws Unsupported for ExternalTag and PBox, InvalidArgument for n == 0.
std::vector<double> sample(const UncertaintyRepr& repr, std::size_t n,
                           std::uint64_t seed,
                           double normal_cutoff = kDefaultNormalCutoff);

// Short human-readable rendering, e.g. "normal(mean=0, std=1)".
std::string describe(const UncertaintyRepr& repr);

}  // namespace usat

#endif  // USAT_REPR_HPP_
