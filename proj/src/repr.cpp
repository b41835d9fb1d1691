#include "usat/repr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "usat/error.hpp"
#include "usat/format.hpp"

namespace usat {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Uniform variate in [0, 1) from the top 53 bits of one engine draw.
double unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  require_finite(lo, "interval bound");
  require_finite(hi, "interval bound");
  if (lo > hi) throw InvalidArgument("interval lower bound exceeds upper bound");
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples,
                                             std::string provenance)
    : samples_(std::move(samples)), provenance_(std::move(provenance)) {
  if (samples_.empty()) throw EmptySamples("empirical distribution needs samples");
  for (double v : samples_) require_finite(v, "sample");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::mean() const {
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

double EmpiricalDistribution::cdf(double x) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) /
         static_cast<double>(samples_.size());
}

NormalDist::NormalDist(double mean, double stddev) : mean_(mean), stddev_(stddev) {
  require_finite(mean, "mean");
  require_finite(stddev, "std");
  if (!(stddev > 0.0)) throw InvalidArgument("std must be positive");
}

TriangularDist::TriangularDist(double lo, double mode, double hi)
    : lo_(lo), mode_(mode), hi_(hi) {
  require_finite(lo, "lo");
  require_finite(mode, "mode");
  require_finite(hi, "hi");
  if (!(lo <= mode && mode <= hi)) throw InvalidArgument("triangular requires lo <= mode <= hi");
}

PBox::PBox(EmpiricalDistribution lower_cdf, EmpiricalDistribution upper_cdf)
    : lower_(std::move(lower_cdf)), upper_(std::move(upper_cdf)) {
  // Both CDFs are step functions; checking at every jump point suffices.
  for (const auto* d : {&lower_, &upper_}) {
    for (double x : d->samples()) {
      if (lower_.cdf(x) > upper_.cdf(x))
        throw InvalidArgument("p-box lower CDF exceeds upper CDF at " + format_number(x));
    }
  }
}

std::string repr_type_name(const UncertaintyRepr& repr) {
  return std::visit(overloaded{
                        [](const PointValue&) { return "point"; },
                        [](const IntervalRepr&) { return "interval"; },
                        [](const UniformDist&) { return "uniform"; },
                        [](const NormalDist&) { return "normal"; },
                        [](const TriangularDist&) { return "triangular"; },
                        [](const EmpiricalDistribution&) { return "empirical"; },
                        [](const PBox&) { return "pbox"; },
                        [](const ExternalTag&) { return "external"; },
                    },
                    repr);
}

bool is_probabilistic(const UncertaintyRepr& repr) {
  return std::holds_alternative<UniformDist>(repr) ||
         std::holds_alternative<NormalDist>(repr) ||
         std::holds_alternative<TriangularDist>(repr) ||
         std::holds_alternative<EmpiricalDistribution>(repr) ||
         std::holds_alternative<PBox>(repr);
}

Interval support_bounds(const UncertaintyRepr& repr, double normal_cutoff) {
  if (!(normal_cutoff > 0.0)) throw InvalidArgument("normal cutoff must be positive");
  return std::visit(
      overloaded{
          [](const PointValue& p) { return Interval::point(p.value); },
          [](const IntervalRepr& r) { return r.bounds; },
          [](const UniformDist& u) { return u.bounds; },
          [&](const NormalDist& n) {
            return Interval(n.mean() - normal_cutoff * n.stddev(),
                            n.mean() + normal_cutoff * n.stddev());
          },
          [](const TriangularDist& t) { return Interval(t.lo(), t.hi()); },
          [](const EmpiricalDistribution& e) { return Interval(e.min(), e.max()); },
          [](const PBox& b) {
            return Interval(std::min(b.lower_cdf().min(), b.upper_cdf().min()),
                            std::max(b.lower_cdf().max(), b.upper_cdf().max()));
          },
          [](const ExternalTag& t) -> Interval {
            throw Unsupported("no numeric bounds for external representation '" +
                              t.name + "'");
          },
      },
      repr);
}

std::vector<double> sample(const UncertaintyRepr& repr, std::size_t n,
                           std::uint64_t seed, double normal_cutoff) {
  if (n == 0) throw InvalidArgument("sample count must be at least 1");
  if (!(normal_cutoff > 0.0)) throw InvalidArgument("normal cutoff must be positive");
  std::mt19937_64 gen(seed);
  std::vector<double> out;
  out.reserve(n);
  std::visit(
      overloaded{
          [&](const PointValue& p) { out.assign(n, p.value); },
          [&](const IntervalRepr& r) {
            // An interval carries no distribution; draws are uniform over it.
            for (std::size_t i = 0; i < n; ++i)
              out.push_back(r.bounds.lo() + unit(gen) * r.bounds.width());
          },
          [&](const UniformDist& u) {
            for (std::size_t i = 0; i < n; ++i)
              out.push_back(u.bounds.lo() + unit(gen) * u.bounds.width());
          },
          [&](const NormalDist& d) {
            while (out.size() < n) {
              const double u1 = 1.0 - unit(gen);  // (0, 1]
              const double u2 = unit(gen);
              const double r = std::sqrt(-2.0 * std::log(u1));
              const double theta = 2.0 * std::numbers::pi * u2;
              for (double z : {r * std::cos(theta), r * std::sin(theta)}) {
                if (std::abs(z) <= normal_cutoff && out.size() < n)
                  out.push_back(d.mean() + d.stddev() * z);
              }
            }
          },
          [&](const TriangularDist& t) {
            const double width = t.hi() - t.lo();
            const double split = width > 0.0 ? (t.mode() - t.lo()) / width : 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              const double u = unit(gen);
              double v;
              if (u < split) {
                v = t.lo() + std::sqrt(u * width * (t.mode() - t.lo()));
              } else {
                v = t.hi() - std::sqrt((1.0 - u) * width * (t.hi() - t.mode()));
              }
              out.push_back(std::clamp(v, t.lo(), t.hi()));
            }
          },
          [&](const EmpiricalDistribution& e) {
            const auto values = e.samples();
            for (std::size_t i = 0; i < n; ++i) {
              auto idx = static_cast<std::size_t>(unit(gen) * static_cast<double>(values.size()));
              out.push_back(values[std::min(idx, values.size() - 1)]);
            }
          },
          [](const PBox&) { throw Unsupported("p-box sampling is not supported"); },
          [](const ExternalTag& t) {
            throw Unsupported("cannot sample external representation '" + t.name + "'");
          },
      },
      repr);
  return out;
}

std::string describe(const UncertaintyRepr& repr) {
  auto f = [](double v) { return format_number(v); };
  return std::visit(
      overloaded{
          [&](const PointValue& p) { return "point(" + f(p.value) + ")"; },
          [&](const IntervalRepr& r) {
            return "interval[" + f(r.bounds.lo()) + ", " + f(r.bounds.hi()) + "]";
          },
          [&](const UniformDist& u) {
            return "uniform(" + f(u.bounds.lo()) + ", " + f(u.bounds.hi()) + ")";
          },
          [&](const NormalDist& n) {
            return "normal(mean=" + f(n.mean()) + ", std=" + f(n.stddev()) + ")";
          },
          [&](const TriangularDist& t) {
            return "triangular(" + f(t.lo()) + ", " + f(t.mode()) + ", " + f(t.hi()) + ")";
          },
          [&](const EmpiricalDistribution& e) {
            return "empirical(n=" + std::to_string(e.size()) + ", " + f(e.min()) +
                   ".." + f(e.max()) + ")";
          },
          [&](const PBox& b) {
            return "pbox(lower n=" + std::to_string(b.lower_cdf().size()) +
                   ", upper n=" + std::to_string(b.upper_cdf().size()) + ")";
          },
          [&](const ExternalTag& t) { return "external(" + t.name + ")"; },
      },
      repr);
}

}  // namespace usat
