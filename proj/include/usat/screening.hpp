#ifndef USAT_SCREENING_HPP_
#define USAT_SCREENING_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usat/document.hpp"
#include "usat/error.hpp"

namespace usat {

class ModelRunner;

class DegenerateRange : public Error {
 public:
  using Error::Error;
};
class NoFactorsSelected : public Error {
 public:
  using Error::Error;
};
class BaselineFailed : public Error {
 public:
  using Error::Error;
};
class NoEffects : public Error {
 public:
  using Error::Error;
};
class ForeignFactor : public Error {
 public:
  using Error::Error;
};

enum class OatRule { kMidpointToHigh, kMidpointToLow, kNominalToHigh };

std::string to_string(OatRule rule);
// Throws InvalidArgument for unknown names.
OatRule parse_oat_rule(const std::string& name);

struct OatFactor {
  std::string param_id;
  double baseline = 0.0;
  double perturbed = 0.0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  // |perturbed - baseline| / (range_hi - range_lo), in (0, 1].
  double step = 0.0;
  // +1 when the perturbation moves up, -1 when it moves down.
  int direction = 1;
};

enum class RunStatus { kPending, kOk, kFailed };

struct Run {
  std::size_t index = 0;
  std::map<std::string, double> assignment;
  std::optional<std::map<std::string, double>> result;  // set iff status is kOk
  RunStatus status = RunStatus::kPending;
  std::string diagnostics;
};

// Run 0 is the all-baseline run; run j (1..k) moves factor j-1 alone.
struct OatDesign {
  std::vector<OatFactor> factors;
  std::vector<Run> runs;
  std::vector<std::string> metrics;
};

struct Effect {
  std::string param_id;
  std::string metric;
  double elementary_effect = 0.0;
  double magnitude = 0.0;
};

struct EffectSet {
  std::vector<Effect> effects;
  std::vector<std::string> skipped;  // factors whose run failed
};

// Builds a one-sided OAT design over the parameters with screening_selected
// set. Baseline is the range midpoint (midpoint rules) or the nominal value;
// the perturbed value is the range upper bound, or lower bound for
// kMidpointToLow. Throws NoFactorsSelected, DegenerateRange.
OatDesign generate_oat_design(std::span<const UncertainParameter> params,
                              const std::vector<std::string>& metrics,
                              OatRule rule = OatRule::kMidpointToHigh);

// Executes every pending run exactly once through runner, with up to
// `parallelism` runs in flight. Results land by run index, so the filled
// design does not depend on completion order.
OatDesign execute_design(OatDesign design, const ModelRunner& runner,
                         std::size_t parallelism = 1);

// EE = (y_j - y_0) / (direction_j * step_j), a range-normalized slope: for an
// affine model it equals coefficient * (range_hi - range_lo) under every
// rule. Throws BaselineFailed when run 0 is not ok.
EffectSet elementary_effects(const OatDesign& design);

// Descending |EE| for one metric, ties share a rank (1, 1, 3) and are
// ordered by param id. Throws NoEffects.
Ranking rank_factors(std::span<const Effect> effects, const std::string& metric);

// Stores ranking in the PoI. Throws UnknownId, ForeignFactor.
HtdDocument writeback_ranking(const HtdDocument& doc, const std::string& poi_id,
                              const Ranking& ranking);

}  // namespace usat

#endif  // USAT_SCREENING_HPP_
