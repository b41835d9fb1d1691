#include "usat/screening.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "usat/runner.hpp"

namespace usat {

std::string to_string(OatRule rule) {
  switch (rule) {
    case OatRule::kMidpointToHigh: return "midpoint_to_high";
    case OatRule::kMidpointToLow: return "midpoint_to_low";
    case OatRule::kNominalToHigh: return "nominal_to_high";
  }
  return "midpoint_to_high";
}

OatRule parse_oat_rule(const std::string& name) {
  for (auto r : {OatRule::kMidpointToHigh, OatRule::kMidpointToLow, OatRule::kNominalToHigh})
    if (to_string(r) == name) return r;
  throw InvalidArgument("unknown OAT rule '" + name + "'");
}

OatDesign generate_oat_design(std::span<const UncertainParameter> params,
                              const std::vector<std::string>& metrics, OatRule rule) {
  OatDesign design;
  design.metrics = metrics;
  for (const auto& p : params) {
    if (!p.screening_selected) continue;
    const double lo = p.range.lo;
    const double hi = p.range.hi;
    if (!(hi > lo))
      throw DegenerateRange("parameter '" + p.id + "' has an empty range");
    OatFactor f;
    f.param_id = p.id;
    f.range_lo = lo;
    f.range_hi = hi;
    const double mid = lo + 0.5 * (hi - lo);
    switch (rule) {
      case OatRule::kMidpointToHigh:
        f.baseline = mid;
        f.perturbed = hi;
        break;
      case OatRule::kMidpointToLow:
        f.baseline = mid;
        f.perturbed = lo;
        break;
      case OatRule::kNominalToHigh:
        f.baseline = p.nominal.value;
        f.perturbed = hi;
        break;
    }
    f.direction = f.perturbed >= f.baseline ? 1 : -1;
    f.step = std::abs(f.perturbed - f.baseline) / (hi - lo);
    if (!(f.step > 0.0) || f.step > 1.0)
      throw DegenerateRange("parameter '" + p.id + "' has no usable step under rule " +
                            to_string(rule));
    design.factors.push_back(std::move(f));
  }
  if (design.factors.empty()) throw NoFactorsSelected("no parameter is selected for screening");

  std::map<std::string, double> base;
  for (const auto& f : design.factors) base[f.param_id] = f.baseline;
  design.runs.reserve(design.factors.size() + 1);
  design.runs.push_back(Run{0, base, std::nullopt, RunStatus::kPending, {}});
  for (std::size_t j = 0; j < design.factors.size(); ++j) {
    auto assignment = base;
    assignment[design.factors[j].param_id] = design.factors[j].perturbed;
    design.runs.push_back(Run{j + 1, std::move(assignment), std::nullopt, RunStatus::kPending, {}});
  }
  return design;
}

namespace {

void execute_run(Run& run, const ModelRunner& runner, const std::vector<std::string>& metrics) {
  RunOutcome outcome = runner.run(run.index, run.assignment);
  if (!outcome.ok) {
    run.status = RunStatus::kFailed;
    run.diagnostics = std::move(outcome.diagnostics);
    return;
  }
  std::set<std::string> expected(metrics.begin(), metrics.end());
  for (const auto& name : expected) {
    if (!outcome.metrics.contains(name)) {
      run.status = RunStatus::kFailed;
      run.diagnostics = "protocol error: metric '" + name + "' missing from response";
      return;
    }
  }
  for (const auto& [name, value] : outcome.metrics) {
    if (!expected.contains(name)) {
      run.status = RunStatus::kFailed;
      run.diagnostics = "protocol error: unexpected metric '" + name + "'";
      return;
    }
    if (!std::isfinite(value)) {
      run.status = RunStatus::kFailed;
      run.diagnostics = "metric '" + name + "' is not finite";
      return;
    }
  }
  run.result = std::move(outcome.metrics);
  run.status = RunStatus::kOk;
}

}  // namespace

OatDesign execute_design(OatDesign design, const ModelRunner& runner, std::size_t parallelism) {
  std::vector<Run*> pending;
  for (auto& r : design.runs)
    if (r.status == RunStatus::kPending) pending.push_back(&r);
  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(pending.size(), 1));

  // Each worker claims the next unclaimed run; runs never share state.
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pending.size();) {
      try {
        execute_run(*pending[i], runner, design.metrics);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = pending.size();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (first_error) std::rethrow_exception(first_error);
  return design;
}

EffectSet elementary_effects(const OatDesign& design) {
  if (design.runs.empty() || design.runs[0].status != RunStatus::kOk)
    throw BaselineFailed("baseline run did not complete" +
                         (design.runs.empty() || design.runs[0].diagnostics.empty()
                              ? std::string()
                              : ": " + design.runs[0].diagnostics));
  const auto& y0 = *design.runs[0].result;
  EffectSet out;
  for (std::size_t j = 0; j < design.factors.size(); ++j) {
    const auto& f = design.factors[j];
    const Run& run = design.runs.at(j + 1);
    if (run.status != RunStatus::kOk) {
      out.skipped.push_back(f.param_id);
      continue;
    }
    for (const auto& metric : design.metrics) {
      const double ee = (run.result->at(metric) - y0.at(metric)) / (f.direction * f.step);
      out.effects.push_back(Effect{f.param_id, metric, ee, std::abs(ee)});
    }
  }
  return out;
}

Ranking rank_factors(std::span<const Effect> effects, const std::string& metric) {
  Ranking ranking;
  ranking.metric = metric;
  for (const auto& e : effects)
    if (e.metric == metric) ranking.entries.push_back(RankEntry{e.param_id, e.magnitude, 0});
  if (ranking.entries.empty()) throw NoEffects("no effects for metric '" + metric + "'");
  std::sort(ranking.entries.begin(), ranking.entries.end(), [](const auto& a, const auto& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return a.param_id < b.param_id;
  });
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    auto& e = ranking.entries[i];
    e.rank = (i > 0 && e.magnitude == ranking.entries[i - 1].magnitude)
                 ? ranking.entries[i - 1].rank
                 : static_cast<int>(i + 1);
  }
  return ranking;
}

HtdDocument writeback_ranking(const HtdDocument& doc, const std::string& poi_id,
                              const Ranking& ranking) {
  HtdDocument out = doc;
  auto poi = std::find_if(out.poi_cases.begin(), out.poi_cases.end(),
                          [&](const PoiCase& p) { return p.id == poi_id; });
  if (poi == out.poi_cases.end()) throw UnknownId(poi_id);
  for (const auto& e : ranking.entries) {
    if (std::find(poi->assigned_factors.begin(), poi->assigned_factors.end(), e.param_id) ==
        poi->assigned_factors.end())
      throw ForeignFactor("factor '" + e.param_id + "' is not assigned to " + poi_id);
  }
  poi->ranking = ranking;
  return out;
}

}  // namespace usat
