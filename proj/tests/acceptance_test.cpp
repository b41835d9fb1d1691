// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "test_support.hpp"
#include "usat/delay.hpp"
#include "usat/docio.hpp"
#include "usat/error.hpp"
#include "usat/expr.hpp"
#include "usat/format.hpp"
#include "usat/propagation.hpp"
#include "usat/runner.hpp"
#include "usat/screening.hpp"

namespace fs = std::filesystem;
using namespace usat;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// 1. Reference-shaped delay fixture: rho_i = c_i / N compared as exact fractions.
Outcome delay_reference_shape() {
  Outcome o;
  const auto s = read_delay_log_file(testing::fixture_path("gdrts_delay.csv"));
  const auto h = bin_delays(s, 100);
  const auto sum = summarize(h, s);
  const std::uint64_t n = h.total;
  o.require(n == 100000 && h.n_bins == 100, "fixture shape");
  o.require(h.lo == 12.18 && h.hi == 13.2, "range [12.18, 13.20] ms");
  // c/N == p/100000 exactly iff c * 100000 == p * N.
  auto is = [&](std::uint64_t c, std::uint64_t p) { return c * 100000 == p * n; };
  o.require(is(sum.mode_bin.count, 6460), "mode rho = 6.46 %");
  o.require(is(sum.first_bin.count, 1), "first bin rho = 0.001 %");
  o.require(is(sum.last_bin.count, 3), "last bin rho = 0.003 %");
  o.require(sum.mode_bin.rel_prob == *std::max_element(h.rel_prob.begin(), h.rel_prob.end()), "mode is max rho");
  o.require(format_percent(sum.mode_bin.count, n) == "6.46" && format_percent(sum.first_bin.count, n) == "0.001" &&
                format_percent(sum.last_bin.count, n) == "0.003",
            "rendered percentages");
  if (o.ok)
    o.detail = "mode bin " + std::to_string(sum.mode_bin.index) + " rho = " + format_percent(sum.mode_bin.count, n) +
               " %, first " + format_percent(sum.first_bin.count, n) + " %, last " +
               format_percent(sum.last_bin.count, n) + " %";
  return o;
}

// Bin by scanning documented edges lo + i*w; last bin right-closed.
std::vector<std::uint64_t> oracle_counts(const std::vector<double>& v, std::size_t n) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mn == *mx) return {v.size()};
  const double w = (*mx - *mn) / static_cast<double>(n);
  std::vector<std::uint64_t> c(n, 0);
  for (double x : v) {
    std::size_t i = 0;
    while (i + 1 < n && !(x < *mn + static_cast<double>(i + 1) * w)) ++i;
    ++c[i];
  }
  return c;
}

// 2. Histogram invariants over random sample sets.
Outcome histogram_invariants() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  const int sets = 1200;
  for (int k = 0; k < sets && o.ok; ++k) {
    std::vector<double> v(1 + rng() % 2000);
    std::uniform_real_distribution<double> u(0.01, 50);
    std::lognormal_distribution<double> ln(2, 0.5);
    const double base = u(rng);
    const int shape = k % 4;
    for (auto& x : v)
      x = shape == 0 ? u(rng) : shape == 1 ? ln(rng) : shape == 2 ? base + 0.25 * static_cast<double>(rng() % 9) : base;
    const std::size_t bins = 1 + rng() % 200;
    const auto h = bin_delays(DelaySamples(v), bins);
    o.require(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) == v.size(), "sum c_i = N");
    o.require(std::abs(std::accumulate(h.rel_prob.begin(), h.rel_prob.end(), 0.0) - 1.0) <= 1e-12,
              "sum rho_i = 1 within 1e-12");
    o.require(h.counts == oracle_counts(v, bins), "each sample counted once (oracle bins)");
    const double mx = *std::max_element(v.begin(), v.end());
    o.require(h.counts.back() >= static_cast<std::uint64_t>(std::count(v.begin(), v.end(), mx)), "maximum counted");
    std::shuffle(v.begin(), v.end(), rng);
    o.require(bin_delays(DelaySamples(v), bins) == h, "permutation invariance");
  }
  if (o.ok) o.detail = std::to_string(sets) + " random sample sets";
  return o;
}

// 3. OAT effects against the analytic affine oracle.
Outcome oat_oracle() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coef(-10, 10), pos(-100, 100), width(0.001, 50), frac(0, 0.9);
  double worst = 0;
  for (int m = 0; m < 100 && o.ok; ++m) {
    const std::size_t k = 2 + m % 7;
    std::vector<UncertainParameter> params;
    AffineRunner::Model model{coef(rng), {}};
    for (std::size_t j = 0; j < k; ++j) {
      UncertainParameter p;
      p.id = "F" + std::to_string(j);
      p.range.lo = pos(rng);
      p.range.hi = p.range.lo + width(rng);
      p.nominal.value = p.range.lo + frac(rng) * (p.range.hi - p.range.lo);
      p.screening_selected = true;
      params.push_back(p);
      model.coefficients[p.id] = coef(rng);
    }
    // Oracle ranking: |c_j * (hi_j - lo_j)| descending, ties by id.
    std::vector<std::pair<double, std::string>> expected;
    for (const auto& p : params)
      expected.emplace_back(std::abs(model.coefficients[p.id] * (p.range.hi - p.range.lo)), p.id);
    std::sort(expected.begin(), expected.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

    const AffineRunner runner({{"y", model}});
    for (auto rule : {OatRule::kMidpointToHigh, OatRule::kMidpointToLow, OatRule::kNominalToHigh}) {
      const auto effects = elementary_effects(execute_design(generate_oat_design(params, {"y"}, rule), runner, 2));
      o.require(effects.effects.size() == k, "one effect per factor");
      for (const auto& e : effects.effects) {
        const auto& p = *std::find_if(params.begin(), params.end(), [&](const auto& q) { return q.id == e.param_id; });
        const double truth = model.coefficients[p.id] * (p.range.hi - p.range.lo);
        worst = std::max(worst, std::abs(e.elementary_effect - truth));
        o.require(std::abs(e.elementary_effect - truth) <= 1e-9, "EE = c (hi - lo) within 1e-9");
      }
      const auto ranking = rank_factors(effects.effects, "y");
      for (std::size_t j = 0; j < k; ++j)
        o.require(ranking.entries[j].param_id == expected[j].second, "ranking matches oracle argsort");
    }
  }
  if (o.ok) {
    std::ostringstream ss;
    ss << "100 affine models x 3 rules, max |EE error| = " << worst;
    o.detail = ss.str();
  }
  return o;
}

Expr random_expr(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"a", "b", "c", "d"};
  const int pick = static_cast<int>(rng() % (depth == 0 ? 2 : 7));
  if (pick == 0) return Expr::number(std::uniform_real_distribution<double>(0.5, 5)(rng));
  if (pick == 1) return Expr::variable(names[rng() % 4]);
  if (pick == 2) return Expr::neg(random_expr(rng, depth - 1));
  const auto kind = static_cast<Expr::Kind>(static_cast<int>(Expr::Kind::kAdd) + rng() % 4);
  return Expr::binary(kind, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
}

// 4. Interval enclosure on random expressions.
Outcome interval_enclosure() {
  Outcome o;
  o.require(propagate_interval(parse_expression("a+b"), {{"a", {1, 2}}, {"b", {3, 4}}}) == Interval(4, 6),
            "[1,2]+[3,4] = [4,6]");
  o.require(propagate_interval(parse_expression("a*b"), {{"a", {-1, 2}}, {"b", {3, 4}}}) == Interval(-4, 8),
            "[-1,2]x[3,4] = [-4,8]");
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0, 1), pos(-5, 5), width(0, 4);
  int done = 0, rejected = 0;
  while (done < 200 && o.ok) {
    const Expr e = random_expr(rng, 4);
    std::map<std::string, Interval> env;
    for (const char* n : {"a", "b", "c", "d"}) {
      const double lo = pos(rng);
      env.emplace(n, Interval(lo, lo + width(rng)));
    }
    Interval result(0, 0);
    try {
      result = propagate_interval(e, env);
    } catch (const DivisionByZeroInterval&) {
      ++rejected;  // divisor may straddle zero; precondition excludes it
      continue;
    }
    for (int i = 0; i < 10000; ++i) {
      std::map<std::string, double> point;
      for (const auto& [n, iv] : env) point[n] = std::clamp(iv.lo() + u(rng) * iv.width(), iv.lo(), iv.hi());
      const double y = evaluate(e, point);
      if (!result.contains(y)) {
        o.require(false, to_string(e) + " escapes its enclosure");
        break;
      }
    }
    ++done;
  }
  if (o.ok)
    o.detail = "200 expressions x 10^4 points (" + std::to_string(rejected) + " redrawn: divisor straddled 0)";
  return o;
}

// 5. Monte-Carlo determinism and mean of 2a+b.
Outcome monte_carlo() {
  Outcome o;
  const Expr e = parse_expression("2*a+b");
  const std::map<std::string, UncertaintyRepr> env = {{"a", UniformDist{Interval(0, 1)}},
                                                      {"b", UniformDist{Interval(0, 1)}}};
  std::ostringstream means;
  for (std::uint64_t seed : {1ULL, 2ULL, 12345ULL}) {
    const auto r1 = propagate_monte_carlo(e, env, 100000, seed);
    const auto r2 = propagate_monte_carlo(e, env, 100000, seed);
    o.require(r1.distribution == r2.distribution, "identical seeds give identical distributions");
    o.require(std::abs(r1.distribution.mean() - 1.5) <= 0.02, "mean within 0.02 of 1.5");
    means << (seed == 1 ? "" : ", ") << r1.distribution.mean();
  }
  if (o.ok) o.detail = "n = 10^5, means " + means.str();
  return o;
}

// 6. parse . serialize identity and serialize fixpoint.
Outcome document_roundtrip() {
  Outcome o;
  auto check = [&](const HtdDocument& d, const std::string& what) {
    const std::string text = serialize_document(d);
    const HtdDocument back = parse_document(text);
    o.require(back == d, what + ": structural identity");
    o.require(serialize_document(back) == text, what + ": canonical fixpoint");
  };
  for (const char* f : {"menb.htd.yaml", "gdrts.htd.yaml"}) check(load_document(testing::fixture_path(f)), f);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500 && o.ok; ++i) check(testing::random_document(rng), "random document " + std::to_string(i));
  if (o.ok) o.detail = "2 fixtures + 500 random documents";
  return o;
}

// 7. Each crafted negative fixture fires its own code and nothing else.
Outcome validation_closed_set() {
  Outcome o;
  const std::vector<std::pair<std::string, FindingCode>> cases = {
      {"dup_id", FindingCode::kDupId},
      {"dangling_component", FindingCode::kDanglingComponent},
      {"dangling_poi", FindingCode::kDanglingPoi},
      {"bidir_factor", FindingCode::kBidirFactor},
      {"range_order", FindingCode::kRangeOrder},
      {"framing_repr", FindingCode::kFramingRepr},
      {"unassigned_param", FindingCode::kUnassignedParam},
  };
  o.require(validate_document(load_document(testing::fixture_path("invalid/valid_base.htd.yaml"))).findings.empty(),
            "base document is clean");
  for (const auto& [name, code] : cases) {
    const auto r = validate_document(load_document(testing::fixture_path("invalid/" + name + ".htd.yaml")));
    std::set<FindingCode> fired;
    for (const auto& f : r.findings) fired.insert(f.code);
    o.require(fired == std::set<FindingCode>{code}, name + " fires only " + finding_code_name(code));
  }
  if (o.ok) o.detail = "7 fixtures, 7 distinct codes";
  return o;
}

int sh(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// One pass of the documented workflow; returns every stdout plus the final files.
std::string workflow(const fs::path& dir, Outcome& o) {
  const std::string cli = USAT_CLI;
  const std::string cd = "cd " + quote(dir.string()) + " && ";
  const std::string linear =
      "builtin:linear:phase_error:0,PAR-LAT=2,PAR-STEP=1,PAR-SCALE=0.1,PAR-FILT=0.0001;"
      "power_error:0.5,PAR-LAT=1,PAR-SCALE=0.5";
  o.require(sh(cd + cli + " init study.htd.yaml > 1.out") == 0, "init exits 0");
  fs::copy_file(testing::fixture_path("gdrts.htd.yaml"), dir / "study.htd.yaml", fs::copy_options::overwrite_existing);
  o.require(sh(cd + cli + " validate study.htd.yaml > 2.out") == 0, "validate exits 0");
  o.require(sh(cd + cli + " screen study.htd.yaml --poi POI-1 --runner " + quote(linear) +
               " --seed 7 --write > 3.out") == 0,
            "screen exits 0");
  o.require(sh(cd + cli + " report study.htd.yaml -o report.md > 4.out") == 0, "report exits 0");

  const auto doc = load_document((dir / "study.htd.yaml").string());
  const auto* poi = doc.find_poi("POI-1");
  o.require(poi && poi->ranking && !poi->ranking->entries.empty(), "ranking written back");
  if (poi && poi->ranking && !poi->ranking->entries.empty()) {
    const auto* top = doc.find_parameter(poi->ranking->entries[0].param_id);
    o.require(top && top->name == "communication latency", "communication latency ranked first");
  }
  const std::string report = testing::read_file(dir / "report.md");
  for (const auto& p : doc.parameters) o.require(report.find("| " + p.id + " |") != std::string::npos, "report lists " + p.id);
  o.require(report.find("| Rank | Factor | Name | abs(EE) |\n|---|---|---|---|\n| 1 | PAR-LAT |") != std::string::npos,
            "report has the ranking table");
  std::string all;
  for (const char* f : {"1.out", "2.out", "3.out", "4.out", "study.htd.yaml", "report.md"})
    all += std::string("== ") + f + "\n" + testing::read_file(dir / f);
  return all;
}

// 8. init -> GDRTS document -> validate -> screen --write -> report, twice.
Outcome end_to_end() {
  Outcome o;
  const auto a = testing::make_temp_dir("e2e-a");
  const auto b = testing::make_temp_dir("e2e-b");
  const std::string first = workflow(a, o);
  const std::string second = workflow(b, o);
  o.require(first == second, "two runs byte-identical");
  fs::remove_all(a);
  fs::remove_all(b);
  if (o.ok) o.detail = "init, validate, screen --write, report; two runs byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"delay reference-shape check", delay_reference_shape},
      {"histogram invariants", histogram_invariants},
      {"OAT against analytic oracle", oat_oracle},
      {"interval propagation enclosure", interval_enclosure},
      {"Monte-Carlo determinism and consistency", monte_carlo},
      {"document roundtrip", document_roundtrip},
      {"validation closed set", validation_closed_set},
      {"end-to-end workflow", end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}
