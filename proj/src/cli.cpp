#include "usat/cli.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "usat/docio.hpp"
#include "usat/format.hpp"
#include "usat/runner.hpp"
#include "usat/screening.hpp"

namespace usat {

namespace {

constexpr const char* kBuiltinLinear = "builtin:linear:";

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("failed writing " + path);
}

void print_findings(const ValidationReport& report, std::ostream& out) {
  for (const auto& f : report.findings)
    out << finding_code_name(f.code) << " " << f.path << ": " << f.message << "\n";
  out << report.error_count() << " errors, " << report.warning_count() << " warnings\n";
}

std::unique_ptr<ModelRunner> make_runner(const std::string& spec) {
  if (spec.rfind(kBuiltinLinear, 0) == 0)
    return std::make_unique<AffineRunner>(AffineRunner::from_spec(spec.substr(std::strlen(kBuiltinLinear))));
  return std::make_unique<SubprocessRunner>(spec);
}

DelayAnalysis analyze_delays(const std::string& path, std::size_t bins) {
  DelaySamples samples = read_delay_log_file(path);
  DelayHistogram hist = bin_delays(samples, bins);
  DelaySummary summary = summarize(hist, samples);
  return DelayAnalysis{std::move(hist), summary, path};
}

int cmd_init(const std::string& path, bool force, std::ostream& out) {
  if (!force && std::filesystem::exists(path))
    throw IoError(path + " already exists (use --force to overwrite)");
  save_document(skeleton_document(), path);
  out << "wrote skeleton document to " << path << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const ValidationReport report = validate_document(load_document(path));
  print_findings(report, out);
  return report.ok() ? kExitOk : kExitFindings;
}

int cmd_sbd(const std::string& path, const std::optional<std::string>& dot, std::ostream& out) {
  const HtdDocument doc = load_document(path);
  if (dot) {
    const std::string text = to_dot(doc.sbd);
    if (*dot == "-") {
      out << text;
    } else {
      write_text(*dot, text);
      out << "wrote " << *dot << "\n";
    }
    return kExitOk;
  }
  for (const SbdNode* n : doc.sbd.preorder()) {
    std::size_t depth = 0;
    for (const SbdNode* cur = n; cur->parent; cur = doc.sbd.find(*cur->parent)) ++depth;
    out << std::string(depth * 2, ' ') << n->id << "  " << n->name << "\n";
  }
  std::vector<UncertainParameter> resolvable;
  for (const auto& p : doc.parameters)
    if (doc.sbd.contains(p.component_ref)) resolvable.push_back(p);
  const auto gaps = coverage_check(doc.sbd, resolvable);
  out << "leaves without parameters:";
  for (const auto& id : gaps) out << " " << id;
  out << (gaps.empty() ? " none\n" : "\n");
  return kExitOk;
}

int cmd_factors(const std::string& path, const std::string& poi, std::ostream& out) {
  const HtdDocument doc = load_document(path);
  const auto factors = factors_for_poi(doc, poi);
  out << "| ID | Name | Framing | Representation | Range | Screening |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& p : factors)
    out << "| " << p.id << " | " << p.name << " | " << to_string(p.framing) << " | "
        << describe(p.representation) << " | [" << format_number(p.range.lo) << ", "
        << format_number(p.range.hi) << "]" << (p.range.unit.empty() ? "" : " " + p.range.unit) << " | "
        << (p.screening_selected ? "selected" : "-") << " |\n";
  out << factors.size() << " factors assigned to " << poi << "\n";
  return kExitOk;
}

struct ScreenOptions {
  std::string doc;
  std::string poi;
  std::string runner;
  std::string rule = "midpoint_to_high";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  bool write = false;
  std::optional<std::string> metric;
};

int cmd_screen(const ScreenOptions& o, std::ostream& out, std::ostream& err) {
  const HtdDocument doc = load_document(o.doc);
  const ValidationReport report = validate_document(doc);
  if (!report.ok()) {
    print_findings(report, err);
    return kExitFindings;
  }
  const PoiCase* poi = doc.find_poi(o.poi);
  if (!poi) throw UnknownId(o.poi);
  std::vector<std::string> metrics;
  for (const auto& m : poi->target_metrics) metrics.push_back(m.name);
  if (metrics.empty()) throw InvalidArgument(o.poi + " has no target metrics");
  const std::string write_metric = o.metric.value_or(metrics.front());
  if (std::find(metrics.begin(), metrics.end(), write_metric) == metrics.end())
    throw InvalidArgument("metric '" + write_metric + "' is not a target metric of " + o.poi);

  const OatRule rule = parse_oat_rule(o.rule);
  const auto factors = factors_for_poi(doc, o.poi);
  const auto runner = make_runner(o.runner);
  OatDesign design = execute_design(generate_oat_design(factors, metrics, rule), *runner, o.jobs);

  std::size_t ok = 0;
  for (const auto& r : design.runs) ok += r.status == RunStatus::kOk;
  out << "screening " << o.poi << ": " << design.factors.size() << " factors, rule " << o.rule
      << ", seed " << o.seed << "\n";
  out << "runs: " << ok << " ok, " << design.runs.size() - ok << " failed\n";
  for (const auto& r : design.runs)
    if (r.status == RunStatus::kFailed) out << "run " << r.index << " failed: " << r.diagnostics << "\n";

  const EffectSet effects = elementary_effects(design);
  if (!effects.skipped.empty()) {
    out << "skipped factors:";
    for (const auto& id : effects.skipped) out << " " << id;
    out << "\n";
  }
  std::optional<Ranking> to_write;
  for (const auto& metric : metrics) {
    const Ranking ranking = rank_factors(effects.effects, metric);
    out << "\nranking for metric " << metric << ":\n\n";
    out << "| Rank | Factor | Name | abs(EE) |\n|---|---|---|---|\n";
    for (const auto& e : ranking.entries) {
      const auto* p = doc.find_parameter(e.param_id);
      out << "| " << e.rank << " | " << e.param_id << " | " << (p ? p->name : "") << " | "
          << format_number(e.magnitude) << " |\n";
    }
    if (metric == write_metric) to_write = ranking;
  }
  if (o.write) {
    save_document(writeback_ranking(doc, o.poi, *to_write), o.doc);
    out << "\nwrote ranking for metric " << write_metric << " to " << o.doc << "\n";
  } else {
    out << "\ndry run: pass --write to store the ranking for metric " << write_metric << "\n";
  }
  return kExitOk;
}

int cmd_delay(const std::string& path, std::size_t bins, bool report, std::ostream& out) {
  const DelayAnalysis a = analyze_delays(path, bins);
  if (report) {
    out << render_delay_section(a);
    return kExitOk;
  }
  const auto& s = a.summary;
  out << "samples: " << s.total << "\n";
  out << "bins: " << a.histogram.n_bins << " width " << format_number(a.histogram.bin_width) << " ms\n";
  out << "min: " << format_number(s.min) << " ms\nmax: " << format_number(s.max) << " ms\n";
  out << "mean: " << format_number(s.mean) << " ms\nmedian: " << format_number(s.median) << " ms\n";
  auto line = [&](const char* label, const HistogramBin& b) {
    out << label << ": bin " << b.index << " [" << format_number(b.left) << ", "
        << format_number(b.right) << "] ms, count " << b.count << ", rho "
        << format_percent(b.count, s.total) << " %\n";
  };
  line("mode", s.mode_bin);
  line("first", s.first_bin);
  line("last", s.last_bin);
  return kExitOk;
}

int cmd_report(const std::string& path, const std::optional<std::string>& delay, std::size_t bins,
               const std::string& output, std::ostream& out) {
  const HtdDocument doc = load_document(path);
  std::optional<DelayAnalysis> analysis;
  if (delay) analysis = analyze_delays(*delay, bins);
  const std::string text = render_report(doc, analysis);
  if (output == "-") {
    out << text;
  } else {
    write_text(output, text);
    out << "wrote " << output << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uncertainty structure analysis for holistic test descriptions", "usat"};
  app.require_subcommand(1);

  std::string doc_path;
  auto* init = app.add_subcommand("init", "Write a skeleton document");
  bool force = false;
  init->add_option("path", doc_path, "Output document")->required();
  init->add_flag("--force", force, "Overwrite an existing file");

  auto* validate = app.add_subcommand("validate", "Check a document and list findings");
  validate->add_option("doc", doc_path, "Document")->required();

  auto* sbd = app.add_subcommand("sbd", "Show the system breakdown or export it as DOT");
  std::optional<std::string> dot_out;
  sbd->add_option("doc", doc_path, "Document")->required();
  sbd->add_option("--dot", dot_out, "Write DOT text to this file ('-' for stdout)");

  auto* factors = app.add_subcommand("factors", "List the factors assigned to a PoI");
  std::string poi;
  factors->add_option("doc", doc_path, "Document")->required();
  factors->add_option("--poi", poi, "PoI id")->required();

  auto* screen = app.add_subcommand("screen", "Run OAT screening for a PoI");
  ScreenOptions so;
  screen->add_option("doc", so.doc, "Document")->required();
  screen->add_option("--poi", so.poi, "PoI id")->required();
  screen->add_option("--runner", so.runner,
                     "Runner command, or builtin:linear:<metric>:<c0>,<id>=<coef>,...")
      ->required();
  screen->add_option("--rule", so.rule, "midpoint_to_high | midpoint_to_low | nominal_to_high");
  screen->add_option("--jobs", so.jobs, "Runs in flight")->check(CLI::PositiveNumber);
  screen->add_option("--seed", so.seed, "Recorded in the output; the OAT design is deterministic");
  screen->add_option("--metric", so.metric, "Metric whose ranking --write stores (default: first)");
  screen->add_flag("--write", so.write, "Store the ranking in the document");

  auto* delay = app.add_subcommand("delay", "Histogram and summary of a delay log");
  std::string csv;
  std::size_t bins = 100;
  bool delay_report = false;
  delay->add_option("csv", csv, "Delay log")->required();
  delay->add_option("--bins", bins, "Bin count")->required()->check(CLI::PositiveNumber);
  delay->add_flag("--report", delay_report, "Print the Markdown report section");

  auto* report = app.add_subcommand("report", "Render the consolidated Markdown report");
  std::optional<std::string> report_delay;
  std::size_t report_bins = 100;
  std::string output;
  report->add_option("doc", doc_path, "Document")->required();
  report->add_option("--delay", report_delay, "Delay log to characterize");
  report->add_option("--bins", report_bins, "Bin count for --delay")->check(CLI::PositiveNumber);
  report->add_option("-o,--output", output, "Output file ('-' for stdout)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*init) return cmd_init(doc_path, force, out);
    if (*validate) return cmd_validate(doc_path, out);
    if (*sbd) return cmd_sbd(doc_path, dot_out, out);
    if (*factors) return cmd_factors(doc_path, poi, out);
    if (*screen) return cmd_screen(so, out, err);
    if (*delay) return cmd_delay(csv, bins, delay_report, out);
    if (*report) return cmd_report(doc_path, report_delay, report_bins, output, out);
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << "\n";
    return kExitFindings;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitFindings;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const EmptySamples& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const RunnerSpawnError& e) {
    err << "runner error: " << e.what() << "\n";
    return kExitRunner;
  } catch (const BaselineFailed& e) {
    err << "runner error: " << e.what() << "\n";
    return kExitRunner;
  } catch (const NoEffects& e) {
    err << "runner error: every factor run failed: " << e.what() << "\n";
    return kExitRunner;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace usat
