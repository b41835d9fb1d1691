#include <sstream>

#include "usat/docio.hpp"
#include "usat/format.hpp"

namespace usat {

namespace {

// Table cells cannot hold pipes or newlines.
std::string cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out.empty() ? "-" : out;
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::string with_unit(const std::string& value, const std::string& unit) {
  return unit.empty() ? value : value + " " + unit;
}

std::string text_or_dash(const std::string& s) { return s.empty() ? "-" : s; }

void poi_section(const HtdDocument& doc, std::ostringstream& out) {
  out << "## PoI Viewpoint\n\n";
  if (doc.poi_cases.empty()) out << "No PoI cases defined.\n\n";
  for (const auto& poi : doc.poi_cases) {
    out << "### " << poi.id << "\n\n";
    out << "- objective: " << to_string(poi.objective) << "\n";
    out << "- description: " << text_or_dash(poi.description) << "\n";
    out << "- assigned factors: "
        << (poi.assigned_factors.empty() ? "none" : join(poi.assigned_factors)) << "\n\n";
    out << "| Target metric | Unit | Formula |\n|---|---|---|\n";
    for (const auto& m : poi.target_metrics)
      out << "| " << cell(m.name) << " | " << cell(m.unit) << " | "
          << cell(m.formula.value_or("")) << " |\n";
    out << "\n";
    if (!poi.ranking) {
      out << "ranking: pending\n\n";
      continue;
    }
    out << "Factor ranking for metric `" << poi.ranking->metric << "`:\n\n";
    out << "| Rank | Factor | Name | abs(EE) |\n|---|---|---|---|\n";
    for (const auto& e : poi.ranking->entries) {
      const auto* p = doc.find_parameter(e.param_id);
      out << "| " << e.rank << " | " << cell(e.param_id) << " | "
          << cell(p ? p->name : std::string()) << " | " << format_number(e.magnitude) << " |\n";
    }
    out << "\n";
  }
}

void sbd_section(const HtdDocument& doc, std::ostringstream& out) {
  out << "## SC Definition & Diagram\n\n";
  if (doc.sbd.nodes().empty()) {
    out << "No system breakdown defined.\n\n";
    return;
  }
  // Indented tree listing in pre-order.
  for (const SbdNode* n : doc.sbd.preorder()) {
    std::size_t depth = 0;
    for (const SbdNode* cur = n; cur->parent; cur = doc.sbd.find(*cur->parent)) ++depth;
    out << std::string(depth * 2, ' ') << "- **" << n->id << "** " << n->name << " ("
        << to_string(n->kind) << ")";
    if (!n->description.empty()) out << ": " << n->description;
    out << "\n";
  }
  out << "\n```dot\n" << to_dot(doc.sbd) << "```\n\n";
}

void parameter_section(const HtdDocument& doc, std::ostringstream& out) {
  out << "## SC Parameter Analysis\n\n";
  out << "| ID | Name | Component | Framing | Representation | Nominal | Range | Tags | PoI "
         "assignments | Screening |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& p : doc.parameters) {
    std::vector<std::string> tags;
    for (auto t : p.taxonomy_tags) tags.push_back(to_string(t));
    out << "| " << cell(p.id) << " | " << cell(p.name) << " | " << cell(p.component_ref) << " | "
        << to_string(p.framing) << " | " << cell(describe(p.representation)) << " | "
        << cell(with_unit(format_number(p.nominal.value), p.nominal.unit)) << " | "
        << cell(with_unit("[" + format_number(p.range.lo) + ", " + format_number(p.range.hi) + "]",
                          p.range.unit))
        << " | " << cell(join(tags)) << " | " << cell(join(p.poi_assignments)) << " | "
        << (p.screening_selected ? "selected" : "-") << " |\n";
  }
  out << "\n";
}

void es_section(const HtdDocument& doc, std::ostringstream& out) {
  out << "## ES Viewpoint\n\n";
  out << "- setup type: " << to_string(doc.experiment_spec.setup_type) << "\n";
  if (!doc.experiment_spec.uncertainty_management.empty())
    out << "- uncertainty management: " << doc.experiment_spec.uncertainty_management << "\n";
  out << "\n| Aspect | Category | Mitigation | Linked parameters |\n|---|---|---|---|\n";
  for (const auto& e : doc.es_viewpoint.entries)
    out << "| " << cell(e.aspect) << " | " << to_string(e.category) << " | " << cell(e.mitigation)
        << " | " << cell(join(e.linked_parameters)) << " |\n";
  out << "\n";
  if (!doc.experiment_spec.equipment_precision.empty()) {
    out << "| Instrument | Precision |\n|---|---|\n";
    for (const auto& ep : doc.experiment_spec.equipment_precision)
      out << "| " << cell(ep.instrument) << " | "
          << cell(with_unit(format_number(ep.precision.value), ep.precision.unit)) << " |\n";
    out << "\n";
  }
  if (!doc.experiment_spec.measurement_uncertainty.empty()) {
    out << "| Measured metric | Uncertainty |\n|---|---|\n";
    for (const auto& mu : doc.experiment_spec.measurement_uncertainty)
      out << "| " << cell(mu.metric) << " | " << cell(describe(mu.representation)) << " |\n";
    out << "\n";
  }
}

std::string edges(const HistogramBin& b) {
  return "[" + format_number(b.left) + ", " + format_number(b.right) + "] ms";
}

std::string pct(const HistogramBin& b, std::uint64_t total) {
  return format_percent(b.count, total) + " %";
}

}  // namespace

std::string render_delay_section(const DelayAnalysis& delay) {
  const auto& h = delay.histogram;
  const auto& s = delay.summary;
  std::ostringstream out;
  out << "## Delay Characterization\n\n";
  if (!delay.source.empty()) out << "- source: " << delay.source << "\n";
  out << "- samples: " << s.total << "\n";
  out << "- bins: " << h.n_bins << " of width " << format_number(h.bin_width) << " ms\n";
  out << "- range: [" << format_number(s.min) << ", " << format_number(s.max) << "] ms\n";
  out << "- mean: " << format_number(s.mean) << " ms\n";
  out << "- median: " << format_number(s.median) << " ms\n";
  out << "- mode bin: " << edges(s.mode_bin) << ", rho = " << pct(s.mode_bin, s.total) << "\n";
  out << "- first bin: " << edges(s.first_bin) << ", rho = " << pct(s.first_bin, s.total) << "\n";
  out << "- last bin: " << edges(s.last_bin) << ", rho = " << pct(s.last_bin, s.total) << "\n\n";
  out << "| Bin | Left (ms) | Right (ms) | Count | rho (%) |\n|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < h.n_bins; ++i)
    out << "| " << i << " | " << format_number(h.left_edge(i)) << " | "
        << format_number(h.right_edge(i)) << " | " << h.counts[i] << " | "
        << format_percent(h.counts[i], h.total) << " |\n";
  out << "\n";
  return out.str();
}

std::string render_report(const HtdDocument& doc, const std::optional<DelayAnalysis>& delay) {
  std::ostringstream out;
  out << "# " << doc.title << "\n\n";
  out << "- document: " << doc.id << "\n- status: " << to_string(doc.status) << "\n\n";

  out << "## Test Case\n\n" << text_or_dash(doc.test_case.narrative) << "\n\n";
  out << "## Qualification Strategy\n\n";
  out << "- uncertainty identification: "
      << text_or_dash(doc.qualification_strategy.uncertainty_identification) << "\n";
  out << "- uncertainty management: "
      << text_or_dash(doc.qualification_strategy.uncertainty_management_strategy) << "\n\n";

  poi_section(doc, out);
  sbd_section(doc, out);
  parameter_section(doc, out);
  es_section(doc, out);
  if (delay) out << render_delay_section(*delay);
  return out.str();
}

}  // namespace usat
