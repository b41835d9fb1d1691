#include "usat/document.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "usat/error.hpp"
#include "usat/format.hpp"

namespace usat {

const PoiCase* HtdDocument::find_poi(const std::string& poi_id) const {
  for (const auto& p : poi_cases)
    if (p.id == poi_id) return &p;
  return nullptr;
}

const UncertainParameter* HtdDocument::find_parameter(const std::string& param_id) const {
  for (const auto& p : parameters)
    if (p.id == param_id) return &p;
  return nullptr;
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(),
      [](const Finding& f) { return f.severity == Severity::kError; }));
}

std::size_t ValidationReport::warning_count() const {
  return findings.size() - error_count();
}

std::string finding_code_name(FindingCode code) {
  switch (code) {
    case FindingCode::kDupId: return "E_DUP_ID";
    case FindingCode::kDanglingComponent: return "E_DANGLING_COMPONENT";
    case FindingCode::kDanglingPoi: return "E_DANGLING_POI";
    case FindingCode::kBidirFactor: return "E_BIDIR_FACTOR";
    case FindingCode::kRangeOrder: return "E_RANGE_ORDER";
    case FindingCode::kFramingRepr: return "E_FRAMING_REPR";
    case FindingCode::kUnassignedParam: return "W_UNASSIGNED_PARAM";
  }
  return "E_DUP_ID";
}

Severity severity_of(FindingCode code) {
  return code == FindingCode::kUnassignedParam ? Severity::kWarning : Severity::kError;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool has_tag(const UncertainParameter& p, TaxonomyTag tag) {
  return std::find(p.taxonomy_tags.begin(), p.taxonomy_tags.end(), tag) !=
         p.taxonomy_tags.end();
}

class Validator {
 public:
  explicit Validator(const HtdDocument& doc) : doc_(doc) {}

  ValidationReport run() {
    check_unique_ids();
    check_test_case();
    check_test_spec();
    check_experiment_spec();
    check_poi_cases();
    check_parameters();
    check_es_viewpoint();
    return std::move(report_);
  }

 private:
  void add(FindingCode code, std::string path, std::string message) {
    report_.findings.push_back(
        Finding{code, severity_of(code), std::move(path), std::move(message)});
  }

  static std::string at(const std::string& base, std::size_t i) {
    return base + "/" + std::to_string(i);
  }

  // PoI, SBD node and parameter ids share one namespace.
  void check_unique_ids() {
    std::set<std::string> seen;
    auto visit = [&](const std::string& id, const std::string& path) {
      if (!seen.insert(id).second) add(FindingCode::kDupId, path, "duplicate id '" + id + "'");
    };
    for (std::size_t i = 0; i < doc_.poi_cases.size(); ++i)
      visit(doc_.poi_cases[i].id, at("/poi_cases", i) + "/id");
    const auto nodes = doc_.sbd.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i)
      visit(nodes[i].id, at("/sbd/nodes", i) + "/id");
    for (std::size_t i = 0; i < doc_.parameters.size(); ++i)
      visit(doc_.parameters[i].id, at("/parameters", i) + "/id");

    for (std::size_t i = 0; i < doc_.poi_cases.size(); ++i) {
      std::set<std::string> names;
      const auto& metrics = doc_.poi_cases[i].target_metrics;
      for (std::size_t j = 0; j < metrics.size(); ++j) {
        if (!names.insert(metrics[j].name).second)
          add(FindingCode::kDupId, at(at("/poi_cases", i) + "/target_metrics", j) + "/name",
              "duplicate target metric '" + metrics[j].name + "' in " + doc_.poi_cases[i].id);
      }
    }
  }

  void check_test_case() {
    if (!doc_.test_case.poi_factor_analysis_ref) return;
    const auto& refs = *doc_.test_case.poi_factor_analysis_ref;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (!doc_.find_poi(refs[i]))
        add(FindingCode::kDanglingPoi, at("/test_case/poi_factor_analysis_ref", i),
            "unknown PoI '" + refs[i] + "'");
    }
  }

  void check_param_ref(const std::string& id, const std::string& path) {
    if (!doc_.find_parameter(id))
      add(FindingCode::kDanglingComponent, path, "unknown parameter '" + id + "'");
  }

  void check_test_spec() {
    const auto& ts = doc_.test_spec;
    for (std::size_t i = 0; i < ts.inputs.size(); ++i)
      check_param_ref(ts.inputs[i], at("/test_spec/inputs", i));
    for (std::size_t i = 0; i < ts.uncertainty_source_refs.size(); ++i) {
      const auto& id = ts.uncertainty_source_refs[i];
      const auto path = at("/test_spec/uncertainty_source_refs", i);
      const auto* p = doc_.find_parameter(id);
      if (!p) {
        add(FindingCode::kDanglingComponent, path, "unknown parameter '" + id + "'");
      } else if (!contains(ts.inputs, id) && !has_tag(*p, TaxonomyTag::kEnvironmentalInput)) {
        add(FindingCode::kDanglingComponent, path,
            "uncertainty source '" + id + "' is neither an input nor an environmental parameter");
      }
    }
  }

  void check_experiment_spec() {
    const auto& mu = doc_.experiment_spec.measurement_uncertainty;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (!contains(doc_.test_spec.outputs, mu[i].metric))
        add(FindingCode::kDanglingComponent,
            at("/experiment_spec/measurement_uncertainty", i) + "/metric",
            "metric '" + mu[i].metric + "' is not a test output");
    }
  }

  void check_poi_cases() {
    for (std::size_t i = 0; i < doc_.poi_cases.size(); ++i) {
      const auto& poi = doc_.poi_cases[i];
      for (std::size_t j = 0; j < poi.assigned_factors.size(); ++j) {
        const auto& id = poi.assigned_factors[j];
        const auto path = at(at("/poi_cases", i) + "/assigned_factors", j);
        const auto* p = doc_.find_parameter(id);
        if (!p) {
          add(FindingCode::kBidirFactor, path, "assigned factor '" + id + "' is not a parameter");
        } else if (!contains(p->poi_assignments, poi.id)) {
          add(FindingCode::kBidirFactor, path,
              "parameter '" + id + "' does not list " + poi.id + " in poi_assignments");
        }
      }
    }
  }

  void check_parameters() {
    for (std::size_t i = 0; i < doc_.parameters.size(); ++i) {
      const auto& p = doc_.parameters[i];
      const auto base = at("/parameters", i);
      if (!doc_.sbd.contains(p.component_ref))
        add(FindingCode::kDanglingComponent, base + "/component_ref",
            "component '" + p.component_ref + "' is not in the SBD");
      for (std::size_t j = 0; j < p.poi_assignments.size(); ++j) {
        const auto& poi_id = p.poi_assignments[j];
        const auto path = at(base + "/poi_assignments", j);
        const auto* poi = doc_.find_poi(poi_id);
        if (!poi) {
          add(FindingCode::kDanglingPoi, path, "unknown PoI '" + poi_id + "'");
        } else if (!contains(poi->assigned_factors, p.id)) {
          add(FindingCode::kBidirFactor, path,
              poi_id + " does not list '" + p.id + "' in assigned_factors");
        }
      }
      if (p.range.lo > p.range.hi) {
        add(FindingCode::kRangeOrder, base + "/range",
            "range lower bound " + format_number(p.range.lo) + " exceeds upper bound " +
                format_number(p.range.hi));
      } else if (p.nominal.value < p.range.lo || p.nominal.value > p.range.hi) {
        add(FindingCode::kRangeOrder, base + "/nominal",
            "nominal " + format_number(p.nominal.value) + " outside range [" +
                format_number(p.range.lo) + ", " + format_number(p.range.hi) + "]");
      }
      if (p.nominal.unit != p.range.unit)
        add(FindingCode::kRangeOrder, base + "/range/unit",
            "range unit '" + p.range.unit + "' differs from nominal unit '" + p.nominal.unit + "'");
      if (p.framing == Framing::kAleatory && !is_probabilistic(p.representation))
        add(FindingCode::kFramingRepr, base + "/representation",
            "aleatory parameter needs a distribution or empirical representation, got " +
                repr_type_name(p.representation));
      if (p.poi_assignments.empty())
        add(FindingCode::kUnassignedParam, base + "/poi_assignments",
            "parameter '" + p.id + "' is not assigned to any PoI");
    }
  }

  void check_es_viewpoint() {
    const auto& entries = doc_.es_viewpoint.entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = 0; j < entries[i].linked_parameters.size(); ++j)
        check_param_ref(entries[i].linked_parameters[j],
                        at(at("/es_viewpoint", i) + "/linked_parameters", j));
    }
  }

  const HtdDocument& doc_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_document(const HtdDocument& doc) { return Validator(doc).run(); }

HtdDocument assign_factor(const HtdDocument& doc, const std::string& param_id,
                          const std::string& poi_id) {
  HtdDocument out = doc;
  auto param = std::find_if(out.parameters.begin(), out.parameters.end(),
                            [&](const auto& p) { return p.id == param_id; });
  if (param == out.parameters.end()) throw UnknownId(param_id);
  auto poi = std::find_if(out.poi_cases.begin(), out.poi_cases.end(),
                          [&](const auto& p) { return p.id == poi_id; });
  if (poi == out.poi_cases.end()) throw UnknownId(poi_id);
  if (!contains(param->poi_assignments, poi_id)) param->poi_assignments.push_back(poi_id);
  if (!contains(poi->assigned_factors, param_id)) poi->assigned_factors.push_back(param_id);
  return out;
}

std::vector<UncertainParameter> factors_for_poi(const HtdDocument& doc,
                                                const std::string& poi_id) {
  if (!doc.find_poi(poi_id)) throw UnknownId(poi_id);
  std::vector<UncertainParameter> out;
  for (const auto& p : doc.parameters)
    if (contains(p.poi_assignments, poi_id)) out.push_back(p);
  return out;
}

std::string to_string(DocStatus v) { return v == DocStatus::kFinal ? "final" : "draft"; }

std::string to_string(Framing v) { return v == Framing::kAleatory ? "aleatory" : "epistemic"; }

std::string to_string(PoiObjective v) {
  switch (v) {
    case PoiObjective::kUncertaintyAnalysis: return "uncertainty_analysis";
    case PoiObjective::kSensitivityAnalysis: return "sensitivity_analysis";
    case PoiObjective::kScalingAnalysis: return "scaling_analysis";
  }
  return "uncertainty_analysis";
}

std::string to_string(SetupType v) {
  switch (v) {
    case SetupType::kSoftwareBased: return "software_based";
    case SetupType::kHardwareBased: return "hardware_based";
    case SetupType::kMixed: return "mixed";
  }
  return "software_based";
}

std::string to_string(TaxonomyTag v) {
  switch (v) {
    case TaxonomyTag::kModelParameter: return "model_parameter";
    case TaxonomyTag::kMeasurementError: return "measurement_error";
    case TaxonomyTag::kEnvironmentalInput: return "environmental_input";
    case TaxonomyTag::kCommunication: return "communication";
    case TaxonomyTag::kConfiguration: return "configuration";
    case TaxonomyTag::kNumericalArtifact: return "numerical_artifact";
  }
  return "model_parameter";
}

std::string to_string(EsCategory v) {
  switch (v) {
    case EsCategory::kRepresentational: return "representational";
    case EsCategory::kParametric: return "parametric";
    case EsCategory::kMeasurement: return "measurement";
    case EsCategory::kProcess: return "process";
  }
  return "representational";
}

}  // namespace usat
