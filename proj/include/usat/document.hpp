#ifndef USAT_DOCUMENT_HPP_
#define USAT_DOCUMENT_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usat/repr.hpp"
#include "usat/sbd.hpp"

namespace usat {

enum class DocStatus { kDraft, kFinal };
enum class Framing { kAleatory, kEpistemic };
enum class PoiObjective { kUncertaintyAnalysis, kSensitivityAnalysis, kScalingAnalysis };
enum class SetupType { kSoftwareBased, kHardwareBased, kMixed };
enum class TaxonomyTag {
  kModelParameter,
  kMeasurementError,
  kEnvironmentalInput,
  kCommunication,
  kConfiguration,
  kNumericalArtifact,
};
enum class EsCategory { kRepresentational, kParametric, kMeasurement, kProcess };

struct Quantity {
  double value = 0.0;
  std::string unit;
  friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct QuantityRange {
  double lo = 0.0;
  double hi = 0.0;
  std::string unit;
  friend bool operator==(const QuantityRange&, const QuantityRange&) = default;
};

struct TestCase {
  std::string narrative;
  std::vector<std::string> variability_attributes;
  std::vector<std::string> quality_attributes;
  std::optional<std::vector<std::string>> poi_factor_analysis_ref;
  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct QualificationStrategy {
  std::string narrative;
  std::string uncertainty_identification;
  std::string uncertainty_management_strategy;
  friend bool operator==(const QualificationStrategy&, const QualificationStrategy&) = default;
};

struct TestSpec {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> uncertainty_source_refs;
  friend bool operator==(const TestSpec&, const TestSpec&) = default;
};

struct EquipmentPrecision {
  std::string instrument;
  Quantity precision;
  friend bool operator==(const EquipmentPrecision&, const EquipmentPrecision&) = default;
};

struct MeasurementUncertainty {
  std::string metric;
  UncertaintyRepr representation;
  friend bool operator==(const MeasurementUncertainty&, const MeasurementUncertainty&) = default;
};

struct ExperimentSpec {
  SetupType setup_type = SetupType::kSoftwareBased;
  std::vector<std::string> setup_uncertainties;
  std::vector<EquipmentPrecision> equipment_precision;
  std::vector<MeasurementUncertainty> measurement_uncertainty;
  std::string uncertainty_management;
  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct TargetMetric {
  std::string name;
  std::string unit;
  std::optional<std::string> formula;
  friend bool operator==(const TargetMetric&, const TargetMetric&) = default;
};

struct RankEntry {
  std::string param_id;
  double magnitude = 0.0;  // |elementary effect|
  int rank = 1;
  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

// Factors ordered by descending |EE| for one metric; ties share a rank.
struct Ranking {
  std::string metric;
  std::vector<RankEntry> entries;
  friend bool operator==(const Ranking&, const Ranking&) = default;
};

struct PoiCase {
  std::string id;
  PoiObjective objective = PoiObjective::kUncertaintyAnalysis;
  std::string description;
  std::vector<TargetMetric> target_metrics;
  std::vector<std::string> assigned_factors;
  std::optional<Ranking> ranking;
  friend bool operator==(const PoiCase&, const PoiCase&) = default;
};

struct UncertainParameter {
  std::string id;
  std::string name;
  std::string component_ref;
  Framing framing = Framing::kEpistemic;
  UncertaintyRepr representation = PointValue{0.0};
  Quantity nominal;
  QuantityRange range;
  std::vector<TaxonomyTag> taxonomy_tags;
  std::vector<std::string> poi_assignments;
  bool screening_selected = false;
  friend bool operator==(const UncertainParameter&, const UncertainParameter&) = default;
};

struct EsEntry {
  std::string aspect;
  EsCategory category = EsCategory::kRepresentational;
  std::string mitigation;
  std::vector<std::string> linked_parameters;
  friend bool operator==(const EsEntry&, const EsEntry&) = default;
};

struct EsViewpoint {
  std::vector<EsEntry> entries;
  friend bool operator==(const EsViewpoint&, const EsViewpoint&) = default;
};

struct HtdDocument {
  std::string id;
  std::string title;
  DocStatus status = DocStatus::kDraft;
  TestCase test_case;
  QualificationStrategy qualification_strategy;
  TestSpec test_spec;
  ExperimentSpec experiment_spec;
  std::vector<PoiCase> poi_cases;
  SystemBreakdown sbd;
  std::vector<UncertainParameter> parameters;
  EsViewpoint es_viewpoint;

  const PoiCase* find_poi(const std::string& id) const;
  const UncertainParameter* find_parameter(const std::string& id) const;

  friend bool operator==(const HtdDocument&, const HtdDocument&) = default;
};

// ---- validation -----------------------------------------------------------

enum class FindingCode {
  kDupId,
  kDanglingComponent,
  kDanglingPoi,
  kBidirFactor,
  kRangeOrder,
  kFramingRepr,
  kUnassignedParam,
};
enum class Severity { kError, kWarning };

struct Finding {
  FindingCode code;
  Severity severity;
  std::string path;  // JSON-pointer style, e.g. /parameters/2/component_ref
  std::string message;
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool ok() const { return error_count() == 0; }
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// "E_DUP_ID", "W_UNASSIGNED_PARAM", ...
std::string finding_code_name(FindingCode code);
Severity severity_of(FindingCode code);

// Semantic checks over a structurally complete document. Findings come out
// in a fixed order (document walk order), so reports are reproducible.
ValidationReport validate_document(const HtdDocument& doc);

// Links parameter and PoI in both directions. Idempotent. Throws UnknownId.
HtdDocument assign_factor(const HtdDocument& doc, const std::string& param_id,
                          const std::string& poi_id);

// Parameters whose poi_assignments name poi_id, in document order.
// Throws UnknownId.
std::vector<UncertainParameter> factors_for_poi(const HtdDocument& doc,
                                                const std::string& poi_id);

// Leaf SBD nodes with no parameter attached, in pre-order. Throws UnknownId
// when a parameter names a missing component.
std::vector<std::string> coverage_check(const SystemBreakdown& sbd,
                                        std::span<const UncertainParameter> params);

// ---- enum names used by the document format and reports -------------------

std::string to_string(DocStatus v);
std::string to_string(Framing v);
std::string to_string(PoiObjective v);
std::string to_string(SetupType v);
std::string to_string(TaxonomyTag v);
std::string to_string(EsCategory v);

}  // namespace usat

#endif  // USAT_DOCUMENT_HPP_
