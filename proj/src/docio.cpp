#include "usat/docio.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "usat/format.hpp"

namespace usat {

namespace {

// ---------------------------------------------------------------------------
// Reading

std::string describe_node(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null: return "null";
    case YAML::NodeType::Map: return "map";
    case YAML::NodeType::Sequence: return "sequence";
    case YAML::NodeType::Scalar: return "'" + n.Scalar() + "'";
    default: return "nothing";
  }
}

void check_tag(const YAML::Node& n, const std::string& path) {
  const std::string& tag = n.Tag();
  if (!tag.empty() && tag != "?" && tag != "!")
    throw SchemaError(path, "untagged node", "tag " + tag);
}

// A YAML map with schema-checked keys. Every key must be consumed or listed
// as known, otherwise finish() reports it.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    check_tag(node_, path_or_root());
    if (!node_.IsMap()) throw SchemaError(path_or_root(), "map", describe_node(node_));
    std::set<std::string> seen;
    for (const auto& kv : node_) {
      if (!kv.first.IsScalar())
        throw SchemaError(path_or_root(), "scalar keys", describe_node(kv.first));
      const std::string key = kv.first.Scalar();
      if (!seen.insert(key).second)
        throw SchemaError(path_ + "/" + key, "unique key", "duplicate key '" + key + "'");
      keys_.push_back(key);
    }
  }

  const std::string& path() const { return path_; }
  std::string child(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) {
    used_.insert(key);
    return node_[key].IsDefined();
  }

  YAML::Node required(const std::string& key) {
    used_.insert(key);
    YAML::Node n = node_[key];
    if (!n.IsDefined()) throw SchemaError(child(key), "key '" + key + "'", "nothing");
    check_tag(n, child(key));
    return n;
  }

  std::optional<YAML::Node> optional(const std::string& key) {
    used_.insert(key);
    YAML::Node n = node_[key];
    if (!n.IsDefined()) return std::nullopt;
    check_tag(n, child(key));
    return n;
  }

  void finish() const {
    for (const auto& k : keys_)
      if (!used_.contains(k)) throw SchemaError(child(k), "known key", "unknown key '" + k + "'");
  }

 private:
  std::string path_or_root() const { return path_.empty() ? "/" : path_; }

  YAML::Node node_;
  std::string path_;
  std::vector<std::string> keys_;
  std::set<std::string> used_;
};

std::string read_string(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) throw SchemaError(path, "string", describe_node(n));
  return n.Scalar();
}

double read_number(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) throw SchemaError(path, "number", describe_node(n));
  std::string_view text = n.Scalar();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw SchemaError(path, "finite number", describe_node(n));
  return v;
}

int read_int(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) throw SchemaError(path, "integer", describe_node(n));
  const std::string& text = n.Scalar();
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw SchemaError(path, "integer", describe_node(n));
  return v;
}

bool read_bool(const YAML::Node& n, const std::string& path) {
  if (n.IsScalar() && n.Scalar() == "true") return true;
  if (n.IsScalar() && n.Scalar() == "false") return false;
  throw SchemaError(path, "true or false", describe_node(n));
}

template <class T, class F>
std::vector<T> read_list(const YAML::Node& n, const std::string& path, F&& item) {
  if (!n.IsSequence()) throw SchemaError(path, "sequence", describe_node(n));
  std::vector<T> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    check_tag(n[i], p);
    out.push_back(item(n[i], p));
  }
  return out;
}

std::vector<std::string> read_strings(const YAML::Node& n, const std::string& path) {
  return read_list<std::string>(n, path, read_string);
}

std::vector<double> read_numbers(const YAML::Node& n, const std::string& path) {
  return read_list<double>(n, path, read_number);
}

std::vector<std::string> opt_strings(MapReader& m, const std::string& key) {
  auto n = m.optional(key);
  return n ? read_strings(*n, m.child(key)) : std::vector<std::string>{};
}

std::string opt_string(MapReader& m, const std::string& key) {
  auto n = m.optional(key);
  return n ? read_string(*n, m.child(key)) : std::string{};
}

template <class E>
E read_enum(const YAML::Node& n, const std::string& path, std::initializer_list<E> values) {
  const std::string text = read_string(n, path);
  std::string expected;
  for (E v : values) {
    if (to_string(v) == text) return v;
    expected += (expected.empty() ? "" : "|") + to_string(v);
  }
  throw SchemaError(path, "one of " + expected, describe_node(n));
}

UncertaintyRepr read_repr(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  const std::string type = read_string(m.required("type"), m.child("type"));
  auto num = [&](const char* key) { return read_number(m.required(key), m.child(key)); };
  try {
    UncertaintyRepr out;
    if (type == "point") {
      out = PointValue{num("value")};
    } else if (type == "interval") {
      const double lo = num("lo");
      out = IntervalRepr{Interval(lo, num("hi"))};
    } else if (type == "uniform") {
      const double lo = num("lo");
      out = UniformDist{Interval(lo, num("hi"))};
    } else if (type == "normal") {
      const double mean = num("mean");
      out = NormalDist(mean, num("std"));
    } else if (type == "triangular") {
      const double lo = num("lo");
      const double mode = num("mode");
      out = TriangularDist(lo, mode, num("hi"));
    } else if (type == "empirical") {
      auto samples = read_numbers(m.required("samples"), m.child("samples"));
      out = EmpiricalDistribution(std::move(samples), opt_string(m, "provenance"));
    } else if (type == "pbox") {
      auto lower = read_numbers(m.required("lower"), m.child("lower"));
      auto upper = read_numbers(m.required("upper"), m.child("upper"));
      out = PBox(EmpiricalDistribution(std::move(lower)), EmpiricalDistribution(std::move(upper)));
    } else if (type == "external") {
      out = ExternalTag{read_string(m.required("name"), m.child("name"))};
    } else {
      throw SchemaError(m.child("type"),
                        "point|interval|uniform|normal|triangular|empirical|pbox|external",
                        "'" + type + "'");
    }
    m.finish();
    return out;
  } catch (const InvalidArgument& e) {
    throw SchemaError(path, "valid " + type + " representation", e.what());
  } catch (const EmptySamples& e) {
    throw SchemaError(path, "valid " + type + " representation", e.what());
  }
}

Quantity read_quantity(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  Quantity q;
  q.value = read_number(m.required("value"), m.child("value"));
  q.unit = opt_string(m, "unit");
  m.finish();
  return q;
}

QuantityRange read_range(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  QuantityRange r;
  r.lo = read_number(m.required("lo"), m.child("lo"));
  r.hi = read_number(m.required("hi"), m.child("hi"));
  r.unit = opt_string(m, "unit");
  m.finish();
  return r;
}

TestCase read_test_case(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  TestCase tc;
  tc.narrative = opt_string(m, "narrative");
  tc.variability_attributes = opt_strings(m, "variability_attributes");
  tc.quality_attributes = opt_strings(m, "quality_attributes");
  if (auto n = m.optional("poi_factor_analysis_ref"))
    tc.poi_factor_analysis_ref = read_strings(*n, m.child("poi_factor_analysis_ref"));
  m.finish();
  return tc;
}

QualificationStrategy read_qs(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  QualificationStrategy qs;
  qs.narrative = opt_string(m, "narrative");
  qs.uncertainty_identification = opt_string(m, "uncertainty_identification");
  qs.uncertainty_management_strategy = opt_string(m, "uncertainty_management_strategy");
  m.finish();
  return qs;
}

TestSpec read_test_spec(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  TestSpec ts;
  ts.inputs = opt_strings(m, "inputs");
  ts.outputs = opt_strings(m, "outputs");
  ts.uncertainty_source_refs = opt_strings(m, "uncertainty_source_refs");
  m.finish();
  return ts;
}

ExperimentSpec read_experiment_spec(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  ExperimentSpec es;
  es.setup_type = read_enum(m.required("setup_type"), m.child("setup_type"),
                            {SetupType::kSoftwareBased, SetupType::kHardwareBased, SetupType::kMixed});
  es.setup_uncertainties = opt_strings(m, "setup_uncertainties");
  if (auto n = m.optional("equipment_precision")) {
    es.equipment_precision = read_list<EquipmentPrecision>(
        *n, m.child("equipment_precision"), [](const YAML::Node& item, const std::string& p) {
          MapReader e(item, p);
          EquipmentPrecision ep;
          ep.instrument = read_string(e.required("instrument"), e.child("instrument"));
          ep.precision = read_quantity(e.required("precision"), e.child("precision"));
          e.finish();
          return ep;
        });
  }
  if (auto n = m.optional("measurement_uncertainty")) {
    es.measurement_uncertainty = read_list<MeasurementUncertainty>(
        *n, m.child("measurement_uncertainty"), [](const YAML::Node& item, const std::string& p) {
          MapReader e(item, p);
          const std::string metric = read_string(e.required("metric"), e.child("metric"));
          MeasurementUncertainty mu{metric,
                                    read_repr(e.required("representation"), e.child("representation"))};
          e.finish();
          return mu;
        });
  }
  es.uncertainty_management = opt_string(m, "uncertainty_management");
  m.finish();
  return es;
}

Ranking read_ranking(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  Ranking r;
  r.metric = read_string(m.required("metric"), m.child("metric"));
  r.entries = read_list<RankEntry>(
      m.required("entries"), m.child("entries"), [](const YAML::Node& item, const std::string& p) {
        MapReader e(item, p);
        RankEntry entry;
        entry.param_id = read_string(e.required("factor"), e.child("factor"));
        entry.magnitude = read_number(e.required("magnitude"), e.child("magnitude"));
        entry.rank = read_int(e.required("rank"), e.child("rank"));
        e.finish();
        return entry;
      });
  m.finish();
  return r;
}

PoiCase read_poi(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  PoiCase poi;
  poi.id = read_string(m.required("id"), m.child("id"));
  poi.objective = read_enum(m.required("objective"), m.child("objective"),
                            {PoiObjective::kUncertaintyAnalysis, PoiObjective::kSensitivityAnalysis,
                             PoiObjective::kScalingAnalysis});
  poi.description = opt_string(m, "description");
  if (auto n = m.optional("target_metrics")) {
    poi.target_metrics = read_list<TargetMetric>(
        *n, m.child("target_metrics"), [](const YAML::Node& item, const std::string& p) {
          MapReader t(item, p);
          TargetMetric tm;
          tm.name = read_string(t.required("name"), t.child("name"));
          tm.unit = opt_string(t, "unit");
          if (auto f = t.optional("formula")) tm.formula = read_string(*f, t.child("formula"));
          t.finish();
          return tm;
        });
  }
  poi.assigned_factors = opt_strings(m, "assigned_factors");
  if (auto n = m.optional("ranking")) poi.ranking = read_ranking(*n, m.child("ranking"));
  m.finish();
  return poi;
}

SystemBreakdown read_sbd(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  const std::string root = read_string(m.required("root"), m.child("root"));
  auto nodes = read_list<SbdNode>(
      m.required("nodes"), m.child("nodes"), [](const YAML::Node& item, const std::string& p) {
        MapReader n(item, p);
        SbdNode sn;
        sn.id = read_string(n.required("id"), n.child("id"));
        sn.name = read_string(n.required("name"), n.child("name"));
        sn.description = opt_string(n, "description");
        if (auto parent = n.optional("parent")) sn.parent = read_string(*parent, n.child("parent"));
        sn.kind = read_enum(n.required("kind"), n.child("kind"),
                            {NodeKind::kSystem, NodeKind::kSubsystem, NodeKind::kComponent});
        n.finish();
        return sn;
      });
  m.finish();
  SystemBreakdown sbd;
  try {
    sbd = build_sbd(std::move(nodes));
  } catch (const SbdError& e) {
    throw SchemaError(m.child("nodes"), "a tree", e.what());
  }
  if (sbd.root().id != root)
    throw SchemaError(m.child("root"), "'" + sbd.root().id + "' (the parentless node)",
                      "'" + root + "'");
  return sbd;
}

UncertainParameter read_parameter(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  UncertainParameter p;
  p.id = read_string(m.required("id"), m.child("id"));
  p.name = read_string(m.required("name"), m.child("name"));
  p.component_ref = read_string(m.required("component_ref"), m.child("component_ref"));
  p.framing = read_enum(m.required("framing"), m.child("framing"),
                        {Framing::kAleatory, Framing::kEpistemic});
  p.representation = read_repr(m.required("representation"), m.child("representation"));
  p.nominal = read_quantity(m.required("nominal"), m.child("nominal"));
  p.range = read_range(m.required("range"), m.child("range"));
  if (auto n = m.optional("taxonomy_tags")) {
    p.taxonomy_tags = read_list<TaxonomyTag>(*n, m.child("taxonomy_tags"), [](const YAML::Node& item, const std::string& tp) {
      return read_enum(item, tp,
                       {TaxonomyTag::kModelParameter, TaxonomyTag::kMeasurementError,
                        TaxonomyTag::kEnvironmentalInput, TaxonomyTag::kCommunication,
                        TaxonomyTag::kConfiguration, TaxonomyTag::kNumericalArtifact});
    });
  }
  p.poi_assignments = opt_strings(m, "poi_assignments");
  if (auto n = m.optional("screening_selected"))
    p.screening_selected = read_bool(*n, m.child("screening_selected"));
  m.finish();
  return p;
}

EsEntry read_es_entry(const YAML::Node& node, const std::string& path) {
  MapReader m(node, path);
  EsEntry e;
  e.aspect = read_string(m.required("aspect"), m.child("aspect"));
  e.category = read_enum(m.required("category"), m.child("category"),
                         {EsCategory::kRepresentational, EsCategory::kParametric,
                          EsCategory::kMeasurement, EsCategory::kProcess});
  e.mitigation = opt_string(m, "mitigation");
  e.linked_parameters = opt_strings(m, "linked_parameters");
  m.finish();
  return e;
}

void check_final_completeness(const HtdDocument& doc) {
  if (doc.status != DocStatus::kFinal) return;
  if (doc.qualification_strategy.uncertainty_identification.empty())
    throw SchemaError("/qualification_strategy/uncertainty_identification",
                      "non-empty text in a final document", "empty text");
  if (doc.qualification_strategy.uncertainty_management_strategy.empty())
    throw SchemaError("/qualification_strategy/uncertainty_management_strategy",
                      "non-empty text in a final document", "empty text");
  const auto nodes = doc.sbd.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].description.empty())
      throw SchemaError("/sbd/nodes/" + std::to_string(i) + "/description",
                        "non-empty text in a final document", "empty text");
  }
}

// ---------------------------------------------------------------------------
// Writing

// Output tree: scalars carry their final text, so quoting is decided once.
struct Out;
using OutMap = std::vector<std::pair<std::string, Out>>;
using OutList = std::vector<Out>;
struct Out {
  std::variant<std::string, OutList, OutMap> v;
  bool flow = false;  // lists of numbers are written inline
};

bool is_plain_safe(const std::string& s) {
  if (s.empty()) return false;
  static const std::set<std::string> reserved = {
      "null", "Null", "NULL", "~",  "true", "True", "TRUE", "false", "False", "FALSE",
      "yes",  "Yes",  "YES",  "no", "No",   "NO",   "on",   "On",    "ON",    "off",
      "Off",  "OFF",  "y",    "Y",  "n",    "N"};
  if (reserved.contains(s)) return false;
  const char first = s.front();
  if ((first >= '0' && first <= '9') || first == '.' || first == '+' || first == '-' ||
      first == ' ' || s.back() == ' ')
    return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u > 0x7e) return false;
    switch (c) {
      case ':': case '#': case ',': case '[': case ']': case '{': case '}':
      case '&': case '*': case '!': case '|': case '>': case '\'': case '"':
      case '%': case '@': case '`': case '?': case '\\':
        return false;
      default:
        break;
    }
  }
  return true;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20 || u == 0x7f) {
          static const char* hex = "0123456789abcdef";
          out += "\\x";
          out += hex[u >> 4];
          out += hex[u & 0xf];
        } else {
          out += c;
        }
    }
  }
  return out + '"';
}

Out str(const std::string& s) { return Out{is_plain_safe(s) ? s : quote(s)}; }
Out num(double v) { return Out{format_number(v)}; }
Out integer(long long v) { return Out{std::to_string(v)}; }
Out boolean(bool v) { return Out{v ? "true" : "false"}; }

Out strs(const std::vector<std::string>& v) {
  OutList l;
  for (const auto& s : v) l.push_back(str(s));
  return Out{std::move(l)};
}

Out nums(std::span<const double> v) {
  OutList l;
  for (double x : v) l.push_back(num(x));
  return Out{std::move(l), true};
}

template <class T, class F>
Out list(const std::vector<T>& v, F&& f) {
  OutList l;
  for (const auto& x : v) l.push_back(f(x));
  return Out{std::move(l)};
}

Out repr_out(const UncertaintyRepr& repr) {
  OutMap m;
  m.emplace_back("type", Out{repr_type_name(repr)});
  std::visit(
      [&m](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PointValue>) {
          m.emplace_back("value", num(r.value));
        } else if constexpr (std::is_same_v<T, IntervalRepr> || std::is_same_v<T, UniformDist>) {
          m.emplace_back("lo", num(r.bounds.lo()));
          m.emplace_back("hi", num(r.bounds.hi()));
        } else if constexpr (std::is_same_v<T, NormalDist>) {
          m.emplace_back("mean", num(r.mean()));
          m.emplace_back("std", num(r.stddev()));
        } else if constexpr (std::is_same_v<T, TriangularDist>) {
          m.emplace_back("lo", num(r.lo()));
          m.emplace_back("mode", num(r.mode()));
          m.emplace_back("hi", num(r.hi()));
        } else if constexpr (std::is_same_v<T, EmpiricalDistribution>) {
          m.emplace_back("samples", nums(r.samples()));
          m.emplace_back("provenance", str(r.provenance()));
        } else if constexpr (std::is_same_v<T, PBox>) {
          m.emplace_back("lower", nums(r.lower_cdf().samples()));
          m.emplace_back("upper", nums(r.upper_cdf().samples()));
        } else {
          m.emplace_back("name", str(r.name));
        }
      },
      repr);
  return Out{std::move(m)};
}

Out document_out(const HtdDocument& d) {
  OutMap top;
  top.emplace_back("id", str(d.id));
  top.emplace_back("title", str(d.title));
  top.emplace_back("status", Out{to_string(d.status)});

  OutMap tc;
  tc.emplace_back("narrative", str(d.test_case.narrative));
  tc.emplace_back("variability_attributes", strs(d.test_case.variability_attributes));
  tc.emplace_back("quality_attributes", strs(d.test_case.quality_attributes));
  if (d.test_case.poi_factor_analysis_ref)
    tc.emplace_back("poi_factor_analysis_ref", strs(*d.test_case.poi_factor_analysis_ref));
  top.emplace_back("test_case", Out{std::move(tc)});

  OutMap qs;
  qs.emplace_back("narrative", str(d.qualification_strategy.narrative));
  qs.emplace_back("uncertainty_identification", str(d.qualification_strategy.uncertainty_identification));
  qs.emplace_back("uncertainty_management_strategy",
                  str(d.qualification_strategy.uncertainty_management_strategy));
  top.emplace_back("qualification_strategy", Out{std::move(qs)});

  OutMap ts;
  ts.emplace_back("inputs", strs(d.test_spec.inputs));
  ts.emplace_back("outputs", strs(d.test_spec.outputs));
  ts.emplace_back("uncertainty_source_refs", strs(d.test_spec.uncertainty_source_refs));
  top.emplace_back("test_spec", Out{std::move(ts)});

  const auto& e = d.experiment_spec;
  OutMap es;
  es.emplace_back("setup_type", Out{to_string(e.setup_type)});
  es.emplace_back("setup_uncertainties", strs(e.setup_uncertainties));
  es.emplace_back("equipment_precision", list(e.equipment_precision, [](const EquipmentPrecision& p) {
                    OutMap q;
                    q.emplace_back("value", num(p.precision.value));
                    q.emplace_back("unit", str(p.precision.unit));
                    OutMap m;
                    m.emplace_back("instrument", str(p.instrument));
                    m.emplace_back("precision", Out{std::move(q)});
                    return Out{std::move(m)};
                  }));
  es.emplace_back("measurement_uncertainty",
                  list(e.measurement_uncertainty, [](const MeasurementUncertainty& mu) {
                    OutMap m;
                    m.emplace_back("metric", str(mu.metric));
                    m.emplace_back("representation", repr_out(mu.representation));
                    return Out{std::move(m)};
                  }));
  es.emplace_back("uncertainty_management", str(e.uncertainty_management));
  top.emplace_back("experiment_spec", Out{std::move(es)});

  top.emplace_back("poi_cases", list(d.poi_cases, [](const PoiCase& p) {
                     OutMap m;
                     m.emplace_back("id", str(p.id));
                     m.emplace_back("objective", Out{to_string(p.objective)});
                     m.emplace_back("description", str(p.description));
                     m.emplace_back("target_metrics", list(p.target_metrics, [](const TargetMetric& t) {
                                      OutMap tm;
                                      tm.emplace_back("name", str(t.name));
                                      tm.emplace_back("unit", str(t.unit));
                                      if (t.formula) tm.emplace_back("formula", str(*t.formula));
                                      return Out{std::move(tm)};
                                    }));
                     m.emplace_back("assigned_factors", strs(p.assigned_factors));
                     if (p.ranking) {
                       OutMap r;
                       r.emplace_back("metric", str(p.ranking->metric));
                       r.emplace_back("entries", list(p.ranking->entries, [](const RankEntry& re) {
                                        OutMap em;
                                        em.emplace_back("factor", str(re.param_id));
                                        em.emplace_back("magnitude", num(re.magnitude));
                                        em.emplace_back("rank", integer(re.rank));
                                        return Out{std::move(em)};
                                      }));
                       m.emplace_back("ranking", Out{std::move(r)});
                     }
                     return Out{std::move(m)};
                   }));

  OutMap sbd;
  sbd.emplace_back("root", str(d.sbd.nodes().empty() ? std::string() : d.sbd.root().id));
  sbd.emplace_back("nodes", list(flatten(d.sbd), [](const SbdNode& n) {
                     OutMap m;
                     m.emplace_back("id", str(n.id));
                     m.emplace_back("name", str(n.name));
                     m.emplace_back("kind", Out{to_string(n.kind)});
                     if (n.parent) m.emplace_back("parent", str(*n.parent));
                     m.emplace_back("description", str(n.description));
                     return Out{std::move(m)};
                   }));
  top.emplace_back("sbd", Out{std::move(sbd)});

  top.emplace_back("parameters", list(d.parameters, [](const UncertainParameter& p) {
                     OutMap m;
                     m.emplace_back("id", str(p.id));
                     m.emplace_back("name", str(p.name));
                     m.emplace_back("component_ref", str(p.component_ref));
                     m.emplace_back("framing", Out{to_string(p.framing)});
                     m.emplace_back("representation", repr_out(p.representation));
                     OutMap nominal;
                     nominal.emplace_back("value", num(p.nominal.value));
                     nominal.emplace_back("unit", str(p.nominal.unit));
                     m.emplace_back("nominal", Out{std::move(nominal)});
                     OutMap range;
                     range.emplace_back("lo", num(p.range.lo));
                     range.emplace_back("hi", num(p.range.hi));
                     range.emplace_back("unit", str(p.range.unit));
                     m.emplace_back("range", Out{std::move(range)});
                     OutList tags;
                     for (auto t : p.taxonomy_tags) tags.push_back(Out{to_string(t)});
                     m.emplace_back("taxonomy_tags", Out{std::move(tags)});
                     m.emplace_back("poi_assignments", strs(p.poi_assignments));
                     m.emplace_back("screening_selected", boolean(p.screening_selected));
                     return Out{std::move(m)};
                   }));

  top.emplace_back("es_viewpoint", list(d.es_viewpoint.entries, [](const EsEntry& en) {
                     OutMap m;
                     m.emplace_back("aspect", str(en.aspect));
                     m.emplace_back("category", Out{to_string(en.category)});
                     m.emplace_back("mitigation", str(en.mitigation));
                     m.emplace_back("linked_parameters", strs(en.linked_parameters));
                     return Out{std::move(m)};
                   }));
  return Out{std::move(top)};
}

void emit(const Out& o, int indent, std::string& out);

// Value after "key:" or "- ": inline scalars, nested blocks on new lines.
void emit_value(const Out& o, int indent, std::string& out) {
  if (const auto* s = std::get_if<std::string>(&o.v)) {
    out += ' ' + *s + '\n';
  } else if (const auto* l = std::get_if<OutList>(&o.v); l && (l->empty() || o.flow)) {
    out += " [";
    for (std::size_t i = 0; i < l->size(); ++i) {
      if (i) out += ", ";
      out += std::get<std::string>((*l)[i].v);
    }
    out += "]\n";
  } else if (const auto* m = std::get_if<OutMap>(&o.v); m && m->empty()) {
    out += " {}\n";
  } else {
    out += '\n';
    emit(o, indent, out);
  }
}

void emit(const Out& o, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (const auto* m = std::get_if<OutMap>(&o.v)) {
    for (const auto& [k, v] : *m) {
      out += pad + k + ':';
      emit_value(v, indent + 2, out);
    }
  } else if (const auto* l = std::get_if<OutList>(&o.v)) {
    for (const auto& item : *l) {
      if (const auto* im = std::get_if<OutMap>(&item.v); im && !im->empty()) {
        // First key shares the dash line; the rest align under it.
        std::string block;
        emit(item, indent + 2, block);
        out += pad + "- " + block.substr(static_cast<std::size_t>(indent) + 2);
      } else {
        out += pad + '-';
        emit_value(item, indent + 2, out);
      }
    }
  }
}

}  // namespace

HtdDocument parse_document(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw SyntaxError(static_cast<std::size_t>(e.mark.line + 1),
                      static_cast<std::size_t>(e.mark.column + 1), e.msg);
  }
  MapReader m(root, "");
  HtdDocument doc;
  doc.id = read_string(m.required("id"), "/id");
  doc.title = read_string(m.required("title"), "/title");
  doc.status = read_enum(m.required("status"), "/status", {DocStatus::kDraft, DocStatus::kFinal});
  doc.test_case = read_test_case(m.required("test_case"), "/test_case");
  doc.qualification_strategy = read_qs(m.required("qualification_strategy"), "/qualification_strategy");
  doc.test_spec = read_test_spec(m.required("test_spec"), "/test_spec");
  doc.experiment_spec = read_experiment_spec(m.required("experiment_spec"), "/experiment_spec");
  doc.poi_cases = read_list<PoiCase>(m.required("poi_cases"), "/poi_cases", read_poi);
  doc.sbd = read_sbd(m.required("sbd"), "/sbd");
  doc.parameters = read_list<UncertainParameter>(m.required("parameters"), "/parameters", read_parameter);
  doc.es_viewpoint.entries = read_list<EsEntry>(m.required("es_viewpoint"), "/es_viewpoint", read_es_entry);
  m.finish();
  check_final_completeness(doc);
  return doc;
}

std::string serialize_document(const HtdDocument& doc) {
  std::string out;
  emit(document_out(doc), 0, out);
  return out;
}

HtdDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

void save_document(const HtdDocument& doc, const std::string& path) {
  const std::string text = serialize_document(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

HtdDocument skeleton_document() {
  HtdDocument doc;
  doc.id = "HTD-NEW";
  doc.title = "New test description";
  doc.status = DocStatus::kDraft;
  doc.test_case.narrative = "Describe the test case.";
  doc.qualification_strategy.narrative = "Describe how results qualify the test objective.";
  doc.test_spec.inputs = {"PAR-1"};
  doc.test_spec.outputs = {"metric_1"};
  doc.experiment_spec.setup_type = SetupType::kSoftwareBased;

  PoiCase poi;
  poi.id = "POI-1";
  poi.objective = PoiObjective::kSensitivityAnalysis;
  poi.description = "Purpose of investigation.";
  poi.target_metrics = {TargetMetric{"metric_1", "", std::nullopt}};
  poi.assigned_factors = {"PAR-1"};
  doc.poi_cases = {poi};

  doc.sbd = build_sbd({SbdNode{"SB-1", "System", "System under test.", std::nullopt, NodeKind::kSystem}});

  UncertainParameter p;
  p.id = "PAR-1";
  p.name = "Parameter 1";
  p.component_ref = "SB-1";
  p.framing = Framing::kEpistemic;
  p.representation = IntervalRepr{Interval(0.0, 1.0)};
  p.nominal = Quantity{0.5, ""};
  p.range = QuantityRange{0.0, 1.0, ""};
  p.poi_assignments = {"POI-1"};
  p.screening_selected = true;
  doc.parameters = {p};
  return doc;
}

}  // namespace usat
