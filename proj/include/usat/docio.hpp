#ifndef USAT_DOCIO_HPP_
#define USAT_DOCIO_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "usat/delay.hpp"
#include "usat/document.hpp"
#include "usat/error.hpp"

namespace usat {

// Malformed YAML. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& msg)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed YAML that does not fit the document schema.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, std::string expected, std::string found)
      : Error(path + ": expected " + expected + ", found " + found),
        path_(std::move(path)),
        expected_(std::move(expected)),
        found_(std::move(found)) {}
  const std::string& path() const { return path_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::string path_;
  std::string expected_;
  std::string found_;
};

// Reads a document from its YAML text. Unknown keys, missing required keys,
// wrong scalar types, malformed representations and broken SBD trees are
// SchemaErrors; semantic cross-references are left to validate_document.
// When status is final the qualification strategy's uncertainty fields and
// every SBD description must be non-empty.
HtdDocument parse_document(std::string_view text);

// Canonical YAML: fixed key order, list order as stored, shortest round-trip
// number formatting, strings quoted only when a plain scalar would not read
// back verbatim.
std::string serialize_document(const HtdDocument& doc);

HtdDocument load_document(const std::string& path);
void save_document(const HtdDocument& doc, const std::string& path);

// Skeleton document: one system node, one PoI, one parameter, linked both
// ways, so it validates cleanly.
HtdDocument skeleton_document();

// Markdown report. With a delay histogram and summary a delay
// characterization section is appended.
struct DelayAnalysis {
  DelayHistogram histogram;
  DelaySummary summary;
  std::string source;
};
std::string render_report(const HtdDocument& doc,
                          const std::optional<DelayAnalysis>& delay = std::nullopt);

// Delay characterization section alone (summary plus relative-probability
// table), as embedded by render_report.
std::string render_delay_section(const DelayAnalysis& delay);

}  // namespace usat

#endif  // USAT_DOCIO_HPP_
