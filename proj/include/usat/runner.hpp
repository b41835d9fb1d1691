#ifndef USAT_RUNNER_HPP_
#define USAT_RUNNER_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "usat/error.hpp"

namespace usat {

class RunnerProtocolError : public Error {
 public:
  using Error::Error;
};

class RunnerSpawnError : public Error {
 public:
  using Error::Error;
};

struct RunOutcome {
  bool ok = false;
  std::map<std::string, double> metrics;
  std::string diagnostics;
};

// Evaluates the system under test for one factor assignment. Implementations
// must tolerate concurrent calls from several threads.
class ModelRunner {
 public:
  virtual ~ModelRunner() = default;
  virtual RunOutcome run(std::size_t index,
                         const std::map<std::string, double>& factors) const = 0;
};

// One request line, without the trailing newline:
//   {"run":<index>,"factors":{"<param id>":<number>,...}}
std::string encode_run_request(std::size_t index,
                               const std::map<std::string, double>& factors);

// Parses the single response line {"metrics":{"<name>":<number>,...}}.
// Throws RunnerProtocolError on anything else.
std::map<std::string, double> decode_run_response(const std::string& text);

// Runs `/bin/sh -c <command>` once per call, writes the request line to its
// stdin and reads one response line from stdout. Exit status 0 means ok;
// a nonzero exit or a malformed response yields a failed outcome whose
// diagnostics carry the reason and captured stderr. Throws RunnerSpawnError
// when the process cannot be started.
class SubprocessRunner : public ModelRunner {
 public:
  explicit SubprocessRunner(std::string command);
  RunOutcome run(std::size_t index,
                 const std::map<std::string, double>& factors) const override;
  const std::string& command() const { return command_; }

 private:
  std::string command_;
};

// In-process affine model for self-tests: metric = c0 + sum(coef_i * x_i).
// Factors without a coefficient contribute nothing.
class AffineRunner : public ModelRunner {
 public:
  struct Model {
    double intercept = 0.0;
    std::map<std::string, double> coefficients;
  };

  explicit AffineRunner(std::map<std::string, Model> models);

  // Spec text: <metric>:<c0>[,<param id>=<coef>]...[;<metric>:...]
  // e.g. "delay:0.5,PAR-1=2,PAR-2=-1;error:0,PAR-1=1". Throws InvalidArgument.
  static AffineRunner from_spec(const std::string& spec);

  RunOutcome run(std::size_t index,
                 const std::map<std::string, double>& factors) const override;
  const std::map<std::string, Model>& models() const { return models_; }

 private:
  std::map<std::string, Model> models_;
};

}  // namespace usat

#endif  // USAT_RUNNER_HPP_
