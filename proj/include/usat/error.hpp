#ifndef USAT_ERROR_HPP_
#define USAT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace usat {

// Base of every error raised by the toolkit. Validation findings are data
// and never go through this hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnknownId : public Error {
 public:
  explicit UnknownId(const std::string& id)
      : Error("unknown id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// Expression text could not be parsed; offset is a byte index into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public Error {
 public:
  using Error::Error;
};

class UnboundIdentifier : public Error {
 public:
  explicit UnboundIdentifier(const std::string& name)
      : Error("unbound identifier: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class EmptySamples : public Error {
 public:
  using Error::Error;
};

// I/O failures: unreadable files, malformed delay logs.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace usat

#endif  // USAT_ERROR_HPP_
