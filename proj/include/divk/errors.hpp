#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace divk {

// Caller broke a precondition (wrong group structure, stale cache, bad ids).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Out-of-domain argument to a numeric routine (empty center set and the like).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The instance provably has no feasible solution.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search stopped before it could decide feasibility.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OracleRefusal : public std::runtime_error {
 public:
  OracleRefusal(const std::string& what, double count)
      : std::runtime_error(what), count_(count) {}
  double count() const { return count_; }

 private:
  double count_;
};

class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace divk
