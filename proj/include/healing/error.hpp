#pragma once

#include <stdexcept>
#include <string>

namespace healing {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown element id.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Catalog or model construction failed (e.g. a required interface nobody provides).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Illegal lifecycle or connector state transition.
class TransitionError : public Error {
 public:
  using Error::Error;
};

/// Derived data (match set, ledger, application) no longer reflects the model.
class StalenessError : public Error {
 public:
  using Error::Error;
};

/// Ledger and match lists disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public PlanningError {
 public:
  using PlanningError::PlanningError;
};

class ExecutionError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace healing
