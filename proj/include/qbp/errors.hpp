#pragma once

#include <stdexcept>
#include <string>

namespace qbp {

/// Base class for all qbp errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operator was asked to act outside its support, or supports are inconsistent.
struct SupportError : Error {
  explicit SupportError(const std::string& msg) : Error(msg) {}
};

/// Matrix dimensions do not match the declared site dimensions.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// A contract on operator structure (hermiticity, positivity, trace) was violated.
struct ContractError : Error {
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

/// Logarithm of an operator with non-positive spectrum (after flooring was disabled).
struct SingularityError : Error {
  explicit SingularityError(const std::string& msg) : Error(msg) {}
};

/// Wrong number of arguments to a fixed-arity operation.
struct ArityError : Error {
  explicit ArityError(const std::string& msg) : Error(msg) {}
};

/// A state that should be normalized is not.
struct NormalizationError : Error {
  explicit NormalizationError(const std::string& msg) : Error(msg) {}
};

/// Temperature grids of two series do not match.
struct GridError : Error {
  explicit GridError(const std::string& msg) : Error(msg) {}
};

/// Problem size outside supported bounds.
struct SizeError : Error {
  explicit SizeError(const std::string& msg) : Error(msg) {}
};

/// Switching temperatures out of order.
struct OrderingError : Error {
  explicit OrderingError(const std::string& msg) : Error(msg) {}
};

/// Invalid or inconsistent run configuration.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace qbp
