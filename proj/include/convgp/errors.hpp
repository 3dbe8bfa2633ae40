#pragma once

#include <stdexcept>
#include <string>

namespace convgp {

// Domain errors. Each maps to one failure mode of the public API; harness
// code catches them per grid cell and records the message in the CSV.

struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSamples : std::runtime_error {
  explicit DegenerateSamples(const std::string& what) : std::runtime_error(what) {}
};

struct NonStationary : std::runtime_error {
  explicit NonStationary(const std::string& what) : std::runtime_error(what) {}
};

struct WindowTooLong : std::runtime_error {
  explicit WindowTooLong(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyOutput : std::runtime_error {
  explicit EmptyOutput(const std::string& what) : std::runtime_error(what) {}
};

struct DivergedTraining : std::runtime_error {
  explicit DivergedTraining(const std::string& what) : std::runtime_error(what) {}
};

struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroVariancePosition : std::runtime_error {
  explicit ZeroVariancePosition(const std::string& what) : std::runtime_error(what) {}
};

struct SingularCovariance : std::runtime_error {
  explicit SingularCovariance(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaMismatch : std::runtime_error {
  explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace convgp
