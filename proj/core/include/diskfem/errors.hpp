#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace diskfem {

/// Bad user-facing configuration (mesh spec, flags, file paths). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown (failed pivot, indefinite matrix, non-convergence). CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-fatal diagnostics collected while building meshes/operators.
struct WarningRecord {
  std::string tag;
  std::string message;
};

using WarningList = std::vector<WarningRecord>;

}  // namespace diskfem
