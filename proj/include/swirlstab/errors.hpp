#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace swirlstab {

/// Invalid argument or configuration value; `field()` names the offending input.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Evaluation point outside the domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed profile data. `rows()` lists the offending 1-based data rows.
class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& message, std::vector<int> rows = {});

  const std::vector<int>& rows() const noexcept { return rows_; }

 private:
  std::vector<int> rows_;
};

/// Tangential wavenumber outside the supported bending modes m = -1, +1.
class UnsupportedModeError : public ParameterError {
 public:
  explicit UnsupportedModeError(int m);
};

/// Inner-product table with a non-integrable r^-1 coefficient.
class SingularTensorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pencil with inconsistent dimensions.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Eigensolver failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectrum without any physical mode where one was required.
class NoModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swirlstab
