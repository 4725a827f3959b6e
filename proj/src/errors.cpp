#include "swirlstab/errors.hpp"

#include <utility>

namespace swirlstab {

ParameterError::ParameterError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

namespace {

std::string with_rows(const std::string& message, const std::vector<int>& rows) {
  if (rows.empty()) return message;
  std::string out = message + " (rows";
  for (int r : rows) out += " " + std::to_string(r);
  return out + ")";
}

}  // namespace

IngestionError::IngestionError(const std::string& message, std::vector<int> rows)
    : std::runtime_error(with_rows(message, rows)), rows_(std::move(rows)) {}

UnsupportedModeError::UnsupportedModeError(int m)
    : ParameterError("m", "only bending modes m = -1 and m = +1 are supported, got " +
                              std::to_string(m)) {}

}  // namespace swirlstab
