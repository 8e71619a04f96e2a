#pragma once

#include <span>
#include <string>
#include <vector>

#include "openlex/model/record.hpp"

namespace openlex {

struct Violation {
  std::string code;     // stable identifier, e.g. "no_text"
  std::string message;  // e.g. "no text in either language"

  bool operator==(const Violation&) const = default;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
  std::string summary() const;  // "; "-joined messages
};

/// Checks every record-level invariant and names each one that fails.
/// Pure: equal records always yield equal violation lists.
ValidationResult validate_record(const DocumentRecord& record);

/// Record-level checks plus (dataset, citation) uniqueness across the corpus,
/// where either language's citation counts. Violations carry the offending key.
ValidationResult validate_corpus(std::span<const DocumentRecord> records);

}  // namespace openlex
