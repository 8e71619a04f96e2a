#pragma once

#include <optional>

#include "json.hpp"

#include "openlex/model/record.hpp"

namespace openlex {

using ordered_json = nlohmann::ordered_json;

/// Published form: exactly the dataset field names, in column order.
/// Sections appear only on law records.
ordered_json record_to_json(const DocumentRecord& r);
/// Published form with a leading "kind" member, used for local persistence.
ordered_json record_to_stored_json(const DocumentRecord& r);
/// Accepts either form. `kind` overrides (or supplies) the record kind.
DocumentRecord record_from_json(const nlohmann::json& j,
                                std::optional<DocumentKind> kind = std::nullopt);

}  // namespace openlex
