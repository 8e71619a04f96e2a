#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "openlex/markup/dom.hpp"

namespace openlex::markup {

/// A small CSS selector subset, enough for listing pages:
///   tag  #id  .class  [attr]  [attr=value]  *
///   :first-child  :last-child  :nth-child(n)  :nth-of-type(n)
///   descendant (whitespace) and child (>) combinators
/// Results are in document order, without duplicates. Throws ConfigError on
/// selectors outside the subset.
std::vector<const Node*> select(const Node& scope, std::string_view selector);
const Node* select_first(const Node& scope, std::string_view selector);

}  // namespace openlex::markup
