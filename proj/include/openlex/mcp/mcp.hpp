#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "openlex/error.hpp"
#include "openlex/search/search.hpp"
#include "openlex/store/coverage.hpp"

namespace openlex::mcp {

using json = nlohmann::ordered_json;

inline constexpr std::size_t kDefaultTruncateLimit = 20000;
inline constexpr const char* kTruncationMarker = "[truncated]";

// JSON-RPC error codes.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kInternalError = -32603;

class ProtocolError : public Error {
 public:
  ProtocolError(int code, const std::string& message, json data = nullptr)
      : Error(message), code_(code), data_(std::move(data)) {}
  int code() const noexcept { return code_; }
  const json& data() const noexcept { return data_; }

 private:
  int code_;
  json data_;
};

struct ToolDescriptor {
  std::string name;
  std::string description;
  json input_schema;
  json output_schema;
};

json to_json(const ToolDescriptor& t);

/// Result of tools/call: `structured` is the machine form, `text` a short
/// rendering for chat display.
struct ToolResult {
  json structured;
  std::string text;
  bool is_error = false;  // tool ran but the request could not be met
};

json to_json(const ToolResult& r);

/// Argument check against a tool's input schema (object with typed
/// properties, required list, no extra keys). Returns the failing fields,
/// each as "field: reason".
std::vector<std::string> schema_violations(const json& schema, const json& args);

/// Read-only corpus tools: search_cases, search_laws, get_document,
/// get_law_section, coverage_stats.
///
/// Long text is cut at `truncate_limit` code points. A cut field is listed
/// under "truncation" with the marker and a cursor; passing the cursor back
/// to the same tool returns the next part of that field.
class Server {
 public:
  Server(IndexSource index, std::shared_ptr<const Tokenizer> tokenizer,
         std::size_t truncate_limit = kDefaultTruncateLimit);

  const std::vector<ToolDescriptor>& list_tools() const { return tools_; }
  /// Throws ProtocolError: kInvalidParams for an unknown tool or bad arguments.
  ToolResult call_tool(const std::string& name, const json& arguments) const;

  /// One JSON-RPC message in; the reply, or nothing for a notification.
  std::optional<json> handle_message(const json& message) const;
  /// Raw text in; a serialized reply or "" for a notification.
  std::string handle_text(const std::string& text) const;

  /// Newline-delimited JSON-RPC until end of input.
  void serve_stdio(std::istream& in, std::ostream& out) const;

  std::size_t truncate_limit() const { return limit_; }

 private:
  ToolResult search(DocumentKind kind, const json& args) const;
  ToolResult get_document(const json& args) const;
  ToolResult get_law_section(const json& args) const;
  ToolResult coverage(const json& args) const;

  IndexSource index_;
  std::shared_ptr<const Tokenizer> tokenizer_;
  std::size_t limit_;
  std::vector<ToolDescriptor> tools_;
};

/// JSON-RPC over HTTP POST at /mcp. Blocks. Throws IoError on bind failure.
void serve_http(const Server& server, const std::string& host, int port);

}  // namespace openlex::mcp
