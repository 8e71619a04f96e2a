#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "openlex/analytics/digest.hpp"

namespace openlex::analytics {

/// Chat-completion endpoint settings. Read from the environment:
///   OPENLEX_LLM_BASE_URL  e.g. https://api.example.com/v1 (required)
///   OPENLEX_LLM_API_KEY   sent as a bearer token (optional)
///   OPENLEX_LLM_MODEL     model name (required)
///   OPENLEX_LLM_TIMEOUT   seconds, default 60
struct LlmConfig {
  std::string base_url;
  std::string api_key;
  std::string model;
  std::chrono::seconds timeout{60};
  std::size_t max_input_codepoints = 12000;

  /// Empty when the base URL or model is unset.
  static std::optional<LlmConfig> from_env();
};

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
};

/// POSTs `body` to `url` with `headers` and returns the response body;
/// throws Error on transport failure or a non-2xx status.
using LlmTransport = std::function<std::string(const std::string& url, const std::string& body,
                                               const std::vector<std::pair<std::string, std::string>>& headers)>;

/// Minimal chat-completions client: POST {base_url}/chat/completions with
/// {"model", "messages", "temperature": 0}; the reply is
/// choices[0].message.content.
class LlmClient {
 public:
  explicit LlmClient(LlmConfig config, LlmTransport transport = {});

  std::string complete(const std::vector<ChatMessage>& messages) const;
  const LlmConfig& config() const { return config_; }

  std::string request_body(const std::vector<ChatMessage>& messages) const;
  /// Throws Error when the body is not a chat-completion response.
  static std::string parse_response(const std::string& body);

 private:
  LlmConfig config_;
  LlmTransport transport_;
};

/// Asks the model for {"outcome": "allowed|dismissed|other", "category": "..."}.
class LlmClassifier : public Classifier {
 public:
  explicit LlmClassifier(const LlmClient& client) : client_(client) {}
  std::string name() const override { return "llm"; }
  Classification classify(const DocumentRecord& r) const override;

 private:
  const LlmClient& client_;
};

/// Asks the model for {"facts": "...", "errors": "..."} per case and a plain
/// paragraph for the key themes.
class LlmSummarizer : public Summarizer {
 public:
  explicit LlmSummarizer(const LlmClient& client) : client_(client) {}
  std::string name() const override { return "llm"; }
  void summarize(const DocumentRecord& r, CaseSummary& summary) const override;
  std::string key_themes(const std::vector<CaseSummary>& summaries) const override;

 private:
  const LlmClient& client_;
};

}  // namespace openlex::analytics
